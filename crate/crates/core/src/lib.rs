//! Exact finite abelian group engine and a classifier for the Hopfian
//! hierarchy `H <= RH <= WH <= DF` over split (possibly infinite) abelian groups.

pub mod arith;
pub mod card;
pub mod catalog;
pub mod classify;
pub mod descriptor;
pub mod error;
pub mod group;
pub mod harness;
pub mod hom;
pub mod lattice;
pub mod matrix;
pub mod snf;
pub mod structure;
pub mod subgroup;

pub use card::ExtCard;
pub use classify::{classify, HopfClass, HopfClassReport, TraceEntry, Verdict, Verdicts};
pub use descriptor::{
    format_descriptor, parse_descriptor, summand_descriptors, ulm_of_descriptor, DescriptorBuilder,
    GroupDescriptor, PrimaryPart, Tail,
};
pub use error::{Error, Result};
pub use group::{
    cyclic_sum_presentation, group_from_relations, FiniteAbelianGroup, GroupElement, Presentation,
};
pub use harness::{
    run_suite, run_suite_with, CorpusSpec, SuiteConfig, SuiteContext, VerificationReport,
};
pub use hom::{
    enumerate_homs, for_each_hom, for_each_hom_with_prefix, images_generate, kernel_of_images,
    quotient, Homomorphism, InjectivityTest, SurjectivityTest,
};
pub use matrix::IntMatrix;
pub use snf::{smith_normal_form, SnfResult};
pub use structure::{
    brute_ulm, extend_epi, hzero_split_construct, is_pure, min_height, p_height, ulm_invariants,
    Height, HzeroSplit, UlmInvariants,
};
pub use subgroup::{enumerate_subgroups, enumerate_subgroups_bounded, Subgroup};
