//! The verification suites. Each returns a [`Tally`]; groups are visited in
//! canonical order and parallel work is reassembled in that order.

use std::collections::HashMap;
use std::ops::ControlFlow;

use super::report::{NegativeControl, Tally};
use super::SuiteContext;
use crate::arith;
use crate::card::ExtCard;
use crate::catalog::{all_groups, all_p_groups, p_groups};
use crate::classify::{classify, HopfClass, Verdict};
use crate::descriptor::{summand_descriptors, GroupDescriptor};
use crate::error::Result;
use crate::group::{FiniteAbelianGroup, GroupElement};
use crate::hom::{
    enumerate_homs, for_each_hom, for_each_hom_with_prefix, kernel_of_images, quotient,
    InjectivityTest, SurjectivityTest,
};
use crate::structure::{
    brute_ulm, extend_epi, hzero_split_construct, is_extending_epi, is_pure, min_height,
    power_subgroup, Height,
};
use crate::subgroup::{enumerate_subgroups, Subgroup};
use rayon::prelude::*;

fn gens(h: &Subgroup) -> String {
    let parts: Vec<String> = h
        .canonical_generators()
        .iter()
        .map(|g| format!("{g:?}"))
        .collect();
    format!("<{}>", parts.join(","))
}

fn seq(v: &[ExtCard]) -> String {
    let parts: Vec<String> = v.iter().map(|c| c.to_string()).collect();
    format!("[{}]", parts.join(","))
}

fn merge_all(parts: Vec<Result<Tally>>) -> Result<Tally> {
    let mut t = Tally::default();
    for p in parts {
        t.merge(p?);
    }
    Ok(t)
}

/// `f_k(G) = f_k(G/N) + f_k(N)` for pure `N`, `k` up to the exponent.
fn additivity(
    ctx: &SuiteContext,
    g: &FiniteAbelianGroup,
    n: &Subgroup,
    p: u64,
) -> Result<(Vec<ExtCard>, Vec<ExtCard>)> {
    let (q, _) = quotient(g, n)?;
    let ng = n.group();
    let (fg, fq, fnn) = ((ctx.ulm)(g, p), (ctx.ulm)(&q, p), (ctx.ulm)(&ng, p));
    let len = fg.values.len().max(fq.values.len()).max(fnn.values.len()) + 1;
    let lhs = (0..len).map(|k| fg.f(k)).collect();
    let rhs = (0..len).map(|k| fq.f(k) + fnn.f(k)).collect();
    Ok((lhs, rhs))
}

pub(crate) fn lemma_good(ctx: &SuiteContext, max_order: u64) -> Result<Tally> {
    let groups: Vec<FiniteAbelianGroup> = [2, 3]
        .iter()
        .flat_map(|&p| p_groups(p, max_order))
        .collect();
    let parts = groups
        .par_iter()
        .map(|g| -> Result<Tally> {
            let p = g.primes()[0];
            let mut t = Tally::default();
            for n in enumerate_subgroups(g)? {
                if !is_pure(g, &n)? {
                    continue;
                }
                let (lhs, rhs) = additivity(ctx, g, &n, p)?;
                t.check(lhs == rhs, || {
                    (format!("G={g} N={} p={p}", gens(&n)), seq(&lhs), seq(&rhs))
                });
            }
            Ok(t)
        })
        .collect::<Vec<_>>();
    let mut t = merge_all(parts)?;

    // Purity is needed: in Z(4) the subgroup {0,2} breaks additivity at k = 0.
    let z4 = FiniteAbelianGroup::cyclic(4);
    let n = Subgroup::generated_by(&z4, &[GroupElement::new(vec![2])])?;
    let (lhs, rhs) = additivity(ctx, &z4, &n, 2)?;
    let detected = !is_pure(&z4, &n)? && lhs[0] != rhs[0];
    let instance = format!("G={z4} N={} p=2 (not pure)", gens(&n));
    let observation = format!("f_0(G)={} vs f_0(G/N)+f_0(N)={}", lhs[0], rhs[0]);
    if !detected {
        t.fail(|| {
            (
                instance.clone(),
                "additivity fails at k=0".into(),
                observation.clone(),
            )
        });
    }
    t.negative_controls.push(NegativeControl {
        instance,
        observation,
        detected,
    });
    Ok(t)
}

pub(crate) const PROP_SIZE_MAX_RANK: usize = 6;

pub(crate) fn prop_size(max_order: u64) -> Result<Tally> {
    let groups: Vec<FiniteAbelianGroup> = [2, 3]
        .iter()
        .flat_map(|&p| p_groups(p, max_order))
        .filter(|g| g.rank() <= PROP_SIZE_MAX_RANK)
        .collect();
    let parts = groups
        .par_iter()
        .map(|t_grp| -> Result<Tally> {
            let p = t_grp.primes()[0];
            let rt = t_grp.p_rank(p);
            let mut t = Tally::default();
            for b in enumerate_subgroups(t_grp)? {
                let (c, _) = quotient(t_grp, &b)?;
                let rc = c.p_rank(p);
                t.check(rc <= rt, || {
                    (
                        format!("T={t_grp} B={}", gens(&b)),
                        format!("r_p(T/B) <= {rt}"),
                        format!("r_p(T/B) = {rc}"),
                    )
                });
            }
            Ok(t)
        })
        .collect::<Vec<_>>();
    merge_all(parts)
}

/// Exponents of the cyclic `p`-power summands, read directly off the factors.
fn exponents(g: &FiniteAbelianGroup, p: u64) -> Vec<u32> {
    g.invariant_factors()
        .iter()
        .map(|&d| {
            let (mut d, mut a) = (d, 0);
            while d % p == 0 {
                d /= p;
                a += 1;
            }
            a
        })
        .collect()
}

/// `|Hom(G, K)| = prod_{i,j} p^{min(a_i, b_j)}` for `p`-groups.
pub fn hom_count_formula(g: &FiniteAbelianGroup, k: &FiniteAbelianGroup, p: u64) -> u128 {
    let (a, b) = (exponents(g, p), exponents(k, p));
    let e: u32 = a
        .iter()
        .flat_map(|&x| b.iter().map(move |&y| x.min(y)))
        .sum();
    (p as u128).pow(e)
}

pub(crate) fn hom_count(max_order: u64) -> Result<Tally> {
    let mut pairs = Vec::new();
    for p in arith::primes_upto(max_order) {
        let gs = p_groups(p, max_order);
        for g in &gs {
            for k in &gs {
                pairs.push((p, g.clone(), k.clone()));
            }
        }
    }
    let parts = pairs
        .par_iter()
        .map(|(p, g, k)| {
            let mut count: u128 = 0;
            for_each_hom::<()>(g, k, |_| {
                count += 1;
                ControlFlow::Continue(())
            });
            let expected = hom_count_formula(g, k, *p);
            let mut t = Tally::default();
            t.check(count == expected, || {
                (
                    format!("Hom({g},{k})"),
                    expected.to_string(),
                    count.to_string(),
                )
            });
            t
        })
        .collect::<Vec<_>>();
    let mut t = Tally::default();
    for p in parts {
        t.merge(p);
    }
    Ok(t)
}

pub(crate) fn first_iso(max_order: u64) -> Result<Tally> {
    let groups = all_groups(max_order);
    let mut pairs = Vec::new();
    for g in &groups {
        for k in &groups {
            pairs.push((g.clone(), k.clone()));
        }
    }
    let parts = pairs
        .par_iter()
        .map(|(g, k)| -> Result<Tally> {
            let mut t = Tally::default();
            // Kernels and images repeat across maps; their structures are computed once.
            let mut quotients: HashMap<Vec<GroupElement>, FiniteAbelianGroup> = HashMap::new();
            let mut image_groups: HashMap<Vec<GroupElement>, FiniteAbelianGroup> = HashMap::new();
            let outcome = for_each_hom(g, k, |images| {
                let ker = kernel_of_images(g, k, images);
                let key = ker.canonical_generators();
                let q = match quotients.get(&key) {
                    Some(q) => q.clone(),
                    None => match quotient(g, &ker) {
                        Ok((q, _)) => {
                            quotients.insert(key, q.clone());
                            q
                        }
                        Err(e) => return ControlFlow::Break(e),
                    },
                };
                let im = match Subgroup::generated_by(k, images) {
                    Ok(im) => im,
                    Err(e) => return ControlFlow::Break(e),
                };
                let img = image_groups
                    .entry(im.canonical_generators())
                    .or_insert_with(|| im.group());
                let ok = q == *img && ker.order() * im.order() == g.order();
                t.check(ok, || {
                    (
                        format!("{g} -> {k} with images {images:?}"),
                        format!("G/ker = {q}"),
                        format!("image = {img}, |ker| = {}", ker.order()),
                    )
                });
                ControlFlow::Continue(())
            });
            match outcome {
                Some(e) => Err(e),
                None => Ok(t),
            }
        })
        .collect::<Vec<_>>();
    merge_all(parts)
}

pub(crate) fn hzero_split(max_order: u64) -> Result<Tally> {
    let groups: Vec<FiniteAbelianGroup> = all_groups(max_order)
        .into_iter()
        .filter(|g| !g.is_trivial())
        .collect();
    let parts = groups
        .par_iter()
        .map(|g| -> Result<Tally> {
            let mut t = Tally::default();
            let subgroups: Vec<Subgroup> = enumerate_subgroups(g)?.collect();
            for p in g.primes() {
                for h in &subgroups {
                    match min_height(g, h, p)? {
                        Height::Finite(0) => {
                            let s = hzero_split_construct(g, h, p)?;
                            let (gh, _) = quotient(g, h)?;
                            let sum = s.x.direct_sum(&s.a);
                            let ok = s.quotient == sum
                                && s.x == gh
                                && !s.a.is_trivial()
                                && s.a.is_p_group(p);
                            t.check(ok, || {
                                (
                                    format!("G={g} H={} p={p}", gens(h)),
                                    format!("G/N = X+A with X = G/H = {gh}, A a nonzero {p}-group"),
                                    format!("G/N = {}, X = {}, A = {}", s.quotient, s.x, s.a),
                                )
                            });
                        }
                        _ => {
                            let rejected = hzero_split_construct(g, h, p).is_err();
                            t.check(rejected, || {
                                (
                                    format!("G={g} H={} p={p}", gens(h)),
                                    "precondition error".into(),
                                    "accepted".into(),
                                )
                            });
                        }
                    }
                }
            }
            Ok(t)
        })
        .collect::<Vec<_>>();
    merge_all(parts)
}

pub(crate) fn extend_epi_suite(max_order: u64) -> Result<Tally> {
    let mut cases = Vec::new();
    for t in all_p_groups(max_order) {
        for k in 1..=2 {
            cases.push((t.clone(), k));
        }
    }
    let parts = cases
        .par_iter()
        .map(|(tg, k)| -> Result<Tally> {
            let p = tg.primes()[0];
            let (top, _) = power_subgroup(tg, p, *k)?;
            let mut t = Tally::default();
            for phi in enumerate_homs(&top, &top).filter(|h| h.is_surjective()) {
                let gamma = extend_epi(tg, *k, &phi)?;
                let ok = is_extending_epi(tg, *k, &phi, &gamma)?;
                t.check(ok, || {
                    (
                        format!("T={tg} k={k} phi={phi:?}"),
                        "epimorphism extending phi".into(),
                        format!("{gamma:?}"),
                    )
                });
            }
            Ok(t)
        })
        .collect::<Vec<_>>();
    merge_all(parts)
}

pub(crate) fn finite_hopf(max_order: u64) -> Result<Tally> {
    let groups = all_groups(max_order);
    // One task per (group, image of the first generator).
    let mut tasks: Vec<(usize, Option<GroupElement>)> = Vec::new();
    for (i, g) in groups.iter().enumerate() {
        if g.is_trivial() {
            tasks.push((i, None));
        } else {
            for y in crate::hom::torsion_elements(g, g.invariant_factors()[0]) {
                tasks.push((i, Some(y)));
            }
        }
    }
    let parts = tasks
        .par_iter()
        .map(|(i, first)| {
            let g = &groups[*i];
            let mut t = Tally::default();
            let mut test = SurjectivityTest::new(g);
            let mut inj = InjectivityTest::new(g, g);
            let prefix: Vec<GroupElement> = first.iter().cloned().collect();
            for_each_hom_with_prefix::<()>(g, g, &prefix, |images| {
                let ok = !test.generates(images) || inj.injective(images);
                t.check(ok, || {
                    (
                        format!("endomorphism of {g} with images {images:?}"),
                        "trivial kernel".into(),
                        "nontrivial kernel".into(),
                    )
                });
                ControlFlow::Continue(())
            });
            t
        })
        .collect::<Vec<_>>();
    let mut t = Tally::default();
    for p in parts {
        t.merge(p);
    }
    for g in &groups {
        let d = GroupDescriptor::from_finite(g);
        let v = classify(&d).verdicts;
        t.check(v.as_array() == [Verdict::Yes; 4], || {
            (format!("classify({d})"), "all yes".into(), format!("{v:?}"))
        });
    }
    Ok(t)
}

pub(crate) fn ulm_oracle(ctx: &SuiteContext, max_order: u64) -> Result<Tally> {
    let groups = all_p_groups(max_order);
    let parts = groups
        .par_iter()
        .map(|g| -> Result<Tally> {
            let p = g.primes()[0];
            let mut t = Tally::default();
            let (fast, brute) = ((ctx.ulm)(g, p), brute_ulm(g, p)?);
            t.check(fast == brute, || {
                (format!("G={g} p={p}"), brute.to_string(), fast.to_string())
            });
            Ok(t)
        })
        .collect::<Vec<_>>();
    merge_all(parts)
}

fn yes(d: &GroupDescriptor, c: HopfClass) -> bool {
    classify(d).verdict(c) == Verdict::Yes
}

pub(crate) fn chain(corpus: &[GroupDescriptor]) -> Tally {
    let mut t = Tally::default();
    for d in corpus {
        let r = classify(d);
        let v = r.verdicts;
        t.check(v.is_chain_consistent(), || {
            (
                d.to_string(),
                "H => RH => WH => DF".into(),
                format!("{v:?}"),
            )
        });
        t.check(!v.as_array().contains(&Verdict::Unknown), || {
            (d.to_string(), "no unknown".into(), format!("{v:?}"))
        });
        t.check(!r.trace.is_empty(), || {
            (d.to_string(), "nonempty trace".into(), "empty".into())
        });
        if d.is_torsion_free() {
            t.check(v.h == v.rh && v.rh == v.wh, || {
                (
                    d.to_string(),
                    "H = RH = WH for torsion-free".into(),
                    format!("{v:?}"),
                )
            });
        }
        let back = GroupDescriptor::parse(&d.to_string());
        t.check(back.as_ref() == Ok(d), || {
            (
                d.to_string(),
                "parse(format(d)) = d".into(),
                format!("{back:?}"),
            )
        });
    }
    t
}

pub(crate) fn summand_closure(corpus: &[GroupDescriptor]) -> Tally {
    let parts = corpus
        .par_iter()
        .map(|d| {
            let mut t = Tally::default();
            let v = classify(d).verdicts;
            for s in summand_descriptors(d) {
                let w = classify(&s).verdicts;
                let ok = HopfClass::ALL
                    .iter()
                    .all(|&c| v.get(c) != Verdict::Yes || w.get(c) == Verdict::Yes);
                t.check(ok, || {
                    (
                        format!("{s} is a summand of {d}"),
                        format!("{v:?} inherited"),
                        format!("{w:?}"),
                    )
                });
            }
            t
        })
        .collect::<Vec<_>>();
    let mut t = Tally::default();
    for p in parts {
        t.merge(p);
    }
    t
}

/// `K` = torsion part of one descriptor, `L` = the next with `K`'s primes
/// removed, so `Hom(K, L) = 0`.
pub(crate) fn semirigid(corpus: &[GroupDescriptor]) -> Result<Tally> {
    let mut t = Tally::default();
    for (i, a) in corpus.iter().enumerate() {
        let b = &corpus[(i + 1) % corpus.len()];
        let k = a.torsion_part();
        let l = b.without_primes(&k.primes());
        let sum = k.direct_sum(&l)?;
        let (vk, vl, vs) = (
            classify(&k).verdicts,
            classify(&l).verdicts,
            classify(&sum).verdicts,
        );
        let expected: Vec<bool> = HopfClass::ALL
            .iter()
            .map(|&c| vk.get(c) == Verdict::Yes && vl.get(c) == Verdict::Yes)
            .collect();
        let actual: Vec<bool> = HopfClass::ALL
            .iter()
            .map(|&c| vs.get(c) == Verdict::Yes)
            .collect();
        t.check(expected == actual, || {
            (
                format!("K={k} L={l}"),
                format!("{expected:?}"),
                format!("{actual:?}"),
            )
        });
    }
    Ok(t)
}

pub(crate) const DIRSUM_FINITE_ORDER: u64 = 16;

pub(crate) fn dirsum(corpus: &[GroupDescriptor]) -> Result<Tally> {
    let mut t = Tally::default();
    for d in corpus {
        for p in d.primes() {
            let a = d.p_component(p);
            if !yes(&a, HopfClass::RH) {
                continue;
            }
            for b in p_groups(p, DIRSUM_FINITE_ORDER) {
                let bd = GroupDescriptor::from_finite(&b);
                let sum = a.direct_sum(&bd)?;
                t.check(yes(&sum, HopfClass::RH), || {
                    (
                        format!("A={a} B={bd}"),
                        "A + B relatively Hopfian".into(),
                        "not".into(),
                    )
                });
            }
        }
    }
    Ok(t)
}

pub(crate) fn count_finite(corpus: &[GroupDescriptor]) -> Tally {
    let mut t = Tally::default();
    for d in corpus {
        let r = d.reduced_part();
        for p in r.primes() {
            let rp = r.p_component(p);
            t.check(!yes(&rp, HopfClass::RH) || rp.is_finite(), || {
                (
                    rp.to_string(),
                    "RH reduced p-group is finite".into(),
                    "infinite".into(),
                )
            });
        }
    }
    t
}
