use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::card::ExtCard;
use crate::descriptor::{DescriptorBuilder, GroupDescriptor};
use crate::error::{Error, Result};

/// Parameters of a seeded random descriptor corpus.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusSpec {
    pub seed: u64,
    /// Number of random descriptors, on top of the showcase set.
    pub size: usize,
    pub max_prime: u64,
    pub max_exponent: u32,
    pub max_finite_mult: u64,
    /// Chance that a multiplicity is `w`.
    pub infinite_mult_probability: f64,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        CorpusSpec {
            seed: 0,
            size: 1000,
            max_prime: 7,
            max_exponent: 4,
            max_finite_mult: 3,
            infinite_mult_probability: 0.2,
        }
    }
}

impl CorpusSpec {
    pub fn validate(&self) -> Result<()> {
        let ok = self.max_prime >= 2
            && self.max_exponent >= 1
            && self.max_finite_mult >= 1
            && (0.0..=1.0).contains(&self.infinite_mult_probability);
        if ok {
            Ok(())
        } else {
            Err(Error::PreconditionViolated(format!(
                "invalid corpus spec {self:?}"
            )))
        }
    }
}

/// Descriptors that every corpus contains, whatever the seed.
pub fn showcase() -> Vec<GroupDescriptor> {
    let mut texts: Vec<String> = Vec::new();
    for p in [2, 3] {
        texts.push(format!("Z({p}^inf)"));
        texts.push(format!("B({p})"));
        texts.push(format!("Z({p})^w"));
    }
    texts.push("Z^w".into());
    for k in [1, 3] {
        texts.push(format!("Q^{k}"));
    }
    texts.extend(
        [
            "0",
            "Z^2 + Z(2^2)^5",
            "Z(2) + Z(2^2)^2 + Z(3)",
            "Z(2^3) + Z(3^2)^2",
            "Z + Z(2) + Z(3)",
        ]
        .map(String::from),
    );
    texts
        .iter()
        .map(|t| GroupDescriptor::parse(t).expect("showcase descriptors parse"))
        .collect()
}

/// The showcase set followed by `spec.size` random descriptors; a pure function of `spec`.
pub fn generate_corpus(spec: &CorpusSpec) -> Result<Vec<GroupDescriptor>> {
    spec.validate()?;
    let primes = arith::primes_upto(spec.max_prime);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut out = showcase();
    for _ in 0..spec.size {
        out.push(random_descriptor(&mut rng, spec, &primes));
    }
    Ok(out)
}

fn card(rng: &mut ChaCha8Rng, spec: &CorpusSpec) -> ExtCard {
    if rng.gen_bool(spec.infinite_mult_probability) {
        ExtCard::Omega
    } else {
        ExtCard::Finite(rng.gen_range(1..=spec.max_finite_mult))
    }
}

fn random_descriptor(rng: &mut ChaCha8Rng, spec: &CorpusSpec, primes: &[u64]) -> GroupDescriptor {
    let mut b = DescriptorBuilder::default();
    if rng.gen_bool(0.3) {
        b.free(card(rng, spec));
    }
    if rng.gen_bool(0.2) {
        b.rationals(card(rng, spec));
    }
    let n_primes = rng.gen_range(0..=primes.len().min(3));
    let mut chosen: Vec<u64> = Vec::new();
    while chosen.len() < n_primes {
        let p = primes[rng.gen_range(0..primes.len())];
        if !chosen.contains(&p) {
            chosen.push(p);
        }
    }
    chosen.sort_unstable();
    for p in chosen {
        for _ in 0..rng.gen_range(0..=3) {
            let n = rng.gen_range(1..=spec.max_exponent);
            b.cyclic(p, n, card(rng, spec));
        }
        if rng.gen_bool(0.15) {
            let n = rng.gen_range(1..=spec.max_exponent);
            let m = if rng.gen_bool(spec.infinite_mult_probability) {
                ExtCard::Omega
            } else {
                ExtCard::ONE
            };
            b.tail(p, n, m);
        }
        if rng.gen_bool(0.25) {
            b.prufer(p, card(rng, spec));
        }
    }
    b.build()
        .expect("at most one tail per prime is always describable")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_sized() {
        let spec = CorpusSpec {
            size: 10,
            ..CorpusSpec::default()
        };
        let a = generate_corpus(&spec).unwrap();
        assert_eq!(a.len(), 10 + showcase().len());
        assert_eq!(a, generate_corpus(&spec).unwrap());
        let empty = CorpusSpec {
            size: 0,
            ..CorpusSpec::default()
        };
        assert_eq!(generate_corpus(&empty).unwrap(), showcase());
    }

    #[test]
    fn finite_multiplicities_only() {
        let spec = CorpusSpec {
            size: 300,
            infinite_mult_probability: 0.0,
            ..CorpusSpec::default()
        };
        for d in generate_corpus(&spec)
            .unwrap()
            .into_iter()
            .skip(showcase().len())
        {
            assert!(!d.to_string().contains('w'), "{d}");
        }
    }

    #[test]
    fn bad_spec_rejected() {
        let spec = CorpusSpec {
            infinite_mult_probability: 1.5,
            ..CorpusSpec::default()
        };
        assert!(generate_corpus(&spec).is_err());
    }
}
