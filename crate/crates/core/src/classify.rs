//! Decides membership of a descriptor in the classes
//! H (Hopfian), RH (relatively Hopfian), WH (weakly Hopfian) and DF (directly finite).
//!
//! The descriptor is split as `G = R + D` (reduced plus divisible), then
//! `R = T + Z^f` and `T = sum_p R_p`, and `D = Q^q + sum_p Z(p^inf)^{d_p}`.
//! Every split used preserves membership in both directions, so each verdict
//! is the conjunction of the verdicts on the leaves.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::card::ExtCard;
use crate::descriptor::{DescriptorBuilder, GroupDescriptor, PrimaryPart, Tail};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

impl Verdict {
    fn from_bool(b: bool) -> Self {
        if b {
            Verdict::Yes
        } else {
            Verdict::No
        }
    }

    fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::No, _) | (_, Verdict::No) => Verdict::No,
            (Verdict::Yes, Verdict::Yes) => Verdict::Yes,
            _ => Verdict::Unknown,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
            Verdict::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum HopfClass {
    H,
    RH,
    WH,
    DF,
}

impl HopfClass {
    /// Smallest class first.
    pub const ALL: [HopfClass; 4] = [HopfClass::H, HopfClass::RH, HopfClass::WH, HopfClass::DF];

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for HopfClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// One verdict per class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Verdicts {
    #[serde(rename = "H")]
    pub h: Verdict,
    #[serde(rename = "RH")]
    pub rh: Verdict,
    #[serde(rename = "WH")]
    pub wh: Verdict,
    #[serde(rename = "DF")]
    pub df: Verdict,
}

impl Verdicts {
    pub fn new(v: [Verdict; 4]) -> Self {
        Verdicts {
            h: v[0],
            rh: v[1],
            wh: v[2],
            df: v[3],
        }
    }

    pub fn get(&self, c: HopfClass) -> Verdict {
        self.as_array()[c.index()]
    }

    pub fn as_array(&self) -> [Verdict; 4] {
        [self.h, self.rh, self.wh, self.df]
    }

    pub fn all(v: Verdict) -> Self {
        Verdicts::new([v; 4])
    }

    fn and(self, other: Verdicts) -> Verdicts {
        let (a, b) = (self.as_array(), other.as_array());
        Verdicts::new(std::array::from_fn(|i| a[i].and(b[i])))
    }

    /// `H => RH => WH => DF` read on yes, and its contrapositive on no.
    pub fn is_chain_consistent(&self) -> bool {
        let v = self.as_array();
        (0..3).all(|i| {
            !(v[i] == Verdict::Yes && v[i + 1] != Verdict::Yes)
                && !(v[i + 1] == Verdict::No && v[i] != Verdict::No)
        })
    }
}

/// A classification rule and the mathematical fact it rests on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rule {
    pub name: &'static str,
    pub citation: &'static str,
}

pub const R_SPLIT_D: Rule = Rule {
    name: "R-SPLIT-D",
    citation: "G = R + D with R reduced and D divisible lies in a class iff R and D both do (Hom(D, R) = 0)",
};
pub const R_SPLIT_T: Rule = Rule {
    name: "R-SPLIT-T",
    citation: "a splitting mixed group T + L (T torsion, L torsion-free) lies in a class iff T and L both do",
};
pub const R_PRIMARY: Rule = Rule {
    name: "R-PRIMARY",
    citation: "a torsion group lies in a class iff each of its primary components does",
};
pub const R_DIV: Rule = Rule {
    name: "R-DIV",
    citation: "a divisible group is Hopfian iff torsion-free of finite rank; it is RH, WH or DF iff its torsion-free rank and every p-rank are finite",
};
pub const R_FREE: Rule = Rule {
    name: "R-FREE",
    citation: "for torsion-free groups H = RH = WH; Z^n is Hopfian for finite n, while Z^(w) has the summand Z^(w) and is not directly finite",
};
pub const R_DSC: Rule = Rule {
    name: "R-DSC",
    citation: "a direct sum of cyclic groups is Hopfian iff relatively Hopfian iff its free rank and every p-component have finite rank",
};
pub const R_WH_TORSION: Rule = Rule {
    name: "R-WH-TORSION",
    citation: "a p-group is weakly Hopfian iff directly finite iff it has no summand A^(w) with A cocyclic, i.e. every f_k (k in w or inf) is finite",
};
pub const R_COCYCLIC: Rule = Rule {
    name: "R-COCYCLIC",
    citation:
        "Z(p^inf)^m is relatively Hopfian iff m is finite (finite p-rank) and Hopfian iff m = 0",
};

pub const RULES: [Rule; 8] = [
    R_SPLIT_D,
    R_SPLIT_T,
    R_PRIMARY,
    R_DIV,
    R_FREE,
    R_DSC,
    R_WH_TORSION,
    R_COCYCLIC,
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub class: HopfClass,
    pub rule: String,
    pub citation: String,
    pub subterm: String,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HopfClassReport {
    pub descriptor: GroupDescriptor,
    pub verdicts: Verdicts,
    /// Leaves first, the whole group last.
    pub trace: Vec<TraceEntry>,
}

impl HopfClassReport {
    pub fn verdict(&self, c: HopfClass) -> Verdict {
        self.verdicts.get(c)
    }
}

struct Tracer {
    trace: Vec<TraceEntry>,
}

impl Tracer {
    fn record(
        &mut self,
        classes: &[HopfClass],
        rule: Rule,
        subterm: &GroupDescriptor,
        v: &Verdicts,
    ) {
        for &c in classes {
            self.trace.push(TraceEntry {
                class: c,
                rule: rule.name.to_string(),
                citation: rule.citation.to_string(),
                subterm: subterm.to_string(),
                verdict: v.get(c),
            });
        }
    }

    fn record_all(&mut self, rule: Rule, subterm: &GroupDescriptor, v: &Verdicts) {
        self.record(&HopfClass::ALL, rule, subterm, v);
    }
}

fn descriptor_of(f: impl FnOnce(&mut DescriptorBuilder)) -> GroupDescriptor {
    let mut b = DescriptorBuilder::default();
    f(&mut b);
    b.build()
        .expect("sub-descriptors of a valid descriptor are valid")
}

fn reduced_p_descriptor(part: &PrimaryPart) -> GroupDescriptor {
    descriptor_of(|b| {
        for (&n, &m) in part.cyclic_mults() {
            b.cyclic(part.prime(), n, m);
        }
        match part.tail() {
            Tail::None => {}
            Tail::AllOnesFrom(n) => {
                b.tail(part.prime(), n, ExtCard::ONE);
            }
            Tail::AllOmegaFrom(n) => {
                b.tail(part.prime(), n, ExtCard::Omega);
            }
        }
    })
}

/// Reduced `p`-group (a direct sum of cyclics): H = RH iff finite; WH = DF iff every `f_k` is finite.
fn classify_reduced_p(part: &PrimaryPart, t: &mut Tracer) -> Verdicts {
    let sub = reduced_p_descriptor(part);
    let finite = part.reduced().is_finite();
    let semi_standard = part.reduced().ulm().all_finite();
    let v = Verdicts::new([
        Verdict::from_bool(finite),
        Verdict::from_bool(finite),
        Verdict::from_bool(semi_standard),
        Verdict::from_bool(semi_standard),
    ]);
    t.record(&[HopfClass::H, HopfClass::RH], R_DSC, &sub, &v);
    t.record(&[HopfClass::WH, HopfClass::DF], R_WH_TORSION, &sub, &v);
    v
}

fn classify_prufer(p: u64, m: ExtCard, t: &mut Tracer) -> Verdicts {
    let sub = descriptor_of(|b| {
        b.prufer(p, m);
    });
    let v = Verdicts::new([
        Verdict::from_bool(m.is_zero()),
        Verdict::from_bool(m.is_finite()),
        Verdict::from_bool(m.is_finite()),
        Verdict::from_bool(m.is_finite()),
    ]);
    t.record(&[HopfClass::H, HopfClass::RH], R_COCYCLIC, &sub, &v);
    t.record(&[HopfClass::WH, HopfClass::DF], R_WH_TORSION, &sub, &v);
    v
}

fn classify_reduced(d: &GroupDescriptor, t: &mut Tracer) -> Verdicts {
    let mut torsion = Verdicts::all(Verdict::Yes);
    let mut primes = 0;
    for part in d.primary().values() {
        if part.cyclic_mults().is_empty() && part.tail() == Tail::None {
            continue;
        }
        primes += 1;
        torsion = torsion.and(classify_reduced_p(part, t));
    }
    let torsion_d = d.torsion_part();
    if primes > 1 {
        t.record_all(R_PRIMARY, &torsion_d, &torsion);
    }
    let f = d.free_rank();
    if f.is_zero() {
        return torsion;
    }
    let free_d = descriptor_of(|b| {
        b.free(f);
    });
    let free = Verdicts::all(Verdict::from_bool(f.is_finite()));
    t.record_all(R_FREE, &free_d, &free);
    if primes == 0 {
        return free;
    }
    let v = torsion.and(free);
    t.record_all(R_SPLIT_T, d, &v);
    v
}

fn classify_divisible(d: &GroupDescriptor, t: &mut Tracer) -> Verdicts {
    let mut all_finite = d.q_rank().is_finite();
    let mut torsion_free = true;
    for part in d.primary().values() {
        let m = part.divisible_rank();
        if !m.is_zero() {
            classify_prufer(part.prime(), m, t);
            torsion_free = false;
            all_finite &= m.is_finite();
        }
    }
    let v = Verdicts::new([
        Verdict::from_bool(all_finite && torsion_free),
        Verdict::from_bool(all_finite),
        Verdict::from_bool(all_finite),
        Verdict::from_bool(all_finite),
    ]);
    t.record_all(R_DIV, d, &v);
    v
}

pub fn classify(d: &GroupDescriptor) -> HopfClassReport {
    let mut t = Tracer { trace: Vec::new() };
    let reduced = d.reduced_part();
    let divisible = d.divisible_part();
    let verdicts = match (reduced.is_trivial(), divisible.is_trivial()) {
        (true, true) => {
            // The trivial group: an empty direct sum of cyclic groups.
            let v = Verdicts::all(Verdict::Yes);
            t.record_all(R_DSC, d, &v);
            v
        }
        (false, true) => classify_reduced(&reduced, &mut t),
        (r_trivial, false) => {
            // G = R + D is split even when R = 0, which lies in every class.
            let r = if r_trivial {
                Verdicts::all(Verdict::Yes)
            } else {
                classify_reduced(&reduced, &mut t)
            };
            let dv = classify_divisible(&divisible, &mut t);
            let v = r.and(dv);
            t.record_all(R_SPLIT_D, d, &v);
            v
        }
    };
    HopfClassReport {
        descriptor: d.clone(),
        verdicts,
        trace: t.trace,
    }
}

impl fmt::Display for HopfClassReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.descriptor)?;
        for c in HopfClass::ALL {
            writeln!(f, "  {:<3}{}", c.to_string(), self.verdict(c))?;
        }
        writeln!(f, "trace:")?;
        for e in &self.trace {
            writeln!(
                f,
                "  [{}] {:<3} {} on {}: {}",
                e.rule,
                e.class.to_string(),
                e.verdict,
                e.subterm,
                e.citation
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Verdict::{No, Yes};

    fn verdicts(s: &str) -> [Verdict; 4] {
        classify(&GroupDescriptor::parse(s).unwrap())
            .verdicts
            .as_array()
    }

    #[test]
    fn golden_examples() {
        assert_eq!(verdicts("Z(2^inf)"), [No, Yes, Yes, Yes]);
        assert_eq!(verdicts("B(2)"), [No, No, Yes, Yes]);
        assert_eq!(verdicts("Z^w"), [No, No, No, No]);
        assert_eq!(verdicts("Z^2 + Z(2^2)^5"), [Yes, Yes, Yes, Yes]);
        assert_eq!(verdicts("Z(3)^w"), [No, No, No, No]);
        assert_eq!(verdicts("Q^3"), [Yes, Yes, Yes, Yes]);
    }

    #[test]
    fn more_cases() {
        assert_eq!(verdicts("0"), [Yes; 4]);
        assert_eq!(verdicts("Q^w"), [No; 4]);
        assert_eq!(verdicts("Z(2^inf)^w"), [No; 4]);
        assert_eq!(verdicts("Z(2^inf) + Q"), [No, Yes, Yes, Yes]);
        assert_eq!(verdicts("B(2)^w"), [No; 4]);
        assert_eq!(verdicts("B(2) + Z(3^inf)"), [No, No, Yes, Yes]);
        assert_eq!(verdicts("Z + Z(2) + Z(3)^4"), [Yes; 4]);
        assert_eq!(verdicts("Z + B(5)"), [No, No, Yes, Yes]);
    }

    #[test]
    fn trace_is_bottom_up_and_cites_rules() {
        let r = classify(&GroupDescriptor::parse("Z(2^inf) + Q").unwrap());
        let rules: Vec<&str> = r.trace.iter().map(|e| e.rule.as_str()).collect();
        assert!(rules.contains(&"R-DIV"));
        assert_eq!(r.trace.first().unwrap().rule, "R-COCYCLIC");
        let r = classify(&GroupDescriptor::parse("Z + Z(2^inf)").unwrap());
        assert_eq!(r.trace.last().unwrap().rule, "R-SPLIT-D");
        assert_eq!(r.trace.last().unwrap().subterm, "Z + Z(2^inf)");
    }

    #[test]
    fn chain_check() {
        assert!(Verdicts::new([No, Yes, Yes, Yes]).is_chain_consistent());
        assert!(!Verdicts::new([Yes, No, Yes, Yes]).is_chain_consistent());
        assert!(Verdicts::new([No, No, No, Yes]).is_chain_consistent());
        assert!(!Verdicts::new([No, No, Yes, No]).is_chain_consistent());
    }
}
