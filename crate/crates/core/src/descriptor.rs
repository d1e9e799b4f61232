//! Symbolic descriptors of split abelian groups
//! `Z^f + Q^q + sum_p (sum_n Z(p^n)^{m_n} + Z(p^inf)^{d_p})`
//! with multiplicities in `N ∪ {w}`, plus tails `B(p^N) = sum_{n >= N} Z(p^n)`.
//!
//! Grammar (whitespace is ignored):
//!
//! ```text
//! descriptor := "0" | term ("+" term)*
//! term       := "Z" ["^" mult] | "Q" ["^" mult]
//!             | "Z(" prime ["^" exp] ")" ["^" mult]
//!             | "Z(" prime "^inf)" ["^" mult]
//!             | "B(" prime ["^" exp] ")" ["^" mult]
//! mult       := decimal | "w"
//! ```
//!
//! A `B` term only accepts multiplicity 1 or `w`, and the tails at one prime
//! must add up to one of those.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith;
use crate::card::ExtCard;
use crate::error::{Error, Result};
use crate::group::FiniteAbelianGroup;
use crate::structure::UlmInvariants;

/// Largest exponent `n` accepted in `Z(p^n)` and `B(p^n)`.
pub const MAX_EXPONENT: u32 = 1000;

/// Infinite tail of a primary part.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tail {
    None,
    /// `sum_{n >= N} Z(p^n)`.
    AllOnesFrom(u32),
    /// `sum_{n >= N} Z(p^n)^(w)`.
    AllOmegaFrom(u32),
}

impl Tail {
    fn value(self) -> ExtCard {
        match self {
            Tail::None => ExtCard::ZERO,
            Tail::AllOnesFrom(_) => ExtCard::ONE,
            Tail::AllOmegaFrom(_) => ExtCard::Omega,
        }
    }

    fn start(self) -> Option<u32> {
        match self {
            Tail::None => None,
            Tail::AllOnesFrom(n) | Tail::AllOmegaFrom(n) => Some(n),
        }
    }
}

/// The `p`-primary component. Canonical: `cyclic_mults` has no zero values and
/// no keys in the tail's range, and the tail starts as early as possible.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimaryPart {
    prime: u64,
    cyclic_mults: BTreeMap<u32, ExtCard>,
    tail: Tail,
    divisible_rank: ExtCard,
}

impl PrimaryPart {
    /// From the multiplicity of `Z(p^{k+1})` at index `k`, the value repeated
    /// after the list (`0`, `1` or `w`) and the number of `Z(p^inf)` summands.
    pub fn from_ulm(
        prime: u64,
        mut values: Vec<ExtCard>,
        beyond: ExtCard,
        divisible_rank: ExtCard,
    ) -> Result<Self> {
        let tail_of = |start: u32| match beyond {
            ExtCard::Finite(0) => Ok(Tail::None),
            ExtCard::Finite(1) => Ok(Tail::AllOnesFrom(start)),
            ExtCard::Omega => Ok(Tail::AllOmegaFrom(start)),
            ExtCard::Finite(m) => Err(Error::PreconditionViolated(format!(
                "every Z({prime}^n) from some n on with multiplicity {m} is not a describable tail"
            ))),
        };
        while values.last() == Some(&beyond) {
            values.pop();
        }
        let tail = tail_of(values.len() as u32 + 1)?;
        let cyclic_mults = values
            .into_iter()
            .enumerate()
            .filter(|(_, m)| !m.is_zero())
            .map(|(k, m)| (k as u32 + 1, m))
            .collect();
        Ok(PrimaryPart {
            prime,
            cyclic_mults,
            tail,
            divisible_rank,
        })
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn cyclic_mults(&self) -> &BTreeMap<u32, ExtCard> {
        &self.cyclic_mults
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    pub fn divisible_rank(&self) -> ExtCard {
        self.divisible_rank
    }

    /// Multiplicity of `Z(p^n)`, tail included.
    pub fn mult(&self, n: u32) -> ExtCard {
        match self.tail.start() {
            Some(s) if n >= s => self.tail.value(),
            _ => self.cyclic_mults.get(&n).copied().unwrap_or(ExtCard::ZERO),
        }
    }

    pub fn ulm(&self) -> UlmInvariants {
        let len = self
            .tail
            .start()
            .map(|s| s - 1)
            .or_else(|| self.cyclic_mults.keys().next_back().copied())
            .unwrap_or(0);
        let values = (1..=len).map(|n| self.mult(n)).collect();
        UlmInvariants::new(self.prime, values, self.tail.value(), self.divisible_rank)
    }

    fn is_empty(&self) -> bool {
        self.cyclic_mults.is_empty() && self.tail == Tail::None && self.divisible_rank.is_zero()
    }

    pub fn is_reduced(&self) -> bool {
        self.divisible_rank.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.is_reduced()
            && self.tail == Tail::None
            && self.cyclic_mults.values().all(|m| m.is_finite())
    }

    /// The reduced part: the direct sum of the cyclic summands.
    pub fn reduced(&self) -> PrimaryPart {
        PrimaryPart {
            divisible_rank: ExtCard::ZERO,
            ..self.clone()
        }
    }
}

/// A split abelian group given by its summands; see the module docs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GroupDescriptor {
    free_rank: ExtCard,
    q_rank: ExtCard,
    primary: BTreeMap<u64, PrimaryPart>,
}

impl GroupDescriptor {
    pub fn trivial() -> Self {
        GroupDescriptor::default()
    }

    pub fn parse(text: &str) -> Result<Self> {
        Parser::new(text).descriptor()
    }

    pub fn free_rank(&self) -> ExtCard {
        self.free_rank
    }

    pub fn q_rank(&self) -> ExtCard {
        self.q_rank
    }

    pub fn primary(&self) -> &BTreeMap<u64, PrimaryPart> {
        &self.primary
    }

    pub fn primary_part(&self, p: u64) -> Option<&PrimaryPart> {
        self.primary.get(&p)
    }

    pub fn primes(&self) -> Vec<u64> {
        self.primary.keys().copied().collect()
    }

    pub fn is_trivial(&self) -> bool {
        *self == GroupDescriptor::trivial()
    }

    pub fn is_torsion(&self) -> bool {
        self.free_rank.is_zero() && self.q_rank.is_zero()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.primary.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        self.q_rank.is_zero() && self.primary.values().all(|p| p.is_reduced())
    }

    pub fn is_divisible(&self) -> bool {
        self.free_rank.is_zero()
            && self
                .primary
                .values()
                .all(|p| p.cyclic_mults.is_empty() && p.tail == Tail::None)
    }

    pub fn is_p_group(&self, p: u64) -> bool {
        self.is_torsion() && self.primary.keys().all(|&q| q == p)
    }

    pub fn is_finite(&self) -> bool {
        self.is_torsion() && self.primary.values().all(|p| p.is_finite())
    }

    /// The finite group denoted, if any.
    pub fn to_finite(&self) -> Result<FiniteAbelianGroup> {
        if !self.is_finite() {
            return Err(Error::PreconditionViolated(format!("{self} is infinite")));
        }
        let mut orders = Vec::new();
        for part in self.primary.values() {
            for (&n, m) in &part.cyclic_mults {
                let q = part
                    .prime
                    .checked_pow(n)
                    .ok_or_else(|| Error::Overflow(format!("Z({}^{n})", part.prime)))?;
                let m = m.finite().expect("finite part");
                // The order would overflow u64 long before 64 summands.
                if m > 64 || orders.len() as u64 + m > 64 {
                    return Err(Error::Overflow(format!("{self} has too many summands")));
                }
                orders.extend(std::iter::repeat_n(q, m as usize));
            }
        }
        FiniteAbelianGroup::from_cyclic_orders(&orders)
    }

    pub fn from_finite(g: &FiniteAbelianGroup) -> Self {
        let mut b = DescriptorBuilder::default();
        for (p, powers) in g.primary_decomposition() {
            for q in powers {
                b.cyclic(p, arith::valuation(q, p), ExtCard::ONE);
            }
        }
        b.build().expect("finite groups are describable")
    }

    /// `self + other`; fails only when tails add up to an undescribable multiplicity.
    pub fn direct_sum(&self, other: &GroupDescriptor) -> Result<Self> {
        let mut b = DescriptorBuilder::default();
        for s in self.slots().into_iter().chain(other.slots()) {
            b.slot(s);
        }
        b.build()
    }

    /// Summands supported at a subset of the parts.
    fn filtered(
        &self,
        keep_tf: bool,
        keep_reduced_torsion: bool,
        keep_divisible_torsion: bool,
        keep_q: bool,
    ) -> Self {
        let mut b = DescriptorBuilder::default();
        for s in self.slots() {
            let keep = match s {
                Slot::Free(_) => keep_tf,
                Slot::Q(_) => keep_q,
                Slot::Cyclic(..) | Slot::Tail(..) => keep_reduced_torsion,
                Slot::Div(..) => keep_divisible_torsion,
            };
            if keep {
                b.slot(s);
            }
        }
        b.build()
            .expect("parts of a describable group are describable")
    }

    pub fn reduced_part(&self) -> Self {
        self.filtered(true, true, false, false)
    }

    pub fn divisible_part(&self) -> Self {
        self.filtered(false, false, true, true)
    }

    pub fn torsion_part(&self) -> Self {
        self.filtered(false, true, true, false)
    }

    pub fn torsion_free_part(&self) -> Self {
        self.filtered(true, false, false, true)
    }

    /// The `p`-primary component as a descriptor of its own.
    pub fn p_component(&self, p: u64) -> Self {
        let mut d = GroupDescriptor::trivial();
        if let Some(part) = self.primary.get(&p) {
            d.primary.insert(p, part.clone());
        }
        d
    }

    /// Drops the primary components at the given primes.
    pub fn without_primes(&self, primes: &[u64]) -> Self {
        let mut d = self.clone();
        d.primary.retain(|p, _| !primes.contains(p));
        d
    }

    fn slots(&self) -> Vec<Slot> {
        let mut out = Vec::new();
        if !self.free_rank.is_zero() {
            out.push(Slot::Free(self.free_rank));
        }
        for (&p, part) in &self.primary {
            for (&n, &m) in &part.cyclic_mults {
                out.push(Slot::Cyclic(p, n, m));
            }
            if part.tail != Tail::None {
                out.push(Slot::Tail(p, part.tail));
            }
            if !part.divisible_rank.is_zero() {
                out.push(Slot::Div(p, part.divisible_rank));
            }
        }
        if !self.q_rank.is_zero() {
            out.push(Slot::Q(self.q_rank));
        }
        out
    }

    fn from_slots(slots: &[Slot]) -> Result<Self> {
        let mut b = DescriptorBuilder::default();
        for &s in slots {
            b.slot(s);
        }
        b.build()
    }
}

/// One summand family of a descriptor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Slot {
    Free(ExtCard),
    Q(ExtCard),
    Cyclic(u64, u32, ExtCard),
    Tail(u64, Tail),
    Div(u64, ExtCard),
}

impl Slot {
    /// Replacements by proper direct summands (a finite sample when infinite).
    fn smaller(self) -> Vec<Vec<Slot>> {
        fn cards(m: ExtCard) -> Vec<ExtCard> {
            match m {
                ExtCard::Finite(0) => vec![],
                ExtCard::Finite(1) => vec![ExtCard::ZERO],
                ExtCard::Finite(m) => vec![ExtCard::Finite(m - 1), ExtCard::ZERO],
                ExtCard::Omega => vec![ExtCard::ZERO, ExtCard::ONE, ExtCard::Finite(2)],
            }
        }
        let shrink = |m: ExtCard, f: &dyn Fn(ExtCard) -> Slot| -> Vec<Vec<Slot>> {
            cards(m).into_iter().map(|c| vec![f(c)]).collect()
        };
        match self {
            Slot::Free(m) => shrink(m, &Slot::Free),
            Slot::Q(m) => shrink(m, &Slot::Q),
            Slot::Cyclic(p, n, m) => shrink(m, &|c| Slot::Cyclic(p, n, c)),
            Slot::Div(p, m) => shrink(m, &|c| Slot::Div(p, c)),
            Slot::Tail(p, Tail::AllOnesFrom(n)) => vec![
                vec![],
                vec![Slot::Tail(p, Tail::AllOnesFrom(n + 1))],
                vec![
                    Slot::Cyclic(p, n, ExtCard::ONE),
                    Slot::Tail(p, Tail::AllOnesFrom(n + 2)),
                ],
                vec![Slot::Cyclic(p, n, ExtCard::ONE)],
                vec![Slot::Cyclic(p, n + 1, ExtCard::ONE)],
                vec![Slot::Cyclic(p, n + 2, ExtCard::ONE)],
            ],
            Slot::Tail(p, Tail::AllOmegaFrom(n)) => vec![
                vec![],
                vec![Slot::Tail(p, Tail::AllOnesFrom(n))],
                vec![Slot::Tail(p, Tail::AllOmegaFrom(n + 1))],
                vec![Slot::Cyclic(p, n, ExtCard::Finite(2))],
                vec![Slot::Cyclic(p, n + 1, ExtCard::Omega)],
            ],
            Slot::Tail(_, Tail::None) => vec![],
        }
    }
}

/// Direct summands of `d`: `d` itself, then every descriptor obtained by
/// shrinking one summand family, the families on their own, the standard
/// parts (reduced, divisible, torsion, torsion-free, primary components)
/// and the trivial group. Infinite multiplicities are sampled. Order is
/// deterministic and entries are distinct.
pub fn summand_descriptors(d: &GroupDescriptor) -> impl Iterator<Item = GroupDescriptor> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    let mut push = |x: GroupDescriptor| {
        if seen.insert(x.clone()) {
            out.push(x);
        }
    };
    push(d.clone());
    let slots = d.slots();
    for (i, s) in slots.iter().enumerate() {
        for replacement in s.smaller() {
            let mut v = slots.clone();
            v.splice(i..=i, replacement.iter().copied());
            if let Ok(x) = GroupDescriptor::from_slots(&v) {
                push(x);
            }
        }
    }
    for s in &slots {
        if let Ok(x) = GroupDescriptor::from_slots(&[*s]) {
            push(x);
        }
        for replacement in s.smaller() {
            if let Ok(x) = GroupDescriptor::from_slots(&replacement) {
                push(x);
            }
        }
    }
    push(d.reduced_part());
    push(d.divisible_part());
    push(d.torsion_part());
    push(d.torsion_free_part());
    for p in d.primes() {
        push(d.p_component(p));
    }
    push(GroupDescriptor::trivial());
    out.into_iter()
}

/// Accumulates summands; [`DescriptorBuilder::build`] canonicalizes.
#[derive(Clone, Debug, Default)]
pub struct DescriptorBuilder {
    free_rank: ExtCard,
    q_rank: ExtCard,
    parts: BTreeMap<u64, PartAcc>,
}

#[derive(Clone, Debug, Default)]
struct PartAcc {
    mults: BTreeMap<u32, ExtCard>,
    /// Tail start -> multiplicity.
    tails: BTreeMap<u32, ExtCard>,
    divisible: ExtCard,
}

impl PartAcc {
    fn tail_total(&self) -> ExtCard {
        self.tails.values().fold(ExtCard::ZERO, |a, &b| a + b)
    }
}

impl DescriptorBuilder {
    pub fn free(&mut self, m: ExtCard) -> &mut Self {
        self.free_rank = self.free_rank + m;
        self
    }

    pub fn rationals(&mut self, m: ExtCard) -> &mut Self {
        self.q_rank = self.q_rank + m;
        self
    }

    /// `Z(p^n)^m`; `p` must be prime and `n >= 1`.
    pub fn cyclic(&mut self, p: u64, n: u32, m: ExtCard) -> &mut Self {
        assert!(n >= 1, "exponent must be positive");
        let e = self.parts.entry(p).or_default().mults.entry(n).or_default();
        *e = *e + m;
        self
    }

    /// `B(p^n)^m`.
    pub fn tail(&mut self, p: u64, n: u32, m: ExtCard) -> &mut Self {
        assert!(n >= 1, "exponent must be positive");
        let e = self.parts.entry(p).or_default().tails.entry(n).or_default();
        *e = *e + m;
        self
    }

    /// `Z(p^inf)^m`.
    pub fn prufer(&mut self, p: u64, m: ExtCard) -> &mut Self {
        let e = &mut self.parts.entry(p).or_default().divisible;
        *e = *e + m;
        self
    }

    fn slot(&mut self, s: Slot) -> &mut Self {
        match s {
            Slot::Free(m) => self.free(m),
            Slot::Q(m) => self.rationals(m),
            Slot::Cyclic(p, n, m) => self.cyclic(p, n, m),
            Slot::Tail(p, t) => match t {
                Tail::None => self,
                Tail::AllOnesFrom(n) => self.tail(p, n, ExtCard::ONE),
                Tail::AllOmegaFrom(n) => self.tail(p, n, ExtCard::Omega),
            },
            Slot::Div(p, m) => self.prufer(p, m),
        }
    }

    fn tail_total(&self, p: u64) -> ExtCard {
        self.parts
            .get(&p)
            .map_or(ExtCard::ZERO, PartAcc::tail_total)
    }

    pub fn build(&self) -> Result<GroupDescriptor> {
        let mut primary = BTreeMap::new();
        for (&p, acc) in &self.parts {
            let beyond = acc.tail_total();
            let last_mult = acc.mults.keys().next_back().copied().unwrap_or(0);
            let last_tail = acc.tails.keys().next_back().copied().unwrap_or(1);
            let len = last_mult.max(last_tail - 1);
            let values = (1..=len)
                .map(|n| {
                    let base = acc.mults.get(&n).copied().unwrap_or_default();
                    acc.tails.range(..=n).fold(base, |a, (_, &m)| a + m)
                })
                .collect();
            let part = PrimaryPart::from_ulm(p, values, beyond, acc.divisible)?;
            if !part.is_empty() {
                primary.insert(p, part);
            }
        }
        Ok(GroupDescriptor {
            free_rank: self.free_rank,
            q_rank: self.q_rank,
            primary,
        })
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, pos: 0 }
    }

    fn err<T>(&self, pos: usize, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            let pos = self.pos;
            match self.peek() {
                Some(found) => self.err(pos, format!("expected `{c}`, found `{found}`")),
                None => self.err(pos, format!("expected `{c}`, found end of input")),
            }
        }
    }

    fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        let digits = self.src[start..]
            .chars()
            .take_while(|c| c.is_ascii_digit())
            .count();
        if digits == 0 {
            return self.err(start, "expected a number");
        }
        self.pos += digits;
        self.src[start..self.pos]
            .parse()
            .or_else(|_| self.err(start, "number too large"))
    }

    fn keyword(&mut self, word: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(word) {
            self.pos += word.len();
            true
        } else {
            false
        }
    }

    fn mult(&mut self) -> Result<ExtCard> {
        if !self.eat('^') {
            return Ok(ExtCard::ONE);
        }
        if self.keyword("w") {
            return Ok(ExtCard::Omega);
        }
        Ok(ExtCard::Finite(self.number()?))
    }

    fn prime(&mut self) -> Result<u64> {
        self.skip_ws();
        let at = self.pos;
        let p = self.number()?;
        if !arith::is_prime(p) {
            return self.err(at, format!("{p} is not prime"));
        }
        Ok(p)
    }

    fn exponent(&mut self) -> Result<u32> {
        self.skip_ws();
        let at = self.pos;
        let n = self.number()?;
        if n == 0 {
            return self.err(at, "exponent must be at least 1");
        }
        if n > MAX_EXPONENT as u64 {
            return self.err(at, format!("exponent exceeds {MAX_EXPONENT}"));
        }
        Ok(n as u32)
    }

    fn descriptor(mut self) -> Result<GroupDescriptor> {
        let mut b = DescriptorBuilder::default();
        if self.peek() == Some('0') {
            self.pos += 1;
            return match self.peek() {
                None => Ok(GroupDescriptor::trivial()),
                Some(c) => {
                    let pos = self.pos;
                    self.err(pos, format!("unexpected `{c}` after `0`"))
                }
            };
        }
        loop {
            self.term(&mut b)?;
            match self.peek() {
                None => break,
                Some('+') => self.pos += 1,
                Some(c) => {
                    let pos = self.pos;
                    return self.err(pos, format!("expected `+`, found `{c}`"));
                }
            }
        }
        b.build().or_else(|e| self.err(0, e.to_string()))
    }

    fn term(&mut self, b: &mut DescriptorBuilder) -> Result<()> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some('Q') => {
                self.pos += 1;
                let m = self.mult()?;
                b.rationals(m);
            }
            Some('Z') => {
                self.pos += 1;
                if !self.eat('(') {
                    let m = self.mult()?;
                    b.free(m);
                    return Ok(());
                }
                let p = self.prime()?;
                let mut exp = Some(1);
                if self.eat('^') {
                    exp = if self.keyword("inf") {
                        None
                    } else {
                        Some(self.exponent()?)
                    };
                }
                self.expect(')')?;
                let m = self.mult()?;
                match exp {
                    Some(n) => b.cyclic(p, n, m),
                    None => b.prufer(p, m),
                };
            }
            Some('B') => {
                self.pos += 1;
                self.expect('(')?;
                let p = self.prime()?;
                let n = if self.eat('^') { self.exponent()? } else { 1 };
                self.expect(')')?;
                let m = self.mult()?;
                b.tail(p, n, m);
                let total = b.tail_total(p);
                if total.finite().is_some_and(|t| t > 1) {
                    return self.err(
                        start,
                        format!("tails at {p} add up to multiplicity {total}; only 1 or w can be described"),
                    );
                }
            }
            Some(c) => return self.err(start, format!("expected a term, found `{c}`")),
            None => return self.err(start, "expected a term, found end of input"),
        }
        Ok(())
    }
}

impl FromStr for GroupDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GroupDescriptor::parse(s)
    }
}

fn with_mult(f: &mut fmt::Formatter<'_>, base: &str, m: ExtCard) -> fmt::Result {
    if m == ExtCard::ONE {
        write!(f, "{base}")
    } else {
        write!(f, "{base}^{m}")
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut first = true;
        let mut sep = |f: &mut fmt::Formatter<'_>| {
            if first {
                first = false;
                Ok(())
            } else {
                write!(f, " + ")
            }
        };
        if !self.free_rank.is_zero() {
            sep(f)?;
            with_mult(f, "Z", self.free_rank)?;
        }
        for (&p, part) in &self.primary {
            for (&n, &m) in &part.cyclic_mults {
                sep(f)?;
                let base = if n == 1 {
                    format!("Z({p})")
                } else {
                    format!("Z({p}^{n})")
                };
                with_mult(f, &base, m)?;
            }
            if let Some(n) = part.tail.start() {
                sep(f)?;
                let base = if n == 1 {
                    format!("B({p})")
                } else {
                    format!("B({p}^{n})")
                };
                with_mult(f, &base, part.tail.value())?;
            }
            if !part.divisible_rank.is_zero() {
                sep(f)?;
                with_mult(f, &format!("Z({p}^inf)"), part.divisible_rank)?;
            }
        }
        if !self.q_rank.is_zero() {
            sep(f)?;
            with_mult(f, "Q", self.q_rank)?;
        }
        Ok(())
    }
}

pub fn parse_descriptor(text: &str) -> Result<GroupDescriptor> {
    GroupDescriptor::parse(text)
}

pub fn format_descriptor(d: &GroupDescriptor) -> String {
    d.to_string()
}

impl Serialize for GroupDescriptor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GroupDescriptor {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        GroupDescriptor::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Ulm invariants of the descriptor at `p`; all zero when `p` does not occur.
pub fn ulm_of_descriptor(d: &GroupDescriptor, p: u64) -> UlmInvariants {
    match d.primary.get(&p) {
        Some(part) => part.ulm(),
        None => UlmInvariants::from_counts(p, &[]),
    }
}
