//! Finite abelian groups in invariant-factor form.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::snf::smith_normal_form;

/// `Z(d_1) + ... + Z(d_k)` with `d_1 | d_2 | ... | d_k` and every `d_i >= 2`.
///
/// The empty factor list is the trivial group. Two groups are isomorphic
/// exactly when their factor lists are equal.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct FiniteAbelianGroup {
    factors: Vec<u64>,
}

/// Coordinates with respect to the canonical generators; `coords[i]` lies in `[0, d_i)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement {
    pub coords: Vec<u64>,
}

impl GroupElement {
    pub fn new(coords: Vec<u64>) -> Self {
        GroupElement { coords }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl FiniteAbelianGroup {
    /// Validates an invariant-factor list. Use [`FiniteAbelianGroup::from_cyclic_orders`]
    /// for arbitrary cyclic decompositions.
    pub fn new(factors: Vec<u64>) -> Result<Self> {
        if let Some(&bad) = factors.iter().find(|&&d| d < 2) {
            return Err(Error::PreconditionViolated(format!(
                "invariant factor {bad} must be at least 2"
            )));
        }
        if let Some(w) = factors.windows(2).find(|w| w[1] % w[0] != 0) {
            return Err(Error::PreconditionViolated(format!(
                "invariant factors must form a divisibility chain, {} does not divide {}",
                w[0], w[1]
            )));
        }
        Ok(FiniteAbelianGroup { factors })
    }

    pub fn trivial() -> Self {
        FiniteAbelianGroup { factors: vec![] }
    }

    pub fn cyclic(n: u64) -> Self {
        if n <= 1 {
            Self::trivial()
        } else {
            FiniteAbelianGroup { factors: vec![n] }
        }
    }

    /// Canonicalizes `Z(n_1) + ... + Z(n_r)` for arbitrary positive orders.
    pub fn from_cyclic_orders(orders: &[u64]) -> Result<Self> {
        if orders.contains(&0) {
            return Err(Error::PreconditionViolated(
                "cyclic order 0 denotes an infinite group".into(),
            ));
        }
        // Collect prime-power parts, then pair the largest powers of each prime.
        let mut per_prime: std::collections::BTreeMap<u64, Vec<u32>> = Default::default();
        for &n in orders {
            for (p, e) in arith::factorize(n) {
                per_prime.entry(p).or_default().push(e);
            }
        }
        let len = per_prime.values().map(Vec::len).max().unwrap_or(0);
        let mut factors = vec![1u64; len];
        for (p, mut exps) in per_prime {
            exps.sort_unstable();
            let offset = len - exps.len();
            for (i, e) in exps.into_iter().enumerate() {
                factors[offset + i] = factors[offset + i]
                    .checked_mul(p.checked_pow(e).ok_or_else(|| overflow(orders))?)
                    .ok_or_else(|| overflow(orders))?;
            }
        }
        Ok(FiniteAbelianGroup { factors })
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut orders = self.factors.clone();
        orders.extend_from_slice(&other.factors);
        Self::from_cyclic_orders(&orders).expect("sum of finite groups is finite")
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().product()
    }

    pub fn exponent(&self) -> u64 {
        self.factors.last().copied().unwrap_or(1)
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    /// Primes dividing the order, ascending.
    pub fn primes(&self) -> Vec<u64> {
        arith::factorize(self.exponent())
            .into_iter()
            .map(|(p, _)| p)
            .collect()
    }

    pub fn is_p_group(&self, p: u64) -> bool {
        self.primes().iter().all(|&q| q == p)
    }

    /// Exponents `a_i` of the cyclic summands `Z(p^{a_i})` of the `p`-part, ascending.
    pub fn p_exponents(&self, p: u64) -> Vec<u32> {
        self.factors
            .iter()
            .map(|&d| arith::valuation(d, p))
            .filter(|&a| a > 0)
            .collect()
    }

    /// Number of cyclic summands of the `p`-primary component (the `p`-rank).
    pub fn p_rank(&self, p: u64) -> usize {
        self.p_exponents(p).len()
    }

    /// Primary decomposition: for each prime, the prime-power orders of its cyclic summands.
    pub fn primary_decomposition(&self) -> Vec<(u64, Vec<u64>)> {
        self.primes()
            .into_iter()
            .map(|p| {
                let powers = self.p_exponents(p).into_iter().map(|a| p.pow(a)).collect();
                (p, powers)
            })
            .collect()
    }

    pub fn p_primary_component(&self, p: u64) -> Self {
        let powers: Vec<u64> = self.p_exponents(p).into_iter().map(|a| p.pow(a)).collect();
        FiniteAbelianGroup { factors: powers }
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement::new(vec![0; self.factors.len()])
    }

    /// The `i`-th canonical generator.
    pub fn generator(&self, i: usize) -> GroupElement {
        let mut e = self.zero();
        e.coords[i] = 1 % self.factors[i];
        e
    }

    pub fn validate(&self, x: &GroupElement) -> Result<()> {
        if x.coords.len() == self.factors.len()
            && x.coords.iter().zip(&self.factors).all(|(&c, &d)| c < d)
        {
            Ok(())
        } else {
            Err(Error::InvalidElement {
                coords: x.coords.clone(),
                factors: self.factors.clone(),
            })
        }
    }

    /// Reduces arbitrary integer coordinates into canonical range.
    pub fn element_from_ints(&self, coords: &[i64]) -> Result<GroupElement> {
        if coords.len() != self.factors.len() {
            return Err(Error::InvalidElement {
                coords: coords.iter().map(|&c| c.unsigned_abs()).collect(),
                factors: self.factors.clone(),
            });
        }
        Ok(GroupElement::new(
            coords
                .iter()
                .zip(&self.factors)
                .map(|(&c, &d)| c.rem_euclid(d as i64) as u64)
                .collect(),
        ))
    }

    pub fn add(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        GroupElement::new(
            x.coords
                .iter()
                .zip(&y.coords)
                .zip(&self.factors)
                .map(|((&a, &b), &d)| (a + b) % d)
                .collect(),
        )
    }

    pub fn neg(&self, x: &GroupElement) -> GroupElement {
        GroupElement::new(
            x.coords
                .iter()
                .zip(&self.factors)
                .map(|(&a, &d)| (d - a) % d)
                .collect(),
        )
    }

    pub fn scale(&self, n: u64, x: &GroupElement) -> GroupElement {
        GroupElement::new(
            x.coords
                .iter()
                .zip(&self.factors)
                .map(|(&a, &d)| arith::mul_mod(n % d, a, d))
                .collect(),
        )
    }

    /// Least `n >= 1` with `n x = 0`.
    pub fn element_order(&self, x: &GroupElement) -> Result<u64> {
        self.validate(x)?;
        Ok(x.coords
            .iter()
            .zip(&self.factors)
            .map(|(&c, &d)| d / c.gcd(&d))
            .fold(1, |acc, o| acc.lcm(&o)))
    }

    pub fn is_isomorphic(&self, other: &Self) -> bool {
        self == other
    }

    /// Every element, in lexicographic coordinate order.
    pub fn elements(&self) -> Elements<'_> {
        Elements {
            factors: &self.factors,
            next: Some(vec![0; self.factors.len()]),
        }
    }

    /// Mixed-radix index of an element, `0 <= index < order`.
    pub fn index_of(&self, x: &GroupElement) -> u64 {
        x.coords
            .iter()
            .zip(&self.factors)
            .fold(0, |acc, (&c, &d)| acc * d + c)
    }

    pub fn element_at(&self, mut index: u64) -> GroupElement {
        let mut coords = vec![0; self.factors.len()];
        for (c, &d) in coords.iter_mut().zip(&self.factors).rev() {
            *c = index % d;
            index /= d;
        }
        GroupElement::new(coords)
    }
}

fn overflow(orders: &[u64]) -> Error {
    Error::Overflow(format!("group with cyclic orders {orders:?}"))
}

impl fmt::Debug for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, d) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, "]")
    }
}

impl TryFrom<Vec<u64>> for FiniteAbelianGroup {
    type Error = Error;
    fn try_from(v: Vec<u64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<FiniteAbelianGroup> for Vec<u64> {
    fn from(g: FiniteAbelianGroup) -> Self {
        g.factors
    }
}

pub struct Elements<'a> {
    factors: &'a [u64],
    next: Option<Vec<u64>>,
}

impl Iterator for Elements<'_> {
    type Item = GroupElement;

    fn next(&mut self) -> Option<GroupElement> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        let mut i = succ.len();
        let mut carried_out = true;
        while i > 0 {
            i -= 1;
            succ[i] += 1;
            if succ[i] < self.factors[i] {
                carried_out = false;
                break;
            }
            succ[i] = 0;
        }
        if !carried_out {
            self.next = Some(succ);
        }
        Some(GroupElement::new(cur))
    }
}

/// A finite quotient `Z^n / R` with the data needed to map `Z^n` onto it.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub group: FiniteAbelianGroup,
    /// Right transform `V` of the Smith form: `x` maps to `x V`, restricted to `kept`.
    pub basis_change: IntMatrix,
    /// Columns of `x V` that survive (diagonal entries greater than one).
    pub kept: Vec<usize>,
    /// `V^{-1}`; row `kept[i]` expresses generator `i` of `group` in the original basis.
    pub basis_change_inv: IntMatrix,
}

impl Presentation {
    /// Image in `group` of an integer vector of `Z^n`.
    pub fn project(&self, x: &[i64]) -> GroupElement {
        let factors = self.group.invariant_factors();
        let coords = self
            .kept
            .iter()
            .zip(factors)
            .map(|(&col, &d)| {
                let mut acc = BigInt::zero();
                for (i, &xi) in x.iter().enumerate() {
                    if xi != 0 {
                        acc += &self.basis_change[(i, col)] * xi;
                    }
                }
                acc.mod_floor(&BigInt::from(d))
                    .to_u64()
                    .expect("reduced residue fits")
            })
            .collect();
        GroupElement::new(coords)
    }

    /// Generator `i` of `group` as an integer vector of `Z^n`.
    pub fn lift_generator(&self, i: usize) -> Vec<BigInt> {
        self.basis_change_inv.row(self.kept[i]).to_vec()
    }

    /// A preimage of `y` under [`Presentation::project`], reduced modulo `orders`
    /// (which must be the diagonal relations, as for [`cyclic_sum_presentation`]).
    pub fn lift_mod(&self, y: &GroupElement, orders: &[u64]) -> Vec<u64> {
        let mut acc = vec![BigInt::zero(); orders.len()];
        for (i, &c) in y.coords.iter().enumerate() {
            for (a, g) in acc.iter_mut().zip(self.lift_generator(i)) {
                *a += g * c;
            }
        }
        acc.iter()
            .zip(orders)
            .map(|(a, &n)| {
                a.mod_floor(&BigInt::from(n))
                    .to_u64()
                    .expect("reduced residue fits")
            })
            .collect()
    }
}

/// `Z(n_1) + ... + Z(n_r)` in the given (not necessarily canonical) order,
/// together with the isomorphism onto its invariant-factor form. Coordinates
/// written against the orders as given are carried over by
/// [`Presentation::project`].
pub fn cyclic_sum_presentation(orders: &[u64]) -> Result<Presentation> {
    let diag: Vec<i64> = orders
        .iter()
        .map(|&n| i64::try_from(n).map_err(|_| Error::Overflow(format!("cyclic order {n}"))))
        .collect::<Result<_>>()?;
    group_from_relations(orders.len(), &IntMatrix::diagonal(&diag))
}

/// `Z^n` modulo the row span of `relations` (`r x n`). The lattice must have finite index.
pub fn group_from_relations(n_generators: usize, relations: &IntMatrix) -> Result<Presentation> {
    if relations.cols() != n_generators {
        return Err(Error::DimensionMismatch(format!(
            "relations have {} columns for {n_generators} generators",
            relations.cols()
        )));
    }
    let snf = smith_normal_form(relations);
    let diag = snf.diagonal();
    if let Some(index) = (0..n_generators).find(|&i| diag.get(i).is_none_or(|d| d.is_zero())) {
        return Err(Error::InfiniteQuotient { index });
    }
    let mut factors = Vec::new();
    let mut kept = Vec::new();
    for (i, d) in diag.iter().enumerate() {
        if *d > BigInt::from(1) {
            let d = d
                .to_u64()
                .ok_or_else(|| Error::Overflow(format!("invariant factor {d}")))?;
            factors.push(d);
            kept.push(i);
        }
    }
    Ok(Presentation {
        group: FiniteAbelianGroup::new(factors)?,
        basis_change: snf.v,
        kept,
        basis_change_inv: snf.v_inv,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(f: &[u64]) -> FiniteAbelianGroup {
        FiniteAbelianGroup::new(f.to_vec()).unwrap()
    }

    fn rel(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn relations_examples() {
        let p = group_from_relations(2, &rel(&[&[2, 0], &[0, 4]])).unwrap();
        assert_eq!(p.group, g(&[2, 4]));
        let p = group_from_relations(2, &rel(&[&[2, 4], &[6, 8]])).unwrap();
        assert_eq!(p.group, g(&[2, 4]));
        let p = group_from_relations(1, &rel(&[&[1]])).unwrap();
        assert!(p.group.is_trivial());
    }

    #[test]
    fn infinite_quotient_detected() {
        assert!(matches!(
            group_from_relations(2, &rel(&[&[2, 0]])),
            Err(Error::InfiniteQuotient { index: 1 })
        ));
        assert!(matches!(
            group_from_relations(2, &rel(&[&[1, 1], &[2, 2]])),
            Err(Error::InfiniteQuotient { .. })
        ));
    }

    #[test]
    fn projection_respects_relations() {
        let m = rel(&[&[2, 4], &[6, 8]]);
        let p = group_from_relations(2, &m).unwrap();
        assert!(p.project(&[2, 4]).is_zero());
        assert!(p.project(&[6, 8]).is_zero());
        // The two basis vectors generate the quotient.
        let a = p.project(&[1, 0]);
        let b = p.project(&[0, 1]);
        let mut seen = std::collections::BTreeSet::new();
        for i in 0..8u64 {
            for j in 0..8u64 {
                seen.insert(p.group.add(&p.group.scale(i, &a), &p.group.scale(j, &b)));
            }
        }
        assert_eq!(seen.len() as u64, p.group.order());
        // Lifted generators project back onto the canonical generators.
        for i in 0..p.group.rank() {
            let lift: Vec<i64> = p
                .lift_generator(i)
                .iter()
                .map(|x| x.to_i64().unwrap())
                .collect();
            assert_eq!(p.project(&lift), p.group.generator(i));
        }
    }

    #[test]
    fn element_orders() {
        let grp = g(&[2, 4]);
        // The literal [4,2] canonicalizes to [2,4]; coordinates follow the canonical order.
        assert_eq!(
            grp.element_order(&GroupElement::new(vec![0, 1])).unwrap(),
            4
        );
        assert_eq!(
            grp.element_order(&GroupElement::new(vec![1, 2])).unwrap(),
            2
        );
        assert_eq!(
            FiniteAbelianGroup::trivial()
                .element_order(&GroupElement::new(vec![]))
                .unwrap(),
            1
        );
        assert!(matches!(
            grp.element_order(&GroupElement::new(vec![2, 0])),
            Err(Error::InvalidElement { .. })
        ));
    }

    #[test]
    fn isomorphism_is_factor_equality() {
        assert!(!g(&[2, 4]).is_isomorphic(&g(&[8])));
        assert!(g(&[2, 4]).is_isomorphic(&g(&[2, 4])));
        assert!(!g(&[2, 2, 2]).is_isomorphic(&g(&[2, 4])));
        // Brute force: the number of elements of order 2 tells [2,2,2] and [2,4] apart.
        let count2 = |grp: &FiniteAbelianGroup| {
            grp.elements()
                .filter(|x| grp.element_order(x).unwrap() == 2)
                .count()
        };
        assert_eq!(count2(&g(&[2, 2, 2])), 7);
        assert_eq!(count2(&g(&[2, 4])), 3);
    }

    #[test]
    fn literal_order_is_carried_over() {
        // Z(4) + Z(2) written in that order.
        let p = cyclic_sum_presentation(&[4, 2]).unwrap();
        assert_eq!(p.group, g(&[2, 4]));
        let x = p.project(&[1, 0]);
        assert_eq!(p.group.element_order(&x).unwrap(), 4);
        let y = p.project(&[2, 1]);
        assert_eq!(p.group.element_order(&y).unwrap(), 2);
        // Already canonical literals keep their coordinates.
        let q = cyclic_sum_presentation(&[2, 4]).unwrap();
        assert_eq!(q.project(&[1, 3]), GroupElement::new(vec![1, 3]));
    }

    #[test]
    fn canonicalization() {
        assert_eq!(
            FiniteAbelianGroup::from_cyclic_orders(&[4, 2]).unwrap(),
            g(&[2, 4])
        );
        assert_eq!(
            FiniteAbelianGroup::from_cyclic_orders(&[6, 4, 1, 9]).unwrap(),
            g(&[6, 36])
        );
        assert!(FiniteAbelianGroup::new(vec![2, 3]).is_err());
        assert!(FiniteAbelianGroup::new(vec![1]).is_err());
    }

    #[test]
    fn element_iteration_counts_order() {
        for f in [vec![], vec![2], vec![2, 4], vec![3, 6], vec![2, 2, 2, 4]] {
            let grp = g(&f);
            let all: Vec<_> = grp.elements().collect();
            assert_eq!(all.len() as u64, grp.order());
            for (i, x) in all.iter().enumerate() {
                assert_eq!(grp.index_of(x), i as u64);
                assert_eq!(&grp.element_at(i as u64), x);
            }
        }
    }

    #[test]
    fn lift_mod_inverts_project() {
        for orders in [&[4u64, 2][..], &[6, 10], &[3, 9, 2], &[5], &[1, 4]] {
            let pres = cyclic_sum_presentation(orders).unwrap();
            for y in pres.group.elements() {
                let x = pres.lift_mod(&y, orders);
                assert!(x.iter().zip(orders).all(|(a, n)| a < n));
                let ints: Vec<i64> = x.iter().map(|&a| a as i64).collect();
                assert_eq!(pres.project(&ints), y, "{orders:?}");
            }
        }
    }
}
