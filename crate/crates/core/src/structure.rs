//! Heights, purity and Ulm invariants of finite abelian groups, and the
//! constructive splitting and extension steps used by the verification suites.

use std::fmt;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::card::ExtCard;
use crate::error::{Error, Result};
use crate::group::{FiniteAbelianGroup, GroupElement};
use crate::hom::{for_each_hom, quotient, Homomorphism};
use crate::subgroup::Subgroup;

/// Largest brute-force Ulm computation accepted by [`brute_ulm`].
pub const BRUTE_ULM_BOUND: u64 = 1 << 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Height {
    Finite(u32),
    Infinite,
}

impl fmt::Display for Height {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Height::Finite(k) => write!(f, "{k}"),
            Height::Infinite => write!(f, "inf"),
        }
    }
}

fn check_prime(p: u64) -> Result<()> {
    if arith::is_prime(p) {
        Ok(())
    } else {
        Err(Error::PreconditionViolated(format!("{p} is not prime")))
    }
}

/// Largest `k` with `x` in `p^k G`.
///
/// In `Z(d)` we have `p^k Z(d) = gcd(p^k, d) Z(d)`, so each coordinate whose
/// `p`-valuation is below that of `d_i` caps the height at that valuation.
/// Elements with no such coordinate (zero, or of order prime to `p`) have height `inf`.
pub fn p_height(g: &FiniteAbelianGroup, x: &GroupElement, p: u64) -> Result<Height> {
    g.validate(x)?;
    check_prime(p)?;
    let mut h = Height::Infinite;
    for (&c, &d) in x.coords.iter().zip(g.invariant_factors()) {
        if c == 0 {
            continue;
        }
        let vc = arith::valuation(c, p);
        if vc < arith::valuation(d, p) {
            h = h.min(Height::Finite(vc));
        }
    }
    Ok(h)
}

/// Minimum height over the nonzero elements of `h`; `inf` for the trivial subgroup.
///
/// Heights satisfy `|x + y| >= min(|x|, |y|)`, so the minimum is attained on a generating set.
pub fn min_height(g: &FiniteAbelianGroup, h: &Subgroup, p: u64) -> Result<Height> {
    same_ambient(g, h)?;
    let mut best = Height::Infinite;
    for x in h.canonical_generators() {
        best = best.min(p_height(g, &x, p)?);
    }
    Ok(best)
}

fn same_ambient(g: &FiniteAbelianGroup, h: &Subgroup) -> Result<()> {
    if h.ambient() == g {
        Ok(())
    } else {
        Err(Error::PreconditionViolated(
            "subgroup lives in a different group".into(),
        ))
    }
}

/// `H` is pure iff `H ∩ p^k G = p^k H` for every prime `p` and every `k` up to `v_p(exp G)`.
///
/// `p^k H` is always contained in `H ∩ p^k G`, so comparing orders suffices;
/// `|H ∩ p^k G| = |H| |p^k G| / |H + p^k G|`.
pub fn is_pure(g: &FiniteAbelianGroup, h: &Subgroup) -> Result<bool> {
    same_ambient(g, h)?;
    let whole = Subgroup::whole(g);
    for p in g.primes() {
        let top = arith::valuation(g.exponent(), p);
        let mut pk = 1u64;
        for _ in 0..top {
            pk *= p;
            let pkg = whole.multiple(pk);
            let meet = h.order() as u128 * pkg.order() as u128 / h.join(&pkg).order() as u128;
            if meet != h.multiple(pk).order() as u128 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Ulm invariants `f_k` at a prime, `k = 0, 1, ...`, together with `f_inf`.
///
/// `values[k]` is `f_k` for `k < values.len()` and `beyond` for every larger
/// `k`. Trailing entries equal to `beyond` are never stored, so equal
/// sequences have equal representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UlmInvariants {
    pub prime: u64,
    pub values: Vec<ExtCard>,
    pub beyond: ExtCard,
    pub f_inf: ExtCard,
}

impl UlmInvariants {
    pub fn new(prime: u64, values: Vec<ExtCard>, beyond: ExtCard, f_inf: ExtCard) -> Self {
        let mut u = UlmInvariants {
            prime,
            values,
            beyond,
            f_inf,
        };
        while u.values.last() == Some(&u.beyond) {
            u.values.pop();
        }
        u
    }

    /// Finite sequence from counts, zero from `counts.len()` on.
    pub fn from_counts(prime: u64, counts: &[u64]) -> Self {
        UlmInvariants::new(
            prime,
            counts.iter().map(|&c| ExtCard::Finite(c)).collect(),
            ExtCard::ZERO,
            ExtCard::ZERO,
        )
    }

    pub fn f(&self, k: usize) -> ExtCard {
        self.values.get(k).copied().unwrap_or(self.beyond)
    }

    /// Whether every `f_k`, `f_inf` included, is finite.
    pub fn all_finite(&self) -> bool {
        self.beyond.is_finite()
            && self.f_inf.is_finite()
            && self.values.iter().all(|v| v.is_finite())
    }
}

impl fmt::Display for UlmInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={}:", self.prime)?;
        for (k, v) in self.values.iter().enumerate() {
            write!(f, " f_{k}={v}")?;
        }
        write!(f, " f_k={} for k>={}", self.beyond, self.values.len())?;
        write!(f, "; f_inf={}", self.f_inf)
    }
}

/// Closed form: `f_k = #{i : v_p(d_i) = k + 1}`.
pub fn ulm_invariants(g: &FiniteAbelianGroup, p: u64) -> UlmInvariants {
    let exps = g.p_exponents(p);
    let len = exps.iter().copied().max().unwrap_or(0) as usize;
    let mut counts = vec![0u64; len];
    for a in exps {
        counts[a as usize - 1] += 1;
    }
    UlmInvariants::from_counts(p, &counts)
}

/// `f_k` from the definition: `log_p |(p^k G)[p]| / |(p^{k+1} G)[p]|`, with every
/// subgroup formed by enumerating elements.
pub fn brute_ulm(g: &FiniteAbelianGroup, p: u64) -> Result<UlmInvariants> {
    check_prime(p)?;
    let order = g.order();
    if order > BRUTE_ULM_BOUND {
        return Err(Error::BoundExceeded {
            order,
            bound: BRUTE_ULM_BOUND,
        });
    }
    let elements: Vec<GroupElement> = g.elements().collect();
    let mut socles: Vec<u64> = Vec::new();
    let mut pk = 1u64;
    loop {
        // (p^k G)[p]
        let mut member = vec![false; order as usize];
        for x in &elements {
            member[g.index_of(&g.scale(pk, x)) as usize] = true;
        }
        let socle = elements
            .iter()
            .filter(|y| member[g.index_of(y) as usize] && g.scale(p, y).is_zero())
            .count() as u64;
        socles.push(socle);
        if socle == 1 {
            break;
        }
        pk *= p;
    }
    let mut counts = Vec::with_capacity(socles.len());
    for w in socles.windows(2) {
        let mut ratio = w[0] / w[1];
        debug_assert_eq!(w[0] % w[1], 0);
        let mut f = 0;
        while ratio > 1 {
            debug_assert_eq!(ratio % p, 0);
            ratio /= p;
            f += 1;
        }
        counts.push(f);
    }
    Ok(UlmInvariants::from_counts(p, &counts))
}

/// Output of [`hzero_split_construct`].
#[derive(Clone, Debug)]
pub struct HzeroSplit {
    /// `N = H ∩ pG`.
    pub n: Subgroup,
    /// `G/N`.
    pub quotient: FiniteAbelianGroup,
    /// `A = H/N`, realised as the image of `H` in `G/N`.
    pub a: FiniteAbelianGroup,
    /// `X = (G/N)/A`.
    pub x: FiniteAbelianGroup,
}

impl HzeroSplit {
    /// `G/N ≅ X + A` and `X ≅ G/H`.
    pub fn verify(&self, g: &FiniteAbelianGroup, h: &Subgroup) -> Result<bool> {
        let (gh, _) = quotient(g, h)?;
        Ok(self.quotient == self.x.direct_sum(&self.a) && self.x == gh)
    }
}

/// For `H` of minimum `p`-height 0, splits `H/(H ∩ pG)` off `G/(H ∩ pG)`.
pub fn hzero_split_construct(g: &FiniteAbelianGroup, h: &Subgroup, p: u64) -> Result<HzeroSplit> {
    let mh = min_height(g, h, p)?;
    if mh != Height::Finite(0) {
        return Err(Error::PreconditionViolated(format!(
            "minimum {p}-height of the subgroup is {mh}, not 0"
        )));
    }
    let pg = Subgroup::whole(g).multiple(p);
    let n = h.intersection(&pg);
    let (gn, pi) = quotient(g, &n)?;
    let images: Vec<GroupElement> = h
        .canonical_generators()
        .iter()
        .map(|x| pi.apply(x))
        .collect::<Result<_>>()?;
    let a_sub = Subgroup::generated_by(&gn, &images)?;
    let a = a_sub.group();
    let (x, _) = quotient(&gn, &a_sub)?;
    Ok(HzeroSplit {
        n,
        quotient: gn,
        a,
        x,
    })
}

/// `p^k T` for a `p`-group `T` as a group in its own right, with the inclusion.
///
/// Its canonical generators are `p^k e_i` for the summands with `a_i > k`.
pub fn power_subgroup(
    t: &FiniteAbelianGroup,
    p: u64,
    k: u32,
) -> Result<(FiniteAbelianGroup, Homomorphism)> {
    if !t.is_p_group(p) {
        return Err(Error::PreconditionViolated(format!(
            "{t} is not a {p}-group"
        )));
    }
    let exps = t.p_exponents(p);
    let start = exps.iter().position(|&a| a > k).unwrap_or(exps.len());
    let factors: Vec<u64> = exps[start..].iter().map(|&a| p.pow(a - k)).collect();
    let sub = FiniteAbelianGroup::new(factors)?;
    let pk = p.pow(k);
    let images = (start..exps.len())
        .map(|i| t.scale(pk, &t.generator(i)))
        .collect();
    let incl = Homomorphism::new(sub.clone(), t.clone(), images)?;
    Ok((sub, incl))
}

/// Extends an epimorphism `phi` of `p^k T` to an epimorphism of `T`.
///
/// Works down one level at a time. On `S = p^{j-1} T`, with `pS = p^j T`, a
/// generator `s_i` that survives in `pS` is sent to the coefficient lift of
/// the image of `p s_i`; the remaining generators, which span the `Z(p)`
/// summands of `S`, are fixed. Modulo `pS` the resulting matrix is block
/// triangular with invertible diagonal blocks, so the map is onto.
pub fn extend_epi(t: &FiniteAbelianGroup, k: u32, phi: &Homomorphism) -> Result<Homomorphism> {
    if t.is_trivial() {
        return Ok(Homomorphism::identity(t));
    }
    let primes = t.primes();
    if primes.len() != 1 {
        return Err(Error::PreconditionViolated(format!("{t} is not a p-group")));
    }
    let p = primes[0];
    let (top, _) = power_subgroup(t, p, k)?;
    if phi.domain() != &top || phi.codomain() != &top {
        return Err(Error::PreconditionViolated(format!(
            "map must be an endomorphism of p^{k}T = {top}"
        )));
    }
    if !phi.is_surjective() {
        return Err(Error::PreconditionViolated("map is not onto".into()));
    }
    let exps = t.p_exponents(p);
    let mut current = phi.clone();
    for j in (1..=k).rev() {
        let (upper, _) = power_subgroup(t, p, j - 1)?;
        let lower = current.domain().clone();
        let s_up = exps.len() - upper.rank();
        let s_low = exps.len() - lower.rank();
        let images: Vec<GroupElement> = (s_up..exps.len())
            .map(|i| {
                if i < s_low {
                    return upper.generator(i - s_up);
                }
                let c = &current.images()[i - s_low];
                let mut coords = vec![0u64; upper.rank()];
                for (l, &v) in c.coords.iter().enumerate() {
                    coords[l + s_low - s_up] = v;
                }
                GroupElement::new(coords)
            })
            .collect();
        let mut gamma = Homomorphism::new(upper.clone(), upper.clone(), images)?;
        if !extends(&gamma, &current, p, s_low - s_up)? {
            gamma = search_extension(&upper, &current, p, s_low - s_up)?;
        }
        current = gamma;
    }
    Ok(current)
}

/// Whether `gamma` on `S` is onto and agrees with `phi` on `pS`. The generators
/// of `pS` are `p s_i` for `i >= offset`.
fn extends(gamma: &Homomorphism, phi: &Homomorphism, p: u64, offset: usize) -> Result<bool> {
    if !gamma.is_surjective() {
        return Ok(false);
    }
    let s = gamma.domain();
    let embed = |y: &GroupElement| {
        let mut coords = vec![0u64; s.rank()];
        for (l, &v) in y.coords.iter().enumerate() {
            coords[l + offset] = v * p;
        }
        GroupElement::new(coords)
    };
    for (l, y) in phi.images().iter().enumerate() {
        let ps = s.scale(p, &s.generator(l + offset));
        if gamma.apply(&ps)? != embed(y) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn search_extension(
    s: &FiniteAbelianGroup,
    phi: &Homomorphism,
    p: u64,
    offset: usize,
) -> Result<Homomorphism> {
    let found = for_each_hom(s, s, |images| {
        let gamma = Homomorphism::new(s.clone(), s.clone(), images.to_vec())
            .expect("enumerated maps are valid");
        match extends(&gamma, phi, p, offset) {
            Ok(true) => ControlFlow::Break(gamma),
            _ => ControlFlow::Continue(()),
        }
    });
    found.ok_or_else(|| Error::PreconditionViolated("no extending epimorphism exists".into()))
}

/// Whether `gamma` is an epimorphism of `t` whose restriction to `p^k t` is `phi`.
pub fn is_extending_epi(
    t: &FiniteAbelianGroup,
    k: u32,
    phi: &Homomorphism,
    gamma: &Homomorphism,
) -> Result<bool> {
    if gamma.domain() != t || gamma.codomain() != t || !gamma.is_surjective() {
        return Ok(false);
    }
    let Some(&p) = t.primes().first() else {
        return Ok(true);
    };
    let (_, incl) = power_subgroup(t, p, k)?;
    Ok(gamma.compose(&incl)? == incl.compose(phi)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::p_groups;

    fn grp(f: &[u64]) -> FiniteAbelianGroup {
        FiniteAbelianGroup::new(f.to_vec()).unwrap()
    }

    fn el(c: &[u64]) -> GroupElement {
        GroupElement::new(c.to_vec())
    }

    fn sub(g: &FiniteAbelianGroup, gens: &[&[u64]]) -> Subgroup {
        let gens: Vec<_> = gens.iter().map(|c| el(c)).collect();
        Subgroup::generated_by(g, &gens).unwrap()
    }

    #[test]
    fn heights() {
        assert_eq!(
            p_height(&grp(&[8]), &el(&[4]), 2).unwrap(),
            Height::Finite(2)
        );
        // Z(4)+Z(2) written canonically as Z(2)+Z(4): (2,0) becomes (0,2).
        assert_eq!(
            p_height(&grp(&[2, 4]), &el(&[0, 2]), 2).unwrap(),
            Height::Finite(1)
        );
        assert_eq!(
            p_height(&grp(&[2, 4]), &el(&[0, 0]), 2).unwrap(),
            Height::Infinite
        );
        assert_eq!(
            p_height(&grp(&[6]), &el(&[2]), 2).unwrap(),
            Height::Infinite
        );
        assert!(p_height(&grp(&[4]), &el(&[4]), 2).is_err());
    }

    #[test]
    fn heights_match_membership_in_power_subgroups() {
        for g in p_groups(2, 32).into_iter().chain(p_groups(3, 27)) {
            let p = g.primes()[0];
            let whole = Subgroup::whole(&g);
            let levels: Vec<Subgroup> = (0..6).map(|k| whole.multiple(p.pow(k))).collect();
            for x in g.elements() {
                let brute = if x.is_zero() {
                    Height::Infinite
                } else {
                    let k = levels
                        .iter()
                        .take_while(|l| l.contains(&x).unwrap())
                        .count();
                    Height::Finite(k as u32 - 1)
                };
                assert_eq!(p_height(&g, &x, p).unwrap(), brute, "{g} {x:?}");
            }
        }
    }

    #[test]
    fn min_heights() {
        let z4 = grp(&[4]);
        assert_eq!(
            min_height(&z4, &sub(&z4, &[&[2]]), 2).unwrap(),
            Height::Finite(1)
        );
        let g = grp(&[2, 4]);
        assert_eq!(
            min_height(&g, &sub(&g, &[&[1, 0]]), 2).unwrap(),
            Height::Finite(0)
        );
        assert_eq!(
            min_height(&g, &Subgroup::trivial(&g), 2).unwrap(),
            Height::Infinite
        );
    }

    #[test]
    fn min_height_matches_element_scan() {
        let g = grp(&[2, 4, 8]);
        for h in crate::enumerate_subgroups(&g).unwrap() {
            let brute = h
                .elements()
                .iter()
                .filter(|x| !x.is_zero())
                .map(|x| p_height(&g, x, 2).unwrap())
                .min()
                .unwrap_or(Height::Infinite);
            assert_eq!(min_height(&g, &h, 2).unwrap(), brute);
        }
    }

    #[test]
    fn purity_examples() {
        // Z(4)+Z(2) with H = <(2,1)>, canonically <(1,2)> in Z(2)+Z(4).
        let g = grp(&[2, 4]);
        assert!(is_pure(&g, &sub(&g, &[&[1, 2]])).unwrap());
        let z4 = grp(&[4]);
        assert!(!is_pure(&z4, &sub(&z4, &[&[2]])).unwrap());
        assert!(is_pure(&g, &Subgroup::whole(&g)).unwrap());
    }

    #[test]
    fn purity_matches_definition() {
        // H ∩ nG = nH for every n dividing the exponent, by element sets.
        for g in [grp(&[2, 4]), grp(&[4, 4]), grp(&[2, 12]), grp(&[3, 9])] {
            let whole = Subgroup::whole(&g);
            for h in crate::enumerate_subgroups(&g).unwrap() {
                let brute = (1..=g.exponent())
                    .filter(|n| g.exponent() % n == 0)
                    .all(|n| {
                        h.intersection(&whole.multiple(n)).elements() == h.multiple(n).elements()
                    });
                assert_eq!(is_pure(&g, &h).unwrap(), brute, "{g} {h:?}");
            }
        }
    }

    #[test]
    fn ulm_examples() {
        assert_eq!(
            ulm_invariants(&grp(&[2, 8]), 2),
            UlmInvariants::from_counts(2, &[1, 0, 1])
        );
        assert_eq!(
            ulm_invariants(&grp(&[2, 4]), 2),
            UlmInvariants::from_counts(2, &[1, 1])
        );
        assert_eq!(
            ulm_invariants(&grp(&[9]), 2),
            UlmInvariants::from_counts(2, &[])
        );
        for g in [grp(&[2, 8]), grp(&[2, 4]), grp(&[9])] {
            assert_eq!(brute_ulm(&g, 2).unwrap(), ulm_invariants(&g, 2));
        }
        assert!(matches!(
            brute_ulm(&grp(&[1 << 15]), 2),
            Err(Error::BoundExceeded { .. })
        ));
    }

    #[test]
    fn ulm_ignores_other_primes() {
        let g = grp(&[6, 36]);
        assert_eq!(brute_ulm(&g, 2).unwrap(), ulm_invariants(&g, 2));
        assert_eq!(
            brute_ulm(&g, 3).unwrap(),
            UlmInvariants::from_counts(3, &[1, 1])
        );
    }

    #[test]
    fn hzero_examples() {
        let g = grp(&[2, 4]);
        let s = hzero_split_construct(&g, &sub(&g, &[&[1, 0]]), 2).unwrap();
        assert!(s.n.is_trivial());
        assert_eq!(s.a, grp(&[2]));
        assert_eq!(s.x, grp(&[4]));
        assert!(s.verify(&g, &sub(&g, &[&[1, 0]])).unwrap());

        let z2 = grp(&[2]);
        let s = hzero_split_construct(&z2, &Subgroup::whole(&z2), 2).unwrap();
        assert!(s.n.is_trivial() && s.a == z2 && s.x.is_trivial());

        // Z(4)+Z(2) with H = <(0,1)>: canonically the Z(2) summand.
        let h = sub(&g, &[&[1, 0]]);
        let s = hzero_split_construct(&g, &h, 2).unwrap();
        assert_eq!((s.a.clone(), s.x.clone()), (grp(&[2]), grp(&[4])));

        let z4 = grp(&[4]);
        assert!(hzero_split_construct(&z4, &sub(&z4, &[&[2]]), 2).is_err());
    }

    #[test]
    fn power_subgroups() {
        let t = grp(&[2, 8]);
        let (s, incl) = power_subgroup(&t, 2, 1).unwrap();
        assert_eq!(s, grp(&[4]));
        assert_eq!(incl.images(), &[el(&[0, 2])]);
        let (s, _) = power_subgroup(&t, 2, 3).unwrap();
        assert!(s.is_trivial());
    }

    #[test]
    fn extend_epi_examples() {
        let z4 = grp(&[4]);
        let (two_t, _) = power_subgroup(&z4, 2, 1).unwrap();
        let id = Homomorphism::identity(&two_t);
        let gamma = extend_epi(&z4, 1, &id).unwrap();
        assert!(is_extending_epi(&z4, 1, &id, &gamma).unwrap());
        // Multiplication by 3 on Z(4) restricts to the identity on 2T and also extends.
        assert!(is_extending_epi(&z4, 1, &id, &Homomorphism::scalar(&z4, 3)).unwrap());

        let t = grp(&[2, 4]);
        let (pt, _) = power_subgroup(&t, 2, 1).unwrap();
        let id = Homomorphism::identity(&pt);
        let gamma = extend_epi(&t, 1, &id).unwrap();
        assert!(is_extending_epi(&t, 1, &id, &gamma).unwrap());

        let not_onto = Homomorphism::zero(&two_t, &two_t);
        assert!(extend_epi(&z4, 1, &not_onto).is_err());
    }

    #[test]
    fn extend_epi_every_automorphism_of_small_groups() {
        for t in p_groups(2, 64).into_iter().chain(p_groups(3, 27)) {
            let p = t.primes()[0];
            for k in 1..=2 {
                let (top, _) = power_subgroup(&t, p, k).unwrap();
                for phi in crate::enumerate_homs(&top, &top).filter(|h| h.is_surjective()) {
                    let gamma = extend_epi(&t, k, &phi).unwrap();
                    assert!(
                        is_extending_epi(&t, k, &phi, &gamma).unwrap(),
                        "{t} k={k} {phi:?}"
                    );
                }
            }
        }
    }
}
