//! Subgroups of finite abelian groups in canonical (Hermite) form.

use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::group::{group_from_relations, FiniteAbelianGroup, GroupElement};
use crate::hom::Homomorphism;
use crate::lattice::{Hnf, LatticeBuilder};
use crate::matrix::IntMatrix;

/// Default cap on the group order for [`enumerate_subgroups`].
pub const DEFAULT_SUBGROUP_BOUND: u64 = 1 << 12;

/// A subgroup `H <= G`, stored as the Hermite basis of its preimage lattice
/// `L` with `diag(d) Z^k <= L <= Z^k`. Equality compares only the ambient
/// group and the canonical basis, never the generators it was built from.
#[derive(Clone)]
pub struct Subgroup {
    ambient: FiniteAbelianGroup,
    generators: Vec<GroupElement>,
    canonical: Hnf,
}

pub(crate) fn moduli(g: &FiniteAbelianGroup) -> Vec<i64> {
    g.invariant_factors().iter().map(|&d| d as i64).collect()
}

pub(crate) fn as_ints(x: &GroupElement) -> Vec<i64> {
    x.coords.iter().map(|&c| c as i64).collect()
}

impl Subgroup {
    pub fn generated_by(ambient: &FiniteAbelianGroup, generators: &[GroupElement]) -> Result<Self> {
        for x in generators {
            ambient.validate(x)?;
        }
        let m = moduli(ambient);
        let mut b = LatticeBuilder::new(&m);
        for x in generators {
            b.insert(&as_ints(x));
        }
        Ok(Subgroup {
            ambient: ambient.clone(),
            generators: generators.to_vec(),
            canonical: b.finish(),
        })
    }

    pub(crate) fn from_hnf(ambient: &FiniteAbelianGroup, canonical: Hnf) -> Self {
        let mut s = Subgroup {
            ambient: ambient.clone(),
            generators: vec![],
            canonical,
        };
        s.generators = s.canonical_generators();
        s
    }

    pub fn trivial(ambient: &FiniteAbelianGroup) -> Self {
        Self::generated_by(ambient, &[]).expect("no generators to validate")
    }

    pub fn whole(ambient: &FiniteAbelianGroup) -> Self {
        let gens: Vec<_> = (0..ambient.rank()).map(|i| ambient.generator(i)).collect();
        Self::generated_by(ambient, &gens).expect("canonical generators are valid")
    }

    pub fn ambient(&self) -> &FiniteAbelianGroup {
        &self.ambient
    }

    /// The generators this subgroup was built from.
    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn canonical_matrix(&self) -> &Hnf {
        &self.canonical
    }

    /// Nonzero rows of the canonical basis, reduced into the ambient group.
    pub fn canonical_generators(&self) -> Vec<GroupElement> {
        let factors = self.ambient.invariant_factors();
        (0..self.canonical.dim())
            .filter(|&j| self.canonical.pivot(j) < factors[j] as i64)
            .map(|j| {
                self.ambient
                    .element_from_ints(self.canonical.row(j))
                    .expect("row has ambient length")
            })
            .collect()
    }

    pub fn order(&self) -> u64 {
        self.ambient.order() / self.canonical.index()
    }

    pub fn index(&self) -> u64 {
        self.canonical.index()
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn is_whole(&self) -> bool {
        self.canonical.index() == 1
    }

    pub fn contains(&self, x: &GroupElement) -> Result<bool> {
        self.ambient.validate(x)?;
        Ok(self.canonical.contains(&as_ints(x)))
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.ambient == other.ambient
            && self
                .canonical_generators()
                .iter()
                .all(|g| other.canonical.contains(&as_ints(g)))
    }

    pub fn join(&self, other: &Subgroup) -> Subgroup {
        assert_eq!(self.ambient, other.ambient, "join across different groups");
        let mut gens = self.canonical_generators();
        gens.extend(other.canonical_generators());
        Subgroup::generated_by(&self.ambient, &gens).expect("generators are valid")
    }

    /// `H cap K`, computed as the kernel of `H -> G/K` on the pair lattice.
    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        assert_eq!(
            self.ambient, other.ambient,
            "intersection across different groups"
        );
        let k = self.ambient.rank();
        let m = moduli(&self.ambient);
        let mut both = m.clone();
        both.extend_from_slice(&m);
        let mut b = LatticeBuilder::new(&both);
        let mut v = vec![0i64; 2 * k];
        // (x, x) for x in H; (l, 0) for l in K. Rows with zero first half are H cap K.
        for j in 0..k {
            v[..k].copy_from_slice(self.canonical.row(j));
            v[k..].copy_from_slice(self.canonical.row(j));
            b.insert(&v);
            v[..k].copy_from_slice(other.canonical.row(j));
            v[k..].iter_mut().for_each(|x| *x = 0);
            b.insert(&v);
        }
        let h = b.finish();
        Subgroup::from_hnf(&self.ambient, h.trailing_block(k))
    }

    /// `n H`.
    pub fn multiple(&self, n: u64) -> Subgroup {
        let gens: Vec<_> = self
            .canonical_generators()
            .iter()
            .map(|g| self.ambient.scale(n, g))
            .collect();
        Subgroup::generated_by(&self.ambient, &gens).expect("multiples are valid")
    }

    /// Every element, by closing the canonical generators under addition.
    pub fn elements(&self) -> Vec<GroupElement> {
        let gens = self.canonical_generators();
        let mut seen: HashSet<GroupElement> = HashSet::new();
        let mut out = vec![self.ambient.zero()];
        seen.insert(self.ambient.zero());
        let mut i = 0;
        while i < out.len() {
            let x = out[i].clone();
            for g in &gens {
                let y = self.ambient.add(&x, g);
                if seen.insert(y.clone()) {
                    out.push(y);
                }
            }
            i += 1;
        }
        out.sort();
        out
    }

    /// The subgroup as an abstract group together with its inclusion into the ambient group.
    pub fn structure(&self) -> (FiniteAbelianGroup, Homomorphism) {
        let k = self.ambient.rank();
        let factors = self.ambient.invariant_factors();
        // Coordinates of d_j e_j in the Hermite basis: C = diag(d) * H^{-1}.
        let mut c = IntMatrix::zeros(k, k);
        for j in 0..k {
            let mut w: Vec<i128> = vec![0; k];
            w[j] = factors[j] as i128;
            for i in 0..k {
                let t = self.canonical.pivot(i) as i128;
                debug_assert_eq!(w[i] % t, 0);
                let q = w[i] / t;
                c[(j, i)] = BigInt::from(q);
                if q != 0 {
                    for (l, wl) in w.iter_mut().enumerate().skip(i) {
                        *wl -= q * self.canonical.row(i)[l] as i128;
                    }
                }
            }
        }
        let pres = group_from_relations(k, &c).expect("subgroup of a finite group is finite");
        let images = (0..pres.group.rank())
            .map(|g| {
                let lift = pres.lift_generator(g);
                let mut acc = vec![BigInt::from(0); k];
                for (i, coeff) in lift.iter().enumerate() {
                    for (l, a) in acc.iter_mut().enumerate() {
                        *a += coeff * self.canonical.row(i)[l];
                    }
                }
                let coords: Vec<i64> = acc
                    .iter()
                    .zip(factors)
                    .map(|(a, &d)| {
                        let r = a % BigInt::from(d);
                        r.to_i64().expect("residue fits")
                    })
                    .collect();
                self.ambient
                    .element_from_ints(&coords)
                    .expect("ambient length")
            })
            .collect();
        let inclusion = Homomorphism::new(pres.group.clone(), self.ambient.clone(), images)
            .expect("inclusion is well defined");
        (pres.group, inclusion)
    }

    /// Isomorphism type of the subgroup.
    pub fn group(&self) -> FiniteAbelianGroup {
        self.structure().0
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.canonical == other.canonical
    }
}

impl Eq for Subgroup {}

impl Hash for Subgroup {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ambient.hash(state);
        self.canonical.hash(state);
    }
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, g) in self.canonical_generators().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g:?}")?;
        }
        write!(f, "> <= {}", self.ambient)
    }
}

/// Every subgroup of `g` exactly once, by walking Hermite bases from the last row up.
///
/// A triangular matrix with pivots `t_j | d_j` and reduced entries is the
/// canonical basis of a subgroup precisely when each `d_j e_j` lies in its
/// row span, so candidates are filtered row by row. Order: pivots ascending
/// from the last coordinate, then entries lexicographically.
pub fn enumerate_subgroups(g: &FiniteAbelianGroup) -> Result<SubgroupIter> {
    enumerate_subgroups_bounded(g, DEFAULT_SUBGROUP_BOUND)
}

pub fn enumerate_subgroups_bounded(g: &FiniteAbelianGroup, bound: u64) -> Result<SubgroupIter> {
    if g.order() > bound {
        return Err(Error::BoundExceeded {
            order: g.order(),
            bound,
        });
    }
    let k = g.rank();
    let mut it = SubgroupIter {
        ambient: g.clone(),
        moduli: moduli(g),
        rows: vec![0; k * k],
        candidates: Vec::with_capacity(k),
        done: false,
    };
    if k > 0 {
        let first = it.candidates_for(k - 1);
        it.candidates.push((first, 0));
    }
    Ok(it)
}

pub struct SubgroupIter {
    ambient: FiniteAbelianGroup,
    moduli: Vec<i64>,
    /// Rows fixed so far (rows `k - depth ..`).
    rows: Vec<i64>,
    /// Per depth: valid choices for that row and the next one to try.
    candidates: Vec<(Vec<Vec<i64>>, usize)>,
    done: bool,
}

impl SubgroupIter {
    /// Valid suffixes `(t_j, a_{j,j+1}, ..., a_{j,k-1})` for row `j` given rows `j+1..`.
    fn candidates_for(&self, j: usize) -> Vec<Vec<i64>> {
        let k = self.moduli.len();
        let d = self.moduli[j];
        let tail_pivots: Vec<i64> = (j + 1..k).map(|l| self.rows[l * k + l]).collect();
        let mut out = Vec::new();
        let pivots: Vec<i64> = (1..=d).filter(|t| d % t == 0).collect();
        let mut entries = vec![0i64; k - j - 1];
        for &t in &pivots {
            entries.iter_mut().for_each(|x| *x = 0);
            loop {
                if self.closes(j, d / t, &entries) {
                    let mut row = Vec::with_capacity(k - j);
                    row.push(t);
                    row.extend_from_slice(&entries);
                    out.push(row);
                }
                // odometer over entries, last coordinate fastest
                let mut i = entries.len();
                let mut advanced = false;
                while i > 0 {
                    i -= 1;
                    entries[i] += 1;
                    if entries[i] < tail_pivots[i] {
                        advanced = true;
                        break;
                    }
                    entries[i] = 0;
                }
                if !advanced {
                    break;
                }
            }
        }
        out
    }

    /// Whether `c * (a_{j,j+1}, ...)` lies in the span of rows `j+1..`.
    fn closes(&self, j: usize, c: i64, entries: &[i64]) -> bool {
        let k = self.moduli.len();
        let mut w: Vec<i64> = entries.iter().map(|&a| a * c).collect();
        for (off, l) in (j + 1..k).enumerate() {
            let t = self.rows[l * k + l];
            if w[off] % t != 0 {
                return false;
            }
            let q = w[off] / t;
            if q != 0 {
                for (o2, l2) in (l..k).enumerate() {
                    w[off + o2] -= q * self.rows[l * k + l2];
                }
            }
        }
        true
    }

    fn set_row(&mut self, j: usize, suffix: &[i64]) {
        let k = self.moduli.len();
        for l in 0..k {
            self.rows[j * k + l] = if l < j { 0 } else { suffix[l - j] };
        }
    }
}

impl Iterator for SubgroupIter {
    type Item = Subgroup;

    fn next(&mut self) -> Option<Subgroup> {
        if self.done {
            return None;
        }
        let k = self.moduli.len();
        if k == 0 {
            self.done = true;
            return Some(Subgroup::trivial(&self.ambient));
        }
        loop {
            let depth = self.candidates.len();
            if depth == 0 {
                self.done = true;
                return None;
            }
            let j = k - depth;
            let (ref list, ref mut next) = self.candidates[depth - 1];
            if *next >= list.len() {
                self.candidates.pop();
                continue;
            }
            let choice = list[*next].clone();
            *next += 1;
            self.set_row(j, &choice);
            if j == 0 {
                let h = Hnf::from_raw(k, self.rows.clone());
                return Some(Subgroup::from_hnf(&self.ambient, h));
            }
            let below = self.candidates_for(j - 1);
            self.candidates.push((below, 0));
        }
    }
}
