//! Homomorphisms between finite abelian groups.

use std::collections::HashMap;
use std::fmt;
use std::ops::ControlFlow;

use crate::arith::mul_mod;
use crate::error::{Error, Result};
use crate::group::{group_from_relations, FiniteAbelianGroup, GroupElement};
use crate::lattice::LatticeBuilder;
use crate::matrix::IntMatrix;
use crate::subgroup::{as_ints, moduli, Subgroup};

/// Determined by the images of the canonical generators of the domain.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Homomorphism {
    domain: FiniteAbelianGroup,
    codomain: FiniteAbelianGroup,
    images: Vec<GroupElement>,
}

impl Homomorphism {
    /// Checks `d_i * images[i] = 0` for every generator.
    pub fn new(
        domain: FiniteAbelianGroup,
        codomain: FiniteAbelianGroup,
        images: Vec<GroupElement>,
    ) -> Result<Self> {
        if images.len() != domain.rank() {
            return Err(Error::DimensionMismatch(format!(
                "{} generator images for a domain of rank {}",
                images.len(),
                domain.rank()
            )));
        }
        for (y, &d) in images.iter().zip(domain.invariant_factors()) {
            codomain.validate(y)?;
            if !codomain.scale(d, y).is_zero() {
                return Err(Error::PreconditionViolated(format!(
                    "image {y:?} of a generator of order {d} is not killed by {d}"
                )));
            }
        }
        Ok(Homomorphism {
            domain,
            codomain,
            images,
        })
    }

    pub fn identity(g: &FiniteAbelianGroup) -> Self {
        let images = (0..g.rank()).map(|i| g.generator(i)).collect();
        Homomorphism {
            domain: g.clone(),
            codomain: g.clone(),
            images,
        }
    }

    pub fn zero(domain: &FiniteAbelianGroup, codomain: &FiniteAbelianGroup) -> Self {
        Homomorphism {
            domain: domain.clone(),
            codomain: codomain.clone(),
            images: vec![codomain.zero(); domain.rank()],
        }
    }

    /// Multiplication by `n` on `g`.
    pub fn scalar(g: &FiniteAbelianGroup, n: u64) -> Self {
        let images = (0..g.rank()).map(|i| g.scale(n, &g.generator(i))).collect();
        Homomorphism {
            domain: g.clone(),
            codomain: g.clone(),
            images,
        }
    }

    pub fn domain(&self) -> &FiniteAbelianGroup {
        &self.domain
    }

    pub fn codomain(&self) -> &FiniteAbelianGroup {
        &self.codomain
    }

    pub fn images(&self) -> &[GroupElement] {
        &self.images
    }

    pub fn apply(&self, x: &GroupElement) -> Result<GroupElement> {
        self.domain.validate(x)?;
        Ok(apply_images(&self.codomain, &self.images, x))
    }

    /// `self` after `first`.
    pub fn compose(&self, first: &Homomorphism) -> Result<Homomorphism> {
        if first.codomain != self.domain {
            return Err(Error::DimensionMismatch(
                "composition of non-matching homomorphisms".into(),
            ));
        }
        let images = first
            .images
            .iter()
            .map(|y| apply_images(&self.codomain, &self.images, y))
            .collect();
        Ok(Homomorphism {
            domain: first.domain.clone(),
            codomain: self.codomain.clone(),
            images,
        })
    }

    pub fn image(&self) -> Subgroup {
        Subgroup::generated_by(&self.codomain, &self.images).expect("images are valid")
    }

    pub fn is_surjective(&self) -> bool {
        images_generate(&self.codomain, &self.images)
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().is_trivial()
    }

    pub fn kernel(&self) -> Subgroup {
        kernel_of_images(&self.domain, &self.codomain, &self.images)
    }
}

fn apply_images(
    codomain: &FiniteAbelianGroup,
    images: &[GroupElement],
    x: &GroupElement,
) -> GroupElement {
    let mut acc = codomain.zero();
    for (&c, y) in x.coords.iter().zip(images) {
        if c != 0 {
            acc = codomain.add(&acc, &codomain.scale(c, y));
        }
    }
    acc
}

/// Whether `images` generate all of `codomain`.
pub fn images_generate(codomain: &FiniteAbelianGroup, images: &[GroupElement]) -> bool {
    let mut b = LatticeBuilder::new(&moduli(codomain));
    for y in images {
        b.insert(&as_ints(y));
    }
    b.finish().index() == 1
}

/// Repeated surjectivity tests onto one codomain without reallocating.
#[derive(Clone, Debug)]
pub struct SurjectivityTest {
    /// For each prime `p` dividing the order: `p` and the coordinates with `p | d_i`.
    primes: Vec<(u64, Vec<usize>)>,
    rows: Vec<u64>,
}

impl SurjectivityTest {
    pub fn new(codomain: &FiniteAbelianGroup) -> Self {
        let d = codomain.invariant_factors();
        let primes = codomain
            .primes()
            .into_iter()
            .map(|p| {
                (
                    p,
                    (0..d.len()).filter(|&i| d[i].is_multiple_of(p)).collect(),
                )
            })
            .collect();
        SurjectivityTest {
            primes,
            rows: Vec::new(),
        }
    }

    /// Same answer as [`images_generate`]. A subset generates iff it spans
    /// `G/pG` over `F_p` for every prime `p`, which is a small rank computation.
    pub fn generates(&mut self, images: &[GroupElement]) -> bool {
        for (p, cols) in &self.primes {
            let (p, r) = (*p, cols.len());
            self.rows.clear();
            for y in images {
                self.rows.extend(cols.iter().map(|&i| y.coords[i] % p));
            }
            if rank_mod_p(&mut self.rows, r, p) < r {
                return false;
            }
        }
        true
    }
}

/// Decides whether an endomorphism-style image tuple has trivial kernel,
/// reusing scratch space. A nontrivial kernel contains an element of prime
/// order, so it suffices that each socle `G[p]` maps injectively.
pub struct InjectivityTest {
    domain: Vec<u64>,
    codomain: Vec<u64>,
    /// Primes of the domain with the codomain coordinates where `p | d_j`.
    primes: Vec<(u64, Vec<usize>)>,
    rows: Vec<u64>,
}

impl InjectivityTest {
    pub fn new(domain: &FiniteAbelianGroup, codomain: &FiniteAbelianGroup) -> Self {
        let k = codomain.invariant_factors();
        let primes = domain
            .primes()
            .into_iter()
            .map(|p| {
                (
                    p,
                    (0..k.len()).filter(|&j| k[j].is_multiple_of(p)).collect(),
                )
            })
            .collect();
        InjectivityTest {
            domain: domain.invariant_factors().to_vec(),
            codomain: codomain.invariant_factors().to_vec(),
            primes,
            rows: Vec::new(),
        }
    }

    /// Same answer as `kernel_of_images(..).is_trivial()`.
    pub fn injective(&mut self, images: &[GroupElement]) -> bool {
        for (p, cols) in &self.primes {
            let p = *p;
            let mut height = 0;
            self.rows.clear();
            for (i, y) in images.iter().enumerate() {
                let di = self.domain[i];
                if !di.is_multiple_of(p) {
                    continue;
                }
                height += 1;
                // (d_i / p) * y lies in G[p]; coordinate j is a multiple of d_j / p.
                for &j in cols {
                    let dj = self.codomain[j];
                    let c = mul_mod(di / p, y.coords[j], dj);
                    self.rows.push(c / (dj / p));
                }
            }
            if cols.len() < height || rank_mod_p(&mut self.rows, cols.len(), p) < height {
                return false;
            }
        }
        true
    }
}

/// Rank over `F_p` of the row-major matrix with `width` columns; destroys `m`.
fn rank_mod_p(m: &mut [u64], width: usize, p: u64) -> usize {
    let height = m.len().checked_div(width).unwrap_or(0);
    let mut rank = 0;
    for c in 0..width {
        let Some(pivot) = (rank..height).find(|&r| m[r * width + c] != 0) else {
            continue;
        };
        for k in 0..width {
            m.swap(rank * width + k, pivot * width + k);
        }
        let inv = crate::arith::inv_mod(m[rank * width + c], p);
        for r in 0..height {
            let f = m[r * width + c];
            if r == rank || f == 0 {
                continue;
            }
            let f = mul_mod(f, inv, p);
            for k in c..width {
                let sub = mul_mod(f, m[rank * width + k], p);
                m[r * width + k] = (m[r * width + k] + p - sub) % p;
            }
        }
        rank += 1;
        if rank == height {
            break;
        }
    }
    rank
}

/// Kernel via the pair lattice `{(x A - l, x)}`: rows whose codomain half vanishes.
pub fn kernel_of_images(
    domain: &FiniteAbelianGroup,
    codomain: &FiniteAbelianGroup,
    images: &[GroupElement],
) -> Subgroup {
    let (k, m) = (domain.rank(), codomain.rank());
    let mut mods = moduli(codomain);
    mods.extend(moduli(domain));
    let mut b = LatticeBuilder::new(&mods);
    let mut v = vec![0i64; m + k];
    for (i, y) in images.iter().enumerate() {
        v.iter_mut().for_each(|x| *x = 0);
        for (slot, &c) in v.iter_mut().zip(&y.coords) {
            *slot = c as i64;
        }
        v[m + i] = 1;
        b.insert(&v);
    }
    let h = b.finish();
    Subgroup::from_hnf(domain, h.trailing_block(m))
}

/// `G/H` with its canonical projection.
pub fn quotient(
    g: &FiniteAbelianGroup,
    h: &Subgroup,
) -> Result<(FiniteAbelianGroup, Homomorphism)> {
    if h.ambient() != g {
        return Err(Error::PreconditionViolated(
            "subgroup lives in a different group".into(),
        ));
    }
    let k = g.rank();
    let basis = h.canonical_matrix();
    let rows: Vec<&[i64]> = (0..k).map(|j| basis.row(j)).collect();
    let rel = if k == 0 {
        IntMatrix::zeros(0, 0)
    } else {
        IntMatrix::from_rows(&rows)?
    };
    let pres = group_from_relations(k, &rel)?;
    let images = (0..k)
        .map(|i| {
            let mut e = vec![0i64; k];
            e[i] = 1;
            pres.project(&e)
        })
        .collect();
    let pi = Homomorphism::new(g.clone(), pres.group.clone(), images)?;
    Ok((pres.group, pi))
}

/// The `n`-torsion `{y : n y = 0}` of `k`, in lexicographic order.
pub fn torsion_elements(k: &FiniteAbelianGroup, n: u64) -> Vec<GroupElement> {
    // Coordinate j ranges over multiples of e_j / gcd(n, e_j).
    let steps: Vec<(u64, u64)> = k
        .invariant_factors()
        .iter()
        .map(|&e| {
            let g = num_integer::gcd(n, e);
            (e / g, g)
        })
        .collect();
    let total: u64 = steps.iter().map(|&(_, cnt)| cnt).product();
    let mut out = Vec::with_capacity(total as usize);
    let mut idx = vec![0u64; steps.len()];
    for _ in 0..total {
        out.push(GroupElement::new(
            idx.iter().zip(&steps).map(|(&i, &(s, _))| i * s).collect(),
        ));
        let mut j = idx.len();
        while j > 0 {
            j -= 1;
            idx[j] += 1;
            if idx[j] < steps[j].1 {
                break;
            }
            idx[j] = 0;
        }
    }
    out
}

/// Candidate images per domain generator, shared between generators of equal order.
struct Candidates {
    per_generator: Vec<usize>,
    lists: Vec<Vec<GroupElement>>,
}

impl Candidates {
    fn new(g: &FiniteAbelianGroup, k: &FiniteAbelianGroup) -> Self {
        let mut cache: HashMap<u64, usize> = HashMap::new();
        let mut lists = Vec::new();
        let per_generator = g
            .invariant_factors()
            .iter()
            .map(|&d| {
                *cache.entry(d).or_insert_with(|| {
                    lists.push(torsion_elements(k, d));
                    lists.len() - 1
                })
            })
            .collect();
        Candidates {
            per_generator,
            lists,
        }
    }

    fn list(&self, i: usize) -> &[GroupElement] {
        &self.lists[self.per_generator[i]]
    }
}

/// Calls `f` with the generator images of every homomorphism `g -> k`, in
/// lexicographic order of the image tuple. Stops early on `Break`.
pub fn for_each_hom<B>(
    g: &FiniteAbelianGroup,
    k: &FiniteAbelianGroup,
    f: impl FnMut(&[GroupElement]) -> ControlFlow<B>,
) -> Option<B> {
    for_each_hom_with_prefix(g, k, &[], f)
}

/// Like [`for_each_hom`], restricted to the homomorphisms whose first
/// generator images are `prefix`. Returns `None` at once if `prefix` cannot
/// start a homomorphism. Splitting on the first image lets callers share out
/// one enumeration between threads.
pub fn for_each_hom_with_prefix<B>(
    g: &FiniteAbelianGroup,
    k: &FiniteAbelianGroup,
    prefix: &[GroupElement],
    mut f: impl FnMut(&[GroupElement]) -> ControlFlow<B>,
) -> Option<B> {
    let r = g.rank();
    let fixed = prefix.len();
    if fixed > r {
        return None;
    }
    for (y, &d) in prefix.iter().zip(g.invariant_factors()) {
        if k.validate(y).is_err() || !k.scale(d, y).is_zero() {
            return None;
        }
    }
    let cands = Candidates::new(g, k);
    let mut idx = vec![0usize; r];
    let mut images: Vec<GroupElement> = prefix.to_vec();
    images.extend((fixed..r).map(|i| cands.list(i)[0].clone()));
    loop {
        if let ControlFlow::Break(b) = f(&images) {
            return Some(b);
        }
        let mut j = r;
        loop {
            if j == fixed {
                return None;
            }
            j -= 1;
            idx[j] += 1;
            let list = cands.list(j);
            if idx[j] < list.len() {
                images[j].clone_from(&list[idx[j]]);
                break;
            }
            idx[j] = 0;
            images[j].clone_from(&list[0]);
        }
    }
}

/// Lazy stream of every homomorphism `g -> k`, each exactly once.
pub fn enumerate_homs(g: &FiniteAbelianGroup, k: &FiniteAbelianGroup) -> HomIter {
    let cands = Candidates::new(g, k);
    HomIter {
        domain: g.clone(),
        codomain: k.clone(),
        idx: Some(vec![0; g.rank()]),
        cands,
    }
}

pub struct HomIter {
    domain: FiniteAbelianGroup,
    codomain: FiniteAbelianGroup,
    cands: Candidates,
    idx: Option<Vec<usize>>,
}

impl Iterator for HomIter {
    type Item = Homomorphism;

    fn next(&mut self) -> Option<Homomorphism> {
        let idx = self.idx.as_mut()?;
        let images = idx
            .iter()
            .enumerate()
            .map(|(i, &c)| self.cands.list(i)[c].clone())
            .collect();
        let mut j = idx.len();
        let mut exhausted = true;
        while j > 0 {
            j -= 1;
            idx[j] += 1;
            if idx[j] < self.cands.list(j).len() {
                exhausted = false;
                break;
            }
            idx[j] = 0;
        }
        if exhausted {
            self.idx = None;
        }
        Some(Homomorphism {
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            images,
        })
    }
}

impl fmt::Debug for Homomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} -> {} : {:?}",
            self.domain, self.codomain, self.images
        )
    }
}
