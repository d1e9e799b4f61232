//! Hermite normal form for lattices `L` with `diag(m) Z^n <= L <= Z^n`.
//!
//! Subgroups of `Z(m_1) + ... + Z(m_n)` are exactly such lattices, so this is
//! the canonical form behind [`crate::Subgroup`], kernels, images and
//! intersections. Because `L` contains the diagonal lattice, all arithmetic
//! runs modulo `m` in machine integers; a final pass against the diagonal
//! rows recovers the exact basis.
//!
//! The basis is row-style upper triangular: row `j` has pivot `t_j > 0` in
//! column `j`, `t_j | m_j`, and every entry above a pivot lies in `[0, t_j)`.

#[derive(Clone, Debug)]
pub struct LatticeBuilder {
    n: usize,
    moduli: Vec<i64>,
    rows: Vec<i64>,
    present: Vec<bool>,
    carry: Vec<i64>,
    spare: Vec<i64>,
}

#[inline]
fn red(x: i128, m: i64) -> i64 {
    x.rem_euclid(m as i128) as i64
}

impl LatticeBuilder {
    pub fn new(moduli: &[i64]) -> Self {
        assert!(moduli.iter().all(|&m| m >= 1), "moduli must be positive");
        let n = moduli.len();
        LatticeBuilder {
            n,
            moduli: moduli.to_vec(),
            rows: vec![0; n * n],
            present: vec![false; n],
            carry: vec![0; n],
            spare: vec![0; n],
        }
    }

    pub fn reset(&mut self) {
        self.present.iter_mut().for_each(|p| *p = false);
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Adds a generator. Entries may be any integers.
    pub fn insert(&mut self, v: &[i64]) {
        debug_assert_eq!(v.len(), self.n);
        for (c, (&x, &m)) in self.carry.iter_mut().zip(v.iter().zip(&self.moduli)) {
            *c = x.rem_euclid(m);
        }
        self.insert_carry(0);
    }

    /// Inserts `self.carry`, which is already reduced and zero before `start`.
    fn insert_carry(&mut self, start: usize) {
        let n = self.n;
        for j in start..n {
            let vj = self.carry[j];
            if vj == 0 {
                continue;
            }
            if !self.present[j] {
                self.rows[j * n..(j + 1) * n].copy_from_slice(&self.carry);
                self.present[j] = true;
                return;
            }
            let rj = self.rows[j * n + j];
            if vj % rj == 0 {
                let q = (vj / rj) as i128;
                self.carry[j] = 0;
                for l in j + 1..n {
                    let x = self.carry[l] as i128 - q * self.rows[j * n + l] as i128;
                    self.carry[l] = red(x, self.moduli[l]);
                }
                continue;
            }
            let (g, a, b) = crate::arith::ext_gcd(rj, vj);
            let (a, b) = (a as i128, b as i128);
            let (rg, vg) = ((rj / g) as i128, (vj / g) as i128);
            self.rows[j * n + j] = g;
            self.carry[j] = 0;
            for l in j + 1..n {
                let r = self.rows[j * n + l] as i128;
                let v = self.carry[l] as i128;
                let m = self.moduli[l];
                self.rows[j * n + l] = red(a * r + b * v, m);
                self.carry[l] = red(rg * v - vg * r, m);
            }
        }
    }

    /// Exact Hermite basis of the lattice generated so far together with `diag(m)`.
    pub fn finish(&mut self) -> Hnf {
        let n = self.n;
        for j in 0..n {
            let m = self.moduli[j];
            if !self.present[j] {
                self.rows[j * n..(j + 1) * n]
                    .iter_mut()
                    .for_each(|x| *x = 0);
                self.rows[j * n + j] = m;
                self.present[j] = true;
                continue;
            }
            // Combine row j with m e_j; the leftover goes to later rows.
            let rj = self.rows[j * n + j];
            let (g, a, _) = crate::arith::ext_gcd(rj, m);
            let a = a as i128;
            let mg = (m / g) as i128;
            self.spare.iter_mut().for_each(|x| *x = 0);
            let mut leftover_nonzero = false;
            for l in j + 1..n {
                let r = self.rows[j * n + l] as i128;
                let ml = self.moduli[l];
                self.spare[l] = red(mg * r, ml);
                leftover_nonzero |= self.spare[l] != 0;
                self.rows[j * n + l] = red(a * r, ml);
            }
            self.rows[j * n + j] = g;
            if leftover_nonzero {
                std::mem::swap(&mut self.carry, &mut self.spare);
                self.insert_carry(j + 1);
            }
        }
        // Reduce entries above each pivot.
        for j in 0..n {
            let t = self.rows[j * n + j];
            for i in 0..j {
                let q = self.rows[i * n + j].div_euclid(t);
                if q != 0 {
                    for l in j..n {
                        self.rows[i * n + l] -= q * self.rows[j * n + l];
                    }
                }
            }
        }
        Hnf {
            n,
            rows: self.rows.clone(),
        }
    }
}

/// Hermite basis of a full-rank lattice, row-major `n x n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hnf {
    n: usize,
    rows: Vec<i64>,
}

impl Hnf {
    pub fn from_generators<'a>(gens: impl IntoIterator<Item = &'a [i64]>, moduli: &[i64]) -> Self {
        let mut b = LatticeBuilder::new(moduli);
        for g in gens {
            b.insert(g);
        }
        b.finish()
    }

    /// Builds from a matrix already in Hermite form. Callers guarantee the shape.
    pub(crate) fn from_raw(n: usize, rows: Vec<i64>) -> Self {
        debug_assert_eq!(rows.len(), n * n);
        Hnf { n, rows }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, j: usize) -> &[i64] {
        &self.rows[j * self.n..(j + 1) * self.n]
    }

    pub fn pivot(&self, j: usize) -> i64 {
        self.rows[j * self.n + j]
    }

    pub fn pivots(&self) -> impl Iterator<Item = i64> + '_ {
        (0..self.n).map(move |j| self.pivot(j))
    }

    /// `[Z^n : L]`.
    pub fn index(&self) -> u64 {
        self.pivots().map(|t| t as u64).product()
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        let n = self.n;
        let mut w: Vec<i128> = v.iter().map(|&x| x as i128).collect();
        for j in 0..n {
            let t = self.pivot(j) as i128;
            if w[j] % t != 0 {
                return false;
            }
            let q = w[j] / t;
            if q != 0 {
                let row = &self.rows[j * n..(j + 1) * n];
                for (wl, &r) in w[j..].iter_mut().zip(&row[j..]) {
                    *wl -= q * r as i128;
                }
            }
        }
        true
    }

    /// Rows and columns `start..` as a Hermite basis of the lattice's
    /// intersection with the coordinate subspace spanned by those columns.
    pub fn trailing_block(&self, start: usize) -> Hnf {
        let k = self.n - start;
        let mut rows = Vec::with_capacity(k * k);
        for j in start..self.n {
            rows.extend_from_slice(&self.row(j)[start..]);
        }
        Hnf { n: k, rows }
    }

    /// Rows and columns `..end`: the Hermite basis of the projection onto the first `end` coordinates.
    pub fn leading_block(&self, end: usize) -> Hnf {
        let mut rows = Vec::with_capacity(end * end);
        for j in 0..end {
            rows.extend_from_slice(&self.row(j)[..end]);
        }
        Hnf { n: end, rows }
    }

    pub fn raw_rows(&self) -> &[i64] {
        &self.rows
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force membership: enumerate the lattice modulo `diag(m)` by closing under addition.
    fn brute_members(gens: &[Vec<i64>], m: &[i64]) -> std::collections::BTreeSet<Vec<i64>> {
        let mut set = std::collections::BTreeSet::new();
        set.insert(vec![0; m.len()]);
        loop {
            let mut grew = false;
            let cur: Vec<_> = set.iter().cloned().collect();
            for x in &cur {
                for g in gens {
                    let y: Vec<i64> = x
                        .iter()
                        .zip(g)
                        .zip(m)
                        .map(|((a, b), mm)| (a + b).rem_euclid(*mm))
                        .collect();
                    grew |= set.insert(y);
                }
            }
            if !grew {
                return set;
            }
        }
    }

    fn all_vectors(m: &[i64]) -> Vec<Vec<i64>> {
        let mut out = vec![vec![]];
        for &mi in m {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..mi).map(move |x| {
                        let mut w = v.clone();
                        w.push(x);
                        w
                    })
                })
                .collect();
        }
        out
    }

    fn check(gens: &[Vec<i64>], m: &[i64]) {
        let h = Hnf::from_generators(gens.iter().map(|g| g.as_slice()), m);
        let members = brute_members(gens, m);
        let total: i64 = m.iter().product();
        assert_eq!(
            h.index() as i64 * members.len() as i64,
            total,
            "{gens:?} mod {m:?}: {h:?}"
        );
        for v in all_vectors(m) {
            assert_eq!(h.contains(&v), members.contains(&v), "{v:?}");
        }
        for (j, &mj) in m.iter().enumerate().take(h.dim()) {
            assert!(h.pivot(j) > 0 && mj % h.pivot(j) == 0);
            for i in 0..j {
                assert!((0..h.pivot(j)).contains(&h.row(i)[j]));
            }
            for l in 0..j {
                assert_eq!(h.row(j)[l], 0);
            }
        }
    }

    #[test]
    fn small_lattices_match_brute_force() {
        check(&[], &[4, 2]);
        check(&[vec![2, 1]], &[4, 2]);
        check(&[vec![1, 0]], &[2, 4]);
        check(&[vec![1, 2], vec![0, 3]], &[2, 6]);
        check(&[vec![3, 3, 1]], &[6, 6, 2]);
        check(&[vec![1, 1, 1], vec![0, 2, 2]], &[4, 4, 4]);
        check(&[vec![2, 3, 0], vec![0, 1, 5], vec![1, 1, 1]], &[4, 6, 12]);
    }

    #[test]
    fn canonical_form_ignores_generating_set() {
        let m = [4, 8];
        let a = Hnf::from_generators([&[2i64, 2][..]], &m);
        let b = Hnf::from_generators([&[6i64, 6][..], &[0, 4][..], &[2, 10][..]], &m);
        assert_eq!(a.raw_rows().len(), 4);
        // 3*(2,2) = (6,6) and (2,10) = (2,2) + (0,8), so the spans agree iff (0,4) is in <(2,2)>.
        assert_eq!(a.contains(&[0, 4]), a == b);
    }

    #[test]
    fn exhaustive_single_generators() {
        let m = [2, 4, 4];
        for v in all_vectors(&m) {
            check(std::slice::from_ref(&v), &m);
            check(&[v, vec![1, 2, 3]], &m);
        }
    }
}
