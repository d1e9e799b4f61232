//! Smith normal form with unimodular transforms.
//!
//! For an `m x n` integer matrix `M` we compute unimodular `U` (`m x m`) and
//! `V` (`n x n`) with `U * M * V = D`, where `D` is diagonal, nonnegative and
//! every nonzero diagonal entry divides the next one. `V^{-1}` is tracked as
//! well so quotient generators can be pulled back to the original basis.
//!
//! Pivots are always the entry of least absolute value, ties broken row-major,
//! so transforms are reproducible.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::matrix::IntMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SnfResult {
    /// Diagonal entries `d_0, ..., d_{min(m,n)-1}`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        let k = self.d.rows().min(self.d.cols());
        (0..k).map(|i| self.d[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

struct Reducer {
    a: IntMatrix,
    u: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl Reducer {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
        self.v_inv.swap_rows(i, j);
    }

    fn add_row(&mut self, dst: usize, src: usize, f: &BigInt) {
        self.a.add_row_multiple(dst, src, f);
        self.u.add_row_multiple(dst, src, f);
    }

    fn add_col(&mut self, dst: usize, src: usize, f: &BigInt) {
        self.a.add_col_multiple(dst, src, f);
        self.v.add_col_multiple(dst, src, f);
        // V <- V E with E = I + f e_src e_dst^T, so V^{-1} <- E^{-1} V^{-1}.
        self.v_inv.add_row_multiple(src, dst, &-f);
    }

    /// Smallest nonzero |entry| in the trailing block, row-major ties.
    fn block_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let x = &self.a[(i, j)];
                if x.is_zero() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if self.a[(bi, bj)].abs() <= x.abs() => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        best
    }

    /// Smallest nonzero |entry| on row `t` and column `t` of the trailing block.
    fn cross_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        let cells = (t..self.a.cols())
            .map(|j| (t, j))
            .chain((t + 1..self.a.rows()).map(|i| (i, t)));
        for (i, j) in cells {
            let x = &self.a[(i, j)];
            if x.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if self.a[(bi, bj)].abs() <= x.abs() => {}
                _ => best = Some((i, j)),
            }
        }
        best
    }

    fn move_to(&mut self, t: usize, (i, j): (usize, usize)) {
        self.swap_rows(t, i);
        self.swap_cols(t, j);
    }

    /// Clears row `t` and column `t` except the pivot. Returns once the cross is clean.
    fn clear_cross(&mut self, t: usize) {
        loop {
            let p = self.a[(t, t)].clone();
            let mut dirty = false;
            for i in t + 1..self.a.rows() {
                if self.a[(i, t)].is_zero() {
                    continue;
                }
                let q = self.a[(i, t)].div_floor(&p);
                self.add_row(i, t, &-q);
                dirty |= !self.a[(i, t)].is_zero();
            }
            for j in t + 1..self.a.cols() {
                if self.a[(t, j)].is_zero() {
                    continue;
                }
                let q = self.a[(t, j)].div_floor(&p);
                self.add_col(j, t, &-q);
                dirty |= !self.a[(t, j)].is_zero();
            }
            if !dirty {
                return;
            }
            let next = self.cross_pivot(t).expect("cross has a nonzero entry");
            self.move_to(t, next);
        }
    }

    /// Finds an entry of the trailing block (below/right of `t`) not divisible by the pivot.
    fn non_divisible_row(&self, t: usize) -> Option<usize> {
        let p = &self.a[(t, t)];
        for i in t + 1..self.a.rows() {
            for j in t + 1..self.a.cols() {
                if !self.a[(i, j)].is_multiple_of(p) {
                    return Some(i);
                }
            }
        }
        None
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SnfResult {
    let (rows, cols) = (m.rows(), m.cols());
    let mut r = Reducer {
        a: m.clone(),
        u: IntMatrix::identity(rows),
        v: IntMatrix::identity(cols),
        v_inv: IntMatrix::identity(cols),
    };
    for t in 0..rows.min(cols) {
        let Some(pivot) = r.block_pivot(t) else { break };
        r.move_to(t, pivot);
        loop {
            r.clear_cross(t);
            match r.non_divisible_row(t) {
                Some(i) => {
                    let one = BigInt::from(1);
                    r.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if r.a[(t, t)].is_negative() {
            r.a.negate_row(t);
            r.u.negate_row(t);
        }
    }
    SnfResult {
        u: r.u,
        d: r.a,
        v: r.v,
        v_inv: r.v_inv,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use proptest::prelude::*;

    fn check(m: &IntMatrix) -> SnfResult {
        let s = smith_normal_form(m);
        assert_eq!(&(&s.u * m) * &s.v, s.d, "U M V != D for {m:?}");
        assert!(s.u.is_unimodular());
        assert!(s.v.is_unimodular());
        assert_eq!(&s.v * &s.v_inv, IntMatrix::identity(m.cols()));
        assert!(s.d.is_diagonal());
        let diag = s.diagonal();
        assert!(diag.iter().all(|x| !x.is_negative()));
        for w in diag.windows(2) {
            if !w[1].is_zero() {
                assert!(!w[0].is_zero() && w[1].is_multiple_of(&w[0]), "{diag:?}");
            } else {
                // zeros trail
                assert!(diag
                    .iter()
                    .skip_while(|x| !x.is_zero())
                    .all(|x| x.is_zero()));
            }
        }
        s
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn two_by_two() {
        let m = IntMatrix::from_rows(&[[2i64, 4], [6, 8]]).unwrap();
        let s = check(&m);
        assert_eq!(s.diagonal(), big(&[2, 4]));
    }

    #[test]
    fn zero_and_identity() {
        let s = check(&IntMatrix::from_rows(&[[0i64]]).unwrap());
        assert_eq!(s.d, IntMatrix::from_rows(&[[0i64]]).unwrap());
        assert_eq!(s.u, IntMatrix::identity(1));
        assert_eq!(s.v, IntMatrix::identity(1));
        let s = check(&IntMatrix::identity(2));
        assert_eq!(s.d, IntMatrix::identity(2));
    }

    #[test]
    fn empty_and_rectangular() {
        check(&IntMatrix::zeros(0, 3));
        check(&IntMatrix::zeros(2, 0));
        let s = check(&IntMatrix::from_rows(&[[4i64, 6, 10]]).unwrap());
        assert_eq!(s.diagonal(), big(&[2]));
        let s = check(&IntMatrix::from_rows(&[[4i64], [6], [9]]).unwrap());
        assert_eq!(s.diagonal(), big(&[1]));
    }

    #[test]
    fn needs_divisibility_fixup() {
        // diag(2,3) ~ diag(1,6)
        let s = check(&IntMatrix::diagonal(&[2i64, 3]));
        assert_eq!(s.diagonal(), big(&[1, 6]));
        let s = check(&IntMatrix::diagonal(&[4i64, 6, 10]));
        assert_eq!(s.diagonal(), big(&[2, 2, 60]));
    }

    #[test]
    fn reproducible() {
        let m = IntMatrix::from_rows(&[[3i64, -7, 2], [5, 1, -4], [6, 0, 9]]).unwrap();
        assert_eq!(smith_normal_form(&m), smith_normal_form(&m));
        let s = check(&m);
        let det: BigInt = s.diagonal().iter().product();
        assert_eq!(det, m.determinant().unwrap().abs());
        assert!(s.diagonal()[0].is_one());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn random_matrices(rows in 0usize..=6, cols in 0usize..=6, seed in proptest::collection::vec(-50i64..=50, 36)) {
            let data: Vec<BigInt> = seed.iter().take(rows * cols).map(|&x| BigInt::from(x)).collect();
            let m = IntMatrix::from_vec(rows, cols, data).unwrap();
            check(&m);
        }
    }
}
