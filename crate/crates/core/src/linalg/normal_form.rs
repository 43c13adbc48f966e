//! Hermite and Smith normal forms over the integers.
//!
//! Both eliminations pick the nonzero entry of smallest magnitude as the next
//! pivot, which keeps intermediate coefficients small without randomization.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::IntMatrix;

/// Row Hermite normal form: returns `(H, U)` with `H = U·A`, `U` unimodular.
///
/// `H` is in row echelon form, every pivot is positive and the entries above a
/// pivot lie in `[0, pivot)`. Zero rows sit at the bottom.
pub fn hnf(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = a.clone();
    let mut u = IntMatrix::identity(a.rows());
    hnf_in_place(&mut h, Some(&mut u));
    (h, u)
}

/// Hermite normal form without the transformation matrix.
pub fn hnf_only(a: &IntMatrix) -> IntMatrix {
    let mut h = a.clone();
    hnf_in_place(&mut h, None);
    h
}

/// Echelon-reduces `h` in place, returning the pivot columns in order.
pub(crate) fn hnf_in_place(h: &mut IntMatrix, mut u: Option<&mut IntMatrix>) -> Vec<usize> {
    let rows = h.rows();
    let cols = h.cols();
    let mut pivots = Vec::new();
    let mut prow = 0;
    for col in 0..cols {
        if prow == rows {
            break;
        }
        let mut found = false;
        loop {
            let pick = (prow..rows)
                .filter(|&r| !h.get(r, col).is_zero())
                .min_by(|&a, &b| h.get(a, col).abs().cmp(&h.get(b, col).abs()));
            let Some(pick) = pick else { break };
            found = true;
            h.swap_rows(prow, pick);
            if let Some(u) = u.as_deref_mut() {
                u.swap_rows(prow, pick);
            }
            let mut clean = true;
            for r in prow + 1..rows {
                if h.get(r, col).is_zero() {
                    continue;
                }
                let q = h.get(r, col).div_floor(h.get(prow, col));
                h.row_axpy(r, &q, prow);
                if let Some(u) = u.as_deref_mut() {
                    u.row_axpy(r, &q, prow);
                }
                if !h.get(r, col).is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if !found {
            continue;
        }
        if h.get(prow, col).is_negative() {
            h.negate_row(prow);
            if let Some(u) = u.as_deref_mut() {
                u.negate_row(prow);
            }
        }
        let pivot = h.get(prow, col).clone();
        for r in 0..prow {
            let q = h.get(r, col).div_floor(&pivot);
            if !q.is_zero() {
                h.row_axpy(r, &q, prow);
                if let Some(u) = u.as_deref_mut() {
                    u.row_axpy(r, &q, prow);
                }
            }
        }
        pivots.push(col);
        prow += 1;
    }
    pivots
}

/// Output of [`snf_full`]: `D = U·A·V` together with `V⁻¹`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SmithForm {
    /// Diagonal entries `d_1 | d_2 | ...` (length `min(rows, cols)`).
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.get(i, i).clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

/// Smith normal form: returns `(D, U, V)` with `D = U·A·V` diagonal,
/// `d_1 | d_2 | ...`, all `d_i ≥ 0`.
pub fn snf(a: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let s = snf_full(a);
    (s.d, s.u, s.v)
}

pub fn snf_full(a: &IntMatrix) -> SmithForm {
    let m = a.rows();
    let n = a.cols();
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    let mut v_inv = IntMatrix::identity(n);

    // Column operations are mirrored on V (right) and V⁻¹ (left, inverted).
    let col_swap = |d: &mut IntMatrix, v: &mut IntMatrix, vi: &mut IntMatrix, a: usize, b: usize| {
        d.swap_cols(a, b);
        v.swap_cols(a, b);
        vi.swap_rows(a, b);
    };
    let col_op = |d: &mut IntMatrix, v: &mut IntMatrix, vi: &mut IntMatrix, t: usize, q: &BigInt, s: usize| {
        d.col_axpy(t, q, s);
        v.col_axpy(t, q, s);
        // inverse of (col t -= q col s) acting on the left is (row s += q row t)
        vi.row_axpy(s, &-q, t);
    };

    for t in 0..m.min(n) {
        let pick = (t..m)
            .flat_map(|i| (t..n).map(move |j| (i, j)))
            .filter(|&(i, j)| !d.get(i, j).is_zero())
            .min_by(|&(a, b), &(c, e)| d.get(a, b).abs().cmp(&d.get(c, e).abs()));
        let Some((pi, pj)) = pick else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        col_swap(&mut d, &mut v, &mut v_inv, t, pj);

        loop {
            let mut dirty = false;
            for r in t + 1..m {
                if d.get(r, t).is_zero() {
                    continue;
                }
                let q = d.get(r, t).div_floor(d.get(t, t));
                d.row_axpy(r, &q, t);
                u.row_axpy(r, &q, t);
                if !d.get(r, t).is_zero() {
                    dirty = true;
                }
            }
            for c in t + 1..n {
                if d.get(t, c).is_zero() {
                    continue;
                }
                let q = d.get(t, c).div_floor(d.get(t, t));
                col_op(&mut d, &mut v, &mut v_inv, c, &q, t);
                if !d.get(t, c).is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // bring the smallest remainder in row/column t to the pivot
                let mut best: Option<(usize, usize)> = None;
                let consider = |i: usize, j: usize, d: &IntMatrix, best: &mut Option<(usize, usize)>| {
                    if d.get(i, j).is_zero() {
                        return;
                    }
                    match best {
                        Some((bi, bj)) if d.get(*bi, *bj).abs() <= d.get(i, j).abs() => {}
                        _ => *best = Some((i, j)),
                    }
                };
                for r in t + 1..m {
                    consider(r, t, &d, &mut best);
                }
                for c in t + 1..n {
                    consider(t, c, &d, &mut best);
                }
                if let Some((bi, bj)) = best {
                    if d.get(bi, bj).abs() < d.get(t, t).abs() {
                        if bi != t {
                            d.swap_rows(t, bi);
                            u.swap_rows(t, bi);
                        } else {
                            col_swap(&mut d, &mut v, &mut v_inv, t, bj);
                        }
                    }
                }
                continue;
            }
            // pivot must divide the remaining block
            let pivot = d.get(t, t).clone();
            let bad = (t + 1..m).find(|&r| (t + 1..n).any(|c| !d.get(r, c).is_multiple_of(&pivot)));
            match bad {
                Some(r) => {
                    d.row_axpy(t, &BigInt::from(-1), r);
                    u.row_axpy(t, &BigInt::from(-1), r);
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithForm { d, u, v, v_inv }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_row_hnf(h: &IntMatrix) -> bool {
        let mut last_pivot: Option<usize> = None;
        let mut seen_zero = false;
        for i in 0..h.rows() {
            let p = (0..h.cols()).find(|&j| !h.get(i, j).is_zero());
            match p {
                None => seen_zero = true,
                Some(j) => {
                    if seen_zero || last_pivot.is_some_and(|lp| j <= lp) {
                        return false;
                    }
                    let piv = h.get(i, j);
                    if !piv.is_positive() {
                        return false;
                    }
                    for r in 0..i {
                        let e = h.get(r, j);
                        if e.is_negative() || e >= piv {
                            return false;
                        }
                    }
                    last_pivot = Some(j);
                }
            }
        }
        true
    }

    #[test]
    fn hnf_identity_and_zero() {
        let i2 = IntMatrix::identity(2);
        let (h, u) = hnf(&i2);
        assert_eq!(h, i2);
        assert_eq!(u, i2);
        let z = IntMatrix::zeros(2, 3);
        let (h, u) = hnf(&z);
        assert_eq!(h, z);
        assert_eq!(u, IntMatrix::identity(2));
    }

    #[test]
    fn hnf_small_example() {
        let a = IntMatrix::from_i64(&[&[2, 4], &[6, 8]]);
        let (h, u) = hnf(&a);
        assert_eq!(u.mul(&a), h);
        assert!(is_row_hnf(&h));
        assert_eq!(u.determinant().abs(), BigInt::from(1));
        // row lattice of [[2,4],[6,8]] has HNF basis (2,0), (0,4)
        assert_eq!(h, IntMatrix::from_i64(&[&[2, 0], &[0, 4]]));
    }

    #[test]
    fn snf_examples() {
        let (d, _, _) = snf(&IntMatrix::identity(3));
        assert_eq!(d, IntMatrix::identity(3));
        let (d, _, _) = snf(&IntMatrix::from_i64(&[&[6]]));
        assert_eq!(d, IntMatrix::from_i64(&[&[6]]));
        let a = IntMatrix::from_i64(&[&[2, 4], &[6, 8]]);
        let s = snf_full(&a);
        assert_eq!(s.d, IntMatrix::from_i64(&[&[2, 0], &[0, 4]]));
        assert_eq!(s.u.mul(&a).mul(&s.v), s.d);
        assert_eq!(s.v.mul(&s.v_inv), IntMatrix::identity(2));
    }

    #[test]
    fn snf_rectangular() {
        let a = IntMatrix::from_i64(&[&[4, 6, 0], &[0, 0, 10]]);
        let s = snf_full(&a);
        assert_eq!(s.u.mul(&a).mul(&s.v), s.d);
        assert_eq!(s.diagonal(), vec![BigInt::from(2), BigInt::from(10)]);
        assert_eq!(s.v.mul(&s.v_inv), IntMatrix::identity(3));
    }
}
