//! Full-rank integer lattices that contain a diagonal lattice `diag(m)·Zⁿ`.
//!
//! Every subgroup of a finite abelian group `Zⁿ/diag(d)` lifts to such a
//! lattice, and so do the graph lattices used for kernels and preimages. The
//! diagonal part lets every coordinate be reduced modulo its modulus at any
//! point, so entries never exceed the moduli.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;

#[derive(Clone, Debug)]
pub(crate) struct ModLattice {
    moduli: Vec<BigInt>,
    /// `rows[j]` has its pivot at column `j` and zeros before it.
    rows: Vec<Vec<BigInt>>,
}

impl ModLattice {
    /// The diagonal lattice itself. All moduli must be positive.
    pub fn new(moduli: &[BigInt]) -> Self {
        let n = moduli.len();
        let rows = (0..n)
            .map(|j| {
                let mut r = vec![BigInt::zero(); n];
                r[j] = moduli[j].clone();
                r
            })
            .collect();
        ModLattice {
            moduli: moduli.to_vec(),
            rows,
        }
    }

    /// Starts from an upper-triangular basis whose lattice contains `diag(moduli)`.
    pub fn from_triangular(moduli: &[BigInt], basis: &IntMatrix) -> Self {
        debug_assert_eq!(basis.rows(), moduli.len());
        ModLattice {
            moduli: moduli.to_vec(),
            rows: basis.row_vecs(),
        }
    }

    pub fn dim(&self) -> usize {
        self.moduli.len()
    }

    fn reduce_entry(&self, v: &mut BigInt, col: usize) {
        if v.is_negative() || *v >= self.moduli[col] {
            *v = v.mod_floor(&self.moduli[col]);
        }
    }

    pub fn insert(&mut self, v: &[BigInt]) {
        let n = self.dim();
        debug_assert_eq!(v.len(), n);
        let mut v: Vec<BigInt> = v.to_vec();
        for (k, e) in v.iter_mut().enumerate() {
            self.reduce_entry(e, k);
        }
        for j in 0..n {
            if v[j].is_zero() {
                continue;
            }
            let pivot = self.rows[j][j].clone();
            if v[j].is_multiple_of(&pivot) {
                let q = &v[j] / &pivot;
                for k in j..n {
                    if !self.rows[j][k].is_zero() {
                        v[k] -= &q * &self.rows[j][k];
                    }
                }
            } else {
                let eg = pivot.extended_gcd(&v[j]);
                let (mut g, mut s, mut t) = (eg.gcd, eg.x, eg.y);
                if g.is_negative() {
                    g = -g;
                    s = -s;
                    t = -t;
                }
                let a = &pivot / &g;
                let b = &v[j] / &g;
                let mut new_row = vec![BigInt::zero(); n];
                let mut new_v = vec![BigInt::zero(); n];
                for k in j..n {
                    let r = &self.rows[j][k];
                    let x = &v[k];
                    new_row[k] = &s * r + &t * x;
                    new_v[k] = &a * x - &b * r;
                }
                debug_assert_eq!(new_row[j], g);
                debug_assert!(new_v[j].is_zero());
                for k in j + 1..n {
                    self.reduce_entry(&mut new_row[k], k);
                }
                self.rows[j] = new_row;
                v = new_v;
            }
            for k in j + 1..n {
                self.reduce_entry(&mut v[k], k);
            }
        }
    }

    /// Tries to write `v` as a lattice combination on the columns `0..upto`.
    /// Returns the residual vector (zero on `0..upto`) or `None` if some
    /// coordinate in that range cannot be cleared.
    pub fn clear_prefix(&self, v: &[BigInt], upto: usize) -> Option<Vec<BigInt>> {
        let n = self.dim();
        let mut v = v.to_vec();
        for j in 0..upto {
            self.reduce_entry(&mut v[j], j);
            if v[j].is_zero() {
                continue;
            }
            let pivot = &self.rows[j][j];
            if !v[j].is_multiple_of(pivot) {
                return None;
            }
            let q = &v[j] / pivot;
            for k in j..n {
                if !self.rows[j][k].is_zero() {
                    v[k] -= &q * &self.rows[j][k];
                }
            }
        }
        Some(v)
    }

    /// Canonical Hermite basis (square, upper triangular).
    pub fn into_hnf(mut self) -> IntMatrix {
        let n = self.dim();
        for k in 0..n {
            let pivot = self.rows[k][k].clone();
            debug_assert!(pivot.is_positive());
            for j in 0..k {
                let q = self.rows[j][k].div_floor(&pivot);
                if q.is_zero() {
                    continue;
                }
                let (upper, lower) = self.rows.split_at_mut(k);
                let src = &lower[0];
                for c in k..n {
                    if !src[c].is_zero() {
                        upper[j][c] -= &q * &src[c];
                    }
                }
            }
        }
        let mut m = IntMatrix::zeros(n, n);
        for (i, r) in self.rows.into_iter().enumerate() {
            for (j, v) in r.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }
}

/// Solves `w·L = v` for an upper-triangular full-rank `L`; `None` if `v ∉ rowspan(L)`.
pub(crate) fn solve_triangular(l: &IntMatrix, v: &[BigInt]) -> Option<Vec<BigInt>> {
    let n = l.rows();
    let mut rest = v.to_vec();
    let mut w = vec![BigInt::zero(); n];
    for j in 0..n {
        if rest[j].is_zero() {
            continue;
        }
        let pivot = l.get(j, j);
        if !rest[j].is_multiple_of(pivot) {
            return None;
        }
        let q = &rest[j] / pivot;
        for k in j..n {
            let e = l.get(j, k);
            if !e.is_zero() {
                rest[k] -= &q * e;
            }
        }
        w[j] = q;
    }
    Some(w)
}

/// Product of the diagonal of a triangular matrix.
pub(crate) fn triangular_det(l: &IntMatrix) -> BigInt {
    (0..l.rows()).fold(BigInt::one(), |acc, i| acc * l.get(i, i))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn span_inside_z8() {
        let mut l = ModLattice::new(&ints(&[8]));
        l.insert(&ints(&[6]));
        assert_eq!(l.into_hnf(), IntMatrix::from_i64(&[&[2]]));
    }

    #[test]
    fn span_two_dims() {
        let mut l = ModLattice::new(&ints(&[4, 4]));
        l.insert(&ints(&[2, 1]));
        let h = l.into_hnf();
        // lattice generated by (2,1), (4,0), (0,4) has index 4: basis (2,1),(0,2)
        assert_eq!(h, IntMatrix::from_i64(&[&[2, 1], &[0, 2]]));
        assert!(solve_triangular(&h, &ints(&[4, 2])).is_some());
        assert!(solve_triangular(&h, &ints(&[0, 1])).is_none());
    }
}
