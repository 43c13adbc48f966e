//! Matlis duality, `Hom_R` and `⊗_R`.
//!
//! Hom and tensor are built on the `Z`-level objects
//! `Hom_Z(Z/d_j, Z/d'_k) ≅ Z/d_j ⊗ Z/d'_k ≅ Z/gcd(d_j, d'_k)`, indexed by pairs
//! `(j, k)`, and then cut down by equivariance or balancing.

use num_bigint::BigInt;
use num_integer::Integer;

use super::{FgModule, Realized};
use crate::linalg::{kernel_rows, IntMatrix};

/// Moduli `gcd(d_j, d'_k)` in the order `j·r' + k`.
fn pair_moduli(m: &FgModule, n: &FgModule) -> Vec<BigInt> {
    let d = m.group().factors();
    let e = n.group().factors();
    d.iter()
        .flat_map(|dj| e.iter().map(move |ek| dj.gcd(ek)))
        .collect()
}

impl FgModule {
    /// `Hom_Z(M, Q/Z)` with `(r·φ)(m) = φ(r·m)`, on the dual basis.
    pub fn matlis_dual(&self) -> FgModule {
        let d = self.group().factors();
        let r = d.len();
        let actions = self
            .actions()
            .iter()
            .map(|a| {
                let mut b = IntMatrix::zeros(r, r);
                for j in 0..r {
                    for k in 0..r {
                        let v = a.get(k, j) * &d[j] / &d[k];
                        b.set(j, k, v.mod_floor(&d[j]));
                    }
                }
                b
            })
            .collect();
        FgModule::new_unchecked(self.ring().clone(), self.group().clone(), actions)
    }

    /// `Hom_R(self, n)`.
    pub fn hom_module(&self, n: &FgModule) -> FgModule {
        let r = self.group().rank();
        let rp = n.group().rank();
        let g = pair_moduli(self, n);
        let e = n.group().factors();
        // Φ[k][j] = c_{jk}·e_k/g_{jk}
        let to_matrix = |c: &[BigInt]| {
            let mut phi = IntMatrix::zeros(rp, r);
            for j in 0..r {
                for k in 0..rp {
                    let idx = j * rp + k;
                    phi.set(k, j, &c[idx] * (&e[k] / &g[idx]));
                }
            }
            phi
        };
        let from_matrix = |phi: &IntMatrix| -> Vec<BigInt> {
            let mut c = vec![BigInt::from(0); r * rp];
            for j in 0..r {
                for k in 0..rp {
                    let idx = j * rp + k;
                    let v = phi.get(k, j).mod_floor(&e[k]);
                    c[idx] = (v / (&e[k] / &g[idx])).mod_floor(&g[idx]);
                }
            }
            c
        };
        let nr = self.ring().rank();
        // equivariance defect Φ·A_i − B_i·Φ, flattened as (i, k, j)
        let tgt: Vec<BigInt> = (0..nr)
            .flat_map(|_| (0..rp).flat_map(move |k| (0..r).map(move |_| e[k].clone())))
            .collect();
        let rows: Vec<Vec<BigInt>> = (0..r * rp)
            .map(|idx| {
                let mut c = vec![BigInt::from(0); r * rp];
                c[idx] = BigInt::from(1);
                let phi = to_matrix(&c);
                let mut out = Vec::with_capacity(tgt.len());
                for i in 0..nr {
                    let defect = phi.mul(self.basis_action(i)).sub(&n.basis_action(i).mul(&phi));
                    for k in 0..rp {
                        for j in 0..r {
                            out.push(defect.get(k, j).clone());
                        }
                    }
                }
                out
            })
            .collect();
        let images = IntMatrix::from_rows(tgt.len(), &rows);
        let ker = kernel_rows(&images, &g, &tgt);
        let gens = ker.row_vecs();
        let real = Realized::new(&g, Some(&gens), &[]);
        real.module(self.ring(), |i, c| from_matrix(&n.basis_action(i).mul(&to_matrix(c))))
    }

    /// `self ⊗_R n`.
    pub fn tensor_module(&self, n: &FgModule) -> FgModule {
        let r = self.group().rank();
        let rp = n.group().rank();
        let g = pair_moduli(self, n);
        let nr = self.ring().rank();
        let mut rels = Vec::with_capacity(nr * r * rp);
        for i in 0..nr {
            let a = self.basis_action(i);
            let b = n.basis_action(i);
            for j in 0..r {
                for k in 0..rp {
                    // (e_i m_j) ⊗ n_k − m_j ⊗ (e_i n_k)
                    let mut v = vec![BigInt::from(0); r * rp];
                    for l in 0..r {
                        v[l * rp + k] += a.get(l, j);
                    }
                    for l in 0..rp {
                        v[j * rp + l] -= b.get(l, k);
                    }
                    rels.push(v);
                }
            }
        }
        let real = Realized::new(&g, None, &rels);
        real.module(self.ring(), |i, c| {
            let a = self.basis_action(i);
            let mut out = vec![BigInt::from(0); r * rp];
            for j in 0..r {
                for k in 0..rp {
                    let cjk = &c[j * rp + k];
                    if cjk.sign() == num_bigint::Sign::NoSign {
                        continue;
                    }
                    for l in 0..r {
                        out[l * rp + k] += cjk * a.get(l, j);
                    }
                }
            }
            out
        })
    }
}
