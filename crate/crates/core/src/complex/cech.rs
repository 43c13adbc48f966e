//! The Čech complex `0 → M → ⊕ M_{x_i} → ⊕ M_{x_i x_j} → ...`.
//!
//! Over a finite ring `M_f ≅ e_f·M` with `e_f` the Fitting idempotent of `f`, and the
//! localization map is `m ↦ e_f·m`.

use super::{subsets, CochainComplex};
use crate::error::{Error, Result};
use crate::linalg::{GroupElement, IntMatrix};
use crate::module::{FgModule, ModuleSum, SubmoduleModule};
use crate::ring::RingElement;

#[derive(Clone, Debug)]
pub struct CechComplex {
    pub complex: CochainComplex,
    /// `M_{x_S}` for each subset `S`, grouped by size and listed lexicographically.
    pub localizations: Vec<Vec<SubmoduleModule>>,
    pub sums: Vec<ModuleSum>,
}

impl CechComplex {
    pub fn new(xs: &[RingElement], m: &FgModule) -> Result<Self> {
        if xs.is_empty() {
            return Err(Error::InvalidSpec("Čech complex needs a nonempty sequence".into()));
        }
        let ring = m.ring();
        let k = xs.len();
        let subs: Vec<Vec<Vec<usize>>> = (0..=k).map(|j| subsets(k, j)).collect();
        let idem = |s: &[usize]| -> RingElement {
            let f = ring.product_of(&s.iter().map(|&t| xs[t].clone()).collect::<Vec<_>>());
            ring.fitting_split(&f).idempotent
        };
        let idems: Vec<Vec<RingElement>> = subs.iter().map(|l| l.iter().map(|s| idem(s)).collect()).collect();
        let localizations: Vec<Vec<SubmoduleModule>> = idems
            .iter()
            .map(|l| l.iter().map(|e| m.submodule_as_module(&m.ideal_image_of(std::slice::from_ref(e)))).collect())
            .collect();
        let sums: Vec<ModuleSum> = localizations
            .iter()
            .map(|l| FgModule::direct_sum(&l.iter().map(|s| s.module.clone()).collect::<Vec<_>>(), ring))
            .collect();
        let mut diffs = Vec::with_capacity(k);
        for j in 0..k {
            let (src, tgt) = (&sums[j], &sums[j + 1]);
            let mut block = IntMatrix::zeros(tgt.sum.block_dim(), src.sum.block_dim());
            for (b, s) in subs[j].iter().enumerate() {
                let loc_s = &localizations[j][b];
                let cols = src.sum.block_range(b);
                for (a, t) in subs[j + 1].iter().enumerate() {
                    let Some(pos) = position_of_extra(s, t) else { continue };
                    let loc_t = &localizations[j + 1][a];
                    let rows = tgt.sum.block_range(a);
                    let g = loc_s.module.group();
                    for q in 0..g.rank() {
                        let x = loc_s.inclusion.apply(&g.generator(q));
                        let y = m.act(&idems[j + 1][a], &x);
                        let c: GroupElement = loc_t.coords(&y).expect("e_T·M_S lies in M_T");
                        for (p, v) in c.into_iter().enumerate() {
                            let v = if pos % 2 == 0 { v } else { -v };
                            block.set(rows.start + p, cols.start + q, v);
                        }
                    }
                }
            }
            diffs.push(ModuleSum::hom_from_blocks(src, tgt, &block));
        }
        let modules = sums.iter().map(|s| s.module.clone()).collect();
        Ok(CechComplex {
            complex: CochainComplex::new(modules, diffs)?,
            localizations,
            sums,
        })
    }
}

/// Position in `t` of its one element missing from `s`, when `t = s ∪ {u}`.
fn position_of_extra(s: &[usize], t: &[usize]) -> Option<usize> {
    if t.len() != s.len() + 1 {
        return None;
    }
    let mut extra = None;
    let mut i = 0;
    for (p, &u) in t.iter().enumerate() {
        if i < s.len() && s[i] == u {
            i += 1;
        } else if extra.is_none() {
            extra = Some(p);
        } else {
            return None;
        }
    }
    (i == s.len()).then_some(extra).flatten()
}

/// `Ȟ^i_x(M)`.
pub fn cech_cohomology(xs: &[RingElement], m: &FgModule, i: usize) -> Result<FgModule> {
    Ok(CechComplex::new(xs, m)?.complex.cohomology_module(i))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use num_bigint::BigInt;

    use super::*;
    use crate::ring::FiniteRing;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn zmod(m: u64) -> FgModule {
        FgModule::ring_module(&Arc::new(FiniteRing::zmod(m).unwrap()))
    }

    #[test]
    fn extra_positions() {
        assert_eq!(position_of_extra(&[], &[2]), Some(0));
        assert_eq!(position_of_extra(&[0, 2], &[0, 1, 2]), Some(1));
        assert_eq!(position_of_extra(&[1], &[0, 2]), None);
    }

    #[test]
    fn cech_examples() {
        let m = zmod(12);
        assert_eq!(cech_cohomology(&[ints(&[2])], &m, 0).unwrap().order(), BigInt::from(4));
        assert!(cech_cohomology(&[ints(&[2])], &m, 1).unwrap().is_zero_module());
        for i in 0..2 {
            assert!(cech_cohomology(&[ints(&[5])], &m, i).unwrap().is_zero_module());
        }
    }

    #[test]
    fn degree_zero_is_torsion() {
        let r = Arc::new(FiniteRing::zmod(72).unwrap());
        let m = FgModule::ring_module(&r);
        let xs = [ints(&[2]), ints(&[3])];
        let c = CechComplex::new(&xs, &m).unwrap();
        let h0 = c.complex.cohomology_module(0);
        let gamma = m.torsion_submodule(&r.ideal(&xs));
        assert_eq!(h0.order(), m.submodule_order(&gamma));
        for i in 1..=2 {
            assert!(c.complex.cohomology_module(i).is_zero_module());
        }
    }
}
