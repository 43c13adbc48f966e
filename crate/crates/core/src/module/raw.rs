//! Subquotients `S/T` of a diagonal group `⊕ Z/m_i` realized in invariant-factor form.

use std::sync::Arc;

use num_bigint::BigInt;

use super::FgModule;
use crate::linalg::{FinAbGroup, GroupElement, IntMatrix, Presentation, Quotient, SubgroupPresentation};
use crate::ring::FiniteRing;

#[derive(Clone, Debug)]
pub(crate) struct Realized {
    moduli: Vec<BigInt>,
    pres: Presentation,
    sub: SubgroupPresentation,
    quot: Quotient,
}

impl Realized {
    /// `sub_gens = None` means all of `⊕ Z/m_i`; `rel_gens` must lie in the span of `sub_gens`.
    pub fn new(moduli: &[BigInt], sub_gens: Option<&[Vec<BigInt>]>, rel_gens: &[Vec<BigInt>]) -> Self {
        let pres = Presentation::of_orders(moduli);
        let g0 = &pres.group;
        let to_g0 = |v: &[BigInt]| g0.reduce(&pres.projection.mul_vec(v));
        let s = match sub_gens {
            None => g0.whole(),
            Some(gens) => {
                let imgs: Vec<GroupElement> = gens.iter().map(|v| to_g0(v)).collect();
                g0.span(imgs.iter())
            }
        };
        let sub = g0.present_subgroup(&s);
        let rels: Vec<GroupElement> = rel_gens
            .iter()
            .map(|v| sub.coords(&to_g0(v)).expect("relations lie in the numerator"))
            .collect();
        let t = sub.group.span(rels.iter());
        let quot = sub.group.quotient(&t);
        Realized {
            moduli: moduli.to_vec(),
            pres,
            sub,
            quot,
        }
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.quot.group
    }

    /// A raw representative, reduced modulo the moduli.
    pub fn to_raw(&self, x: &[BigInt]) -> Vec<BigInt> {
        let s = self.quot.lift_element(x);
        let g0 = self.sub.embed(&s);
        let v = self.pres.lift.mul_vec(&g0);
        v.iter()
            .zip(&self.moduli)
            .map(|(a, m)| num_integer::Integer::mod_floor(a, m))
            .collect()
    }

    /// The class of a raw vector, or `None` when it lies outside the numerator.
    pub fn from_raw(&self, v: &[BigInt]) -> Option<GroupElement> {
        let g0 = self.pres.group.reduce(&self.pres.projection.mul_vec(v));
        let s = self.sub.coords(&g0)?;
        Some(self.quot.projection.apply(&s))
    }

    /// Matrix whose column `j` is a raw representative of generator `j`.
    pub fn to_raw_matrix(&self) -> IntMatrix {
        let cols: Vec<Vec<BigInt>> = (0..self.group().rank())
            .map(|j| self.to_raw(&self.group().generator(j)))
            .collect();
        IntMatrix::from_columns(self.moduli.len(), &cols)
    }

    /// The module whose ring basis element `i` acts on raw vectors by `act(i, v)`.
    pub fn module<F>(&self, ring: &Arc<FiniteRing>, act: F) -> FgModule
    where
        F: Fn(usize, &[BigInt]) -> Vec<BigInt>,
    {
        let g = self.group();
        let raws: Vec<Vec<BigInt>> = (0..g.rank()).map(|k| self.to_raw(&g.generator(k))).collect();
        let actions = (0..ring.rank())
            .map(|i| {
                let cols: Vec<GroupElement> = raws
                    .iter()
                    .map(|v| self.from_raw(&act(i, v)).expect("action preserves the numerator"))
                    .collect();
                IntMatrix::from_columns(g.rank(), &cols)
            })
            .collect();
        FgModule::new_unchecked(ring.clone(), g.clone(), actions)
    }

    /// Same as [`Realized::module`] with raw actions given as matrices.
    pub fn module_from_matrices(&self, ring: &Arc<FiniteRing>, raw_actions: &[IntMatrix]) -> FgModule {
        self.module(ring, |i, v| raw_actions[i].mul_vec(v))
    }
}
