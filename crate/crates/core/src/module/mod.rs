//! Finitely generated modules over finite rings.

mod derived;
mod functors;
mod raw;
mod sub;

pub use derived::{homology_at, FreeResolution, RingMatrix};
pub use sub::{Subquotient, SubmoduleModule, QuotientModule};

pub(crate) use raw::Realized;

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{DirectSum, FinAbGroup, GroupElement, GroupHom, IntMatrix, Subgroup};
use crate::ring::{FiniteRing, RingElement};

/// A module: a finite abelian group with one action matrix per ring basis element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FgModule {
    ring: Arc<FiniteRing>,
    group: FinAbGroup,
    /// `actions[i]` is the action of `e_i`; columns are images of the group generators.
    actions: Vec<IntMatrix>,
}

/// A submodule, stored as the canonical basis of its additive span.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Submodule {
    span: Subgroup,
}

impl Submodule {
    pub fn span(&self) -> &Subgroup {
        &self.span
    }

    pub fn contains(&self, m: &[BigInt]) -> bool {
        self.span.contains(m)
    }

    pub fn is_subset_of(&self, other: &Submodule) -> bool {
        self.span.is_subset_of(&other.span)
    }
}

/// An `R`-linear map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleHom {
    source: FgModule,
    target: FgModule,
    map: GroupHom,
}

/// Invariants preserved by module isomorphisms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModuleSignature {
    #[serde(with = "crate::serde_int::vec")]
    pub factors: Vec<BigInt>,
    /// For each ring basis element: invariant factors of the kernel and of the image of its action.
    #[serde(with = "crate::serde_int::pair_vec")]
    pub actions: Vec<(Vec<BigInt>, Vec<BigInt>)>,
}

/// `M_1 ⊕ ... ⊕ M_t` with block coordinates.
#[derive(Clone, Debug)]
pub struct ModuleSum {
    pub module: FgModule,
    pub sum: DirectSum,
}

impl ModuleSum {
    pub fn inject(&self, k: usize, x: &[BigInt]) -> GroupElement {
        self.sum.inject(k, x)
    }

    pub fn component(&self, v: &[BigInt], k: usize) -> GroupElement {
        self.sum.component(v, k)
    }

    /// The hom between two sums given by a block matrix in block coordinates.
    pub fn hom_from_blocks(source: &ModuleSum, target: &ModuleSum, block: &IntMatrix) -> ModuleHom {
        let map = DirectSum::hom_from_blocks(&source.sum, &target.sum, block);
        ModuleHom::new_unchecked(source.module.clone(), target.module.clone(), map)
    }
}

impl FgModule {
    pub fn new(ring: Arc<FiniteRing>, group: FinAbGroup, actions: Vec<IntMatrix>) -> Result<Self> {
        if actions.len() != ring.rank()
            || actions
                .iter()
                .any(|a| a.rows() != group.rank() || a.cols() != group.rank())
        {
            return Err(Error::DimensionMismatch(format!(
                "need {} square action matrices of size {}",
                ring.rank(),
                group.rank()
            )));
        }
        let mut actions = actions;
        for a in actions.iter_mut() {
            a.reduce_rows_mod(group.factors());
        }
        let m = FgModule {
            ring,
            group,
            actions,
        };
        let failures = m.check_axioms();
        if let Some(first) = failures.first() {
            return Err(Error::AxiomViolation(first.clone()));
        }
        Ok(m)
    }

    pub(crate) fn new_unchecked(ring: Arc<FiniteRing>, group: FinAbGroup, actions: Vec<IntMatrix>) -> Self {
        let m = FgModule {
            ring,
            group,
            actions,
        };
        debug_assert!(m.check_axioms().is_empty(), "{:?}", m.check_axioms());
        m
    }

    /// `R` as a module over itself.
    pub fn ring_module(ring: &Arc<FiniteRing>) -> Self {
        let actions = (0..ring.rank()).map(|i| ring.basis_action(i).clone()).collect();
        FgModule {
            ring: ring.clone(),
            group: ring.group().clone(),
            actions,
        }
    }

    pub fn zero(ring: &Arc<FiniteRing>) -> Self {
        FgModule {
            ring: ring.clone(),
            group: FinAbGroup::trivial(),
            actions: vec![IntMatrix::zeros(0, 0); ring.rank()],
        }
    }

    /// `R^s`.
    pub fn free(ring: &Arc<FiniteRing>, s: usize) -> ModuleSum {
        FgModule::direct_sum(&vec![FgModule::ring_module(ring); s], ring)
    }

    pub fn direct_sum(parts: &[FgModule], ring: &Arc<FiniteRing>) -> ModuleSum {
        let groups: Vec<FinAbGroup> = parts.iter().map(|m| m.group.clone()).collect();
        let sum = FinAbGroup::direct_sum(&groups);
        let n = sum.block_dim();
        let actions = (0..ring.rank())
            .map(|i| {
                let mut block = IntMatrix::zeros(n, n);
                for (k, m) in parts.iter().enumerate() {
                    let r = sum.block_range(k);
                    for (a, row) in r.clone().enumerate() {
                        for (b, col) in r.clone().enumerate() {
                            block.set(row, col, m.actions[i].get(a, b).clone());
                        }
                    }
                }
                DirectSum::hom_from_blocks(&sum, &sum, &block).matrix().clone()
            })
            .collect();
        ModuleSum {
            module: FgModule::new_unchecked(ring.clone(), sum.group.clone(), actions),
            sum,
        }
    }

    // ---- accessors ---------------------------------------------------------

    pub fn ring(&self) -> &Arc<FiniteRing> {
        &self.ring
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn order(&self) -> BigInt {
        self.group.order()
    }

    pub fn is_zero_module(&self) -> bool {
        self.group.is_trivial()
    }

    pub fn basis_action(&self, i: usize) -> &IntMatrix {
        &self.actions[i]
    }

    pub fn actions(&self) -> &[IntMatrix] {
        &self.actions
    }

    pub fn zero_element(&self) -> GroupElement {
        self.group.zero()
    }

    pub fn elements(&self) -> Vec<GroupElement> {
        self.group.elements()
    }

    // ---- action ------------------------------------------------------------

    /// Matrix of the action of `r`.
    pub fn action_matrix(&self, r: &[BigInt]) -> IntMatrix {
        let n = self.group.rank();
        let mut m = IntMatrix::zeros(n, n);
        for (i, c) in r.iter().enumerate() {
            if !c.is_zero() {
                m = m.add(&self.actions[i].scale(c));
            }
        }
        m.reduce_rows_mod(self.group.factors());
        m
    }

    pub fn action_hom(&self, r: &[BigInt]) -> GroupHom {
        GroupHom::new_reduced(self.group.clone(), self.group.clone(), self.action_matrix(r))
    }

    /// The action of `r` as an endomorphism of modules.
    pub fn scalar_endo(&self, r: &[BigInt]) -> ModuleHom {
        ModuleHom::new_unchecked(self.clone(), self.clone(), self.action_hom(r))
    }

    pub fn act(&self, r: &[BigInt], m: &[BigInt]) -> GroupElement {
        self.group.reduce(&self.action_matrix(r).mul_vec(m))
    }

    /// Unit law and compatibility with the structure constants.
    pub fn check_axioms(&self) -> Vec<String> {
        let mut out = Vec::new();
        let g = &self.group;
        for (i, a) in self.actions.iter().enumerate() {
            let h = GroupHom::new_reduced(g.clone(), g.clone(), a.clone());
            if !h.is_well_defined() {
                out.push(format!("action of e{i} is not well defined"));
            }
        }
        if self.action_matrix(&self.ring.one()) != IntMatrix::identity(g.rank()) {
            out.push("unit does not act as the identity".into());
        }
        for i in 0..self.ring.rank() {
            for j in i..self.ring.rank() {
                let mut lhs = self.actions[i].mul(&self.actions[j]);
                lhs.reduce_rows_mod(g.factors());
                let rhs = self.action_matrix(&self.ring.basis_action(i).column(j));
                if lhs != rhs {
                    out.push(format!("action of e{i}*e{j} is not the composite of actions"));
                }
            }
        }
        out
    }

    // ---- submodules --------------------------------------------------------

    pub fn whole(&self) -> Submodule {
        Submodule {
            span: self.group.whole(),
        }
    }

    pub fn zero_submodule(&self) -> Submodule {
        Submodule {
            span: self.group.zero_subgroup(),
        }
    }

    pub(crate) fn submodule_from_span(&self, span: Subgroup) -> Submodule {
        Submodule { span }
    }

    pub fn submodule_order(&self, n: &Submodule) -> BigInt {
        self.group.subgroup_order(&n.span)
    }

    pub fn submodule_sum(&self, a: &Submodule, b: &Submodule) -> Submodule {
        Submodule {
            span: self.group.sum(&a.span, &b.span),
        }
    }

    pub fn submodule_intersection(&self, a: &Submodule, b: &Submodule) -> Submodule {
        Submodule {
            span: self.group.intersect(&a.span, &b.span),
        }
    }

    /// Nonzero additive generators.
    pub fn submodule_generators(&self, n: &Submodule) -> Vec<GroupElement> {
        n.span.generators(&self.group)
    }

    pub fn is_closed(&self, n: &Submodule) -> bool {
        let gens = self.submodule_generators(n);
        self.actions
            .iter()
            .all(|a| gens.iter().all(|g| n.contains(&a.mul_vec(g))))
    }

    // ---- invariants --------------------------------------------------------

    pub fn signature(&self) -> ModuleSignature {
        let g = &self.group;
        let actions = (0..self.ring.rank())
            .map(|i| {
                let h = self.action_hom(&self.ring.basis_element(i));
                let k = g.present_subgroup(&h.kernel()).group.factors().to_vec();
                let im = g.present_subgroup(&h.image()).group.factors().to_vec();
                (k, im)
            })
            .collect();
        ModuleSignature {
            factors: g.factors().to_vec(),
            actions,
        }
    }

    /// Whether `x` acts injectively.
    pub fn is_regular_element(&self, x: &RingElement) -> bool {
        self.action_hom(x).is_injective()
    }
}

impl ModuleHom {
    pub fn new(source: FgModule, target: FgModule, map: GroupHom) -> Result<Self> {
        if map.source() != source.group() || map.target() != target.group() {
            return Err(Error::DimensionMismatch("hom groups differ from module groups".into()));
        }
        let h = ModuleHom { source, target, map };
        if !h.is_equivariant() {
            return Err(Error::DimensionMismatch("map does not commute with the ring action".into()));
        }
        Ok(h)
    }

    pub(crate) fn new_unchecked(source: FgModule, target: FgModule, map: GroupHom) -> Self {
        ModuleHom { source, target, map }
    }

    pub fn from_matrix(source: &FgModule, target: &FgModule, matrix: IntMatrix) -> Result<Self> {
        let map = GroupHom::new(source.group.clone(), target.group.clone(), matrix)?;
        ModuleHom::new(source.clone(), target.clone(), map)
    }

    pub fn identity(m: &FgModule) -> Self {
        ModuleHom::new_unchecked(m.clone(), m.clone(), GroupHom::identity(&m.group))
    }

    pub fn zero(source: &FgModule, target: &FgModule) -> Self {
        ModuleHom::new_unchecked(source.clone(), target.clone(), GroupHom::zero(&source.group, &target.group))
    }

    pub fn source(&self) -> &FgModule {
        &self.source
    }

    pub fn target(&self) -> &FgModule {
        &self.target
    }

    pub fn map(&self) -> &GroupHom {
        &self.map
    }

    pub fn matrix(&self) -> &IntMatrix {
        self.map.matrix()
    }

    pub fn is_equivariant(&self) -> bool {
        let f = self.map.matrix();
        (0..self.source.ring.rank()).all(|i| {
            let mut l = f.mul(&self.source.actions[i]);
            let mut r = self.target.actions[i].mul(f);
            l.reduce_rows_mod(self.target.group.factors());
            r.reduce_rows_mod(self.target.group.factors());
            l == r
        })
    }

    pub fn apply(&self, x: &[BigInt]) -> GroupElement {
        self.map.apply(x)
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &ModuleHom) -> ModuleHom {
        ModuleHom::new_unchecked(first.source.clone(), self.target.clone(), self.map.compose(&first.map))
    }

    pub fn add(&self, other: &ModuleHom) -> ModuleHom {
        ModuleHom::new_unchecked(self.source.clone(), self.target.clone(), self.map.add(&other.map))
    }

    pub fn sub(&self, other: &ModuleHom) -> ModuleHom {
        ModuleHom::new_unchecked(self.source.clone(), self.target.clone(), self.map.sub(&other.map))
    }

    pub fn kernel(&self) -> Submodule {
        Submodule {
            span: self.map.kernel(),
        }
    }

    pub fn image(&self) -> Submodule {
        Submodule {
            span: self.map.image(),
        }
    }

    pub fn image_of(&self, n: &Submodule) -> Submodule {
        Submodule {
            span: self.map.image_of(&n.span),
        }
    }

    pub fn preimage(&self, n: &Submodule) -> Submodule {
        Submodule {
            span: self.map.preimage(&n.span),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.map.is_zero()
    }

    pub fn is_injective(&self) -> bool {
        self.map.is_injective()
    }

    pub fn is_surjective(&self) -> bool {
        self.map.is_surjective()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.map.is_bijective()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn ring_module_and_free_modules() {
        let r = Arc::new(FiniteRing::zmod(6).unwrap());
        let m = FgModule::ring_module(&r);
        assert!(m.check_axioms().is_empty());
        let f = FgModule::free(&r, 2);
        assert_eq!(f.module.order(), BigInt::from(36));
        assert!(f.module.check_axioms().is_empty());
        let x = f.inject(1, &ints(&[5]));
        assert_eq!(f.component(&x, 1), ints(&[5]));
        assert_eq!(f.component(&x, 0), ints(&[0]));
    }

    #[test]
    fn direct_sum_over_product_ring() {
        let p = Arc::new(FiniteRing::product(&[FiniteRing::zmod(2).unwrap(), FiniteRing::zmod(4).unwrap()]));
        let s = FgModule::direct_sum(&[FgModule::ring_module(&p), FgModule::zero(&p), FgModule::ring_module(&p)], &p);
        assert_eq!(s.module.order(), BigInt::from(64));
        assert!(s.module.check_axioms().is_empty());
    }

    #[test]
    fn invalid_action_is_rejected() {
        let r = Arc::new(FiniteRing::zmod(4).unwrap());
        let bad = FgModule::new(r.clone(), FinAbGroup::cyclic(4), vec![IntMatrix::from_i64(&[&[2]])]);
        assert!(bad.is_err());
        let ok = FgModule::new(r, FinAbGroup::cyclic(2), vec![IntMatrix::from_i64(&[&[1]])]);
        assert!(ok.is_ok());
    }
}
