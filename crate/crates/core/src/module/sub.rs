//! Submodule constructions and the modules they induce.

use std::sync::Arc;

use num_bigint::BigInt;

use super::{FgModule, ModuleHom, Realized, Submodule};
use crate::linalg::{GroupElement, GroupHom, IntMatrix};
use crate::ring::{FiniteRing, Ideal, RingElement};

/// `M/N` with its projection.
#[derive(Clone, Debug)]
pub struct QuotientModule {
    pub module: FgModule,
    pub projection: ModuleHom,
    lift: IntMatrix,
}

impl QuotientModule {
    /// A preimage in `M` of a class in `M/N`.
    pub fn lift(&self, x: &[BigInt]) -> GroupElement {
        self.projection.source().group().reduce(&self.lift.mul_vec(x))
    }
}

/// `N ⊆ M` as a module in its own right.
#[derive(Clone, Debug)]
pub struct SubmoduleModule {
    pub module: FgModule,
    pub inclusion: ModuleHom,
    real: Realized,
}

impl SubmoduleModule {
    /// Coordinates of an element of `M` lying in `N`.
    pub fn coords(&self, m: &[BigInt]) -> Option<GroupElement> {
        self.real.from_raw(m)
    }
}

/// `N/N'` for submodules `N' ⊆ N ⊆ M`.
#[derive(Clone, Debug)]
pub struct Subquotient {
    pub module: FgModule,
    real: Realized,
}

impl Subquotient {
    /// Class of an element of `N`.
    pub fn class_of(&self, m: &[BigInt]) -> Option<GroupElement> {
        self.real.from_raw(m)
    }

    /// A representative in `M` of a class.
    pub fn representative(&self, x: &[BigInt]) -> GroupElement {
        self.real.to_raw(x)
    }
}

impl FgModule {
    /// The submodule generated by `gens`.
    pub fn generated_submodule(&self, gens: &[GroupElement]) -> Submodule {
        let mut add_gens = Vec::with_capacity(gens.len() * self.actions().len());
        for g in gens {
            for a in self.actions() {
                add_gens.push(a.mul_vec(g));
            }
        }
        self.submodule_from_span(self.group().span(add_gens.iter()))
    }

    /// `r_1·M + ... + r_j·M`.
    pub fn ideal_image_of(&self, rs: &[RingElement]) -> Submodule {
        let mut cols = Vec::new();
        for r in rs {
            cols.extend(self.action_matrix(r).column_vecs());
        }
        self.submodule_from_span(self.group().span(cols.iter()))
    }

    /// `(x_1^{m_1}, ..., x_j^{m_j})·M`.
    pub fn power_image(&self, xs: &[RingElement], exps: &[u64]) -> Submodule {
        let ring = self.ring();
        let rs: Vec<RingElement> = xs.iter().zip(exps).map(|(x, &m)| ring.pow(x, m)).collect();
        self.ideal_image_of(&rs)
    }

    /// `I·M`.
    pub fn ideal_image(&self, ideal: &Ideal) -> Submodule {
        self.ideal_image_of(&self.ring().ideal_generators(ideal))
    }

    /// `Iⁿ·M`.
    pub fn ideal_power_image(&self, ideal: &Ideal, n: usize) -> Submodule {
        self.ideal_image(&self.ring().ideal_power(ideal, n))
    }

    /// `N :_M x^e`.
    pub fn colon(&self, n: &Submodule, x: &[BigInt], e: u64) -> Submodule {
        let xe = self.ring().pow(x, e);
        self.colon_by(n, &xe)
    }

    /// `N :_M r`.
    pub fn colon_by(&self, n: &Submodule, r: &[BigInt]) -> Submodule {
        self.submodule_from_span(self.action_hom(r).preimage(n.span()))
    }

    /// `N :_M I`.
    pub fn colon_ideal(&self, n: &Submodule, ideal: &Ideal) -> Submodule {
        let gens = self.ring().ideal_generators(ideal);
        gens.iter()
            .fold(self.whole(), |acc, g| self.submodule_intersection(&acc, &self.colon_by(n, g)))
    }

    /// `0 :_M r`.
    pub fn annihilator_of(&self, r: &[BigInt]) -> Submodule {
        self.submodule_from_span(self.action_hom(r).kernel())
    }

    /// `Γ_I(M) = 0 :_M e` where `I^c = e·R` is the stable power.
    pub fn torsion_submodule(&self, ideal: &Ideal) -> Submodule {
        let e = self.ring().ideal_stabilization(ideal).idempotent;
        self.annihilator_of(&e)
    }

    /// `Γ_I(M)` as the union of the ascending chain `0 :_M Iⁿ`.
    pub fn torsion_by_ascent(&self, ideal: &Ideal) -> Submodule {
        let mut cur = self.zero_submodule();
        loop {
            let next = self.colon_ideal(&cur, ideal);
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }

    /// Whether `x·M = M`.
    pub fn is_divisible(&self, x: &[BigInt]) -> bool {
        self.action_hom(x).is_surjective()
    }

    // ---- induced modules ---------------------------------------------------

    pub fn quotient(&self, n: &Submodule) -> QuotientModule {
        let q = self.group().quotient(n.span());
        let proj = &q.projection;
        let lift = &q.lift;
        let actions = self
            .actions()
            .iter()
            .map(|a| {
                let mut m = proj.matrix().mul(a).mul(lift);
                m.reduce_rows_mod(q.group.factors());
                m
            })
            .collect();
        let module = FgModule::new_unchecked(self.ring().clone(), q.group.clone(), actions);
        QuotientModule {
            projection: ModuleHom::new_unchecked(self.clone(), module.clone(), q.projection.clone()),
            module,
            lift: q.lift,
        }
    }

    pub fn submodule_as_module(&self, n: &Submodule) -> SubmoduleModule {
        let gens = self.submodule_generators(n);
        let real = Realized::new(self.group().factors(), Some(&gens), &[]);
        let module = real.module_from_matrices(self.ring(), self.actions());
        let incl = GroupHom::new_reduced(module.group().clone(), self.group().clone(), real.to_raw_matrix());
        SubmoduleModule {
            inclusion: ModuleHom::new_unchecked(module.clone(), self.clone(), incl),
            module,
            real,
        }
    }

    /// `num/den`; requires `den ⊆ num`.
    pub fn subquotient(&self, num: &Submodule, den: &Submodule) -> Subquotient {
        debug_assert!(den.is_subset_of(num));
        let gens = self.submodule_generators(num);
        let rels = self.submodule_generators(den);
        let real = Realized::new(self.group().factors(), Some(&gens), &rels);
        let module = real.module_from_matrices(self.ring(), self.actions());
        Subquotient { module, real }
    }

    /// `M/I^c·M`, the `I`-adic completion, with its projection.
    pub fn adic_completion(&self, ideal: &Ideal) -> QuotientModule {
        let e = self.ring().ideal_stabilization(ideal).idempotent;
        self.quotient(&self.ideal_image_of(&[e]))
    }

    /// `R/I` as an `R`-module.
    pub fn cyclic(ring: &Arc<FiniteRing>, ideal: &Ideal) -> FgModule {
        let r = FgModule::ring_module(ring);
        let n = r.ideal_image(ideal);
        r.quotient(&n).module
    }
}
