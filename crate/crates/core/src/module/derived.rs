//! Free resolutions, `Tor`, `Ext`, local cohomology and localization of modules.

use std::sync::Arc;

use super::{FgModule, ModuleHom, ModuleSum, Realized, Submodule, Subquotient};
use crate::linalg::{GroupElement, GroupHom, IntMatrix};
use crate::ring::{FiniteRing, Ideal, Localization, RingElement};

/// A matrix of ring elements, acting on column vectors of module elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<RingElement>,
}

impl RingMatrix {
    pub fn zeros(ring: &FiniteRing, rows: usize, cols: usize) -> Self {
        RingMatrix {
            rows,
            cols,
            entries: vec![ring.zero(); rows * cols],
        }
    }

    pub fn from_columns(ring: &FiniteRing, rows: usize, cols: &[Vec<RingElement>]) -> Self {
        let mut m = RingMatrix::zeros(ring, rows, cols.len());
        for (b, col) in cols.iter().enumerate() {
            for (a, e) in col.iter().enumerate() {
                m.set(a, b, e.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, a: usize, b: usize) -> &RingElement {
        &self.entries[a * self.cols + b]
    }

    pub fn set(&mut self, a: usize, b: usize, v: RingElement) {
        self.entries[a * self.cols + b] = v;
    }

    pub fn transpose(&self) -> RingMatrix {
        let mut t = RingMatrix {
            rows: self.cols,
            cols: self.rows,
            entries: self.entries.clone(),
        };
        for a in 0..self.rows {
            for b in 0..self.cols {
                t.set(b, a, self.get(a, b).clone());
            }
        }
        t
    }

    /// The induced map `N^{cols} → N^{rows}` on the given sums.
    pub fn on_sums(&self, source: &ModuleSum, target: &ModuleSum, n: &FgModule) -> ModuleHom {
        let rn = n.group().rank();
        let mut block = IntMatrix::zeros(self.rows * rn, self.cols * rn);
        for a in 0..self.rows {
            for b in 0..self.cols {
                let act = n.action_matrix(self.get(a, b));
                for p in 0..rn {
                    for q in 0..rn {
                        block.set(a * rn + p, b * rn + q, act.get(p, q).clone());
                    }
                }
            }
        }
        ModuleSum::hom_from_blocks(source, target, &block)
    }
}

/// `0 ← M ← F_0 ← F_1 ← ... ← F_L` with `F_i = R^{ranks[i]}`.
#[derive(Clone, Debug)]
pub struct FreeResolution {
    pub ranks: Vec<usize>,
    /// `differentials[i-1]` is `d_i : F_i → F_{i-1}` as a `ranks[i-1] × ranks[i]` matrix.
    pub differentials: Vec<RingMatrix>,
    /// Images in `M` of the basis of `F_0`.
    pub generators: Vec<GroupElement>,
}

/// `ker(out) / im(incoming)` for composable maps with `out ∘ incoming = 0`.
pub fn homology_at(incoming: &ModuleHom, out: &ModuleHom) -> Subquotient {
    let x = out.source();
    x.subquotient(&out.kernel(), &incoming.image())
}

impl FgModule {
    /// A small generating set of `K ⊆ self`, chosen greedily from its additive generators.
    pub fn greedy_generators(&self, k: &Submodule) -> Vec<GroupElement> {
        let mut chosen = Vec::new();
        let mut cur = self.zero_submodule();
        for g in self.submodule_generators(k) {
            if cur.contains(&g) {
                continue;
            }
            chosen.push(g);
            cur = self.generated_submodule(&chosen);
            if cur == *k {
                break;
            }
        }
        chosen
    }

    /// The map `R^s → self` sending basis vector `b` to `images[b]`.
    pub fn free_map(&self, free: &ModuleSum, images: &[GroupElement]) -> ModuleHom {
        let ring = self.ring();
        let r = ring.rank();
        let cols: Vec<GroupElement> = images
            .iter()
            .flat_map(|g| (0..r).map(move |i| self.basis_action(i).mul_vec(g)))
            .collect();
        let block = IntMatrix::from_columns(self.group().rank(), &cols);
        let m = block.mul(free.sum.from_sum_matrix());
        ModuleHom::new_unchecked(
            free.module.clone(),
            self.clone(),
            GroupHom::new_reduced(free.module.group().clone(), self.group().clone(), m),
        )
    }

    pub fn free_resolution(&self, length: usize) -> FreeResolution {
        let ring = self.ring();
        let gens = self.greedy_generators(&self.whole());
        let mut ranks = vec![gens.len()];
        let mut differentials = Vec::new();
        let mut free = FgModule::free(ring, gens.len());
        let mut map = self.free_map(&free, &gens);
        for _ in 0..length {
            let k = map.kernel();
            let kgens = free.module.greedy_generators(&k);
            let cols: Vec<Vec<RingElement>> = kgens
                .iter()
                .map(|v| {
                    let blocks = free.sum.split(v);
                    blocks.chunks(ring.rank().max(1)).map(|c| c.to_vec()).take(free.sum.parts.len()).collect()
                })
                .collect();
            let cols = if ring.rank() == 0 {
                vec![vec![vec![]; free.sum.parts.len()]; kgens.len()]
            } else {
                cols
            };
            differentials.push(RingMatrix::from_columns(ring, free.sum.parts.len(), &cols));
            let next = FgModule::free(ring, kgens.len());
            map = free.module.free_map(&next, &kgens);
            ranks.push(kgens.len());
            free = next;
        }
        FreeResolution {
            ranks,
            differentials,
            generators: gens,
        }
    }

    /// `Tor_i^R(self, n)` from a resolution of `self`.
    pub fn tor(&self, n: &FgModule, i: usize) -> FgModule {
        let res = self.free_resolution(i + 1);
        res.tor_with(n, i)
    }

    /// `Ext^i_R(self, n)` from a resolution of `self`.
    pub fn ext(&self, n: &FgModule, i: usize) -> FgModule {
        let res = self.free_resolution(i + 1);
        res.ext_with(n, i)
    }

    /// `H^i_I(self) = Ext^i(R/I^c, self)` with `I^c` the stable power.
    pub fn local_cohomology(&self, ideal: &Ideal, i: usize) -> FgModule {
        let ring = self.ring();
        let e = ring.ideal_stabilization(ideal).idempotent;
        let quotient = FgModule::cyclic(ring, &ring.ideal(&[e]));
        quotient.ext(self, i)
    }

    /// `self_f = e·self` over `R_f`, with the map `m ↦ e·m`.
    pub fn localize(&self, loc: &Localization) -> (FgModule, GroupHom) {
        let e = &loc.idempotent;
        let em = self.ideal_image_of(std::slice::from_ref(e));
        let gens = self.submodule_generators(&em);
        let real = Realized::new(self.group().factors(), Some(&gens), &[]);
        let lring = Arc::new(loc.ring.clone());
        let acts: Vec<IntMatrix> = (0..lring.rank())
            .map(|k| self.action_matrix(&loc.embed(&lring.basis_element(k))))
            .collect();
        let module = real.module_from_matrices(&lring, &acts);
        let ea = self.action_matrix(e);
        let cols: Vec<GroupElement> = (0..self.group().rank())
            .map(|j| real.from_raw(&ea.column(j)).expect("e·m lies in e·M"))
            .collect();
        let map = GroupHom::new_reduced(
            self.group().clone(),
            module.group().clone(),
            IntMatrix::from_columns(module.group().rank(), &cols),
        );
        (module, map)
    }
}

impl FreeResolution {
    fn free_sums(&self, ring: &Arc<FiniteRing>, n: &FgModule, upto: usize) -> Vec<ModuleSum> {
        (0..=upto)
            .map(|i| {
                let s = self.ranks.get(i).copied().unwrap_or(0);
                FgModule::direct_sum(&vec![n.clone(); s], ring)
            })
            .collect()
    }

    fn differential(&self, ring: &FiniteRing, i: usize) -> RingMatrix {
        let rows = if i == 0 { 0 } else { self.ranks.get(i - 1).copied().unwrap_or(0) };
        let cols = self.ranks.get(i).copied().unwrap_or(0);
        if i == 0 || i > self.differentials.len() {
            return RingMatrix::zeros(ring, rows, cols);
        }
        self.differentials[i - 1].clone()
    }

    /// `H_i(F_• ⊗ n)`; needs the resolution to reach degree `i + 1`.
    pub fn tor_with(&self, n: &FgModule, i: usize) -> FgModule {
        let ring = n.ring().clone();
        let sums = self.free_sums(&ring, n, i + 1);
        let zero = FgModule::direct_sum(&[], &ring);
        let incoming = self.differential(&ring, i + 1).on_sums(&sums[i + 1], &sums[i], n);
        let lower = if i == 0 { &zero } else { &sums[i - 1] };
        let out = self.differential(&ring, i).on_sums(&sums[i], lower, n);
        homology_at(&incoming, &out).module
    }

    /// `H^i(Hom(F_•, n))`; needs the resolution to reach degree `i + 1`.
    pub fn ext_with(&self, n: &FgModule, i: usize) -> FgModule {
        let ring = n.ring().clone();
        let sums = self.free_sums(&ring, n, i + 1);
        let zero = FgModule::direct_sum(&[], &ring);
        let lower = if i == 0 { &zero } else { &sums[i - 1] };
        let incoming = self.differential(&ring, i).transpose().on_sums(lower, &sums[i], n);
        let out = self.differential(&ring, i + 1).transpose().on_sums(&sums[i], &sums[i + 1], n);
        homology_at(&incoming, &out).module
    }
}

#[cfg(test)]
mod tests {
    use num_bigint::BigInt;

    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn ring(m: u64) -> Arc<FiniteRing> {
        Arc::new(FiniteRing::zmod(m).unwrap())
    }

    #[test]
    fn resolution_of_free_module() {
        let r = ring(6);
        let res = FgModule::ring_module(&r).free_resolution(2);
        assert_eq!(res.ranks, vec![1, 0, 0]);
        let z = FgModule::zero(&r).free_resolution(2);
        assert_eq!(z.ranks, vec![0, 0, 0]);
    }

    #[test]
    fn periodic_resolution_over_z4() {
        let r = ring(4);
        let m = FgModule::cyclic(&r, &r.ideal(&[ints(&[2])]));
        let res = m.free_resolution(3);
        assert_eq!(res.ranks, vec![1, 1, 1, 1]);
        for d in &res.differentials {
            assert_eq!(d.get(0, 0), &ints(&[2]));
        }
    }

    #[test]
    fn tor_and_ext_over_z4() {
        let r = ring(4);
        let m = FgModule::cyclic(&r, &r.ideal(&[ints(&[2])]));
        assert_eq!(m.tor(&m, 1).order(), BigInt::from(2));
        assert_eq!(m.ext(&m, 1).order(), BigInt::from(2));
        assert_eq!(m.tor(&m, 0).signature(), m.tensor_module(&m).signature());
        assert_eq!(m.ext(&m, 0).signature(), m.hom_module(&m).signature());
        let free = FgModule::ring_module(&r);
        assert!(free.tor(&m, 1).is_zero_module());
    }

    #[test]
    fn local_cohomology_examples() {
        let r = ring(12);
        let m = FgModule::ring_module(&r);
        let i = r.ideal(&[ints(&[2])]);
        assert_eq!(m.local_cohomology(&i, 0).order(), BigInt::from(4));
        assert!(m.local_cohomology(&i, 1).is_zero_module());
        for k in 0..3 {
            assert!(m.local_cohomology(&r.unit_ideal(), k).is_zero_module());
        }
    }

    #[test]
    fn localize_module_at_two() {
        let r = ring(12);
        let m = FgModule::ring_module(&r);
        let loc = r.localize(&ints(&[2]));
        let (mf, map) = m.localize(&loc);
        assert_eq!(mf.order(), BigInt::from(3));
        assert!(map.is_surjective());
        assert!(mf.check_axioms().is_empty());
    }
}
