//! Koszul complexes `K_•(x^{(e)}; M)` and the transitions between exponents.

use super::{induced_map, ChainComplex, ComplexMap};
use crate::error::{Error, Result};
use crate::linalg::{GroupElement, IntMatrix};
use crate::module::{FgModule, ModuleHom, ModuleSum, Submodule, Subquotient};
use crate::ring::RingElement;

/// The `j`-element subsets of `0..k` in lexicographic order.
pub fn subsets(k: usize, j: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, k: usize, j: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == j {
            out.push(cur.clone());
            return;
        }
        for t in start..k {
            if k - t < j - cur.len() {
                break;
            }
            cur.push(t);
            go(t + 1, k, j, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if j <= k {
        go(0, k, j, &mut Vec::new(), &mut out);
    }
    out
}

fn subset_index(all: &[Vec<usize>], s: &[usize]) -> usize {
    all.binary_search_by(|t| t.as_slice().cmp(s)).expect("subset is listed")
}

/// Shared data for the Koszul complexes of one sequence on one module, across exponents.
#[derive(Clone, Debug)]
pub struct KoszulFamily {
    xs: Vec<RingElement>,
    module: FgModule,
    subsets: Vec<Vec<Vec<usize>>>,
    sums: Vec<ModuleSum>,
}

/// `K_•(x^{(e)}; M)` with the block structure of each degree.
#[derive(Clone, Debug)]
pub struct KoszulComplex {
    pub complex: ChainComplex,
    pub sums: Vec<ModuleSum>,
    pub exponent: u64,
}

impl KoszulFamily {
    pub fn new(xs: &[RingElement], module: &FgModule) -> Result<Self> {
        if xs.is_empty() {
            return Err(Error::InvalidSpec("Koszul complex needs a nonempty sequence".into()));
        }
        let ring = module.ring();
        let xs: Vec<RingElement> = xs.iter().map(|x| ring.reduce(x)).collect();
        let k = xs.len();
        let subsets: Vec<Vec<Vec<usize>>> = (0..=k).map(|j| subsets(k, j)).collect();
        let sums = subsets
            .iter()
            .map(|s| FgModule::direct_sum(&vec![module.clone(); s.len()], ring))
            .collect();
        Ok(KoszulFamily {
            xs,
            module: module.clone(),
            subsets,
            sums,
        })
    }

    pub fn length(&self) -> usize {
        self.xs.len()
    }

    pub fn module(&self) -> &FgModule {
        &self.module
    }

    pub fn sequence(&self) -> &[RingElement] {
        &self.xs
    }

    /// `K_j` as a direct sum indexed by `j`-subsets.
    pub fn term(&self, j: usize) -> &ModuleSum {
        &self.sums[j]
    }

    fn power_actions(&self, e: u64) -> Vec<IntMatrix> {
        let ring = self.module.ring();
        self.xs
            .iter()
            .map(|x| self.module.action_matrix(&ring.pow(x, e)))
            .collect()
    }

    /// `d_j : K_j → K_{j-1}` for the sequence `x^{(e)}`.
    pub fn differential(&self, j: usize, e: u64) -> ModuleHom {
        let acts = self.power_actions(e);
        let r = self.module.group().rank();
        let (src, tgt) = (&self.subsets[j], &self.subsets[j - 1]);
        let mut block = IntMatrix::zeros(tgt.len() * r, src.len() * r);
        for (b, s) in src.iter().enumerate() {
            for (p, &t) in s.iter().enumerate() {
                let rest: Vec<usize> = s.iter().copied().filter(|&u| u != t).collect();
                let a = subset_index(tgt, &rest);
                for u in 0..r {
                    for v in 0..r {
                        let x = acts[t].get(u, v);
                        let entry = if p % 2 == 0 { x.clone() } else { -x };
                        block.set(a * r + u, b * r + v, entry);
                    }
                }
            }
        }
        ModuleSum::hom_from_blocks(&self.sums[j], &self.sums[j - 1], &block)
    }

    /// `Z_j = ker d_j`.
    pub fn cycles(&self, j: usize, e: u64) -> Submodule {
        if j == 0 {
            self.sums[0].module.whole()
        } else {
            self.differential(j, e).kernel()
        }
    }

    /// `B_j = im d_{j+1}`.
    pub fn boundaries(&self, j: usize, e: u64) -> Submodule {
        if j == self.length() {
            self.sums[j].module.zero_submodule()
        } else {
            self.differential(j + 1, e).image()
        }
    }

    pub fn homology(&self, j: usize, e: u64) -> Subquotient {
        let k = &self.sums[j].module;
        k.subquotient(&self.cycles(j, e), &self.boundaries(j, e))
    }

    /// Degree-`j` component of `K(x^{(m)}) → K(x^{(n)})`: the `S`-summand is multiplied by `∏_{i∈S} x_i^{m-n}`.
    pub fn transition(&self, j: usize, m: u64, n: u64) -> ModuleHom {
        assert!(m >= n, "transition needs m ≥ n");
        let ring = self.module.ring();
        let pw: Vec<RingElement> = self.xs.iter().map(|x| ring.pow(x, m - n)).collect();
        let r = self.module.group().rank();
        let subs = &self.subsets[j];
        let mut block = IntMatrix::zeros(subs.len() * r, subs.len() * r);
        for (a, s) in subs.iter().enumerate() {
            let f = ring.product_of(&s.iter().map(|&t| pw[t].clone()).collect::<Vec<_>>());
            let act = self.module.action_matrix(&f);
            for u in 0..r {
                for v in 0..r {
                    block.set(a * r + u, a * r + v, act.get(u, v).clone());
                }
            }
        }
        ModuleSum::hom_from_blocks(&self.sums[j], &self.sums[j], &block)
    }

    /// Whether `H_j(x^{(m)}; M) → H_j(x^{(n)}; M)` is zero, decided on cycles and boundaries.
    pub fn transition_vanishes(&self, j: usize, m: u64, n: u64) -> bool {
        if j > self.length() {
            return true;
        }
        let z = self.cycles(j, m);
        let b = self.boundaries(j, n);
        self.transition(j, m, n).image_of(&z).is_subset_of(&b)
    }

    /// The least `m ∈ [n, m_max]` with a vanishing transition on `H_i`, or `None`.
    pub fn pro_zero_index(&self, i: usize, n: u64, m_max: u64) -> Option<u64> {
        if i > self.length() {
            return Some(n);
        }
        let b = self.boundaries(i, n);
        (n..=m_max).find(|&m| {
            let z = self.cycles(i, m);
            self.transition(i, m, n).image_of(&z).is_subset_of(&b)
        })
    }

    pub fn complex(&self, e: u64) -> KoszulComplex {
        let diffs = (1..=self.length()).map(|j| self.differential(j, e)).collect();
        let modules = self.sums.iter().map(|s| s.module.clone()).collect();
        KoszulComplex {
            complex: ChainComplex::new(modules, diffs).expect("Koszul differentials square to zero"),
            sums: self.sums.clone(),
            exponent: e,
        }
    }

    pub fn transition_map(&self, m: u64, n: u64) -> ComplexMap {
        let comps = (0..=self.length()).map(|j| self.transition(j, m, n)).collect();
        ComplexMap::new(&self.complex(m).complex, &self.complex(n).complex, comps)
            .expect("Koszul transitions commute with differentials")
    }

    /// The induced map `H_i(x^{(m)}; M) → H_i(x^{(n)}; M)` between the given subquotients.
    pub fn homology_transition(&self, i: usize, m: u64, n: u64, hm: &Subquotient, hn: &Subquotient) -> ModuleHom {
        induced_map(hm, hn, &self.transition(i, m, n))
    }
}

/// `K_•(x; M)`.
pub fn koszul_complex(xs: &[RingElement], m: &FgModule) -> Result<KoszulComplex> {
    Ok(KoszulFamily::new(xs, m)?.complex(1))
}

/// `K_•(x^{(m)}; M) → K_•(x^{(n)}; M)` for `m ≥ n ≥ 1`.
pub fn koszul_transition(xs: &[RingElement], m: u64, n: u64, module: &FgModule) -> Result<ComplexMap> {
    if n < 1 || m < n {
        return Err(Error::InvalidSpec(format!("transition needs m ≥ n ≥ 1, got m={m}, n={n}")));
    }
    Ok(KoszulFamily::new(xs, module)?.transition_map(m, n))
}

/// Least `m ≥ n` killing `H_i(x^{(m)}; M) → H_i(x^{(n)}; M)`, or `None` if none up to `m_max`.
pub fn pro_zero_index(xs: &[RingElement], module: &FgModule, i: usize, n: u64, m_max: u64) -> Result<Option<u64>> {
    if i < 1 || n < 1 {
        return Err(Error::InvalidSpec("pro-zero index needs i ≥ 1 and n ≥ 1".into()));
    }
    Ok(KoszulFamily::new(xs, module)?.pro_zero_index(i, n, m_max))
}

/// `(x^{(n)}M :_M y^n)/x^{(n)}M ≅ H_1(y^n; H_0(x^{(n)}; M))` with its witness.
#[derive(Clone, Debug)]
pub struct ColonIdentification {
    pub colon_side: FgModule,
    pub koszul_side: FgModule,
    pub iso: ModuleHom,
    pub verified: bool,
}

struct ColonSides {
    lhs: Subquotient,
    quotient: crate::module::QuotientModule,
    family: KoszulFamily,
    rhs: Subquotient,
    iso: ModuleHom,
}

fn colon_sides(prefix: &[RingElement], y: &RingElement, n: u64, m: &FgModule) -> Result<ColonSides> {
    let image = m.power_image(prefix, &vec![n; prefix.len()]);
    let lhs = m.subquotient(&m.colon(&image, y, n), &image);
    let quotient = m.quotient(&image);
    let family = KoszulFamily::new(std::slice::from_ref(y), &quotient.module).expect("nonempty");
    let rhs = family.homology(1, n);
    let g = lhs.module.group();
    let cols = (0..g.rank())
        .map(|k| {
            let rep = lhs.representative(&g.generator(k));
            let q = quotient.projection.apply(&rep);
            rhs.class_of(&family.term(1).inject(0, &q)).ok_or_else(|| {
                Error::IdentificationFailure(format!("n={n}: colon class is not a Koszul cycle"))
            })
        })
        .collect::<Result<Vec<GroupElement>>>()?;
    let mat = IntMatrix::from_columns(rhs.module.group().rank(), &cols);
    let iso = ModuleHom::new_unchecked(
        lhs.module.clone(),
        rhs.module.clone(),
        crate::linalg::GroupHom::new_reduced(lhs.module.group().clone(), rhs.module.group().clone(), mat),
    );
    Ok(ColonSides {
        lhs,
        quotient,
        family,
        rhs,
        iso,
    })
}

/// Builds both sides and the canonical map, and checks that it is an isomorphism compatible with
/// multiplication by `y^{m-n}` on the colon side and the Koszul transition on the other, for `m ∈ [n, n + 2]`.
pub fn colon_identification(prefix: &[RingElement], y: &RingElement, n: u64, m: &FgModule) -> Result<ColonIdentification> {
    if n < 1 {
        return Err(Error::InvalidSpec("colon identification needs n ≥ 1".into()));
    }
    let ring = m.ring();
    let base = colon_sides(prefix, y, n, m)?;
    let fail = |what: &str| Error::IdentificationFailure(format!("n={n}: {what}"));
    if !base.iso.is_equivariant() {
        return Err(fail("canonical map is not R-linear"));
    }
    if !base.iso.is_isomorphism() {
        return Err(fail("canonical map is not bijective"));
    }
    for mm in n + 1..=n + 2 {
        let top = colon_sides(prefix, y, mm, m)?;
        let ypow = ring.pow(y, mm - n);
        let g = top.lhs.module.group();
        let mut left = Vec::with_capacity(g.rank());
        let mut right = Vec::with_capacity(g.rank());
        for k in 0..g.rank() {
            let gen = g.generator(k);
            let rep = top.lhs.representative(&gen);
            let moved = m.act(&ypow, &rep);
            let c = base
                .lhs
                .class_of(&moved)
                .ok_or_else(|| fail("multiplication by y^(m-n) leaves the colon"))?;
            left.push(base.iso.apply(&c));
            let h = top.iso.apply(&gen);
            let v = top.rhs.representative(&h);
            let q = top.family.term(1).component(&v, 0);
            let lifted = top.quotient.lift(&q);
            let down = base.quotient.projection.apply(&m.act(&ypow, &lifted));
            let d = base
                .rhs
                .class_of(&base.family.term(1).inject(0, &down))
                .ok_or_else(|| fail("Koszul transition leaves the cycles"))?;
            right.push(d);
        }
        let tg = base.rhs.module.group();
        if left.iter().zip(&right).any(|(a, b)| !tg.is_zero(&tg.sub(a, b))) {
            return Err(fail(&format!("square with m={mm} does not commute")));
        }
    }
    Ok(ColonIdentification {
        colon_side: base.lhs.module,
        koszul_side: base.rhs.module,
        iso: base.iso,
        verified: true,
    })
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

    fn orders(k: &KoszulComplex) -> Vec<BigInt> {
        (0..=k.complex.top_degree())
            .map(|i| k.complex.homology_module(i).order())
            .collect()
    }

    #[test]
    fn subsets_are_lexicographic() {
        assert_eq!(subsets(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(subsets(2, 0), vec![Vec::<usize>::new()]);
        assert!(subsets(2, 3).is_empty());
    }

    #[test]
    fn koszul_homology_examples() {
        let k = koszul_complex(&[ints(&[2])], &zmod(8)).unwrap();
        assert_eq!(orders(&k), ints(&[2, 2]));
        let k = koszul_complex(&[ints(&[1])], &zmod(8)).unwrap();
        assert_eq!(orders(&k), ints(&[1, 1]));
        let k = koszul_complex(&[ints(&[2]), ints(&[2])], &zmod(4)).unwrap();
        assert_eq!(orders(&k), ints(&[2, 4, 2]));
        assert!(koszul_complex(&[], &zmod(4)).is_err());
    }

    #[test]
    fn transition_examples() {
        let m = zmod(8);
        let t = koszul_transition(&[ints(&[2])], 4, 1, &m).unwrap();
        assert!(t.components[1].is_zero());
        let id = koszul_transition(&[ints(&[2])], 3, 3, &m).unwrap();
        assert!(id.components.iter().all(|c| c.matrix() == ModuleHom::identity(c.source()).matrix()));
        let fam = KoszulFamily::new(&[ints(&[2]), ints(&[3])], &zmod(12)).unwrap();
        let t2 = fam.transition(2, 2, 1);
        assert_eq!(t2.matrix(), fam.term(2).module.scalar_endo(&ints(&[6])).matrix());
    }

    #[test]
    fn transitions_compose() {
        let fam = KoszulFamily::new(&[ints(&[2]), ints(&[6])], &zmod(24)).unwrap();
        for j in 0..=2 {
            let direct = fam.transition(j, 5, 1);
            let via = fam.transition(j, 3, 1).compose(&fam.transition(j, 5, 3));
            assert_eq!(direct.matrix(), via.matrix());
        }
    }

    #[test]
    fn pro_zero_examples() {
        let m = zmod(8);
        assert_eq!(pro_zero_index(&[ints(&[2])], &m, 1, 1, 10).unwrap(), Some(4));
        assert_eq!(pro_zero_index(&[ints(&[3])], &m, 1, 2, 10).unwrap(), Some(2));
        assert_eq!(pro_zero_index(&[ints(&[2])], &m, 1, 1, 3).unwrap(), None);
        let t = FiniteRing::truncated_two_power(3).unwrap();
        let x = t.x.clone();
        let r = FgModule::ring_module(&Arc::new(t.ring));
        assert_eq!(pro_zero_index(&[x], &r, 1, 1, 10).unwrap(), Some(4));
    }

    #[test]
    fn colon_identification_examples() {
        let m = zmod(8);
        let c = colon_identification(&[ints(&[4])], &ints(&[2]), 1, &m).unwrap();
        assert!(c.verified);
        assert_eq!(c.colon_side.order(), BigInt::from(2));
        assert_eq!(c.koszul_side.order(), BigInt::from(2));
        let c = colon_identification(&[ints(&[4])], &ints(&[1]), 1, &m).unwrap();
        assert!(c.colon_side.is_zero_module() && c.koszul_side.is_zero_module());
        let c = colon_identification(&[ints(&[2])], &ints(&[3]), 1, &m).unwrap();
        assert!(c.colon_side.is_zero_module() && c.koszul_side.is_zero_module());
        let r = zmod(36);
        for n in 1..4 {
            assert!(colon_identification(&[ints(&[6]), ints(&[4])], &ints(&[3]), n, &r).unwrap().verified);
            assert!(colon_identification(&[], &ints(&[2]), n, &r).unwrap().verified);
        }
    }
}
