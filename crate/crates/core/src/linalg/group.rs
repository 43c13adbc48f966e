//! Finite abelian groups in invariant-factor form, their homomorphisms,
//! subgroups and quotients.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::lattice::{solve_triangular, triangular_det, ModLattice};
use super::matrix::IntMatrix;
use super::normal_form::{hnf_only, snf_full};
use crate::error::{Error, Result};

/// Coordinates of a group element with respect to the invariant-factor basis.
pub type GroupElement = Vec<BigInt>;

/// `Z/d_1 ⊕ ... ⊕ Z/d_r` with `d_1 | d_2 | ... | d_r`, every `d_j ≥ 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinAbGroup {
    factors: Vec<BigInt>,
}

impl FinAbGroup {
    pub fn new(factors: Vec<BigInt>) -> Result<Self> {
        for (j, d) in factors.iter().enumerate() {
            if *d < BigInt::from(2) {
                return Err(Error::InvalidSpec(format!("invariant factor {d} < 2")));
            }
            if j > 0 && !d.is_multiple_of(&factors[j - 1]) {
                return Err(Error::InvalidSpec(format!(
                    "invariant factors {} and {d} break the divisibility chain",
                    factors[j - 1]
                )));
            }
        }
        Ok(FinAbGroup { factors })
    }

    pub fn trivial() -> Self {
        FinAbGroup { factors: vec![] }
    }

    pub fn cyclic(n: u64) -> Self {
        if n <= 1 {
            Self::trivial()
        } else {
            FinAbGroup {
                factors: vec![BigInt::from(n)],
            }
        }
    }

    /// Invariant-factor form of `Z/o_1 ⊕ ... ⊕ Z/o_k` for arbitrary positive orders.
    pub fn from_orders(orders: &[BigInt]) -> Self {
        Presentation::of_orders(orders).group
    }

    pub fn factors(&self) -> &[BigInt] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> BigInt {
        self.factors.iter().product()
    }

    pub fn exponent(&self) -> BigInt {
        self.factors.last().cloned().unwrap_or_else(BigInt::one)
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    /// `⌈log₂ |G|⌉`, an upper bound on the length of any strict subgroup chain.
    pub fn log2_order(&self) -> usize {
        let o = self.order();
        if o <= BigInt::one() {
            0
        } else {
            (o - 1u32).bits() as usize
        }
    }

    pub fn zero(&self) -> GroupElement {
        vec![BigInt::zero(); self.rank()]
    }

    pub fn generator(&self, j: usize) -> GroupElement {
        let mut e = self.zero();
        e[j] = BigInt::one();
        e
    }

    pub fn reduce(&self, v: &[BigInt]) -> GroupElement {
        debug_assert_eq!(v.len(), self.rank());
        v.iter()
            .zip(&self.factors)
            .map(|(x, d)| x.mod_floor(d))
            .collect()
    }

    pub fn reduce_in_place(&self, v: &mut [BigInt]) {
        for (x, d) in v.iter_mut().zip(&self.factors) {
            if x.sign() == num_bigint::Sign::Minus || &*x >= d {
                *x = x.mod_floor(d);
            }
        }
    }

    pub fn is_reduced(&self, v: &[BigInt]) -> bool {
        v.len() == self.rank()
            && v
                .iter()
                .zip(&self.factors)
                .all(|(x, d)| x.sign() != num_bigint::Sign::Minus && x < d)
    }

    pub fn add(&self, a: &[BigInt], b: &[BigInt]) -> GroupElement {
        let s: Vec<BigInt> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        self.reduce(&s)
    }

    pub fn sub(&self, a: &[BigInt], b: &[BigInt]) -> GroupElement {
        let s: Vec<BigInt> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        self.reduce(&s)
    }

    pub fn scale(&self, k: &BigInt, a: &[BigInt]) -> GroupElement {
        let s: Vec<BigInt> = a.iter().map(|x| k * x).collect();
        self.reduce(&s)
    }

    pub fn is_zero(&self, v: &[BigInt]) -> bool {
        v.iter().zip(&self.factors).all(|(x, d)| x.is_multiple_of(d))
    }

    /// Relation lattice `diag(d)` as a square matrix.
    pub fn relation_matrix(&self) -> IntMatrix {
        IntMatrix::diagonal(&self.factors)
    }

    /// All elements, in lexicographic order of coordinates. Only for small groups.
    pub fn elements(&self) -> Vec<GroupElement> {
        let order = self.order().to_usize().expect("group too large to enumerate");
        let mut out = Vec::with_capacity(order);
        let mut cur = self.zero();
        for _ in 0..order {
            out.push(cur.clone());
            for j in (0..self.rank()).rev() {
                cur[j] += 1;
                if cur[j] < self.factors[j] {
                    break;
                }
                cur[j] = BigInt::zero();
            }
        }
        out
    }

    // ---- subgroups ----------------------------------------------------

    pub fn whole(&self) -> Subgroup {
        Subgroup {
            basis: IntMatrix::identity(self.rank()),
        }
    }

    pub fn zero_subgroup(&self) -> Subgroup {
        Subgroup {
            basis: self.relation_matrix(),
        }
    }

    /// Subgroup generated by the given elements.
    pub fn span<'a, I>(&self, gens: I) -> Subgroup
    where
        I: IntoIterator<Item = &'a GroupElement>,
    {
        let mut lat = ModLattice::new(&self.factors);
        for g in gens {
            lat.insert(g);
        }
        Subgroup {
            basis: lat.into_hnf(),
        }
    }

    pub fn sum(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        let mut lat = ModLattice::from_triangular(&self.factors, &a.basis);
        for i in 0..b.basis.rows() {
            lat.insert(b.basis.row(i));
        }
        Subgroup {
            basis: lat.into_hnf(),
        }
    }

    pub fn intersect(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        // coefficient vectors y with y·A ∈ B, mapped back through A
        let r = self.rank();
        let e = self.exponent();
        let coeff = preimage_lattice(&a.basis, &self.factors, &b.basis, &vec![e; r]);
        let rows: Vec<GroupElement> = (0..r).map(|i| a.basis.vec_mul(coeff.row(i))).collect();
        self.span(rows.iter())
    }

    pub fn subgroup_order(&self, s: &Subgroup) -> BigInt {
        self.order() / triangular_det(&s.basis)
    }

    pub fn index(&self, s: &Subgroup) -> BigInt {
        triangular_det(&s.basis)
    }

    /// `G / S` with its projection and a set-theoretic lift.
    pub fn quotient(&self, s: &Subgroup) -> Quotient {
        let p = Presentation::of_lattice(&s.basis, Some(&self.factors));
        Quotient {
            projection: GroupHom::new_unchecked(self.clone(), p.group.clone(), p.projection),
            group: p.group,
            lift: p.lift,
        }
    }

    /// Presents `S` as a group in its own right.
    pub fn present_subgroup(&self, s: &Subgroup) -> SubgroupPresentation {
        SubgroupPresentation::new(self, s)
    }

    /// Canonical form of `G ⊕ H ⊕ ...` with injections into the sum.
    pub fn direct_sum(parts: &[FinAbGroup]) -> DirectSum {
        let orders: Vec<BigInt> = parts.iter().flat_map(|g| g.factors.iter().cloned()).collect();
        let p = Presentation::of_orders(&orders);
        let mut offsets = Vec::with_capacity(parts.len() + 1);
        let mut acc = 0;
        for g in parts {
            offsets.push(acc);
            acc += g.rank();
        }
        offsets.push(acc);
        DirectSum {
            group: p.group,
            parts: parts.to_vec(),
            offsets,
            to_sum: p.projection,
            from_sum: p.lift,
        }
    }
}

/// A subgroup, stored as the Hermite basis of its preimage lattice in `Zʳ`.
///
/// The lattice always contains the relation lattice of the ambient group, so
/// two subgroups of the same group are equal iff their bases are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    basis: IntMatrix,
}

impl Subgroup {
    pub fn from_hnf_unchecked(basis: IntMatrix) -> Self {
        Subgroup { basis }
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        solve_triangular(&self.basis, v).is_some()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        (0..self.basis.rows()).all(|i| other.contains(self.basis.row(i)))
    }

    /// Additive generators: the basis rows (some may be zero in the group).
    pub fn generators(&self, group: &FinAbGroup) -> Vec<GroupElement> {
        (0..self.basis.rows())
            .map(|i| group.reduce(self.basis.row(i)))
            .filter(|v| !group.is_zero(v))
            .collect()
    }

    pub fn is_whole(&self) -> bool {
        (0..self.basis.rows()).all(|i| self.basis.get(i, i).is_one())
    }
}

/// `Zⁿ / L` in invariant-factor form.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub group: FinAbGroup,
    /// `q × n`; column `i` holds the class of the `i`-th standard vector.
    pub projection: IntMatrix,
    /// `n × q`; column `j` holds an integer preimage of generator `j`.
    pub lift: IntMatrix,
}

impl Presentation {
    /// Presents `Zⁿ / rowspan(basis)` for a full-rank upper-triangular basis.
    /// With `moduli` (a diagonal lattice contained in the basis), the lift is reduced.
    pub fn of_lattice(basis: &IntMatrix, moduli: Option<&[BigInt]>) -> Self {
        let n = basis.rows();
        let s = snf_full(basis);
        let diag = s.diagonal();
        let kept: Vec<usize> = (0..n).filter(|&i| !diag[i].is_one()).collect();
        let factors: Vec<BigInt> = kept.iter().map(|&i| diag[i].clone()).collect();
        let group = FinAbGroup { factors };
        let mut projection = s.v.select_columns(&kept).transpose();
        projection.reduce_rows_mod(group.factors());
        let mut lift = s.v_inv.select_rows(&kept).transpose();
        if let Some(m) = moduli {
            lift.reduce_rows_mod(m);
        }
        Presentation {
            group,
            projection,
            lift,
        }
    }

    /// `⊕ Z/o_i` for arbitrary positive orders.
    pub fn of_orders(orders: &[BigInt]) -> Self {
        let n = orders.len();
        let kept: Vec<usize> = (0..n).filter(|&i| !orders[i].is_one()).collect();
        // fast path: reordering alone gives a divisibility chain
        let mut idx = kept.clone();
        idx.sort_by(|&a, &b| orders[a].cmp(&orders[b]));
        let chain = idx.windows(2).all(|w| orders[w[1]].is_multiple_of(&orders[w[0]]));
        if chain {
            let factors: Vec<BigInt> = idx.iter().map(|&i| orders[i].clone()).collect();
            let q = idx.len();
            let mut projection = IntMatrix::zeros(q, n);
            let mut lift = IntMatrix::zeros(n, q);
            for (k, &i) in idx.iter().enumerate() {
                projection.set(k, i, BigInt::one());
                lift.set(i, k, BigInt::one());
            }
            return Presentation {
                group: FinAbGroup { factors },
                projection,
                lift,
            };
        }
        Self::of_lattice(&IntMatrix::diagonal(orders), Some(orders))
    }
}

/// Cokernel of the relation matrix `A` (relations = columns of `A`) plus
/// `moduli[i]·e_i`. A zero modulus adds no relation for that row.
pub fn cokernel_presentation(a: &IntMatrix, moduli: &[BigInt]) -> Result<Presentation> {
    let n = a.rows();
    if moduli.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "{} moduli for {} rows",
            moduli.len(),
            n
        )));
    }
    let mut rels = a.transpose();
    let extra: Vec<Vec<BigInt>> = (0..n)
        .filter(|&i| !moduli[i].is_zero())
        .map(|i| {
            let mut r = vec![BigInt::zero(); n];
            r[i] = moduli[i].clone();
            r
        })
        .collect();
    rels = rels.stack(&IntMatrix::from_rows(n, &extra));
    let h = hnf_only(&rels).nonzero_rows();
    if h.rows() < n {
        return Err(Error::InfiniteCokernel {
            rank: h.rows(),
            dim: n,
        });
    }
    let mut p = Presentation::of_lattice(&h, None);
    // reduce the lift modulo the exponent of the cokernel lattice
    let det = triangular_det(&h);
    let m = vec![det; n];
    p.lift.reduce_rows_mod(&m);
    Ok(p)
}

/// `G/S` with projection `G → G/S` and a lift back to coordinates of `G`.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: FinAbGroup,
    pub projection: GroupHom,
    pub lift: IntMatrix,
}

impl Quotient {
    pub fn lift_element(&self, q: &[BigInt]) -> GroupElement {
        self.projection.source().reduce(&self.lift.mul_vec(q))
    }
}

/// A subgroup `S ⊆ G` presented as an abstract group `S'` with `S' ≅ S`.
#[derive(Clone, Debug)]
pub struct SubgroupPresentation {
    pub group: FinAbGroup,
    /// `G`-coordinates of the generators of `S'` (columns).
    pub inclusion: GroupHom,
    lattice: IntMatrix,
    coord_map: IntMatrix,
}

impl SubgroupPresentation {
    fn new(ambient: &FinAbGroup, s: &Subgroup) -> Self {
        let r = ambient.rank();
        let l = &s.basis;
        // relation lattice of S in L-coordinates: d_j e_j = w_j · L
        let rel_rows: Vec<Vec<BigInt>> = (0..r)
            .map(|j| {
                let mut v = vec![BigInt::zero(); r];
                v[j] = ambient.factors[j].clone();
                solve_triangular(l, &v).expect("relation lattice lies in every subgroup lattice")
            })
            .collect();
        let rel = IntMatrix::from_rows(r, &rel_rows);
        let h = ModLattice::from_rows_full_rank(&rel);
        let p = Presentation::of_lattice(&h, None);
        // generator j of S' is (lift column j) · L
        let incl_cols: Vec<GroupElement> = (0..p.group.rank())
            .map(|j| ambient.reduce(&l.vec_mul(&p.lift.column(j))))
            .collect();
        let inclusion = GroupHom::new_unchecked(
            p.group.clone(),
            ambient.clone(),
            IntMatrix::from_columns(r, &incl_cols),
        );
        SubgroupPresentation {
            group: p.group,
            inclusion,
            lattice: l.clone(),
            coord_map: p.projection,
        }
    }

    /// Coordinates in `S'` of an element of `G` lying in `S`.
    pub fn coords(&self, v: &[BigInt]) -> Option<GroupElement> {
        let w = solve_triangular(&self.lattice, v)?;
        Some(self.group.reduce(&self.coord_map.mul_vec(&w)))
    }

    pub fn embed(&self, x: &[BigInt]) -> GroupElement {
        self.inclusion.apply(x)
    }
}

impl ModLattice {
    /// Hermite basis of a full-rank lattice given by generating rows.
    pub(crate) fn from_rows_full_rank(rows: &IntMatrix) -> IntMatrix {
        let h = hnf_only(rows).nonzero_rows();
        assert_eq!(h.rows(), h.cols(), "lattice is not of full rank");
        h
    }
}

/// Canonical direct sum with block coordinates.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub group: FinAbGroup,
    pub parts: Vec<FinAbGroup>,
    offsets: Vec<usize>,
    /// canonical coordinates from concatenated block coordinates
    to_sum: IntMatrix,
    /// concatenated block coordinates from canonical coordinates
    from_sum: IntMatrix,
}

impl DirectSum {
    pub fn block_dim(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    pub fn block_range(&self, k: usize) -> std::ops::Range<usize> {
        self.offsets[k]..self.offsets[k + 1]
    }

    /// Canonical element from its block components.
    pub fn assemble(&self, blocks: &[BigInt]) -> GroupElement {
        self.group.reduce(&self.to_sum.mul_vec(blocks))
    }

    /// Block components of a canonical element, each reduced in its part.
    pub fn split(&self, v: &[BigInt]) -> Vec<BigInt> {
        let raw = self.from_sum.mul_vec(v);
        let mut out = Vec::with_capacity(raw.len());
        for (k, part) in self.parts.iter().enumerate() {
            out.extend(part.reduce(&raw[self.block_range(k)]));
        }
        out
    }

    pub fn component(&self, v: &[BigInt], k: usize) -> GroupElement {
        let raw = self.from_sum.mul_vec(v);
        self.parts[k].reduce(&raw[self.block_range(k)])
    }

    pub fn inject(&self, k: usize, x: &[BigInt]) -> GroupElement {
        let mut blocks = vec![BigInt::zero(); self.block_dim()];
        for (i, v) in self.block_range(k).zip(x) {
            blocks[i] = v.clone();
        }
        self.assemble(&blocks)
    }

    /// Converts a block matrix (block coordinates on both sides) into a hom.
    pub fn hom_from_blocks(source: &DirectSum, target: &DirectSum, block: &IntMatrix) -> GroupHom {
        let m = target.to_sum.mul(block).mul(&source.from_sum);
        GroupHom::new_reduced(source.group.clone(), target.group.clone(), m)
    }

    pub fn to_sum_matrix(&self) -> &IntMatrix {
        &self.to_sum
    }

    pub fn from_sum_matrix(&self) -> &IntMatrix {
        &self.from_sum
    }
}

/// Homomorphism of finite abelian groups; columns of `matrix` are images of
/// the source generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    source: FinAbGroup,
    target: FinAbGroup,
    matrix: IntMatrix,
}

impl GroupHom {
    pub fn new(source: FinAbGroup, target: FinAbGroup, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != target.rank() || matrix.cols() != source.rank() {
            return Err(Error::DimensionMismatch(format!(
                "matrix {}x{} for hom of ranks {} -> {}",
                matrix.rows(),
                matrix.cols(),
                source.rank(),
                target.rank()
            )));
        }
        let h = GroupHom::new_reduced(source, target, matrix);
        if !h.is_well_defined() {
            return Err(Error::DimensionMismatch(
                "matrix does not respect the source relations".into(),
            ));
        }
        Ok(h)
    }

    pub(crate) fn new_unchecked(source: FinAbGroup, target: FinAbGroup, matrix: IntMatrix) -> Self {
        GroupHom {
            source,
            target,
            matrix,
        }
    }

    pub(crate) fn new_reduced(source: FinAbGroup, target: FinAbGroup, mut matrix: IntMatrix) -> Self {
        matrix.reduce_rows_mod(target.factors());
        GroupHom {
            source,
            target,
            matrix,
        }
    }

    pub fn identity(g: &FinAbGroup) -> Self {
        GroupHom::new_unchecked(g.clone(), g.clone(), IntMatrix::identity(g.rank()))
    }

    pub fn zero(source: &FinAbGroup, target: &FinAbGroup) -> Self {
        GroupHom::new_unchecked(
            source.clone(),
            target.clone(),
            IntMatrix::zeros(target.rank(), source.rank()),
        )
    }

    pub fn source(&self) -> &FinAbGroup {
        &self.source
    }

    pub fn target(&self) -> &FinAbGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    /// `d_j · (column j) = 0` in the target for every source generator.
    pub fn is_well_defined(&self) -> bool {
        (0..self.source.rank()).all(|j| {
            let col = self.matrix.column(j);
            self.target
                .is_zero(&col.iter().map(|x| x * &self.source.factors[j]).collect::<Vec<_>>())
        })
    }

    pub fn apply(&self, x: &[BigInt]) -> GroupElement {
        self.target.reduce(&self.matrix.mul_vec(x))
    }

    pub fn compose(&self, first: &GroupHom) -> GroupHom {
        debug_assert_eq!(first.target, self.source);
        GroupHom::new_reduced(
            first.source.clone(),
            self.target.clone(),
            self.matrix.mul(&first.matrix),
        )
    }

    pub fn add(&self, other: &GroupHom) -> GroupHom {
        GroupHom::new_reduced(
            self.source.clone(),
            self.target.clone(),
            self.matrix.add(&other.matrix),
        )
    }

    pub fn sub(&self, other: &GroupHom) -> GroupHom {
        GroupHom::new_reduced(
            self.source.clone(),
            self.target.clone(),
            self.matrix.sub(&other.matrix),
        )
    }

    pub fn is_zero(&self) -> bool {
        (0..self.source.rank()).all(|j| self.target.is_zero(&self.matrix.column(j)))
    }

    pub fn image(&self) -> Subgroup {
        let cols = self.matrix.column_vecs();
        self.target.span(cols.iter())
    }

    pub fn image_of(&self, s: &Subgroup) -> Subgroup {
        let imgs: Vec<GroupElement> = (0..s.basis.rows())
            .map(|i| self.matrix.mul_vec(s.basis.row(i)))
            .collect();
        self.target.span(imgs.iter())
    }

    pub fn preimage(&self, t: &Subgroup) -> Subgroup {
        let basis = preimage_lattice(&self.matrix.transpose(), self.target.factors(), &t.basis, self.source.factors());
        Subgroup { basis }
    }

    pub fn kernel(&self) -> Subgroup {
        self.preimage(&self.target.zero_subgroup())
    }

    pub fn kernel_generators(&self) -> Vec<GroupElement> {
        self.kernel().generators(&self.source)
    }

    /// One `x` with `f(x) = y`, or `None` when `y ∉ im f`.
    pub fn solve(&self, y: &[BigInt]) -> Result<Option<GroupElement>> {
        if y.len() != self.target.rank() {
            return Err(Error::DimensionMismatch(format!(
                "element of length {} in group of rank {}",
                y.len(),
                self.target.rank()
            )));
        }
        Ok(solve_rows(
            &self.matrix.transpose(),
            self.source.factors(),
            self.target.factors(),
            y,
        ))
    }

    pub fn is_injective(&self) -> bool {
        self.kernel() == self.source.zero_subgroup()
    }

    pub fn is_surjective(&self) -> bool {
        self.image().is_whole()
    }

    pub fn is_bijective(&self) -> bool {
        self.source.order() == self.target.order() && self.is_injective()
    }
}

/// Graph lattice `{(y, x) : y − x·A ∈ T}` inside `Z^b ⊕ Z^n`.
fn graph_lattice(
    images: &IntMatrix,
    target_moduli: &[BigInt],
    target_basis: &IntMatrix,
    source_moduli: &[BigInt],
) -> ModLattice {
    let n = images.rows();
    let b = target_moduli.len();
    let mut moduli = target_moduli.to_vec();
    moduli.extend_from_slice(source_moduli);
    let mut init = IntMatrix::zeros(b + n, b + n);
    for i in 0..b {
        for j in i..b {
            init.set(i, j, target_basis.get(i, j).clone());
        }
    }
    for i in 0..n {
        init.set(b + i, b + i, source_moduli[i].clone());
    }
    let mut lat = ModLattice::from_triangular(&moduli, &init);
    for i in 0..n {
        let mut row = images.row(i).to_vec();
        row.extend((0..n).map(|k| if k == i { BigInt::one() } else { BigInt::zero() }));
        lat.insert(&row);
    }
    lat
}

/// Solves `x·A ≡ y` where `A` has one row per source coordinate, the source
/// is `⊕ Z/src_i` and the target `⊕ Z/tgt_j`. The moduli need not form a chain.
pub(crate) fn solve_rows(
    images: &IntMatrix,
    source_moduli: &[BigInt],
    target_moduli: &[BigInt],
    y: &[BigInt],
) -> Option<Vec<BigInt>> {
    let b = target_moduli.len();
    let n = source_moduli.len();
    let lat = graph_lattice(
        images,
        target_moduli,
        &IntMatrix::diagonal(target_moduli),
        source_moduli,
    );
    let mut v = y.to_vec();
    v.extend(std::iter::repeat_n(BigInt::zero(), n));
    lat.clear_prefix(&v, b).map(|rest| {
        rest[b..]
            .iter()
            .zip(source_moduli)
            .map(|(e, m)| (-e).mod_floor(m))
            .collect()
    })
}

/// Hermite basis of the kernel lattice of `x ↦ x·A` (see [`solve_rows`]).
pub(crate) fn kernel_rows(images: &IntMatrix, source_moduli: &[BigInt], target_moduli: &[BigInt]) -> IntMatrix {
    preimage_lattice(
        images,
        target_moduli,
        &IntMatrix::diagonal(target_moduli),
        source_moduli,
    )
}

/// Hermite basis of `{x ∈ Zⁿ : x·A ∈ T}` where `A` has `n` rows of length `b`.
pub(crate) fn preimage_lattice(
    images: &IntMatrix,
    target_moduli: &[BigInt],
    target_basis: &IntMatrix,
    source_moduli: &[BigInt],
) -> IntMatrix {
    let n = images.rows();
    let b = target_moduli.len();
    let h = graph_lattice(images, target_moduli, target_basis, source_moduli).into_hnf();
    h.submatrix(b..b + n, b..b + n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn chain_is_validated() {
        assert!(FinAbGroup::new(ints(&[2, 4])).is_ok());
        assert!(FinAbGroup::new(ints(&[2, 3])).is_err());
        assert!(FinAbGroup::new(ints(&[1])).is_err());
    }

    #[test]
    fn cokernel_examples() {
        let p = cokernel_presentation(&IntMatrix::from_i64(&[&[2]]), &ints(&[0])).unwrap();
        assert_eq!(p.group.factors(), &ints(&[2])[..]);
        let p = cokernel_presentation(&IntMatrix::from_i64(&[&[2, 0], &[0, 4]]), &ints(&[0, 0])).unwrap();
        assert_eq!(p.group.factors(), &ints(&[2, 4])[..]);
        let p = cokernel_presentation(&IntMatrix::from_i64(&[&[2, 4], &[6, 8]]), &ints(&[0, 0])).unwrap();
        assert_eq!(p.group.factors(), &ints(&[2, 4])[..]);
        let err = cokernel_presentation(&IntMatrix::from_i64(&[&[2], &[0]]), &ints(&[0, 0]));
        assert!(matches!(err, Err(Error::InfiniteCokernel { .. })));
    }

    #[test]
    fn kernel_of_doubling_on_z8() {
        let g = FinAbGroup::cyclic(8);
        let f = GroupHom::new(g.clone(), g.clone(), IntMatrix::from_i64(&[&[2]])).unwrap();
        let k = f.kernel();
        assert_eq!(g.subgroup_order(&k), BigInt::from(2));
        assert!(k.contains(&ints(&[4])));
        assert_eq!(f.kernel_generators(), vec![ints(&[4])]);
    }

    #[test]
    fn identity_and_zero_maps() {
        let g = FinAbGroup::new(ints(&[2, 4])).unwrap();
        let id = GroupHom::identity(&g);
        assert_eq!(id.solve(&ints(&[1, 3])).unwrap(), Some(ints(&[1, 3])));
        let z = GroupHom::zero(&FinAbGroup::cyclic(4), &FinAbGroup::cyclic(4));
        assert_eq!(z.kernel(), FinAbGroup::cyclic(4).whole());
        assert_eq!(z.solve(&ints(&[1])).unwrap(), None);
        assert!(matches!(id.solve(&ints(&[1])), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn quotient_examples() {
        let g = FinAbGroup::cyclic(8);
        let q = g.quotient(&g.span([ints(&[4])].iter()));
        assert_eq!(q.group.factors(), &ints(&[4])[..]);
        let q = g.quotient(&g.span(std::iter::empty()));
        assert_eq!(q.group, g);
        let q = g.quotient(&g.span([ints(&[1])].iter()));
        assert!(q.group.is_trivial());
    }

    #[test]
    fn direct_sum_mixes_coprime_parts() {
        let s = FinAbGroup::direct_sum(&[FinAbGroup::cyclic(2), FinAbGroup::cyclic(3)]);
        assert_eq!(s.group.factors(), &ints(&[6])[..]);
        let x = s.inject(0, &ints(&[1]));
        let y = s.inject(1, &ints(&[1]));
        let sum = s.group.add(&x, &y);
        assert_eq!(s.split(&sum), ints(&[1, 1]));
        assert_eq!(s.group.subgroup_order(&s.group.span([sum].iter())), BigInt::from(6));
    }

    #[test]
    fn subgroup_presentation_roundtrip() {
        let g = FinAbGroup::new(ints(&[2, 12])).unwrap();
        let s = g.span([ints(&[1, 2]), ints(&[0, 6])].iter());
        let p = g.present_subgroup(&s);
        assert_eq!(p.group.order(), g.subgroup_order(&s));
        for x in p.group.elements() {
            let v = p.embed(&x);
            assert!(s.contains(&v));
            assert_eq!(p.coords(&v).unwrap(), x);
        }
    }

    #[test]
    fn intersection_matches_enumeration() {
        let g = FinAbGroup::new(ints(&[2, 12])).unwrap();
        let a = g.span([ints(&[1, 2])].iter());
        let b = g.span([ints(&[0, 3])].iter());
        let c = g.intersect(&a, &b);
        let brute: Vec<_> = g
            .elements()
            .into_iter()
            .filter(|v| a.contains(v) && b.contains(v))
            .collect();
        assert_eq!(BigInt::from(brute.len()), g.subgroup_order(&c));
        assert!(brute.iter().all(|v| c.contains(v)));
    }
}
