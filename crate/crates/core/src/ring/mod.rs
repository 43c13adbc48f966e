//! Finite commutative unital rings given by structure constants over the
//! invariant-factor basis of their additive group.

mod axioms;
mod ideal;
mod idempotent;

pub use axioms::AxiomFailure;
pub use ideal::Ideal;
pub use idempotent::{FittingSplit, Localization};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{DirectSum, FinAbGroup, GroupElement, GroupHom, IntMatrix};

pub type RingElement = GroupElement;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteRing {
    group: FinAbGroup,
    /// `left[i]` is multiplication by `e_i`; its column `j` holds `e_i·e_j`.
    left: Vec<IntMatrix>,
    one: RingElement,
}

/// A truncation together with its distinguished element.
#[derive(Clone, Debug)]
pub struct TruncatedRing {
    pub ring: FiniteRing,
    pub x: RingElement,
}

/// `R/I` with the projection and a set-theoretic lift.
#[derive(Clone, Debug)]
pub struct QuotientRing {
    pub ring: FiniteRing,
    pub projection: GroupHom,
    pub lift: IntMatrix,
}

/// `R_1 × ... × R_t` together with its block coordinates.
#[derive(Clone, Debug)]
pub struct ProductRing {
    pub ring: FiniteRing,
    pub sum: DirectSum,
}

impl ProductRing {
    /// The element with the given components.
    pub fn element(&self, components: &[RingElement]) -> RingElement {
        let blocks: Vec<BigInt> = components.iter().flatten().cloned().collect();
        self.sum.assemble(&blocks)
    }

    pub fn component(&self, a: &RingElement, k: usize) -> RingElement {
        self.sum.component(a, k)
    }
}

impl FiniteRing {
    /// `Z/m`.
    pub fn zmod(m: u64) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidSpec(format!("zmod needs m >= 2, got {m}")));
        }
        Ok(FiniteRing {
            group: FinAbGroup::cyclic(m),
            left: vec![IntMatrix::identity(1)],
            one: vec![BigInt::one()],
        })
    }

    /// The ring with one element.
    pub fn zero_ring() -> Self {
        FiniteRing {
            group: FinAbGroup::trivial(),
            left: vec![],
            one: vec![],
        }
    }

    /// Raw structure constants: `table[i][j]` holds the coordinates of `e_i·e_j`.
    pub fn from_structure(
        factors: Vec<BigInt>,
        table: Vec<Vec<Vec<BigInt>>>,
        one: RingElement,
    ) -> Result<Self> {
        let ring = Self::from_structure_unchecked(factors, table, one)?;
        let failures = ring.check_axioms();
        if let Some(first) = failures.first() {
            return Err(Error::AxiomViolation(format!(
                "{} failure(s), first: {first}",
                failures.len()
            )));
        }
        Ok(ring)
    }

    /// Validates shapes only; [`FiniteRing::check_axioms`] reports the rest.
    pub fn from_structure_unchecked(
        factors: Vec<BigInt>,
        table: Vec<Vec<Vec<BigInt>>>,
        one: RingElement,
    ) -> Result<Self> {
        let group = FinAbGroup::new(factors)?;
        let r = group.rank();
        let shape_ok = table.len() == r
            && table.iter().all(|row| row.len() == r && row.iter().all(|v| v.len() == r))
            && one.len() == r;
        if !shape_ok {
            return Err(Error::InvalidSpec(format!(
                "structure constants must form an {r}x{r}x{r} table with a unit of length {r}"
            )));
        }
        let left = (0..r)
            .map(|i| {
                let cols: Vec<GroupElement> = (0..r).map(|j| group.reduce(&table[i][j])).collect();
                IntMatrix::from_columns(r, &cols)
            })
            .collect();
        let one = group.reduce(&one);
        Ok(FiniteRing { group, left, one })
    }

    /// Builds the ring on `group` whose product is `mul`, evaluated on basis pairs.
    pub(crate) fn from_mul_fn<F>(group: FinAbGroup, one: RingElement, mul: F) -> Self
    where
        F: Fn(&RingElement, &RingElement) -> RingElement,
    {
        let r = group.rank();
        let basis: Vec<RingElement> = (0..r).map(|i| group.generator(i)).collect();
        let mut left: Vec<IntMatrix> = vec![IntMatrix::zeros(r, r); r];
        for i in 0..r {
            for j in i..r {
                let p = group.reduce(&mul(&basis[i], &basis[j]));
                for k in 0..r {
                    left[i].set(k, j, p[k].clone());
                    left[j].set(k, i, p[k].clone());
                }
            }
        }
        let ring = FiniteRing { group, left, one };
        debug_assert!(ring.check_axioms().is_empty(), "derived ring violates axioms");
        ring
    }

    pub fn product(parts: &[FiniteRing]) -> Self {
        Self::product_with_coords(parts).ring
    }

    pub fn product_with_coords(parts: &[FiniteRing]) -> ProductRing {
        let groups: Vec<FinAbGroup> = parts.iter().map(|p| p.group.clone()).collect();
        let sum = FinAbGroup::direct_sum(&groups);
        let ones: Vec<BigInt> = parts.iter().flat_map(|p| p.one.iter().cloned()).collect();
        let one = sum.assemble(&ones);
        let ring = FiniteRing::from_mul_fn(sum.group.clone(), one, |a, b| {
            let (sa, sb) = (sum.split(a), sum.split(b));
            let mut blocks = Vec::with_capacity(sa.len());
            for (k, part) in parts.iter().enumerate() {
                let range = sum.block_range(k);
                blocks.extend(part.mul(&sa[range.clone()], &sb[range]));
            }
            sum.assemble(&blocks)
        });
        ProductRing { ring, sum }
    }

    /// `R/I`; the zero quotient is rejected.
    pub fn quotient(&self, ideal: &Ideal) -> Result<QuotientRing> {
        if ideal.is_unit_ideal() {
            return Err(Error::InvalidSpec("quotient by the unit ideal is the zero ring".into()));
        }
        let q = self.group.quotient(ideal.span());
        let proj = q.projection.clone();
        let one = proj.apply(&self.one);
        let lift = |a: &RingElement| q.lift_element(a);
        let ring = FiniteRing::from_mul_fn(q.group.clone(), one, |a, b| {
            proj.apply(&self.mul(&lift(a), &lift(b)))
        });
        Ok(QuotientRing {
            ring,
            projection: q.projection,
            lift: q.lift,
        })
    }

    /// `∏_{n=1}^N Z/2ⁿ` with `x = (2 mod 2ⁿ)_n`.
    pub fn truncated_two_power(n_max: usize) -> Result<TruncatedRing> {
        if !(1..=62).contains(&n_max) {
            return Err(Error::InvalidSpec(format!(
                "truncated_two_power needs 1 <= N <= 62, got {n_max}"
            )));
        }
        let parts: Vec<FiniteRing> = (1..=n_max)
            .map(|n| FiniteRing::zmod(1u64 << n))
            .collect::<Result<_>>()?;
        let p = FiniteRing::product_with_coords(&parts);
        let comps: Vec<RingElement> = (1..=n_max)
            .map(|n| vec![BigInt::from(2).mod_floor(&(BigInt::one() << n))])
            .collect();
        let x = p.element(&comps);
        Ok(TruncatedRing { ring: p.ring, x })
    }

    /// `Z/q[t]/(tⁿ)` with `x = t`.
    pub fn truncated_polynomial(q: u64, n: usize) -> Result<TruncatedRing> {
        if q < 2 || n < 1 {
            return Err(Error::InvalidSpec(format!(
                "truncated_polynomial needs q >= 2 and n >= 1, got q={q}, n={n}"
            )));
        }
        let group = FinAbGroup::new(vec![BigInt::from(q); n])?;
        let one = group.generator(0);
        let ring = FiniteRing::from_mul_fn(group.clone(), one, |a, b| {
            let mut c = group.zero();
            for i in 0..n {
                if a[i].is_zero() {
                    continue;
                }
                for j in 0..n - i {
                    c[i + j] += &a[i] * &b[j];
                }
            }
            c
        });
        let x = if n >= 2 { ring.group.generator(1) } else { ring.zero() };
        Ok(TruncatedRing { ring, x })
    }

    /// `Z/q[t]/(f)` for the monic `f = tᵏ - Σ c_i tⁱ`, given `c = [c_0, ..., c_{k-1}]`, with `x = t`.
    pub fn polynomial_quotient(q: u64, c: &[i64]) -> Result<TruncatedRing> {
        let k = c.len();
        if q < 2 || k < 1 {
            return Err(Error::InvalidSpec(format!(
                "polynomial_quotient needs q >= 2 and degree >= 1, got q={q}, degree={k}"
            )));
        }
        let c: Vec<BigInt> = c.iter().map(|&v| BigInt::from(v)).collect();
        let group = FinAbGroup::new(vec![BigInt::from(q); k])?;
        let one = group.generator(0);
        let ring = FiniteRing::from_mul_fn(group.clone(), one, |a, b| {
            let mut p = vec![BigInt::zero(); 2 * k - 1];
            for i in 0..k {
                for j in 0..k {
                    p[i + j] += &a[i] * &b[j];
                }
            }
            for d in (k..2 * k - 1).rev() {
                let top = std::mem::take(&mut p[d]);
                for (i, ci) in c.iter().enumerate() {
                    p[d - k + i] += &top * ci;
                }
            }
            p.truncate(k);
            p
        });
        let x = if k >= 2 {
            ring.group.generator(1)
        } else {
            ring.from_int(&c[0])
        };
        Ok(TruncatedRing { ring, x })
    }

    /// `∏_{n=1}^N Z/q[t]/(tⁿ)` with `x = (t, ..., t)`.
    pub fn truncated_polynomial_family(q: u64, n_max: usize) -> Result<TruncatedRing> {
        if n_max < 1 {
            return Err(Error::InvalidSpec("truncated_polynomial_family needs N >= 1".into()));
        }
        let parts: Vec<TruncatedRing> = (1..=n_max)
            .map(|n| FiniteRing::truncated_polynomial(q, n))
            .collect::<Result<_>>()?;
        let rings: Vec<FiniteRing> = parts.iter().map(|p| p.ring.clone()).collect();
        let p = FiniteRing::product_with_coords(&rings);
        let comps: Vec<RingElement> = parts.iter().map(|p| p.x.clone()).collect();
        let x = p.element(&comps);
        Ok(TruncatedRing { ring: p.ring, x })
    }

    // ---- accessors ------------------------------------------------------

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn rank(&self) -> usize {
        self.group.rank()
    }

    pub fn order(&self) -> BigInt {
        self.group.order()
    }

    pub fn is_zero_ring(&self) -> bool {
        self.group.is_trivial()
    }

    pub fn one(&self) -> RingElement {
        self.one.clone()
    }

    pub fn zero(&self) -> RingElement {
        self.group.zero()
    }

    pub fn basis_element(&self, i: usize) -> RingElement {
        self.group.generator(i)
    }

    /// Multiplication by `e_i`.
    pub fn basis_action(&self, i: usize) -> &IntMatrix {
        &self.left[i]
    }

    pub fn characteristic(&self) -> BigInt {
        self.group.exponent()
    }

    // ---- arithmetic -------------------------------------------------------

    pub fn reduce(&self, a: &[BigInt]) -> RingElement {
        self.group.reduce(a)
    }

    pub fn from_int(&self, k: &BigInt) -> RingElement {
        self.group.scale(k, &self.one)
    }

    pub fn add(&self, a: &[BigInt], b: &[BigInt]) -> RingElement {
        self.group.add(a, b)
    }

    pub fn sub(&self, a: &[BigInt], b: &[BigInt]) -> RingElement {
        self.group.sub(a, b)
    }

    pub fn neg(&self, a: &[BigInt]) -> RingElement {
        self.group.scale(&BigInt::from(-1), a)
    }

    pub fn scale(&self, k: &BigInt, a: &[BigInt]) -> RingElement {
        self.group.scale(k, a)
    }

    /// Matrix of multiplication by `a`; column `j` holds `a·e_j`.
    pub fn mult_matrix(&self, a: &[BigInt]) -> IntMatrix {
        let r = self.rank();
        let mut m = IntMatrix::zeros(r, r);
        for (i, c) in a.iter().enumerate() {
            if !c.is_zero() {
                m = m.add(&self.left[i].scale(c));
            }
        }
        m.reduce_rows_mod(self.group.factors());
        m
    }

    pub fn mult_hom(&self, a: &[BigInt]) -> GroupHom {
        GroupHom::new_reduced(self.group.clone(), self.group.clone(), self.mult_matrix(a))
    }

    pub fn mul(&self, a: &[BigInt], b: &[BigInt]) -> RingElement {
        let r = self.rank();
        let mut c = vec![BigInt::zero(); r];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let coef = ai * bj;
                for k in 0..r {
                    let t = self.left[i].get(k, j);
                    if !t.is_zero() {
                        c[k] += &coef * t;
                    }
                }
            }
        }
        self.group.reduce(&c)
    }

    pub fn pow(&self, a: &[BigInt], mut k: u64) -> RingElement {
        let mut base = a.to_vec();
        let mut acc = self.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn product_of(&self, elems: &[RingElement]) -> RingElement {
        elems.iter().fold(self.one(), |acc, e| self.mul(&acc, e))
    }

    pub fn is_zero(&self, a: &[BigInt]) -> bool {
        self.group.is_zero(a)
    }

    pub fn is_unit(&self, a: &[BigInt]) -> bool {
        self.mult_hom(a).is_surjective()
    }

    pub fn inverse(&self, a: &[BigInt]) -> Option<RingElement> {
        self.mult_hom(a).solve(&self.one).expect("ranks agree")
    }

    pub fn is_idempotent(&self, a: &[BigInt]) -> bool {
        self.mul(a, a) == self.reduce(a)
    }

    pub fn is_nilpotent(&self, a: &[BigInt]) -> bool {
        let k = self.group.log2_order().max(1) as u64;
        self.is_zero(&self.pow(a, k))
    }

    /// All elements; only for small rings.
    pub fn elements(&self) -> Vec<RingElement> {
        self.group.elements()
    }

    /// Order as a machine integer, when it fits.
    pub fn small_order(&self) -> Option<u64> {
        self.order().to_u64()
    }
}
