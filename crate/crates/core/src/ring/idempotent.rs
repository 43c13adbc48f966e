//! Fitting splits, localizations at single elements, stable ideal powers and
//! the decomposition into local factors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use super::{FiniteRing, Ideal, RingElement};
use crate::error::{Error, Result};
use crate::linalg::{solve_rows, GroupHom, IntMatrix};

/// `x^c·R = x^{c+1}·R` with `c` minimal, and the idempotent `e` with `e·R = x^c·R`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FittingSplit {
    pub index: usize,
    pub idempotent: RingElement,
}

/// `R_f ≅ e·R` for the Fitting idempotent `e` of `f`.
#[derive(Clone, Debug)]
pub struct Localization {
    pub ring: FiniteRing,
    pub idempotent: RingElement,
    pub stabilization_index: usize,
    /// `r ↦ e·r`, from `R` onto `ring`.
    pub map: GroupHom,
    /// `ring → R`, identifying `ring` with `e·R`.
    pub inclusion: GroupHom,
}

impl Localization {
    pub fn image(&self, r: &[BigInt]) -> RingElement {
        self.map.apply(r)
    }

    pub fn embed(&self, a: &[BigInt]) -> RingElement {
        self.inclusion.apply(a)
    }
}

fn smallest_prime_factor(n: &BigInt) -> Option<BigInt> {
    if *n <= BigInt::one() {
        return None;
    }
    if n.is_even() {
        return Some(BigInt::from(2));
    }
    let mut d = BigInt::from(3);
    while &d * &d <= *n {
        if n.is_multiple_of(&d) {
            return Some(d);
        }
        d += 2;
    }
    Some(n.clone())
}

impl FiniteRing {
    pub fn fitting_split(&self, x: &[BigInt]) -> FittingSplit {
        let g = self.group();
        let mut c = 0usize;
        let mut power = self.one();
        let mut image = g.whole();
        loop {
            let next_power = self.mul(&power, x);
            let next = self.mult_hom(&next_power).image();
            if next == image {
                break;
            }
            image = next;
            power = next_power;
            c += 1;
        }
        // e = x^c·r with x^{2c}·r = x^c
        let sq = self.mul(&power, &power);
        let r = self
            .mult_hom(&sq)
            .solve(&power)
            .expect("ranks agree")
            .expect("x acts bijectively on x^c·R");
        let e = self.mul(&power, &r);
        debug_assert!(self.is_idempotent(&e));
        FittingSplit {
            index: c,
            idempotent: e,
        }
    }

    /// `e·R` as a ring with unit `e`; `e` must be idempotent.
    pub fn corner(&self, e: &[BigInt]) -> Localization {
        let g = self.group();
        let span = self.mult_hom(e).image();
        let pres = g.present_subgroup(&span);
        let coords = |v: &[BigInt]| pres.coords(v).expect("element of e·R");
        let one = coords(e);
        let ring = FiniteRing::from_mul_fn(pres.group.clone(), one, |a, b| {
            coords(&self.mul(&pres.embed(a), &pres.embed(b)))
        });
        let cols: Vec<RingElement> = (0..self.rank())
            .map(|j| coords(&self.mul(e, &self.basis_element(j))))
            .collect();
        let map = GroupHom::new(
            g.clone(),
            pres.group.clone(),
            IntMatrix::from_columns(pres.group.rank(), &cols),
        )
        .expect("multiplication by e is well defined");
        Localization {
            ring,
            idempotent: self.reduce(e),
            stabilization_index: 0,
            map,
            inclusion: pres.inclusion.clone(),
        }
    }

    /// `R_f`, realized as `e·R` for the Fitting idempotent of `f`.
    pub fn localize(&self, f: &[BigInt]) -> Localization {
        let split = self.fitting_split(f);
        let mut loc = self.corner(&split.idempotent);
        loc.stabilization_index = split.index;
        loc
    }

    /// Coefficients `a_i` with `Σ a_i·f_i = 1`, if the `f_i` generate the unit ideal.
    pub fn covering_coefficients(&self, fs: &[RingElement]) -> Option<Vec<RingElement>> {
        let r = self.rank();
        let factors = self.group().factors();
        let mut rows = Vec::with_capacity(fs.len() * r);
        let mut src = Vec::with_capacity(fs.len() * r);
        for f in fs {
            let m = self.mult_matrix(f);
            for j in 0..r {
                rows.push(m.column(j));
                src.push(factors[j].clone());
            }
        }
        let images = IntMatrix::from_rows(r, &rows);
        let sol = solve_rows(&images, &src, factors, &self.one())?;
        let coeffs: Vec<RingElement> = sol.chunks(r.max(1)).take(fs.len()).map(|c| self.reduce(c)).collect();
        let coeffs = if r == 0 { vec![vec![]; fs.len()] } else { coeffs };
        debug_assert_eq!(
            coeffs
                .iter()
                .zip(fs)
                .fold(self.zero(), |acc, (a, f)| self.add(&acc, &self.mul(a, f))),
            self.one()
        );
        Some(coeffs)
    }

    pub fn is_covering(&self, fs: &[RingElement]) -> bool {
        self.covering_coefficients(fs).is_some()
    }

    /// `c` minimal with `I^c = I^{c+1}`, and the idempotent `e` with `I^c = e·R`.
    pub fn ideal_stabilization(&self, ideal: &Ideal) -> FittingSplit {
        let mut c = 0usize;
        let mut power = self.unit_ideal();
        loop {
            let next = self.ideal_product(&power, ideal);
            if next == power {
                break;
            }
            power = next;
            c += 1;
        }
        let e = self.idempotent_generator(&power);
        FittingSplit {
            index: c,
            idempotent: e,
        }
    }

    /// The idempotent generating an idempotent ideal `J = J²`.
    fn idempotent_generator(&self, j: &Ideal) -> RingElement {
        let gens = self.ideal_generators(j);
        if gens.is_empty() {
            return self.zero();
        }
        let r = self.rank();
        let t = gens.len();
        let factors = self.group().factors();
        // e = Σ y_k b_k with e·b_j = b_j for every j
        let rows: Vec<Vec<BigInt>> = gens
            .iter()
            .map(|bk| gens.iter().flat_map(|bj| self.mul(bk, bj)).collect())
            .collect();
        let images = IntMatrix::from_rows(t * r, &rows);
        let src = vec![self.characteristic(); t];
        let tgt: Vec<BigInt> = (0..t).flat_map(|_| factors.iter().cloned()).collect();
        let target: Vec<BigInt> = gens.iter().flatten().cloned().collect();
        let y = solve_rows(&images, &src, &tgt, &target).expect("idempotent ideals have an idempotent generator");
        let e = gens
            .iter()
            .zip(&y)
            .fold(self.zero(), |acc, (b, k)| self.add(&acc, &self.scale(k, b)));
        debug_assert!(self.is_idempotent(&e));
        e
    }

    /// For `|A| = p^a`: the prime and lifts of generators of `{y ∈ A/pA : y^p = y}`,
    /// an `F_p`-space whose dimension is the number of local factors of `A`.
    fn frobenius_fixed(&self) -> Option<(BigInt, Vec<RingElement>)> {
        let order = self.order();
        let p = smallest_prime_factor(&order)?;
        let mut rest = order;
        while rest.is_multiple_of(&p) {
            rest /= &p;
        }
        if !rest.is_one() {
            return None;
        }
        let g = self.group();
        let pa: Vec<RingElement> = (0..self.rank())
            .map(|i| g.scale(&p, &self.basis_element(i)))
            .collect();
        let q = g.quotient(&g.span(pa.iter()));
        let pu = p.to_u64().expect("prime fits in u64");
        let cols: Vec<RingElement> = (0..q.group.rank())
            .map(|k| {
                let gk = q.group.generator(k);
                let frob = q.projection.apply(&self.pow(&q.lift_element(&gk), pu));
                q.group.sub(&frob, &gk)
            })
            .collect();
        let h = GroupHom::new(
            q.group.clone(),
            q.group.clone(),
            IntMatrix::from_columns(q.group.rank(), &cols),
        )
        .expect("Frobenius is additive modulo p");
        let fixed = h.kernel();
        let lifts = fixed
            .generators(&q.group)
            .iter()
            .map(|y| q.lift_element(y))
            .collect();
        Some((p, lifts))
    }

    /// Whether `R` has exactly one maximal ideal.
    pub fn is_local(&self) -> bool {
        match self.frobenius_fixed() {
            // the fixed space always contains F_p·1; local iff nothing else
            Some((p, lifts)) => lifts.iter().all(|y| self.is_scalar_mod_p(y, &p)),
            None => false,
        }
    }

    fn is_scalar_mod_p(&self, y: &[BigInt], p: &BigInt) -> bool {
        let g = self.group();
        let pa: Vec<RingElement> = (0..self.rank())
            .map(|i| g.scale(p, &self.basis_element(i)))
            .collect();
        let ppow = g.span(pa.iter());
        let pu = p.to_u64().expect("prime fits in u64");
        (0..pu).any(|c| ppow.contains(&self.sub(y, &self.from_int(&BigInt::from(c)))))
    }

    /// Orthogonal primitive idempotents summing to 1, sorted by coordinates.
    pub fn primitive_idempotents(&self) -> Result<Vec<RingElement>> {
        if self.is_zero_ring() {
            return Ok(vec![]);
        }
        let r = self.rank();
        let budget = 4 * r * r;
        let mut attempts = 0usize;
        let mut done = Vec::new();
        let mut todo = vec![self.one()];
        while let Some(e) = todo.pop() {
            match self.split_idempotent(&e, &mut attempts, budget)? {
                None => done.push(e),
                Some(f) => {
                    let rest = self.sub(&e, &f);
                    todo.push(f);
                    todo.push(rest);
                }
            }
        }
        done.sort();
        Ok(done)
    }

    fn split_idempotent(
        &self,
        e: &RingElement,
        attempts: &mut usize,
        budget: usize,
    ) -> Result<Option<RingElement>> {
        let corner = self.corner(e);
        let a = &corner.ring;
        let order = a.order();
        let p = smallest_prime_factor(&order).expect("nonzero corner");
        let mut rest = order.clone();
        while rest.is_multiple_of(&p) {
            rest /= &p;
        }
        if !rest.is_one() {
            // the p-primary part is where |A|/p^a acts invertibly
            let m = self.scale(&rest, e);
            return Ok(Some(self.fitting_split(&m).idempotent));
        }
        if a.is_local() {
            return Ok(None);
        }
        let nontrivial = |f: &RingElement| !self.is_zero(f) && f != e;
        let mut candidates: Vec<RingElement> = Vec::new();
        for i in 0..self.rank() {
            candidates.push(self.mul(e, &self.basis_element(i)));
        }
        for i in 0..self.rank() {
            for j in i + 1..self.rank() {
                let (bi, bj) = (self.basis_element(i), self.basis_element(j));
                candidates.push(self.mul(e, &self.add(&bi, &bj)));
                candidates.push(self.mul(e, &self.sub(&bi, &bj)));
            }
        }
        for c in candidates {
            if *attempts >= budget {
                break;
            }
            *attempts += 1;
            let f = self.fitting_split(&c).idempotent;
            if nontrivial(&f) {
                return Ok(Some(f));
            }
        }
        // complete fallback: separate factors by the residues of Frobenius-fixed elements
        let (p, lifts) = a.frobenius_fixed().expect("prime-power order");
        let pu = p.to_u64().expect("prime fits in u64");
        for y in lifts {
            let y = corner.embed(&y);
            for c in 0..pu {
                *attempts += 1;
                let shifted = self.sub(&y, &self.scale(&BigInt::from(c), e));
                let f = self.fitting_split(&self.mul(e, &shifted)).idempotent;
                if nontrivial(&f) {
                    return Ok(Some(f));
                }
            }
        }
        Err(Error::DecompositionBoundExceeded {
            attempts: *attempts,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn fitting_examples() {
        let z12 = FiniteRing::zmod(12).unwrap();
        let s = z12.fitting_split(&ints(&[2]));
        assert_eq!((s.index, s.idempotent), (2, ints(&[4])));
        let s = z12.fitting_split(&ints(&[5]));
        assert_eq!((s.index, s.idempotent), (0, ints(&[1])));
        let z8 = FiniteRing::zmod(8).unwrap();
        let s = z8.fitting_split(&ints(&[2]));
        assert_eq!((s.index, s.idempotent), (3, ints(&[0])));
    }

    #[test]
    fn localize_examples() {
        let z12 = FiniteRing::zmod(12).unwrap();
        let l = z12.localize(&ints(&[2]));
        assert_eq!(l.ring.order(), BigInt::from(3));
        assert!(l.ring.is_unit(&l.image(&ints(&[2]))));
        let l = z12.localize(&ints(&[1]));
        assert_eq!(l.ring.order(), BigInt::from(12));
        let z8 = FiniteRing::zmod(8).unwrap();
        assert!(z8.localize(&ints(&[2])).ring.is_zero_ring());
    }

    #[test]
    fn covering_examples() {
        let z6 = FiniteRing::zmod(6).unwrap();
        let fs = vec![ints(&[3]), ints(&[4])];
        let a = z6.covering_coefficients(&fs).unwrap();
        let sum = z6.add(&z6.mul(&a[0], &fs[0]), &z6.mul(&a[1], &fs[1]));
        assert_eq!(sum, ints(&[1]));
        assert!(z6.is_covering(&[ints(&[1])]));
        assert!(!z6.is_covering(&[ints(&[2])]));
        assert!(!z6.is_covering(&[]));
    }

    #[test]
    fn stabilization_examples() {
        let z12 = FiniteRing::zmod(12).unwrap();
        let s = z12.ideal_stabilization(&z12.ideal(&[ints(&[2])]));
        assert_eq!((s.index, s.idempotent), (2, ints(&[4])));
        let s = z12.ideal_stabilization(&z12.unit_ideal());
        assert_eq!((s.index, s.idempotent), (0, ints(&[1])));
        let z8 = FiniteRing::zmod(8).unwrap();
        let s = z8.ideal_stabilization(&z8.ideal(&[ints(&[2])]));
        assert_eq!((s.index, s.idempotent), (3, ints(&[0])));
    }

    #[test]
    fn primitive_idempotent_examples() {
        let z6 = FiniteRing::zmod(6).unwrap();
        assert_eq!(z6.primitive_idempotents().unwrap(), vec![ints(&[3]), ints(&[4])]);
        let z8 = FiniteRing::zmod(8).unwrap();
        assert_eq!(z8.primitive_idempotents().unwrap(), vec![ints(&[1])]);
        let z12 = FiniteRing::zmod(12).unwrap();
        assert_eq!(z12.primitive_idempotents().unwrap(), vec![ints(&[4]), ints(&[9])]);
        assert!(FiniteRing::zero_ring().primitive_idempotents().unwrap().is_empty());
    }

    #[test]
    fn split_of_a_product_of_equal_fields() {
        let f2 = FiniteRing::zmod(2).unwrap();
        let r = FiniteRing::product(&[f2.clone(), f2.clone(), f2]);
        let ids = r.primitive_idempotents().unwrap();
        assert_eq!(ids.len(), 3);
        let total = ids.iter().fold(r.zero(), |acc, e| r.add(&acc, e));
        assert_eq!(total, r.one());
        assert!(!r.is_local());
        assert!(FiniteRing::truncated_polynomial(4, 3).unwrap().ring.is_local());
    }
}
