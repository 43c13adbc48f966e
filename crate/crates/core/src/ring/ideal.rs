use num_bigint::BigInt;

use super::{FiniteRing, RingElement};
use crate::linalg::{GroupElement, Subgroup};

/// An ideal, stored as the canonical basis of its additive span.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ideal {
    span: Subgroup,
}

impl Ideal {
    pub fn span(&self) -> &Subgroup {
        &self.span
    }

    pub fn contains(&self, a: &[BigInt]) -> bool {
        self.span.contains(a)
    }

    pub fn is_subset_of(&self, other: &Ideal) -> bool {
        self.span.is_subset_of(&other.span)
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.span.is_whole()
    }
}

impl FiniteRing {
    /// The ideal generated by `gens`.
    pub fn ideal(&self, gens: &[RingElement]) -> Ideal {
        let mut add_gens: Vec<GroupElement> = Vec::with_capacity(gens.len() * self.rank());
        for g in gens {
            let m = self.mult_matrix(g);
            add_gens.extend(m.column_vecs());
        }
        Ideal {
            span: self.group().span(add_gens.iter()),
        }
    }

    pub fn unit_ideal(&self) -> Ideal {
        Ideal {
            span: self.group().whole(),
        }
    }

    pub fn zero_ideal(&self) -> Ideal {
        Ideal {
            span: self.group().zero_subgroup(),
        }
    }

    /// Nonzero additive generators of `I`.
    pub fn ideal_generators(&self, i: &Ideal) -> Vec<RingElement> {
        i.span.generators(self.group())
    }

    pub fn ideal_order(&self, i: &Ideal) -> BigInt {
        self.group().subgroup_order(&i.span)
    }

    pub fn ideal_sum(&self, a: &Ideal, b: &Ideal) -> Ideal {
        Ideal {
            span: self.group().sum(&a.span, &b.span),
        }
    }

    pub fn ideal_intersection(&self, a: &Ideal, b: &Ideal) -> Ideal {
        Ideal {
            span: self.group().intersect(&a.span, &b.span),
        }
    }

    pub fn ideal_product(&self, a: &Ideal, b: &Ideal) -> Ideal {
        let ga = self.ideal_generators(a);
        let gb = self.ideal_generators(b);
        let prods: Vec<RingElement> = ga
            .iter()
            .flat_map(|x| gb.iter().map(move |y| (x, y)))
            .map(|(x, y)| self.mul(x, y))
            .collect();
        Ideal {
            span: self.group().span(prods.iter()),
        }
    }

    /// `Iⁿ`, with `I⁰ = R`.
    pub fn ideal_power(&self, i: &Ideal, n: usize) -> Ideal {
        let mut acc = self.unit_ideal();
        for _ in 0..n {
            acc = self.ideal_product(&acc, i);
        }
        acc
    }

    /// `(x_1^{m_1}, ..., x_j^{m_j})`.
    pub fn power_ideal(&self, xs: &[RingElement], exps: &[u64]) -> Ideal {
        let gens: Vec<RingElement> = xs.iter().zip(exps).map(|(x, &m)| self.pow(x, m)).collect();
        self.ideal(&gens)
    }

    /// `I :_R x = {r : x·r ∈ I}`.
    pub fn ideal_colon(&self, i: &Ideal, x: &[BigInt]) -> Ideal {
        Ideal {
            span: self.mult_hom(x).preimage(&i.span),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn principal_ideals_of_z12() {
        let r = FiniteRing::zmod(12).unwrap();
        let two = r.ideal(&[ints(&[2])]);
        assert_eq!(r.ideal_order(&two), BigInt::from(6));
        assert_eq!(r.ideal(&[ints(&[10])]), two);
        let sq = r.ideal_power(&two, 2);
        assert_eq!(sq, r.ideal(&[ints(&[4])]));
        assert_eq!(r.ideal_power(&two, 3), sq);
        assert_eq!(r.ideal_power(&two, 0), r.unit_ideal());
        assert!(r.ideal(&[ints(&[2]), ints(&[3])]).is_unit_ideal());
    }

    #[test]
    fn colon_and_intersection() {
        let r = FiniteRing::zmod(12).unwrap();
        let four = r.ideal(&[ints(&[4])]);
        assert_eq!(r.ideal_colon(&four, &ints(&[2])), r.ideal(&[ints(&[2])]));
        let six = r.ideal(&[ints(&[6])]);
        assert_eq!(r.ideal_intersection(&four, &six), r.zero_ideal());
    }
}
