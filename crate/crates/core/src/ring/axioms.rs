use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::FiniteRing;

/// One failed basis-level ring identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum AxiomFailure {
    /// `d_i·(e_i·e_j) ≠ 0`.
    WellDefined { i: usize, j: usize },
    Commutativity { i: usize, j: usize },
    Associativity { i: usize, j: usize, k: usize },
    /// `1·e_i ≠ e_i`.
    Unit { i: usize },
}

impl fmt::Display for AxiomFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomFailure::WellDefined { i, j } => {
                write!(f, "e{i}*e{j} is not killed by the order of e{i}")
            }
            AxiomFailure::Commutativity { i, j } => write!(f, "e{i}*e{j} != e{j}*e{i}"),
            AxiomFailure::Associativity { i, j, k } => {
                write!(f, "(e{i}*e{j})*e{k} != e{i}*(e{j}*e{k})")
            }
            AxiomFailure::Unit { i } => write!(f, "1*e{i} != e{i}"),
        }
    }
}

impl FiniteRing {
    /// Every basis-level identity that fails, in a fixed order.
    pub fn check_axioms(&self) -> Vec<AxiomFailure> {
        let r = self.rank();
        let g = self.group();
        let basis: Vec<Vec<BigInt>> = (0..r).map(|i| self.basis_element(i)).collect();
        let prod = |i: usize, j: usize| self.basis_action(i).column(j);
        let mut out = Vec::new();
        for i in 0..r {
            for j in 0..r {
                if !g.is_zero(&g.scale(&g.factors()[i], &prod(i, j)))
                    || !g.is_zero(&g.scale(&g.factors()[j], &prod(i, j)))
                {
                    out.push(AxiomFailure::WellDefined { i, j });
                }
            }
        }
        for i in 0..r {
            for j in i + 1..r {
                if g.reduce(&prod(i, j)) != g.reduce(&prod(j, i)) {
                    out.push(AxiomFailure::Commutativity { i, j });
                }
            }
        }
        for i in 0..r {
            for j in 0..r {
                let ij = prod(i, j);
                for k in 0..r {
                    let left = self.mul(&ij, &basis[k]);
                    let right = self.mul(&basis[i], &prod(j, k));
                    if left != right {
                        out.push(AxiomFailure::Associativity { i, j, k });
                    }
                }
            }
        }
        for (i, b) in basis.iter().enumerate() {
            if self.mul(&self.one(), b) != *b {
                out.push(AxiomFailure::Unit { i });
            }
        }
        out
    }
}
