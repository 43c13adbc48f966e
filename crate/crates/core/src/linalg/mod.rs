//! Exact integer linear algebra and finite abelian groups.

mod group;
pub(crate) mod lattice;
mod matrix;
mod normal_form;

pub use group::{
    cokernel_presentation, DirectSum, FinAbGroup, GroupElement, GroupHom, Presentation, Quotient,
    Subgroup, SubgroupPresentation,
};
pub(crate) use group::{kernel_rows, solve_rows};
pub use matrix::IntMatrix;
pub use normal_form::{hnf, hnf_only, snf, snf_full, SmithForm};
