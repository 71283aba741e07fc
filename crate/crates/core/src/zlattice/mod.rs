//! Exact integer linear algebra: normal forms, kernel and image lattices,
//! membership, and presentations of finitely generated quotients.

mod group;
mod lattice;
mod matrix;
mod normal_form;

pub use group::FinAbGroup;
pub(crate) use lattice::subgroup_of_orders;
pub use lattice::{
    coordinate_matrix, coords_in_lattice, image_lattice, kernel_lattice, preimage_lattice, quotient_group, Lattice,
    QuotientPresentation,
};
pub use matrix::Matrix;
pub use normal_form::{hnf, hnf_with_transform, inverse_unimodular, snf, HermiteDecomposition, SmithDecomposition};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("not a sublattice: some generator lies outside the ambient lattice")]
    NotSublattice,
    #[error("vector is not a member of the lattice")]
    NotMember,
    #[error("bad shape: {0}")]
    Shape(String),
}

impl LatticeError {
    pub fn code(&self) -> &'static str {
        match self {
            LatticeError::DimensionMismatch(_) => "DIMENSION_MISMATCH",
            LatticeError::NotSublattice => "NOT_SUBLATTICE",
            LatticeError::NotMember => "NOT_MEMBER",
            LatticeError::Shape(_) => "SCHEMA",
        }
    }
}
