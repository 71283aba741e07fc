//! Exact computation of Néron component groups from combinatorial data.
//!
//! Three kinds of input are supported:
//!
//! * a special fibre of a regular curve model with a Galois permutation of its
//!   components ([`fibre`], [`jacobian`]),
//! * the character lattice of a torus with a finite-order action ([`torus`]),
//! * uniformization data of a semi-stable abelian variety ([`semistable`]).
//!
//! Everything is generic over an exact integer type ([`IntScalar`]). The
//! aliases below fix it to [`num_bigint::BigInt`]; `i64` and `i128` also work
//! when entries stay small.

pub mod cyccoh;
pub mod fibre;
pub mod fixtures;
pub mod jacobian;
pub mod scalar;
pub mod semistable;
pub mod torus;
pub mod zlattice;

pub use num_bigint::BigInt;
pub use scalar::IntScalar;

pub type Int = BigInt;
pub type IntMatrix = zlattice::Matrix<Int>;
pub type Group = zlattice::FinAbGroup<Int>;
pub type IntLattice = zlattice::Lattice<Int>;
pub type Fibre = fibre::SpecialFibre<Int>;
pub type Component = fibre::GeomComponent<Int>;
pub type Datum = semistable::UniformizationDatum<Int>;
pub type Characters = torus::CharacterLattice<Int>;
pub type JacobianReport = jacobian::RationalReport<Int>;
pub type TorusSummary = torus::TorusReport<Int>;
pub type SemistableSummary = semistable::SemistableReport<Int>;
