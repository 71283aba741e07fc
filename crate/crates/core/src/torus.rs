//! Tori with multiplicative reduction, described by the Galois action on the
//! character lattice `X`. The component group is `Hom(X, Z)` and its rational
//! points are the invariant covectors, which equal `Hom(X_G, Z)` for the
//! largest torsion-free quotient `X_G` of `X` with trivial action.

use thiserror::Error;

use crate::cyccoh::order_of;
use crate::scalar::IntScalar;
use crate::zlattice::{hnf, kernel_lattice, snf, FinAbGroup, Lattice, Matrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TorusError {
    #[error("σ must be a square matrix of size {rank}, got {rows}x{cols}")]
    Shape { rank: usize, rows: usize, cols: usize },
    #[error("σ has infinite order (or is not invertible over Z)")]
    NotFiniteOrder,
}

impl TorusError {
    pub fn code(&self) -> &'static str {
        match self {
            TorusError::Shape { .. } => "SCHEMA",
            TorusError::NotFiniteOrder => "NOT_FINITE_ORDER",
        }
    }
}

/// Character lattice `X = Z^rank` with the action of a generator σ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterLattice<S> {
    rank: usize,
    sigma: Matrix<S>,
    order: u64,
}

impl<S: IntScalar> CharacterLattice<S> {
    pub fn new(rank: usize, sigma: Matrix<S>) -> Result<Self, TorusError> {
        if sigma.shape() != (rank, rank) {
            return Err(TorusError::Shape { rank, rows: sigma.rows(), cols: sigma.cols() });
        }
        let order = order_of(&sigma).ok_or(TorusError::NotFiniteOrder)?;
        Ok(CharacterLattice { rank, sigma, order })
    }

    /// The split torus of dimension `rank`.
    pub fn split(rank: usize) -> Self {
        CharacterLattice { rank, sigma: Matrix::identity(rank), order: 1 }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn sigma(&self) -> &Matrix<S> {
        &self.sigma
    }

    pub fn order(&self) -> u64 {
        self.order
    }
}

/// `X_G`: its rank and the projection `X -> X_G`, normalized so that its rows
/// are in Hermite form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coinvariants<S> {
    pub rank: usize,
    pub projection: Matrix<S>,
}

/// `X_G = (X / W) / torsion` with `W = (1 - σ) X`. The Smith form of `1 - σ`
/// splits off the torsion; the zero diagonal entries are the free directions.
pub fn coinvariants_free<S: IntScalar>(x: &CharacterLattice<S>) -> Coinvariants<S> {
    let n = x.rank;
    let w = &Matrix::identity(n) - &x.sigma;
    let dec = snf(&w);
    let r = dec.rank();
    let free: Vec<usize> = (r..n).collect();
    let raw = dec.u.select_rows(&free);
    let projection = hnf(&raw.transpose()).transpose();
    Coinvariants { rank: n - r, projection }
}

/// `Hom(X, Z)^G = ker(σᵀ - 1)`, the rational points of the component group.
pub fn invariant_dual<S: IntScalar>(x: &CharacterLattice<S>) -> Lattice<S> {
    let n = x.rank;
    kernel_lattice(&(&x.sigma.transpose() - &Matrix::identity(n)))
}

/// `Hom(X_G, Z)` pulled back along the projection, inside `Hom(X, Z)`.
pub fn split_part_dual<S: IntScalar>(x: &CharacterLattice<S>) -> Lattice<S> {
    let c = coinvariants_free(x);
    Lattice::span(&c.projection.transpose())
}

/// Whether `Hom(X_G, Z) -> Hom(X, Z)^G` is onto, compared as lattices.
pub fn lemma31_check<S: IntScalar>(x: &CharacterLattice<S>) -> bool {
    split_part_dual(x) == invariant_dual(x)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusReport<S> {
    pub rank: usize,
    pub order: u64,
    /// `φ_T(k^s) = Hom(X, Z)`
    pub phi_geometric: FinAbGroup<S>,
    /// `φ_T(k) = Hom(X, Z)^G`, always free
    pub phi_rational: FinAbGroup<S>,
    pub invariant_dual: Lattice<S>,
    pub coinvariant_rank: usize,
    pub projection: Matrix<S>,
    pub split: bool,
    pub ranks_agree: bool,
    pub lemma_holds: bool,
    pub notes: Vec<String>,
}

const FINITE_PART: &str = "phi_rational is the part coming from the largest split subtorus; for a general torus it \
has finite index in the rational points of the component group, and that finite quotient is not computed";

pub fn torus_report<S: IntScalar>(x: &CharacterLattice<S>) -> TorusReport<S> {
    let c = coinvariants_free(x);
    let inv = invariant_dual(x);
    let pulled = Lattice::span(&c.projection.transpose());
    TorusReport {
        rank: x.rank,
        order: x.order,
        phi_geometric: FinAbGroup::free(x.rank),
        phi_rational: FinAbGroup::free(inv.rank()),
        ranks_agree: inv.rank() == c.rank,
        lemma_holds: pulled == inv,
        invariant_dual: inv,
        coinvariant_rank: c.rank,
        projection: c.projection,
        split: x.sigma.is_identity(),
        notes: vec![FINITE_PART.to_string()],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    type M = Matrix<BigInt>;

    fn lat(rows: &[[i64; 2]]) -> CharacterLattice<BigInt> {
        CharacterLattice::new(2, M::from_i64_rows(rows)).unwrap()
    }

    #[test]
    fn swap_coinvariants() {
        let c = coinvariants_free(&lat(&[[0, 1], [1, 0]]));
        assert_eq!(c.rank, 1);
        assert_eq!(c.projection, M::from_i64_rows(&[[1, 1]]));
    }

    #[test]
    fn negation_has_no_coinvariants() {
        let x = CharacterLattice::new(1, M::from_i64_rows(&[[-1]])).unwrap();
        assert_eq!(coinvariants_free(&x).rank, 0);
        assert_eq!(invariant_dual(&x).rank(), 0);
        assert!(lemma31_check(&x));
    }

    #[test]
    fn split_torus() {
        let x: CharacterLattice<BigInt> = CharacterLattice::split(3);
        let c = coinvariants_free(&x);
        assert_eq!(c.rank, 3);
        assert_eq!(c.projection, M::identity(3));
        assert_eq!(invariant_dual(&x), Lattice::full(3));
        let r = torus_report(&x);
        assert!(r.split && r.lemma_holds && r.ranks_agree);
        assert_eq!(r.phi_rational, FinAbGroup::free(3));
    }

    #[test]
    fn swap_invariant_dual_is_diagonal() {
        let x = lat(&[[0, 1], [1, 0]]);
        let inv = invariant_dual(&x);
        assert_eq!(inv.rank(), 1);
        assert!(inv.contains(&[BigInt::from(1), BigInt::from(1)]));
        assert!(lemma31_check(&x));
    }

    #[test]
    fn torsion_in_coinvariants_is_dropped() {
        // X/W = Z/2 + Z
        let x = lat(&[[-1, 0], [0, 1]]);
        let c = coinvariants_free(&x);
        assert_eq!(c.rank, 1);
        assert_eq!(c.projection, M::from_i64_rows(&[[0, 1]]));
        assert!(lemma31_check(&x));
        let x = lat(&[[-1, 0], [1, 1]]);
        assert_eq!(x.order(), 2);
        assert_eq!(coinvariants_free(&x).rank, 1);
        assert!(lemma31_check(&x));
    }

    #[test]
    fn rejects_bad_actions() {
        let e = CharacterLattice::new(2, M::from_i64_rows(&[[1, 1], [0, 1]])).unwrap_err();
        assert_eq!(e.code(), "NOT_FINITE_ORDER");
        let e = CharacterLattice::new(2, M::from_i64_rows(&[[2, 0], [0, 1]])).unwrap_err();
        assert_eq!(e.code(), "NOT_FINITE_ORDER");
        let e = CharacterLattice::new(3, M::identity(2)).unwrap_err();
        assert_eq!(e.code(), "SCHEMA");
    }

    #[test]
    fn order_three_rotation() {
        let x = lat(&[[0, -1], [1, -1]]);
        assert_eq!(x.order(), 3);
        let r = torus_report(&x);
        assert_eq!(r.coinvariant_rank, 0);
        assert!(r.phi_rational.is_trivial());
        assert!(r.lemma_holds);
    }
}
