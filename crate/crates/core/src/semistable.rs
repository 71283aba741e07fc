//! Abelian varieties with semi-stable reduction, given by their uniformization
//! data: a lattice `M` with action σ_M, the character lattice `X` of the toric
//! part with action σ_X, and an equivariant pairing `P` with
//! `⟨m, x⟩ = mᵀ P x`.
//!
//! The component group is `φ_A = Hom(X, Z) / Pᵀ M`. The dual action on
//! `Hom(X, Z)` is `σ_X^{-T}`, which makes `m ↦ Pᵀ m` equivariant exactly when
//! `σ_Mᵀ P σ_X = P`.

use std::fmt;

use thiserror::Error;

use crate::cyccoh::{order_of, CohomologyError, SigmaFiniteGroup, SigmaLattice};
use crate::scalar::IntScalar;
use crate::zlattice::{
    coords_in_lattice, hnf_with_transform, image_lattice, kernel_lattice, FinAbGroup, Lattice, Matrix,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniformizationDatum<S> {
    pub rank_t: usize,
    pub sigma_x: Matrix<S>,
    pub sigma_m: Matrix<S>,
    pub pairing: Matrix<S>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DatumViolation {
    Shape(String),
    NotCyclic(&'static str),
    OrderMismatch { x: u64, m: u64 },
    NotEquivariant,
    Degenerate,
}

impl DatumViolation {
    pub fn code(&self) -> &'static str {
        match self {
            DatumViolation::Shape(_) => "SCHEMA",
            DatumViolation::NotCyclic(_) => "NOT_CYCLIC",
            DatumViolation::OrderMismatch { .. } => "ORDER_MISMATCH",
            DatumViolation::NotEquivariant => "NOT_EQUIVARIANT",
            DatumViolation::Degenerate => "DEGENERATE",
        }
    }
}

impl fmt::Display for DatumViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DatumViolation::Shape(msg) => write!(f, "{msg}"),
            DatumViolation::NotCyclic(which) => write!(f, "{which} is not an automorphism of finite order"),
            DatumViolation::OrderMismatch { x, m } => write!(f, "σ_X has order {x} but σ_M has order {m}"),
            DatumViolation::NotEquivariant => write!(f, "σ_Mᵀ P σ_X differs from P"),
            DatumViolation::Degenerate => write!(f, "pairing matrix is singular"),
        }
    }
}

#[derive(Debug, Clone, Error)]
pub enum SemistableError<S: IntScalar> {
    #[error("invalid datum: {}", .0.iter().map(|v| format!("{}: {}", v.code(), v)).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<DatumViolation>),
    #[error("the computed Σ does not inject into φ_A(k)")]
    EmbedFail,
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error("bounds violated: |φ_A(k)| = {}, |Σ| = {}, |H¹(G, M)| = {}", .0.phi_a_rational, .0.sigma_subgroup, .0.h1_m)]
    Inconsistent(Box<SemistableReport<S>>),
}

impl<S: IntScalar> SemistableError<S> {
    pub fn code(&self) -> &'static str {
        match self {
            SemistableError::Invalid(v) => v.first().map_or("INVALID", DatumViolation::code),
            SemistableError::EmbedFail => "EMBED_FAIL",
            SemistableError::Cohomology(e) => e.code(),
            SemistableError::Inconsistent(_) => "INCONSISTENT",
        }
    }
}

impl<S: IntScalar> UniformizationDatum<S> {
    pub fn new(rank_t: usize, sigma_x: Matrix<S>, sigma_m: Matrix<S>, pairing: Matrix<S>) -> Self {
        UniformizationDatum { rank_t, sigma_x, sigma_m, pairing }
    }

    /// Trivial actions on both lattices.
    pub fn split(pairing: Matrix<S>) -> Self {
        let t = pairing.rows();
        UniformizationDatum::new(t, Matrix::identity(t), Matrix::identity(t), pairing)
    }

    pub fn validate(&self) -> Vec<DatumViolation> {
        let t = self.rank_t;
        let mut out = Vec::new();
        for (name, m) in [("σ_X", &self.sigma_x), ("σ_M", &self.sigma_m), ("pairing", &self.pairing)] {
            if m.shape() != (t, t) {
                out.push(DatumViolation::Shape(format!("{name} is {}x{}, expected {t}x{t}", m.rows(), m.cols())));
            }
        }
        if !out.is_empty() {
            return out;
        }
        let ox = order_of(&self.sigma_x);
        let om = order_of(&self.sigma_m);
        if ox.is_none() {
            out.push(DatumViolation::NotCyclic("σ_X"));
        }
        if om.is_none() {
            out.push(DatumViolation::NotCyclic("σ_M"));
        }
        if let (Some(x), Some(m)) = (ox, om) {
            if x != m {
                out.push(DatumViolation::OrderMismatch { x, m });
            }
        }
        let twisted = &(&self.sigma_m.transpose() * &self.pairing) * &self.sigma_x;
        if twisted != self.pairing {
            out.push(DatumViolation::NotEquivariant);
        }
        if self.pairing.determinant().is_zero() {
            out.push(DatumViolation::Degenerate);
        }
        out
    }

    pub fn ensure_valid(&self) -> Result<(), SemistableError<S>> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(SemistableError::Invalid(v))
        }
    }

    pub fn order(&self) -> u64 {
        order_of(&self.sigma_x).expect("validated datum")
    }

    /// `σ_X^{-T}`, the action on `Hom(X, Z)`.
    pub fn dual_action(&self) -> Matrix<S> {
        self.sigma_x.pow(self.order() - 1).transpose()
    }

    /// Matrix of `i : M -> Hom(X, Z)`, `m ↦ Pᵀ m`.
    pub fn injection(&self) -> Matrix<S> {
        self.pairing.transpose()
    }

    pub fn is_split(&self) -> bool {
        self.sigma_x.is_identity() && self.sigma_m.is_identity()
    }
}

/// `φ_A = Hom(X, Z) / Pᵀ M` with the dual action.
pub fn phi_a_group<S: IntScalar>(u: &UniformizationDatum<S>) -> Result<SigmaFiniteGroup<S>, SemistableError<S>> {
    u.ensure_valid()?;
    let t = u.rank_t;
    Ok(SigmaFiniteGroup::new(Lattice::full(t), image_lattice(&u.injection()), u.dual_action())?)
}

pub fn phi_a_rational<S: IntScalar>(u: &UniformizationDatum<S>) -> Result<FinAbGroup<S>, SemistableError<S>> {
    Ok(phi_a_group(u)?.finite_invariants())
}

/// `Hom(X, Z)^G`, the invariant covectors.
pub fn phi_e_rational<S: IntScalar>(u: &UniformizationDatum<S>) -> Lattice<S> {
    kernel_lattice(&(&u.sigma_x.transpose() - &Matrix::identity(u.rank_t)))
}

/// `M^G`
pub fn phi_m_rational<S: IntScalar>(u: &UniformizationDatum<S>) -> Lattice<S> {
    kernel_lattice(&(&u.sigma_m - &Matrix::identity(u.rank_t)))
}

/// `Σ = Hom(X, Z)^G / i(M^G)`, after checking that it injects into `φ_A`,
/// i.e. that `Hom(X, Z)^G ∩ i(M) = i(M^G)`.
pub fn sigma_subgroup<S: IntScalar>(u: &UniformizationDatum<S>) -> Result<FinAbGroup<S>, SemistableError<S>> {
    u.ensure_valid()?;
    let e = phi_e_rational(u);
    let im_mg = image_lattice(&(&u.injection() * phi_m_rational(u).basis()));
    let im_m = image_lattice(&u.injection());
    let meet = e.intersection(&im_m).map_err(CohomologyError::from)?;
    if meet != im_mg {
        return Err(SemistableError::EmbedFail);
    }
    Ok(crate::zlattice::quotient_group(&e, &im_mg).map_err(CohomologyError::from)?)
}

pub fn h1_of_m<S: IntScalar>(u: &UniformizationDatum<S>) -> Result<FinAbGroup<S>, SemistableError<S>> {
    u.ensure_valid()?;
    Ok(SigmaLattice::ambient(u.sigma_m.clone())?.h1()?)
}

/// Image of the connecting map `φ_A(k) -> H¹(G, M)`, `[x] ↦ [y]` where
/// `Pᵀ y = σ* x - x`.
pub fn connecting_image<S: IntScalar>(u: &UniformizationDatum<S>) -> Result<FinAbGroup<S>, SemistableError<S>> {
    let phi = phi_a_group(u)?;
    let t = u.rank_t;
    let pt = u.injection();
    let dec = hnf_with_transform(&pt);
    let basis = image_lattice(&pt);
    let diff = &u.dual_action() - &Matrix::identity(t);
    let h1 = SigmaLattice::ambient(u.sigma_m.clone())?.h1_presentation()?;
    let mut cols = Vec::new();
    for x in phi.invariant_preimage().basis_vectors() {
        let dx = diff.mul_vec(&x);
        let c = coords_in_lattice(&basis, &dx).map_err(CohomologyError::from)?.ok_or(SemistableError::EmbedFail)?;
        let y = dec.transform.mul_vec(&c);
        debug_assert_eq!(pt.mul_vec(&y), dx);
        cols.push(h1.classify(&y).map_err(CohomologyError::from)?);
    }
    Ok(h1.subgroup_generated(&Matrix::from_columns(h1.group().num_generators(), &cols)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemistableReport<S> {
    pub phi_a: FinAbGroup<S>,
    pub phi_a_rational: FinAbGroup<S>,
    pub sigma_subgroup: FinAbGroup<S>,
    pub h1_m: FinAbGroup<S>,
    /// image of `φ_A(k)` in `H¹(G, M)`; isomorphic to `φ_A(k) / Σ`
    pub connecting_image: FinAbGroup<S>,
    pub phi_e_rank: usize,
    pub phi_m_rank: usize,
    pub split: bool,
    pub bounds_ok: bool,
}

pub fn semistable_report<S: IntScalar>(u: &UniformizationDatum<S>) -> Result<SemistableReport<S>, SemistableError<S>> {
    let phi = phi_a_group(u)?;
    let phi_a = phi.group().clone();
    let phi_a_rational = phi.finite_invariants();
    let sigma_subgroup = sigma_subgroup(u)?;
    let h1_m = h1_of_m(u)?;
    let connecting_image = connecting_image(u)?;
    let split = u.is_split();

    let (fk, sg, h1) = (phi_a_rational.torsion_order(), sigma_subgroup.torsion_order(), h1_m.torsion_order());
    let (ratio, rem) = fk.div_rem(&sg);
    let mut bounds_ok = rem.is_zero() && (h1 % ratio.clone()).is_zero();
    bounds_ok &= connecting_image.torsion_order() == ratio;
    if split {
        bounds_ok &= sigma_subgroup == phi_a_rational && phi_a_rational == phi_a && h1_m.is_trivial();
    }
    let report = SemistableReport {
        phi_a,
        phi_a_rational,
        sigma_subgroup,
        h1_m,
        connecting_image,
        phi_e_rank: phi_e_rational(u).rank(),
        phi_m_rank: phi_m_rational(u).rank(),
        split,
        bounds_ok,
    };
    if report.bounds_ok {
        Ok(report)
    } else {
        Err(SemistableError::Inconsistent(Box::new(report)))
    }
}
