//! Component groups of Jacobians from special-fibre data.
//!
//! `φ(k^s) = Ker β̄ / Im ᾱ` with the permutation action of σ. `φ(k)` is
//! computed twice: as the σ-invariants of `φ(k^s)` (the oracle), and from the
//! exact sequence `0 -> Ker β / Im α -> φ(k) -> qdZ/d'Z -> 0`, whose pieces
//! come from orbit data alone.

use thiserror::Error;

use crate::cyccoh::{connecting_maps, CohomologyError, SigmaFiniteGroup, SigmaLattice};
use crate::fibre::{FibreError, SpecialFibre};
use crate::scalar::IntScalar;
use crate::zlattice::{image_lattice, kernel_lattice, quotient_group, FinAbGroup, Lattice, Matrix};

#[derive(Debug, Clone, Error)]
pub enum JacobianError<S: IntScalar> {
    #[error(transparent)]
    Fibre(#[from] FibreError),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error("oracle and exact sequence disagree: |φ(k)| = {oracle}, |Ker β/Im α| · quotient = {predicted}", oracle = display_order(.0.phi_rational_oracle.as_ref()), predicted = .0.predicted_order())]
    Inconsistent(Box<RationalReport<S>>),
}

fn display_order<S: IntScalar>(g: Option<&FinAbGroup<S>>) -> String {
    g.and_then(FinAbGroup::order).map_or_else(|| "?".into(), |o| o.to_string())
}

impl<S: IntScalar> JacobianError<S> {
    pub fn code(&self) -> &'static str {
        match self {
            JacobianError::Fibre(e) => e.code(),
            JacobianError::Cohomology(e) => e.code(),
            JacobianError::Inconsistent(_) => "INCONSISTENT",
        }
    }
}

/// `φ(k^s)` together with its presentation as a Galois module.
#[derive(Clone, Debug)]
pub struct GeometricComponentGroup<S> {
    pub group: FinAbGroup<S>,
    pub presentation: SigmaFiniteGroup<S>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalReport<S> {
    pub phi_geometric: FinAbGroup<S>,
    /// σ-invariants of `φ(k^s)`; absent when the oracle was skipped.
    pub phi_rational_oracle: Option<FinAbGroup<S>>,
    pub sub_kernel_mod_image: FinAbGroup<S>,
    pub d: S,
    pub dprime: S,
    pub v1: Vec<S>,
    pub n: S,
    pub q: S,
    pub quotient_order: S,
    pub genus: Option<S>,
    pub h1_kernel: FinAbGroup<S>,
    pub h1_image: FinAbGroup<S>,
    /// `2n = -d' V₁²`
    pub self_intersection_identity: bool,
    pub consistent: bool,
    pub notes: Vec<String>,
}

impl<S: IntScalar> RationalReport<S> {
    /// `|Ker β / Im α| · quotient_order`, the order the exact sequence predicts for `φ(k)`.
    pub fn predicted_order(&self) -> S {
        self.sub_kernel_mod_image.torsion_order() * self.quotient_order.clone()
    }
}

#[derive(Clone, Debug, Default)]
pub struct PipelineOptions {
    /// Compute the invariants oracle and compare.
    pub oracle: bool,
    /// Base point `Γ_{i,0}` for each orbit, overriding the lowest index.
    pub bases: Option<Vec<usize>>,
}

impl PipelineOptions {
    pub fn with_oracle() -> Self {
        PipelineOptions { oracle: true, bases: None }
    }
}

fn require_valid<S: IntScalar>(f: &SpecialFibre<S>) -> Result<(), FibreError> {
    f.ensure_valid().map(|_| ())
}

pub fn phi_geometric<S: IntScalar>(f: &SpecialFibre<S>) -> Result<GeometricComponentGroup<S>, JacobianError<S>> {
    require_valid(f)?;
    let ker = kernel_lattice(&f.beta_bar());
    let im = image_lattice(&f.alpha_bar());
    let presentation = SigmaFiniteGroup::new(ker, im, f.sigma_matrix())?;
    Ok(GeometricComponentGroup { group: presentation.group().clone(), presentation })
}

pub fn phi_rational_oracle<S: IntScalar>(f: &SpecialFibre<S>) -> Result<FinAbGroup<S>, JacobianError<S>> {
    Ok(phi_geometric(f)?.presentation.finite_invariants())
}

/// `Ker β / Im α` over the orbit basis.
pub fn kernel_mod_image_k<S: IntScalar>(f: &SpecialFibre<S>) -> Result<FinAbGroup<S>, JacobianError<S>> {
    require_valid(f)?;
    let (alpha, beta) = f.alpha_beta_k()?;
    let g = quotient_group(&kernel_lattice(&beta), &image_lattice(&alpha)).map_err(CohomologyError::from)?;
    Ok(g)
}

/// The map `L'` on `Z^Ī` with `L'(Γ_{i,j}) = Σ_{l<j} Γ_{i,l}`; restricted to
/// `D·Z^Ī` it is a section of `D = σ - 1`.
pub fn section_lprime<S: IntScalar>(f: &SpecialFibre<S>) -> Result<Matrix<S>, JacobianError<S>> {
    require_valid(f)?;
    Ok(lprime_for(f, None))
}

pub fn section_lprime_with_bases<S: IntScalar>(
    f: &SpecialFibre<S>,
    bases: &[usize],
) -> Result<Matrix<S>, JacobianError<S>> {
    require_valid(f)?;
    Ok(lprime_for(f, Some(bases)))
}

fn lprime_for<S: IntScalar>(f: &SpecialFibre<S>, bases: Option<&[usize]>) -> Matrix<S> {
    let n = f.num_components();
    let mut l = Matrix::zeros(n, n);
    for orbit in f.orbit_cycles(bases) {
        for (j, &c) in orbit.iter().enumerate() {
            for &prev in &orbit[..j] {
                l[(prev, c)] = S::one();
            }
        }
    }
    l
}

/// `V₁ = Σ_i (r_i d_i / d') Γ_{i,0}` in `Z^Ī`.
fn v1_for<S: IntScalar>(f: &SpecialFibre<S>, bases: Option<&[usize]>, dprime: &S) -> Vec<S> {
    let mut v = vec![S::zero(); f.num_components()];
    for orbit in f.orbit_cycles(bases) {
        let base = orbit[0];
        v[base] = S::from_count(orbit.len()) * f.components()[base].d.clone() / dprime.clone();
    }
    v
}

pub fn theorem_pipeline<S: IntScalar>(f: &SpecialFibre<S>) -> Result<RationalReport<S>, JacobianError<S>> {
    theorem_pipeline_with(f, &PipelineOptions::with_oracle())
}

pub fn theorem_pipeline_with<S: IntScalar>(
    f: &SpecialFibre<S>,
    opts: &PipelineOptions,
) -> Result<RationalReport<S>, JacobianError<S>> {
    let geometric = phi_geometric(f)?;
    let sub_kernel_mod_image = kernel_mod_image_k(f)?;
    let bases = opts.bases.as_deref();
    if let Some(b) = bases {
        check_bases(f, b)?;
    }
    let (d, dprime) = f.gcd_invariants();

    let alpha_bar = f.alpha_bar();
    let v1 = v1_for(f, bases, &dprime);
    let av1 = alpha_bar.mul_vec(&v1);
    let lav1 = lprime_for(f, bases).mul_vec(&av1);
    let n = f.beta_bar().mul_vec(&lav1).pop().expect("β̄ has one row");

    let q = dprime.clone() / dprime.gcd(&n);
    let ratio = dprime.clone() / d.clone();
    let quotient_order = ratio.clone() / ratio.gcd(&q);

    let v1_sq = v1
        .iter()
        .zip(&av1)
        .zip(f.components())
        .fold(S::zero(), |acc, ((x, y), c)| acc + x.clone() * y.clone() * c.e.clone());
    let self_intersection_identity = n.clone() * S::from_int(2) == -(dprime.clone() * v1_sq);

    let sigma = f.sigma_matrix();
    let ker = geometric.presentation.presentation().lattice().clone();
    let im = geometric.presentation.presentation().sublattice().clone();
    let h1_kernel = SigmaLattice::new(ker, sigma.clone())?.h1()?;
    let h1_image = SigmaLattice::new(im, sigma)?.h1()?;

    let phi_rational_oracle = opts.oracle.then(|| geometric.presentation.finite_invariants());

    let mut consistent = (n.clone() * S::from_int(2)) % dprime.clone() == S::zero();
    if let Some(oracle) = &phi_rational_oracle {
        let predicted = sub_kernel_mod_image.torsion_order() * quotient_order.clone();
        consistent &= oracle.order() == Some(predicted);
    }
    let genus = f.genus().cloned();
    if let Some(g) = &genus {
        let g1 = g.clone() - S::one();
        let divides = (g1.clone() % dprime.clone()).is_zero();
        consistent &= q.is_one() == divides;
        consistent &= ((n.clone() - g1) % dprime.clone()).is_zero();
    }

    let mut notes = Vec::new();
    if !quotient_order.is_one() {
        notes.push(format!("φ(k) is strictly larger than Ker β/Im α: the quotient qdZ/d'Z has order {quotient_order}"));
    }

    let report = RationalReport {
        phi_geometric: geometric.group,
        phi_rational_oracle,
        sub_kernel_mod_image,
        d,
        dprime,
        v1,
        n,
        q,
        quotient_order,
        genus,
        h1_kernel,
        h1_image,
        self_intersection_identity,
        consistent,
        notes,
    };
    if report.consistent {
        Ok(report)
    } else {
        Err(JacobianError::Inconsistent(Box::new(report)))
    }
}

fn check_bases<S: IntScalar>(f: &SpecialFibre<S>, bases: &[usize]) -> Result<(), FibreError> {
    let orbits = f.orbit_cycles(None);
    let ok = bases.len() == orbits.len() && orbits.iter().zip(bases).all(|(o, b)| o.contains(b));
    if ok {
        Ok(())
    } else {
        Err(FibreError::BadShape("each orbit needs exactly one base point inside it".into()))
    }
}

/// The image `Σ` of `Ker β` in `φ(k)` and how it sits there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbedCheck<S> {
    pub image: FinAbGroup<S>,
    pub index: S,
    pub holds: bool,
}

/// Maps `λ(Ker β)` into `φ(k^s)` and checks it realizes `Ker β / Im α`
/// as a subgroup of the invariants with index `quotient_order`.
pub fn embed_check<S: IntScalar>(f: &SpecialFibre<S>) -> Result<EmbedCheck<S>, JacobianError<S>> {
    let report = match theorem_pipeline(f) {
        Ok(r) => r,
        Err(JacobianError::Inconsistent(r)) => *r,
        Err(e) => return Err(e),
    };
    let (_, beta) = f.alpha_beta_k()?;
    let lam = f.lambda_map();
    let im_bar = image_lattice(&f.alpha_bar());
    let lifted = image_lattice(&(&lam * kernel_lattice(&beta).basis()));
    let span = lifted.sum(&im_bar).map_err(CohomologyError::from)?;
    let image = quotient_group(&span, &im_bar).map_err(CohomologyError::from)?;
    let oracle_order = report.phi_rational_oracle.as_ref().and_then(FinAbGroup::order).expect("oracle was requested");
    let index = oracle_order / image.torsion_order();
    let holds = image == report.sub_kernel_mod_image && index == report.quotient_order;
    Ok(EmbedCheck { image, index, holds })
}

/// Orders attached to the two short exact sequences
/// `0 -> Z V₀ -> Z^Ī -> Im ᾱ -> 0` and `0 -> Ker β̄ -> Z^Ī -> β̄(Z^Ī) -> 0`,
/// with the connecting maps computed from lifts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionOrders<S> {
    pub h1_image: FinAbGroup<S>,
    pub h1_kernel: FinAbGroup<S>,
    /// image of `δ₁ : H¹(Im ᾱ) -> H²(Z V₀)`
    pub delta1_image: FinAbGroup<S>,
    pub delta1_injective: bool,
    /// image of `δ₀ : β̄(Z^Ī) -> H¹(Ker β̄)`
    pub delta0_image: FinAbGroup<S>,
}

pub fn transition_orders<S: IntScalar>(f: &SpecialFibre<S>) -> Result<TransitionOrders<S>, JacobianError<S>> {
    require_valid(f)?;
    let sigma = f.sigma_matrix();
    let n = f.num_components();
    let full = SigmaLattice::new(Lattice::full(n), sigma.clone())?;
    let alpha_bar = f.alpha_bar();
    let beta_bar = f.beta_bar();

    let v0 = SigmaLattice::new(kernel_lattice(&alpha_bar), sigma.clone())?;
    let seq_a = connecting_maps(&v0, &full, &alpha_bar)?;
    let ker = SigmaLattice::new(kernel_lattice(&beta_bar), sigma)?;
    let seq_b = connecting_maps(&ker, &full, &beta_bar)?;

    Ok(TransitionOrders {
        h1_image: seq_a.quotient.h1()?,
        h1_kernel: ker.h1()?,
        delta1_image: seq_a.delta1.image(),
        delta1_injective: seq_a.delta1.is_injective(),
        delta0_image: seq_b.delta0.image(),
    })
}
