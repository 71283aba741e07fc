//! Galois modules for a finite cyclic group `G = <σ>` and their Tate cohomology.
//!
//! For a `G`-module `M` with norm `N = 1 + σ + ... + σ^(m-1)` and difference
//! `D = σ - 1` we use
//!
//! ```text
//! H^1(G, M) = ker(N) / D M        H^2(G, M) = M^G / N M
//! ```
//!
//! All lattices live in a fixed ambient `Z^n` on which σ acts by an integer matrix.

use thiserror::Error;

use crate::scalar::IntScalar;
use crate::zlattice::{
    coords_in_lattice, hnf_with_transform, image_lattice, preimage_lattice, quotient_group, subgroup_of_orders,
    FinAbGroup, Lattice, LatticeError, Matrix, QuotientPresentation,
};

/// Largest multiplicative order searched for a general (non-permutation) action.
pub const MAX_GENERAL_ORDER: u64 = 1024;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CohomologyError {
    #[error("σ does not map the lattice into itself")]
    NotStable,
    #[error("σ does not generate a finite cyclic group (order exceeds {MAX_GENERAL_ORDER} or matrix not invertible)")]
    NotCyclic,
    #[error("group order {given} is not a multiple of the order {actual} of σ")]
    OrderMismatch { given: u64, actual: u64 },
    #[error("sequence is not exact: {0}")]
    NotExact(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

impl CohomologyError {
    pub fn code(&self) -> &'static str {
        match self {
            CohomologyError::NotStable => "NOT_STABLE",
            CohomologyError::NotCyclic => "NOT_CYCLIC",
            CohomologyError::OrderMismatch { .. } => "ORDER_MISMATCH",
            CohomologyError::NotExact(_) => "NOT_EXACT",
            CohomologyError::Lattice(e) => e.code(),
        }
    }
}

/// Order of a finite-order integer matrix. Permutation matrices (up to sign)
/// are handled by cycle decomposition; anything else by repeated multiplication.
pub fn order_of<S: IntScalar>(sigma: &Matrix<S>) -> Option<u64> {
    if !sigma.is_square() {
        return None;
    }
    if let Some(order) = signed_permutation_order(sigma) {
        return Some(order);
    }
    sigma.multiplicative_order(MAX_GENERAL_ORDER)
}

fn signed_permutation_order<S: IntScalar>(sigma: &Matrix<S>) -> Option<u64> {
    let n = sigma.rows();
    // image[j] = (i, sign) with σ e_j = sign * e_i
    let mut image = Vec::with_capacity(n);
    let mut hit = vec![false; n];
    for j in 0..n {
        let mut found = None;
        for i in 0..n {
            let x = &sigma[(i, j)];
            if x.is_zero() {
                continue;
            }
            if found.is_some() || !x.abs().is_one() {
                return None;
            }
            found = Some((i, x.is_negative()));
        }
        let (i, neg) = found?;
        if std::mem::replace(&mut hit[i], true) {
            return None;
        }
        image.push((i, neg));
    }
    let mut order: u64 = 1;
    let mut seen = vec![false; n];
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let (mut len, mut neg, mut j) = (0u64, false, start);
        while !seen[j] {
            seen[j] = true;
            let (i, s) = image[j];
            neg ^= s;
            len += 1;
            j = i;
        }
        let cycle = if neg { 2 * len } else { len };
        order = num_integer::lcm(order, cycle);
    }
    Some(order)
}

/// A lattice with a finite-order automorphism σ, viewed as a module over `G = Z/m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaLattice<S> {
    lattice: Lattice<S>,
    sigma: Matrix<S>,
    order: u64,
}

impl<S: IntScalar> SigmaLattice<S> {
    /// `G` defaults to the cyclic group generated by σ, i.e. `m = ord(σ)`.
    pub fn new(lattice: Lattice<S>, sigma: Matrix<S>) -> Result<Self, CohomologyError> {
        if sigma.rows() != lattice.ambient_rank() || !sigma.is_square() {
            return Err(LatticeError::DimensionMismatch(format!(
                "σ is {}x{} but the lattice lives in Z^{}",
                sigma.rows(),
                sigma.cols(),
                lattice.ambient_rank()
            ))
            .into());
        }
        let order = order_of(&sigma).ok_or(CohomologyError::NotCyclic)?;
        for b in lattice.basis_vectors() {
            if !lattice.contains(&sigma.mul_vec(&b)) {
                return Err(CohomologyError::NotStable);
            }
        }
        Ok(SigmaLattice { lattice, sigma, order })
    }

    /// The whole ambient `Z^n` with action σ.
    pub fn ambient(sigma: Matrix<S>) -> Result<Self, CohomologyError> {
        Self::new(Lattice::full(sigma.rows()), sigma)
    }

    /// Treat the action as one of `Z/m` for a multiple `m` of `ord(σ)`.
    pub fn with_order(mut self, m: u64) -> Result<Self, CohomologyError> {
        if m == 0 || !m.is_multiple_of(self.order) {
            return Err(CohomologyError::OrderMismatch { given: m, actual: self.order });
        }
        self.order = m;
        Ok(self)
    }

    pub fn lattice(&self) -> &Lattice<S> {
        &self.lattice
    }

    pub fn sigma(&self) -> &Matrix<S> {
        &self.sigma
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn ambient_rank(&self) -> usize {
        self.lattice.ambient_rank()
    }

    /// `D = σ - 1` on the ambient space.
    pub fn difference(&self) -> Matrix<S> {
        &self.sigma - &Matrix::identity(self.ambient_rank())
    }

    /// `N = 1 + σ + ... + σ^(m-1)` on the ambient space.
    pub fn norm(&self) -> Matrix<S> {
        norm_of(self)
    }

    /// Presentation of `ker(N) ∩ L / D L`.
    pub fn h1_presentation(&self) -> Result<QuotientPresentation<S>, CohomologyError> {
        let n = self.ambient_rank();
        let ker_n = preimage_lattice(&self.lattice, &self.norm(), &Lattice::zero(n))?;
        let d_l = self.lattice.map(&self.difference())?;
        Ok(QuotientPresentation::new(&ker_n, &d_l)?)
    }

    /// Presentation of `L^G / N L`.
    pub fn h2_presentation(&self) -> Result<QuotientPresentation<S>, CohomologyError> {
        let fixed = self.invariants();
        let n_l = self.lattice.map(&self.norm())?;
        Ok(QuotientPresentation::new(&fixed, &n_l)?)
    }

    pub fn h1(&self) -> Result<FinAbGroup<S>, CohomologyError> {
        Ok(self.h1_presentation()?.group().clone())
    }

    pub fn h2(&self) -> Result<FinAbGroup<S>, CohomologyError> {
        Ok(self.h2_presentation()?.group().clone())
    }

    /// `L^G = ker(σ - 1) ∩ L`.
    pub fn invariants(&self) -> Lattice<S> {
        preimage_lattice(&self.lattice, &self.difference(), &Lattice::zero(self.ambient_rank()))
            .expect("σ - 1 is square on the ambient space")
    }
}

/// `N = Σ_{0 <= j < m} σ^j`.
pub fn norm_of<S: IntScalar>(m: &SigmaLattice<S>) -> Matrix<S> {
    let n = m.ambient_rank();
    let mut acc = Matrix::zeros(n, n);
    let mut p = Matrix::identity(n);
    for _ in 0..m.order {
        acc = &acc + &p;
        p = &p * &m.sigma;
    }
    acc
}

pub fn h1<S: IntScalar>(m: &SigmaLattice<S>) -> Result<FinAbGroup<S>, CohomologyError> {
    m.h1()
}

pub fn h2<S: IntScalar>(m: &SigmaLattice<S>) -> Result<FinAbGroup<S>, CohomologyError> {
    m.h2()
}

pub fn invariants_lattice<S: IntScalar>(m: &SigmaLattice<S>) -> Lattice<S> {
    m.invariants()
}

/// A finitely generated quotient `l / m` of σ-stable lattices, with the induced action.
#[derive(Clone, Debug)]
pub struct SigmaFiniteGroup<S> {
    presentation: QuotientPresentation<S>,
    sigma: Matrix<S>,
}

impl<S: IntScalar> SigmaFiniteGroup<S> {
    pub fn new(l: Lattice<S>, m: Lattice<S>, sigma: Matrix<S>) -> Result<Self, CohomologyError> {
        if sigma.rows() != l.ambient_rank() || !sigma.is_square() {
            return Err(LatticeError::DimensionMismatch("σ does not act on the ambient space".into()).into());
        }
        let presentation = QuotientPresentation::new(&l, &m)?;
        for lat in [&l, &m] {
            for b in lat.basis_vectors() {
                if !lat.contains(&sigma.mul_vec(&b)) {
                    return Err(CohomologyError::NotStable);
                }
            }
        }
        Ok(SigmaFiniteGroup { presentation, sigma })
    }

    pub fn group(&self) -> &FinAbGroup<S> {
        self.presentation.group()
    }

    pub fn presentation(&self) -> &QuotientPresentation<S> {
        &self.presentation
    }

    pub fn sigma(&self) -> &Matrix<S> {
        &self.sigma
    }

    /// Lattice `{x in l : σx - x in m}` whose image in `l / m` is the fixed subgroup.
    pub fn invariant_preimage(&self) -> Lattice<S> {
        let d = &self.sigma - &Matrix::identity(self.sigma.rows());
        preimage_lattice(self.presentation.lattice(), &d, self.presentation.sublattice())
            .expect("shapes checked at construction")
    }

    /// The σ-fixed subgroup of `l / m`.
    pub fn finite_invariants(&self) -> FinAbGroup<S> {
        quotient_group(&self.invariant_preimage(), self.presentation.sublattice())
            .expect("m lies in the invariant preimage")
    }

    /// Matrix of the induced automorphism on the generator coordinates of the
    /// presentation (entries reduced modulo the generator orders).
    pub fn induced_action(&self) -> Matrix<S> {
        let p = &self.presentation;
        let cols: Vec<Vec<S>> =
            p.generators().iter().map(|g| p.classify(&self.sigma.mul_vec(g)).expect("σ preserves l")).collect();
        Matrix::from_columns(p.group().num_generators(), &cols)
    }
}

pub fn finite_invariants<S: IntScalar>(q: &SigmaFiniteGroup<S>) -> FinAbGroup<S> {
    q.finite_invariants()
}

/// A homomorphism between presented groups: column `k` holds the target
/// coordinates of the image of source generator `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom<S> {
    pub source: FinAbGroup<S>,
    pub target: FinAbGroup<S>,
    pub matrix: Matrix<S>,
}

impl<S: IntScalar> GroupHom<S> {
    pub fn image(&self) -> FinAbGroup<S> {
        subgroup_of_orders(&self.target.generator_orders(), &self.matrix)
    }

    pub fn is_zero(&self) -> bool {
        self.image().is_trivial()
    }

    /// Injective iff the image is as large as the (finite) source.
    pub fn is_injective(&self) -> bool {
        self.source.is_finite() && self.image() == self.source
    }
}

/// The two connecting maps attached to `0 -> sub -> mid -> Q -> 0`.
#[derive(Clone, Debug)]
pub struct ConnectingMaps<S> {
    /// `Q` in coordinates of the image lattice, with the induced action.
    pub quotient: SigmaLattice<S>,
    /// basis of `Q^G`, in quotient coordinates
    pub quotient_invariants: Lattice<S>,
    /// `δ0 : Q^G -> H^1(G, sub)`, `x ↦ [D y]`
    pub delta0: GroupHom<S>,
    /// `δ1 : H^1(G, Q) -> H^2(G, sub)`, `[x] ↦ [N y]`
    pub delta1: GroupHom<S>,
}

/// Connecting maps for the sequence `0 -> sub -> mid -> quot_map(mid) -> 0`,
/// where `y` ranges over preimages in `mid`.
pub fn connecting_maps<S: IntScalar>(
    sub: &SigmaLattice<S>,
    mid: &SigmaLattice<S>,
    quot_map: &Matrix<S>,
) -> Result<ConnectingMaps<S>, CohomologyError> {
    if sub.ambient_rank() != mid.ambient_rank() || quot_map.cols() != mid.ambient_rank() {
        return Err(
            LatticeError::DimensionMismatch("sub, mid and the quotient map disagree on the ambient".into()).into()
        );
    }
    if sub.sigma != mid.sigma {
        return Err(CohomologyError::NotExact("sub and mid carry different actions".into()));
    }
    let order = num_integer::lcm(sub.order, mid.order);
    let sub = sub.clone().with_order(order)?;
    let mid = mid.clone().with_order(order)?;

    let target_rank = quot_map.rows();
    let kernel = preimage_lattice(&mid.lattice, quot_map, &Lattice::zero(target_rank))?;
    if kernel != sub.lattice {
        return Err(CohomologyError::NotExact("sub is not the kernel of the quotient map on mid".into()));
    }

    // image basis and chosen lifts
    let fb = quot_map * mid.lattice.basis();
    let dec = hnf_with_transform(&fb);
    let q_rank = dec.rank;
    let idx: Vec<usize> = (0..q_rank).collect();
    let image = image_lattice(&fb);
    debug_assert_eq!(image.basis(), &dec.h.select_columns(&idx));
    let lifts = mid.lattice.basis() * &dec.transform.select_columns(&idx);
    let lift = |x: &[S]| lifts.mul_vec(x);

    let mut sigma_q_cols = Vec::with_capacity(q_rank);
    for j in 0..q_rank {
        let y = lifts.column(j);
        let fy = quot_map.mul_vec(&mid.sigma.mul_vec(&y));
        let c = coords_in_lattice(&image, &fy)?.ok_or(CohomologyError::NotStable)?;
        sigma_q_cols.push(c);
    }
    let quotient = SigmaLattice::ambient(Matrix::from_columns(q_rank, &sigma_q_cols))?.with_order(order)?;

    let h1_sub = sub.h1_presentation()?;
    let h2_sub = sub.h2_presentation()?;
    let d = mid.difference();
    let n = mid.norm();

    let q_fixed = quotient.invariants();
    let mut d0_cols = Vec::new();
    for x in q_fixed.basis_vectors() {
        let dy = d.mul_vec(&lift(&x));
        d0_cols.push(h1_sub.classify(&dy).map_err(|_| CohomologyError::NotExact("D y not in sub".into()))?);
    }
    let delta0 = GroupHom {
        source: FinAbGroup::free(q_fixed.rank()),
        target: h1_sub.group().clone(),
        matrix: Matrix::from_columns(h1_sub.group().num_generators(), &d0_cols),
    };

    let h1_q = quotient.h1_presentation()?;
    let mut d1_cols = Vec::new();
    for x in h1_q.generators() {
        let ny = n.mul_vec(&lift(x));
        d1_cols.push(h2_sub.classify(&ny).map_err(|_| CohomologyError::NotExact("N y not in sub^G".into()))?);
    }
    let delta1 = GroupHom {
        source: h1_q.group().clone(),
        target: h2_sub.group().clone(),
        matrix: Matrix::from_columns(h2_sub.group().num_generators(), &d1_cols),
    };

    Ok(ConnectingMaps { quotient, quotient_invariants: q_fixed, delta0, delta1 })
}
