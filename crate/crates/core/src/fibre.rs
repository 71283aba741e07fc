//! Special fibres of regular curve models with a Galois permutation of the
//! geometric components.
//!
//! The input is the geometric intersection matrix over the separable closure,
//! the multiplicities `d` and geometric multiplicities `e` of each geometric
//! component, and a permutation σ generating the Galois action. Orbit data
//! (the numbers `r_i` and the intersection numbers over `k`) is derived.
//!
//! Orbits are ordered by their lowest component index, and the lowest index
//! of each orbit is its base point `Γ_{i,0}`; `Γ_{i,j} = σ^j(Γ_{i,0})`.

use std::collections::VecDeque;
use std::fmt;

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::scalar::{gcd_all, IntScalar};
use crate::zlattice::Matrix;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GeomComponent<S> {
    /// multiplicity in the special fibre
    pub d: S,
    /// geometric multiplicity
    pub e: S,
}

impl<S: IntScalar> GeomComponent<S> {
    pub fn new(d: S, e: S) -> Self {
        GeomComponent { d, e }
    }

    pub fn reduced(d: S) -> Self {
        GeomComponent { d, e: S::one() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialFibre<S> {
    components: Vec<GeomComponent<S>>,
    sigma: Vec<usize>,
    intersections: Matrix<S>,
    genus: Option<S>,
    hypothesis_ok: bool,
}

/// A violated input constraint. Each kind has a stable error code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Shape(String),
    NotCyclic(String),
    Asymmetric { a: usize, b: usize },
    NegativeIntersection { a: usize, b: usize },
    NotEquivariant { a: usize, b: usize },
    OrbitDataVaries { component: usize },
    RowSumNonzero { component: usize },
    EDivisibility { row: usize, col: usize },
    Disconnected,
    GenusD { d: String, genus: String },
    GenusDPrime { dprime: String, genus: String },
}

impl Violation {
    pub fn code(&self) -> &'static str {
        match self {
            Violation::Shape(_) => "SCHEMA",
            Violation::NotCyclic(_) => "NOT_CYCLIC",
            Violation::Asymmetric { .. } => "ASYMMETRIC",
            Violation::NegativeIntersection { .. } => "NEGATIVE_INTERSECTION",
            Violation::NotEquivariant { .. } => "NOT_EQUIVARIANT",
            Violation::OrbitDataVaries { .. } => "ORBIT_DATA_VARIES",
            Violation::RowSumNonzero { .. } => "ROW_SUM_NONZERO",
            Violation::EDivisibility { .. } => "E_DIVISIBILITY",
            Violation::Disconnected => "DISCONNECTED",
            Violation::GenusD { .. } => "GENUS_D",
            Violation::GenusDPrime { .. } => "GENUS_DPRIME",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Shape(msg) => write!(f, "{msg}"),
            Violation::NotCyclic(msg) => write!(f, "{msg}"),
            Violation::Asymmetric { a, b } => write!(f, "intersection matrix differs at ({a},{b}) and ({b},{a})"),
            Violation::NegativeIntersection { a, b } => {
                write!(f, "distinct components {a} and {b} have negative intersection")
            }
            Violation::NotEquivariant { a, b } => {
                write!(f, "intersection number at ({a},{b}) is not preserved by σ")
            }
            Violation::OrbitDataVaries { component } => {
                write!(f, "d or e differs between component {component} and its σ-image")
            }
            Violation::RowSumNonzero { component } => {
                write!(f, "component {component} has nonzero intersection with the whole fibre")
            }
            Violation::EDivisibility { row, col } => {
                write!(f, "e of component {col} does not divide the intersection number at ({row},{col})")
            }
            Violation::Disconnected => write!(f, "dual graph of the fibre is disconnected"),
            Violation::GenusD { d, genus } => write!(f, "d = {d} does not divide g - 1 (g = {genus})"),
            Violation::GenusDPrime { dprime, genus } => {
                write!(f, "d' = {dprime} does not divide 2g - 2 (g = {genus})")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Warning {
    /// The intersection matrix is not negative semidefinite.
    NotNegativeSemidefinite,
    /// The caller did not assert that k is perfect or that an étale quasi-section exists.
    HypothesisNotAsserted,
}

impl Warning {
    pub fn code(&self) -> &'static str {
        match self {
            Warning::NotNegativeSemidefinite => "NOT_NEGATIVE_SEMIDEFINITE",
            Warning::HypothesisNotAsserted => "HYPOTHESIS_NOT_ASSERTED",
        }
    }
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::NotNegativeSemidefinite => write!(f, "intersection matrix is not negative semidefinite"),
            Warning::HypothesisNotAsserted => {
                write!(f, "hypothesis (k perfect or étale quasi-section) not asserted; results are conditional")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub warnings: Vec<Warning>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn codes(&self) -> Vec<&'static str> {
        self.violations.iter().map(Violation::code).collect()
    }

    fn push_once(&mut self, v: Violation) {
        if !self.violations.iter().any(|w| w.code() == v.code()) {
            self.violations.push(v);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FibreError {
    #[error("invalid fibre: {}", .0.violations.iter().map(|v| format!("{}: {}", v.code(), v)).collect::<Vec<_>>().join("; "))]
    Invalid(ValidationReport),
    #[error("α is not integral at orbit ({row}, {col}): r·e does not divide the k-level intersection number")]
    Integrality { row: usize, col: usize },
    #[error("bad fixture shape: {0}")]
    BadShape(String),
}

impl FibreError {
    pub fn code(&self) -> &'static str {
        match self {
            FibreError::Invalid(r) => r.violations.first().map_or("INVALID", Violation::code),
            FibreError::Integrality { .. } => "INTEGRALITY",
            FibreError::BadShape(_) => "BAD_SHAPE",
        }
    }
}

/// Orbit data over `k`: one entry per σ-orbit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitSummary<S> {
    /// Each orbit listed as `Γ_{i,0}, Γ_{i,1} = σ(Γ_{i,0}), ...`.
    pub orbits: Vec<Vec<usize>>,
    /// `r_i`, the number of geometric components over `Γ_i`.
    pub r: Vec<usize>,
    /// `⟨Γ_i, Γ_l⟩_k`, the sum of geometric intersection numbers over both orbits.
    pub k_intersections: Matrix<S>,
}

impl<S: IntScalar> OrbitSummary<S> {
    pub fn orbit_reps(&self) -> Vec<usize> {
        self.orbits.iter().map(|o| o[0]).collect()
    }

    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    /// Index of the orbit containing each geometric component.
    pub fn orbit_of(&self) -> Vec<usize> {
        let n = self.orbits.iter().map(Vec::len).sum();
        let mut out = vec![0; n];
        for (i, o) in self.orbits.iter().enumerate() {
            for &a in o {
                out[a] = i;
            }
        }
        out
    }

    /// Checks `⟨Γ_i, Γ_l⟩_k = r_i ⟨Γ_{i,0}, λ(Γ_l)⟩ = r_l ⟨λ(Γ_i), Γ_{l,0}⟩`.
    pub fn is_consistent_with(&self, m: &Matrix<S>) -> bool {
        let k = self.len();
        (0..k).all(|i| {
            (0..k).all(|l| {
                let row_sum = self.orbits[l].iter().fold(S::zero(), |acc, &b| acc + m[(self.orbits[i][0], b)].clone());
                let col_sum = self.orbits[i].iter().fold(S::zero(), |acc, &a| acc + m[(a, self.orbits[l][0])].clone());
                let kk = &self.k_intersections[(i, l)];
                *kk == row_sum * S::from_count(self.r[i]) && *kk == col_sum * S::from_count(self.r[l])
            })
        })
    }
}

impl<S: IntScalar> SpecialFibre<S> {
    pub fn new(
        components: Vec<GeomComponent<S>>,
        sigma: Vec<usize>,
        intersections: Matrix<S>,
        genus: Option<S>,
        hypothesis_ok: bool,
    ) -> Self {
        SpecialFibre { components, sigma, intersections, genus, hypothesis_ok }
    }

    /// Builds a fibre from multiplicities and off-diagonal intersection data;
    /// self-intersections are solved from `Σ_b d_b M[a][b] = 0`.
    /// Returns `None` if some self-intersection would not be an integer.
    pub fn from_graph(
        components: Vec<GeomComponent<S>>,
        edges: &[(usize, usize, S)],
        sigma: Vec<usize>,
        genus: Option<S>,
    ) -> Option<Self> {
        let n = components.len();
        let mut m: Matrix<S> = Matrix::zeros(n, n);
        for (a, b, w) in edges {
            assert_ne!(a, b, "self-loops are given through the diagonal");
            m[(*a, *b)] = m[(*a, *b)].clone() + w.clone();
            m[(*b, *a)] = m[(*b, *a)].clone() + w.clone();
        }
        for a in 0..n {
            let s = (0..n).fold(S::zero(), |acc, b| acc + components[b].d.clone() * m[(a, b)].clone());
            let (q, r) = s.div_rem(&components[a].d);
            if !r.is_zero() {
                return None;
            }
            m[(a, a)] = -q;
        }
        Some(SpecialFibre::new(components, sigma, m, genus, true))
    }

    pub fn components(&self) -> &[GeomComponent<S>] {
        &self.components
    }

    pub fn num_components(&self) -> usize {
        self.components.len()
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    pub fn intersections(&self) -> &Matrix<S> {
        &self.intersections
    }

    pub fn genus(&self) -> Option<&S> {
        self.genus.as_ref()
    }

    pub fn hypothesis_ok(&self) -> bool {
        self.hypothesis_ok
    }

    pub fn with_genus(mut self, genus: Option<S>) -> Self {
        self.genus = genus;
        self
    }

    pub fn with_hypothesis(mut self, ok: bool) -> Self {
        self.hypothesis_ok = ok;
        self
    }

    /// Relabels components: component `a` becomes `perm[a]`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let n = self.num_components();
        let mut inv = vec![0; n];
        for (a, &p) in perm.iter().enumerate() {
            inv[p] = a;
        }
        let components = (0..n).map(|p| self.components[inv[p]].clone()).collect();
        let sigma = (0..n).map(|p| perm[self.sigma[inv[p]]]).collect();
        let intersections = Matrix::from_fn(n, n, |p, q| self.intersections[(inv[p], inv[q])].clone());
        SpecialFibre { components, sigma, intersections, genus: self.genus.clone(), hypothesis_ok: self.hypothesis_ok }
    }

    /// Permutation matrix `P` with `P e_a = e_{σ(a)}`.
    pub fn sigma_matrix(&self) -> Matrix<S> {
        let n = self.num_components();
        let mut p = Matrix::zeros(n, n);
        for a in 0..n {
            p[(self.sigma[a], a)] = S::one();
        }
        p
    }

    /// Order of σ: lcm of its cycle lengths.
    pub fn sigma_order(&self) -> u64 {
        self.orbit_cycles(None).iter().fold(1u64, |acc, o| num_integer::lcm(acc, o.len() as u64))
    }

    fn sigma_is_permutation(&self) -> bool {
        let n = self.num_components();
        let mut seen = vec![false; n];
        self.sigma.len() == n && self.sigma.iter().all(|&s| s < n && !std::mem::replace(&mut seen[s], true))
    }

    /// σ-cycles, each starting at its base point. `bases[i]`, when given,
    /// overrides the base point of orbit `i` (orbits ordered by lowest index).
    pub fn orbit_cycles(&self, bases: Option<&[usize]>) -> Vec<Vec<usize>> {
        let n = self.num_components();
        let mut seen = vec![false; n];
        let mut orbits = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut a = start;
            while !seen[a] {
                seen[a] = true;
                cycle.push(a);
                a = self.sigma[a];
            }
            orbits.push(cycle);
        }
        if let Some(bases) = bases {
            for (cycle, &base) in orbits.iter_mut().zip(bases) {
                let pos = cycle.iter().position(|&a| a == base).expect("base point must lie in its orbit");
                cycle.rotate_left(pos);
            }
        }
        orbits
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let n = self.num_components();
        let m = &self.intersections;
        if m.shape() != (n, n) {
            report.push_once(Violation::Shape(format!(
                "intersection matrix is {}x{}, expected {n}x{n}",
                m.rows(),
                m.cols()
            )));
            return report;
        }
        if self.components.iter().any(|c| c.d < S::one() || c.e < S::one()) {
            report.push_once(Violation::Shape("multiplicities d and e must be positive".into()));
            return report;
        }
        if n == 0 {
            report.push_once(Violation::Shape("a fibre needs at least one component".into()));
            return report;
        }
        if let Some(g) = &self.genus {
            if g.is_negative() {
                report.push_once(Violation::Shape("genus must be nonnegative".into()));
                return report;
            }
        }
        if !self.sigma_is_permutation() {
            report.push_once(Violation::NotCyclic("σ is not a permutation of the component indices".into()));
            return report;
        }

        for a in 0..n {
            for b in 0..n {
                if m[(a, b)] != m[(b, a)] {
                    report.push_once(Violation::Asymmetric { a, b });
                }
                if a != b && m[(a, b)].is_negative() {
                    report.push_once(Violation::NegativeIntersection { a, b });
                }
                if m[(self.sigma[a], self.sigma[b])] != m[(a, b)] {
                    report.push_once(Violation::NotEquivariant { a, b });
                }
                if !(m[(a, b)].clone() % self.components[b].e.clone()).is_zero() {
                    report.push_once(Violation::EDivisibility { row: a, col: b });
                }
            }
            if self.components[self.sigma[a]] != self.components[a] {
                report.push_once(Violation::OrbitDataVaries { component: a });
            }
            let s = (0..n).fold(S::zero(), |acc, b| acc + self.components[b].d.clone() * m[(a, b)].clone());
            if !s.is_zero() {
                report.push_once(Violation::RowSumNonzero { component: a });
            }
        }
        if !self.dual_graph_connected() {
            report.push_once(Violation::Disconnected);
        }

        if let Some(g) = &self.genus {
            let (d, dprime) = self.gcd_invariants();
            let g1 = g.clone() - S::one();
            if !(g1.clone() % d.clone()).is_zero() {
                report.push_once(Violation::GenusD { d: d.to_string(), genus: g.to_string() });
            }
            let two_g2 = g1 * S::from_int(2);
            if !(two_g2 % dprime.clone()).is_zero() {
                report.push_once(Violation::GenusDPrime { dprime: dprime.to_string(), genus: g.to_string() });
            }
        }

        if report.violations.iter().all(|v| !matches!(v, Violation::Asymmetric { .. })) && !is_negative_semidefinite(m)
        {
            report.warnings.push(Warning::NotNegativeSemidefinite);
        }
        if !self.hypothesis_ok {
            report.warnings.push(Warning::HypothesisNotAsserted);
        }
        report
    }

    pub fn ensure_valid(&self) -> Result<ValidationReport, FibreError> {
        let report = self.validate();
        if report.is_ok() {
            Ok(report)
        } else {
            Err(FibreError::Invalid(report))
        }
    }

    fn dual_graph_connected(&self) -> bool {
        let n = self.num_components();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(a) = queue.pop_front() {
            for b in 0..n {
                if !seen[b] && a != b && self.intersections[(a, b)].is_positive() {
                    seen[b] = true;
                    queue.push_back(b);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Matrix of `ᾱ` on `Z^Ī`: entry `(j, v) = M[v][j] / e_j`.
    pub fn alpha_bar(&self) -> Matrix<S> {
        let n = self.num_components();
        Matrix::from_fn(n, n, |j, v| self.intersections[(v, j)].clone() / self.components[j].e.clone())
    }

    /// `β̄(Δ_j) = d_j e_j`, as a single row.
    pub fn beta_bar(&self) -> Matrix<S> {
        Matrix::row_vector(self.components.iter().map(|c| c.d.clone() * c.e.clone()).collect())
    }

    pub fn k_level(&self) -> OrbitSummary<S> {
        self.k_level_with_bases(None)
    }

    pub fn k_level_with_bases(&self, bases: Option<&[usize]>) -> OrbitSummary<S> {
        let orbits = self.orbit_cycles(bases);
        let r = orbits.iter().map(Vec::len).collect();
        let k = orbits.len();
        let k_intersections = Matrix::from_fn(k, k, |i, l| {
            let mut s = S::zero();
            for &a in &orbits[i] {
                for &b in &orbits[l] {
                    s = s + self.intersections[(a, b)].clone();
                }
            }
            s
        });
        OrbitSummary { orbits, r, k_intersections }
    }

    /// Matrices of `α` and `β` on `Z^I` in the orbit basis:
    /// `α(Γ_l) = Σ_i ⟨Γ_l, Γ_i⟩_k / (r_i e_i) Γ_i` and `β(Γ_i) = r_i d_i e_i`.
    pub fn alpha_beta_k(&self) -> Result<(Matrix<S>, Matrix<S>), FibreError> {
        let summary = self.k_level();
        let k = summary.len();
        let re: Vec<S> = summary
            .orbits
            .iter()
            .zip(&summary.r)
            .map(|(o, &r)| S::from_count(r) * self.components[o[0]].e.clone())
            .collect();
        let mut alpha = Matrix::zeros(k, k);
        for i in 0..k {
            for l in 0..k {
                let (q, rem) = summary.k_intersections[(l, i)].div_rem(&re[i]);
                if !rem.is_zero() {
                    return Err(FibreError::Integrality { row: i, col: l });
                }
                alpha[(i, l)] = q;
            }
        }
        let beta = Matrix::row_vector(
            summary.orbits.iter().zip(&re).map(|(o, re)| re.clone() * self.components[o[0]].d.clone()).collect(),
        );
        Ok((alpha, beta))
    }

    /// `λ : Z^I -> Z^Ī`, sending an orbit to the sum of its geometric components.
    pub fn lambda_map(&self) -> Matrix<S> {
        let orbits = self.orbit_cycles(None);
        let n = self.num_components();
        let mut l = Matrix::zeros(n, orbits.len());
        for (i, o) in orbits.iter().enumerate() {
            for &a in o {
                l[(a, i)] = S::one();
            }
        }
        l
    }

    /// `(d, d')` with `d = gcd d_i` and `d' = gcd r_i d_i` over the orbits.
    pub fn gcd_invariants(&self) -> (S, S) {
        let orbits = self.orbit_cycles(None);
        let ds: Vec<S> = orbits.iter().map(|o| self.components[o[0]].d.clone()).collect();
        let rds: Vec<S> = orbits.iter().map(|o| S::from_count(o.len()) * self.components[o[0]].d.clone()).collect();
        (gcd_all(&ds), gcd_all(&rds))
    }
}

/// Exact test that the symmetric matrix `m` is negative semidefinite,
/// by rational elimination on `-m`.
pub fn is_negative_semidefinite<S: IntScalar>(m: &Matrix<S>) -> bool {
    let n = m.rows();
    let mut a: Vec<Vec<Ratio<S>>> =
        (0..n).map(|i| (0..n).map(|j| Ratio::from_integer(-m[(i, j)].clone())).collect()).collect();
    for k in 0..n {
        let p = a[k][k].clone();
        if p.is_negative() {
            return false;
        }
        if p.is_zero() {
            if (k + 1..n).any(|j| !a[k][j].is_zero()) {
                return false;
            }
            continue;
        }
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = a[i][k].clone() / p.clone();
            for j in k..n {
                let v = a[i][j].clone() - f.clone() * a[k][j].clone();
                a[i][j] = v;
            }
        }
    }
    true
}

/// An `n`-cycle of `(-2)`-curves with `d = e = 1` and genus 1. With
/// `involution`, σ is the reflection `a ↦ -a mod n`, which fixes components
/// `0` and `n/2`; `n` must then be even.
pub fn make_cycle_fixture<S: IntScalar>(n_components: usize, involution: bool) -> Result<SpecialFibre<S>, FibreError> {
    let n = n_components;
    if n < 2 {
        return Err(FibreError::BadShape(format!("a cycle needs at least 2 components, got {n}")));
    }
    if involution && n % 2 == 1 {
        return Err(FibreError::BadShape(format!("reflection fixing two components needs an even cycle, got {n}")));
    }
    let mut m = Matrix::zeros(n, n);
    for a in 0..n {
        m[(a, a)] = S::from_int(-2);
        let b = (a + 1) % n;
        m[(a, b)] = m[(a, b)].clone() + S::one();
        m[(b, a)] = m[(b, a)].clone() + S::one();
    }
    let sigma = if involution { (0..n).map(|a| (n - a) % n).collect() } else { (0..n).collect() };
    let components = vec![GeomComponent::reduced(S::one()); n];
    Ok(SpecialFibre::new(components, sigma, m, Some(S::one()), true))
}
