//! Ready-made special fibres: the two-component hyperelliptic degeneration
//! and the Kodaira configurations of elliptic fibres (split, σ trivial).

use crate::fibre::{make_cycle_fixture, FibreError, GeomComponent, SpecialFibre};
use crate::scalar::IntScalar;
use crate::zlattice::Matrix;

/// Two lines meeting transversally in `g + 1` points, swapped by σ;
/// the generic fibre has genus `g`.
pub fn hyperelliptic<S: IntScalar>(g: u32) -> Result<SpecialFibre<S>, FibreError> {
    if g == 0 {
        return Err(FibreError::BadShape("genus must be at least 1".into()));
    }
    let w = S::from_int(i64::from(g) + 1);
    let m = Matrix::from_fn(2, 2, |a, b| if a == b { -w.clone() } else { w.clone() });
    Ok(SpecialFibre::new(
        vec![GeomComponent::reduced(S::one()); 2],
        vec![1, 0],
        m,
        Some(S::from_int(i64::from(g))),
        true,
    ))
}

/// The reflection-symmetric `2n`-cycle: a line over `k`, `n - 1` pairs of
/// conjugate lines, and a conic.
pub fn conic_chain<S: IntScalar>(n: usize) -> Result<SpecialFibre<S>, FibreError> {
    if n == 0 {
        return Err(FibreError::BadShape("chain length must be at least 1".into()));
    }
    make_cycle_fixture(2 * n, true)
}

fn split_tree<S: IntScalar>(mults: &[i64], edges: &[(usize, usize)]) -> SpecialFibre<S> {
    let comps = mults.iter().map(|&d| GeomComponent::reduced(S::from_int(d))).collect();
    let edges: Vec<_> = edges.iter().map(|&(a, b)| (a, b, S::one())).collect();
    SpecialFibre::from_graph(comps, &edges, (0..mults.len()).collect(), Some(S::one()))
        .expect("Kodaira multiplicities give integral self-intersections")
}

/// Split `I_n`: a nodal curve for `n = 1`, otherwise an `n`-cycle of lines.
pub fn kodaira_i<S: IntScalar>(n: usize) -> Result<SpecialFibre<S>, FibreError> {
    match n {
        0 => Err(FibreError::BadShape("I_0 is good reduction; use a single component".into())),
        1 => Ok(single_component(1)),
        _ => make_cycle_fixture(n, false),
    }
}

/// Good reduction, or a cuspidal curve (type II): one reduced component.
pub fn kodaira_ii<S: IntScalar>() -> SpecialFibre<S> {
    single_component(1)
}

fn single_component<S: IntScalar>(d: i64) -> SpecialFibre<S> {
    SpecialFibre::new(vec![GeomComponent::reduced(S::from_int(d))], vec![0], Matrix::zeros(1, 1), Some(S::one()), true)
}

/// Two lines tangent at one point.
pub fn kodaira_iii<S: IntScalar>() -> SpecialFibre<S> {
    let comps = vec![GeomComponent::reduced(S::one()); 2];
    SpecialFibre::from_graph(comps, &[(0, 1, S::from_int(2))], vec![0, 1], Some(S::one())).expect("integral")
}

/// Three concurrent lines.
pub fn kodaira_iv<S: IntScalar>() -> SpecialFibre<S> {
    split_tree(&[1, 1, 1], &[(0, 1), (0, 2), (1, 2)])
}

/// `I_n^*`: a chain of `n + 1` double lines with two reduced tails at each end.
pub fn kodaira_i_star<S: IntScalar>(n: usize) -> SpecialFibre<S> {
    let mut mults = vec![2; n + 1];
    mults.extend([1, 1, 1, 1]);
    let mut edges: Vec<(usize, usize)> = (0..n).map(|a| (a, a + 1)).collect();
    edges.extend([(0, n + 1), (0, n + 2), (n, n + 3), (n, n + 4)]);
    split_tree(&mults, &edges)
}

pub fn kodaira_iv_star<S: IntScalar>() -> SpecialFibre<S> {
    split_tree(&[3, 2, 1, 2, 1, 2, 1], &[(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)])
}

pub fn kodaira_iii_star<S: IntScalar>() -> SpecialFibre<S> {
    split_tree(&[1, 2, 3, 4, 3, 2, 1, 2], &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (3, 7)])
}

pub fn kodaira_ii_star<S: IntScalar>() -> SpecialFibre<S> {
    split_tree(&[1, 2, 3, 4, 5, 6, 4, 2, 3], &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (5, 8)])
}
