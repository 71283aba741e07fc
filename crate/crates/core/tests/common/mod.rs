//! Random generators shared by the integration, property and acceptance tests.
#![allow(dead_code)]

pub mod oracle;

use neron_core::fibre::{GeomComponent, SpecialFibre};
use neron_core::semistable::UniformizationDatum;
use neron_core::zlattice::Matrix;
use neron_core::{BigInt, IntMatrix};
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Fibre = SpecialFibre<BigInt>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    Cycle,
    Chain,
    Star,
}

/// Graph with a symmetry: undirected edges and a permutation of the vertices
/// mapping edges to edges.
struct SymGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    sigma: Vec<usize>,
}

fn cycle_graph(n: usize, reflect: bool, rotate: bool) -> SymGraph {
    let edges = (0..n).map(|a| (a, (a + 1) % n)).collect();
    let sigma = if reflect {
        (0..n).map(|a| (n - a) % n).collect()
    } else if rotate {
        (0..n).map(|a| (a + 1) % n).collect()
    } else {
        (0..n).collect()
    };
    SymGraph { n, edges, sigma }
}

fn chain_graph(n: usize, reflect: bool) -> SymGraph {
    let edges = (0..n.saturating_sub(1)).map(|a| (a, a + 1)).collect();
    let sigma = if reflect { (0..n).map(|a| n - 1 - a).collect() } else { (0..n).collect() };
    SymGraph { n, edges, sigma }
}

/// Centre `0` with `arms` arms of length `len`; σ rotates the arms by `shift`.
fn star_graph(arms: usize, len: usize, shift: usize) -> SymGraph {
    let n = 1 + arms * len;
    let vertex = |arm: usize, k: usize| 1 + arm * len + k;
    let mut edges = Vec::new();
    for arm in 0..arms {
        edges.push((0, vertex(arm, 0)));
        for k in 1..len {
            edges.push((vertex(arm, k - 1), vertex(arm, k)));
        }
    }
    let mut sigma = vec![0; n];
    for arm in 0..arms {
        for k in 0..len {
            sigma[vertex(arm, k)] = vertex((arm + shift) % arms, k);
        }
    }
    SymGraph { n, edges, sigma }
}

fn orbit_labels(sigma: &[usize]) -> Vec<usize> {
    let n = sigma.len();
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    for s in 0..n {
        if label[s] != usize::MAX {
            continue;
        }
        let mut a = s;
        while label[a] == usize::MAX {
            label[a] = next;
            a = sigma[a];
        }
        next += 1;
    }
    label
}

/// Arithmetic genus from adjunction, `2g - 2 = Σ d_a (2 p_a - 2 - Γ_a²)`,
/// with σ-invariant component genera `p`. `None` when the parity is off or
/// the result is negative.
pub fn adjunction_genus(f: &Fibre, p: &[i64]) -> Option<BigInt> {
    let mut two_g_minus_two = BigInt::zero();
    for (a, c) in f.components().iter().enumerate() {
        let k_dot = big(2 * p[a] - 2) - f.intersections()[(a, a)].clone();
        two_g_minus_two += c.d.clone() * k_dot;
    }
    let (half, rem) = two_g_minus_two.div_rem(&big(2));
    let g = half + BigInt::one();
    (rem.is_zero() && g >= BigInt::zero()).then_some(g)
}

fn build(g: SymGraph, rng: &mut impl Rng) -> Fibre {
    let orbit = orbit_labels(&g.sigma);
    let n_orbits = orbit.iter().max().map_or(0, |m| m + 1);
    let orbit_d: Vec<i64> = (0..n_orbits).map(|_| *[1, 1, 1, 2, 3].choose(rng).unwrap()).collect();
    let d: Vec<i64> = (0..g.n).map(|a| orbit_d[orbit[a]]).collect();
    let l = d.iter().fold(1i64, |acc, &x| acc.lcm(&x));

    // edge weights constant on σ-orbits of edges
    let mut weight = std::collections::HashMap::new();
    let key = |a: usize, b: usize| if a < b { (a, b) } else { (b, a) };
    for &(a, b) in &g.edges {
        if weight.contains_key(&key(a, b)) {
            continue;
        }
        let w: i64 = if rng.gen_bool(0.8) { 1 } else { 2 };
        let (mut x, mut y) = (a, b);
        loop {
            weight.insert(key(x, y), w);
            x = g.sigma[x];
            y = g.sigma[y];
            if key(x, y) == key(a, b) {
                break;
            }
        }
    }
    let mut m = IntMatrix::zeros(g.n, g.n);
    for (&(a, b), &w) in &weight {
        m[(a, b)] += big(w * l);
        m[(b, a)] += big(w * l);
    }
    for a in 0..g.n {
        let s: BigInt = (0..g.n).map(|b| big(d[b]) * m[(a, b)].clone()).sum();
        m[(a, a)] = -(s / big(d[a]));
    }
    let comps = d.iter().map(|&x| GeomComponent::reduced(big(x))).collect();
    let f = SpecialFibre::new(comps, g.sigma, m, None, true);

    let orbit_p: Vec<i64> = (0..n_orbits).map(|_| if rng.gen_bool(0.8) { 0 } else { 1 }).collect();
    let p: Vec<i64> = (0..f.num_components()).map(|a| orbit_p[orbit[a]]).collect();
    let genus = adjunction_genus(&f, &p);
    let with_genus = f.clone().with_genus(genus);
    if with_genus.validate().is_ok() {
        with_genus
    } else {
        f
    }
}

/// A valid fibre of at most `max_components` components: a cycle, chain or
/// star with a reflection, an arm permutation or trivial σ; `d ∈ {1, 2, 3}`,
/// `e = 1`. The genus comes from adjunction when it passes validation.
pub fn random_fibre(rng: &mut impl Rng, max_components: usize) -> Fibre {
    random_fibre_of(rng, max_components, false)
}

/// As [`random_fibre`], also allowing cyclic rotations of cycles.
pub fn random_fibre_of(rng: &mut impl Rng, max_components: usize, rotations: bool) -> Fibre {
    assert!(max_components >= 4);
    let shape = *[Shape::Cycle, Shape::Chain, Shape::Star].choose(rng).unwrap();
    let symmetric = rng.gen_bool(0.75);
    let graph = match shape {
        Shape::Cycle => {
            let n = rng.gen_range(2..=max_components);
            let rotate = rotations && symmetric && rng.gen_bool(0.3);
            cycle_graph(n, symmetric && !rotate, rotate)
        }
        Shape::Chain => chain_graph(rng.gen_range(1..=max_components), symmetric),
        Shape::Star => {
            let arms = rng.gen_range(2..=4usize);
            let len = rng.gen_range(1..=((max_components - 1) / arms).max(1));
            let shift = if symmetric { rng.gen_range(1..arms) } else { 0 };
            star_graph(arms, len, shift)
        }
    };
    let f = build(graph, rng);
    debug_assert!(f.validate().is_ok());
    f
}

/// Random relabelling of the components.
pub fn random_permutation(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

fn block(rows: &[&[i64]]) -> IntMatrix {
    Matrix::from_i64_rows(rows)
}

/// Blocks of finite order: `(matrix, order)`.
fn random_block(rng: &mut impl Rng, room: usize) -> (IntMatrix, u64) {
    loop {
        match rng.gen_range(0..7) {
            0 => return (block(&[&[1]]), 1),
            1 => return (block(&[&[-1]]), 2),
            2 if room >= 2 => return (block(&[&[0, -1], &[1, -1]]), 3),
            3 if room >= 2 => return (block(&[&[0, -1], &[1, 0]]), 4),
            4 if room >= 2 => return (block(&[&[0, -1], &[1, 1]]), 6),
            5 if room >= 2 => {
                let k = rng.gen_range(2..=room.min(6));
                let p = IntMatrix::from_fn(k, k, |i, j| if i == (j + 1) % k { big(1) } else { big(0) });
                return (p, k as u64);
            }
            6 if room >= 2 => return (block(&[&[0, 1], &[1, 0]]), 2),
            _ => {}
        }
    }
}

fn block_diagonal(blocks: &[IntMatrix]) -> IntMatrix {
    let n: usize = blocks.iter().map(|b| b.rows()).sum();
    let mut out = IntMatrix::zeros(n, n);
    let mut off = 0;
    for b in blocks {
        for i in 0..b.rows() {
            for j in 0..b.cols() {
                out[(off + i, off + j)] = b[(i, j)].clone();
            }
        }
        off += b.rows();
    }
    out
}

/// A random unimodular matrix and its inverse, as products of elementary
/// transvections with small multipliers.
pub fn random_unimodular(rng: &mut impl Rng, n: usize, steps: usize) -> (IntMatrix, IntMatrix) {
    let mut u = IntMatrix::identity(n);
    let mut inv = IntMatrix::identity(n);
    if n < 2 {
        if rng.gen_bool(0.5) {
            u = u.scale(&big(-1));
            inv = inv.scale(&big(-1));
        }
        return (u, inv);
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let c = big(rng.gen_range(-2..=2));
        // u <- u (I + c e_ij), inv <- (I - c e_ij) inv
        let mut e = IntMatrix::identity(n);
        e[(i, j)] = c.clone();
        let mut e_inv = IntMatrix::identity(n);
        e_inv[(i, j)] = -c;
        u = &u * &e;
        inv = &e_inv * &inv;
    }
    (u, inv)
}

/// A unimodular action of rank `n` whose order is at most `max_order`,
/// conjugated into a random basis. Returns the matrix and its order.
pub fn random_finite_order(rng: &mut impl Rng, n: usize, max_order: u64) -> (IntMatrix, u64) {
    loop {
        let mut blocks = Vec::new();
        let mut order = 1u64;
        let mut used = 0;
        while used < n {
            let (b, o) = random_block(rng, n - used);
            used += b.rows();
            order = order.lcm(&o);
            blocks.push(b);
        }
        if order > max_order {
            continue;
        }
        let sigma = block_diagonal(&blocks);
        let (u, inv) = random_unimodular(rng, n, 2 * n);
        return (&(&u * &sigma) * &inv, order);
    }
}

/// `Σ_j (σ_Mᵀ)^j P₀ σ_X^j`, which satisfies `σ_Mᵀ P σ_X = P` when both
/// actions have order dividing `m`.
pub fn average_pairing(p0: &IntMatrix, sigma_x: &IntMatrix, sigma_m: &IntMatrix, m: u64) -> IntMatrix {
    let t = p0.rows();
    let mut p = IntMatrix::zeros(t, t);
    let mut left = IntMatrix::identity(t);
    let mut right = IntMatrix::identity(t);
    let smt = sigma_m.transpose();
    for _ in 0..m {
        p = &p + &(&(&left * p0) * &right);
        left = &left * &smt;
        right = &right * sigma_x;
    }
    p
}

/// A valid uniformization datum of rank `1..=max_rank` with action order at most 6.
pub fn random_datum(rng: &mut impl Rng, max_rank: usize, split: bool) -> UniformizationDatum<BigInt> {
    loop {
        let t = rng.gen_range(1..=max_rank);
        let (sx, ox, sm) = if split {
            (IntMatrix::identity(t), 1, IntMatrix::identity(t))
        } else {
            let (sx, ox) = random_finite_order(rng, t, 6);
            let sm = if rng.gen_bool(0.5) {
                let (u, inv) = random_unimodular(rng, t, 2 * t);
                &(&u * &sx) * &inv
            } else {
                let mut tries = 0;
                loop {
                    let (sm, om) = random_finite_order(rng, t, 6);
                    tries += 1;
                    if om == ox || tries > 20 {
                        break if om == ox { sm } else { sx.clone() };
                    }
                }
            };
            (sx, ox, sm)
        };
        let p0 = IntMatrix::from_fn(t, t, |_, _| big(rng.gen_range(-3..=3)));
        let p = average_pairing(&p0, &sx, &sm, ox);
        if p.determinant().is_zero() {
            continue;
        }
        let u = UniformizationDatum::new(t, sx, sm, p);
        debug_assert!(u.validate().is_empty());
        return u;
    }
}

/// Random integer matrix with entries in `[-bound, bound]` and shape at most `max x max`.
pub fn random_matrix(rng: &mut impl Rng, max: usize, bound: i64) -> IntMatrix {
    let r = rng.gen_range(1..=max);
    let c = rng.gen_range(1..=max);
    let sparse = rng.gen_bool(0.3);
    IntMatrix::from_fn(
        r,
        c,
        |_, _| {
            if sparse && rng.gen_bool(0.6) {
                big(0)
            } else {
                big(rng.gen_range(-bound..=bound))
            }
        },
    )
}

/// Random square matrix with a low-rank tail, to exercise singular inputs.
pub fn random_square(rng: &mut impl Rng, n: usize, bound: i64) -> IntMatrix {
    IntMatrix::from_fn(n, n, |_, _| big(rng.gen_range(-bound..=bound)))
}

/// Brute-force `φ(k^s)` and its σ-fixed subgroup for a fibre with all `e = 1`
/// and some component of multiplicity 1: `Ker β̄ / Im ᾱ` is the cokernel of the
/// intersection matrix with that component's row and column removed.
pub struct BruteForcePhi {
    pub coker: oracle::FiniteCoker,
    pub fixed: Vec<Vec<BigInt>>,
}

impl BruteForcePhi {
    pub fn new(f: &Fibre, limit: usize) -> Option<Self> {
        let n = f.num_components();
        if n < 2 || f.components().iter().any(|c| !c.e.is_one()) {
            return None;
        }
        let a0 = f.components().iter().position(|c| c.d.is_one())?;
        let keep: Vec<usize> = (0..n).filter(|&a| a != a0).collect();
        let reduced = f.intersections().select_rows(&keep).select_columns(&keep);
        let coker = oracle::FiniteCoker::new(&reduced, limit)?;
        let sigma = f.sigma().to_vec();
        let d: Vec<BigInt> = f.components().iter().map(|c| c.d.clone()).collect();
        let act = |y: &[BigInt]| {
            let mut x = vec![BigInt::zero(); n];
            for (k, &a) in keep.iter().enumerate() {
                x[a] = y[k].clone();
            }
            x[a0] = -keep.iter().enumerate().map(|(k, &a)| &d[a] * &y[k]).sum::<BigInt>();
            let mut sx = vec![BigInt::zero(); n];
            for a in 0..n {
                sx[sigma[a]] = x[a].clone();
            }
            keep.iter().map(|&a| sx[a].clone()).collect::<Vec<_>>()
        };
        let fixed = coker.fixed(act);
        Some(BruteForcePhi { coker, fixed })
    }

    pub fn geometric_order(&self) -> usize {
        self.coker.order()
    }

    pub fn rational_order(&self) -> usize {
        self.fixed.len()
    }

    /// Whether the geometric group and its fixed subgroup have the same
    /// k-torsion counts as groups with the given invariant factors.
    pub fn matches(&self, geometric: &[BigInt], rational: &[BigInt]) -> bool {
        let ks = oracle::divisors(self.geometric_order());
        self.coker.torsion_counts(&self.coker.reps, &ks) == oracle::torsion_counts_of(geometric, &ks)
            && self.coker.torsion_counts(&self.fixed, &ks) == oracle::torsion_counts_of(rational, &ks)
    }
}

/// Copy of `f` with geometric multiplicity 2 on a random set of orbits; the
/// intersection matrix is scaled by 4 so every divisibility constraint holds.
pub fn with_geometric_multiplicities(f: &Fibre, rng: &mut impl Rng) -> Fibre {
    let mut comps = f.components().to_vec();
    for orbit in f.orbit_cycles(None) {
        if rng.gen_bool(0.4) {
            for a in orbit {
                comps[a].e = big(2);
            }
        }
    }
    SpecialFibre::new(comps, f.sigma().to_vec(), f.intersections().scale(&big(4)), None, true)
}
