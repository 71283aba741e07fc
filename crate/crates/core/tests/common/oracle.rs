//! Reference computations that avoid the library's normal forms: Bareiss
//! determinants, invariant factors from gcds of minors, rational rank, and
//! brute-force enumeration of finite cokernels.

use std::collections::{HashMap, VecDeque};

use neron_core::{BigInt, IntMatrix};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

fn rows_of(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m[(i, j)].clone()).collect()).collect()
}

/// Fraction-free determinant.
pub fn det(m: &IntMatrix) -> BigInt {
    assert_eq!(m.rows(), m.cols());
    det_rows(rows_of(m))
}

fn det_rows(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// Nonzero invariant factors `s_1 | s_2 | ...`, as ratios of the gcds of
/// `k x k` minors. Exponential in the size; meant for small matrices.
pub fn invariant_factors_by_minors(m: &IntMatrix) -> Vec<BigInt> {
    let a = rows_of(m);
    let (r, c) = (m.rows(), m.cols());
    let mut out = Vec::new();
    let mut prev = BigInt::one();
    for k in 1..=r.min(c) {
        let mut g = BigInt::zero();
        for rows in combinations(r, k) {
            for cols in combinations(c, k) {
                let sub: Vec<Vec<BigInt>> =
                    rows.iter().map(|&i| cols.iter().map(|&j| a[i][j].clone()).collect()).collect();
                g = g.gcd(&det_rows(sub));
                if g.is_one() {
                    break;
                }
            }
            if g.is_one() {
                break;
            }
        }
        if g.is_zero() {
            break;
        }
        out.push(&g / &prev);
        prev = g;
    }
    out
}

pub fn rational_rank(m: &IntMatrix) -> usize {
    let mut a: Vec<Vec<BigRational>> =
        rows_of(m).into_iter().map(|r| r.into_iter().map(BigRational::from_integer).collect()).collect();
    let (rows, cols) = (m.rows(), m.cols());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(p, rank);
        for i in 0..rows {
            if i != rank && !a[i][c].is_zero() {
                let f = &a[i][c] / &a[rank][c];
                for j in c..cols {
                    let v = &a[i][j] - &f * &a[rank][j];
                    a[i][j] = v;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn adjugate(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let n = m.rows();
    let a = rows_of(m);
    let mut adj = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<BigInt>> = (0..n)
                .filter(|&r| r != j)
                .map(|r| (0..n).filter(|&c| c != i).map(|c| a[r][c].clone()).collect())
                .collect();
            let s = if (i + j) % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            adj[i][j] = s * det_rows(minor);
        }
    }
    adj
}

/// `Z^n / A Z^n` for a nonsingular square `A`, with every element listed.
/// Classes are keyed by `adj(A) x mod |det A|`, which is injective on the quotient.
pub struct FiniteCoker {
    modulus: BigInt,
    adj: Vec<Vec<BigInt>>,
    pub reps: Vec<Vec<BigInt>>,
    index: HashMap<Vec<BigInt>, usize>,
}

impl FiniteCoker {
    /// `None` when `A` is singular or the quotient has more than `limit` elements.
    pub fn new(a: &IntMatrix, limit: usize) -> Option<Self> {
        let n = a.rows();
        let modulus = det(a).abs();
        if modulus.is_zero() || modulus > BigInt::from(limit) {
            return None;
        }
        let adj = adjugate(a);
        let mut c = FiniteCoker { modulus, adj, reps: Vec::new(), index: HashMap::new() };
        let zero = vec![BigInt::zero(); n];
        c.index.insert(c.key(&zero), 0);
        c.reps.push(zero);
        let mut queue = VecDeque::from([0usize]);
        while let Some(k) = queue.pop_front() {
            for i in 0..n {
                let mut y = c.reps[k].clone();
                y[i] += 1;
                let key = c.key(&y);
                if !c.index.contains_key(&key) {
                    c.index.insert(key, c.reps.len());
                    queue.push_back(c.reps.len());
                    c.reps.push(y);
                }
            }
        }
        Some(c)
    }

    pub fn key(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.adj
            .iter()
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum::<BigInt>().mod_floor(&self.modulus))
            .collect()
    }

    pub fn order(&self) -> usize {
        self.reps.len()
    }

    pub fn same_class(&self, x: &[BigInt], y: &[BigInt]) -> bool {
        self.key(x) == self.key(y)
    }

    /// Representatives fixed by `action`.
    pub fn fixed(&self, action: impl Fn(&[BigInt]) -> Vec<BigInt>) -> Vec<Vec<BigInt>> {
        self.reps.iter().filter(|x| self.same_class(&action(x), x)).cloned().collect()
    }

    /// `#{x in subset : k x = 0}` for each `k` in `ks`.
    pub fn torsion_counts(&self, subset: &[Vec<BigInt>], ks: &[usize]) -> Vec<usize> {
        let zero = self.key(&vec![BigInt::zero(); self.adj.len()]);
        ks.iter()
            .map(|&k| {
                let kk = BigInt::from(k);
                subset.iter().filter(|x| self.key(&x.iter().map(|v| v * &kk).collect::<Vec<_>>()) == zero).count()
            })
            .collect()
    }
}

/// `#{x : k x = 0}` in the finite group with these invariant factors.
pub fn torsion_counts_of(factors: &[BigInt], ks: &[usize]) -> Vec<usize> {
    ks.iter()
        .map(|&k| {
            let kk = BigInt::from(k);
            factors.iter().map(|a| a.gcd(&kk)).product::<BigInt>().try_into().unwrap()
        })
        .collect()
}

pub fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|k| n.is_multiple_of(*k)).collect()
}
