//! Hermite and Smith normal forms over the integers.
//!
//! Both reductions pivot on the entry of minimal nonzero absolute value and
//! break ties by row-major scan order, so the transforms are reproducible.

use crate::scalar::IntScalar;

use super::matrix::Matrix;

/// Column-style Hermite normal form together with its transform.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermiteDecomposition<S> {
    /// `a * transform`; the first `rank` columns are in echelon form, the rest are zero.
    pub h: Matrix<S>,
    /// Unimodular column transform.
    pub transform: Matrix<S>,
    pub rank: usize,
}

/// `u * a * v = s` with `u`, `v` unimodular and `s` diagonal with `s_1 | s_2 | ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition<S> {
    pub u: Matrix<S>,
    pub s: Matrix<S>,
    pub v: Matrix<S>,
}

impl<S: IntScalar> SmithDecomposition<S> {
    /// Diagonal entries of `s`, of length `min(rows, cols)`. Zeros come last.
    pub fn diagonal(&self) -> Vec<S> {
        let n = self.s.rows().min(self.s.cols());
        (0..n).map(|i| self.s[(i, i)].clone()).collect()
    }

    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        self.diagonal().iter().take_while(|x| !x.is_zero()).count()
    }
}

/// Column-style Hermite normal form of `a`. The column span over Z is preserved;
/// the shape is preserved too, with the zero columns moved to the right.
pub fn hnf<S: IntScalar>(a: &Matrix<S>) -> Matrix<S> {
    hnf_with_transform(a).h
}

/// Column HNF: rows are processed top to bottom; each pivot row gets a single
/// positive pivot and the entries to its left are reduced into `[0, pivot)`.
pub fn hnf_with_transform<S: IntScalar>(a: &Matrix<S>) -> HermiteDecomposition<S> {
    let (rows, cols) = a.shape();
    let mut h = a.clone();
    let mut t = Matrix::identity(cols);
    let mut k = 0;
    for i in 0..rows {
        if k == cols {
            break;
        }
        while let Some(j) = min_abs_in_row(&h, i, k) {
            h.swap_cols(j, k);
            t.swap_cols(j, k);
            let mut clean = true;
            for j in k + 1..cols {
                if h[(i, j)].is_zero() {
                    continue;
                }
                let q = h[(i, j)].div_floor(&h[(i, k)]);
                h.add_col_multiple(j, k, &-q.clone());
                t.add_col_multiple(j, k, &-q);
                if !h[(i, j)].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if h[(i, k)].is_zero() {
            continue;
        }
        if h[(i, k)].is_negative() {
            h.negate_col(k);
            t.negate_col(k);
        }
        for j in 0..k {
            let q = h[(i, j)].div_floor(&h[(i, k)]);
            if !q.is_zero() {
                h.add_col_multiple(j, k, &-q.clone());
                t.add_col_multiple(j, k, &-q);
            }
        }
        k += 1;
    }
    HermiteDecomposition { h, transform: t, rank: k }
}

fn min_abs_in_row<S: IntScalar>(h: &Matrix<S>, i: usize, from: usize) -> Option<usize> {
    let mut best: Option<(usize, S)> = None;
    for j in from..h.cols() {
        let v = h[(i, j)].abs();
        if v.is_zero() {
            continue;
        }
        if best.as_ref().is_none_or(|(_, b)| v < *b) {
            best = Some((j, v));
        }
    }
    best.map(|(j, _)| j)
}

fn min_abs_in_block<S: IntScalar>(a: &Matrix<S>, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), S)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let v = a[(i, j)].abs();
            if v.is_zero() {
                continue;
            }
            if best.as_ref().is_none_or(|(_, b)| v < *b) {
                best = Some(((i, j), v));
            }
        }
    }
    best.map(|(p, _)| p)
}

/// Smith normal form with unimodular transforms.
pub fn snf<S: IntScalar>(a: &Matrix<S>) -> SmithDecomposition<S> {
    let (rows, cols) = a.shape();
    let mut s = a.clone();
    let mut u = Matrix::identity(rows);
    let mut v = Matrix::identity(cols);
    let n = rows.min(cols);
    let mut t = 0;
    'outer: while t < n {
        let Some((pi, pj)) = min_abs_in_block(&s, t) else { break };
        s.swap_rows(pi, t);
        u.swap_rows(pi, t);
        s.swap_cols(pj, t);
        v.swap_cols(pj, t);

        let mut clean = true;
        for i in t + 1..rows {
            if s[(i, t)].is_zero() {
                continue;
            }
            let q = s[(i, t)].div_floor(&s[(t, t)]);
            s.add_row_multiple(i, t, &-q.clone());
            u.add_row_multiple(i, t, &-q);
            clean &= s[(i, t)].is_zero();
        }
        for j in t + 1..cols {
            if s[(t, j)].is_zero() {
                continue;
            }
            let q = s[(t, j)].div_floor(&s[(t, t)]);
            s.add_col_multiple(j, t, &-q.clone());
            v.add_col_multiple(j, t, &-q);
            clean &= s[(t, j)].is_zero();
        }
        if !clean {
            continue 'outer;
        }

        // the pivot must divide the whole remaining block
        for i in t + 1..rows {
            for j in t + 1..cols {
                if !(s[(i, j)].clone() % s[(t, t)].clone()).is_zero() {
                    s.add_row_multiple(t, i, &S::one());
                    u.add_row_multiple(t, i, &S::one());
                    continue 'outer;
                }
            }
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    SmithDecomposition { u, s, v }
}

/// Inverse of a unimodular matrix, or `None` if the matrix is not unimodular.
pub fn inverse_unimodular<S: IntScalar>(a: &Matrix<S>) -> Option<Matrix<S>> {
    if !a.is_square() {
        return None;
    }
    let dec = hnf_with_transform(a);
    if dec.h.is_identity() {
        Some(dec.transform)
    } else {
        None
    }
}
