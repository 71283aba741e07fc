use std::fmt;

use crate::scalar::IntScalar;

use super::matrix::Matrix;
use super::normal_form::snf;

/// Finitely generated abelian group `Z^free_rank + Z/a_1 + ... + Z/a_k`
/// in invariant-factor form: every `a_i >= 2` and `a_i | a_{i+1}`.
///
/// The representation is canonical, so structural equality is group isomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinAbGroup<S> {
    free_rank: usize,
    invariant_factors: Vec<S>,
}

impl<S: IntScalar> FinAbGroup<S> {
    pub fn trivial() -> Self {
        FinAbGroup { free_rank: 0, invariant_factors: Vec::new() }
    }

    pub fn free(rank: usize) -> Self {
        FinAbGroup { free_rank: rank, invariant_factors: Vec::new() }
    }

    pub fn cyclic(order: S) -> Self {
        Self::from_orders(&[order])
    }

    /// Direct sum of cyclic groups `Z/o_i`, where an order of `0` means `Z`.
    /// The orders need not form a divisibility chain.
    pub fn from_orders(orders: &[S]) -> Self {
        let dec = snf(&Matrix::diagonal(orders));
        Self::from_smith_diagonal(&dec.diagonal(), 0)
    }

    /// Reads off the group `Z^n / diag(s) Z^n` from an already-normalized
    /// Smith diagonal, with `extra_free` additional copies of `Z`.
    pub(crate) fn from_smith_diagonal(diag: &[S], extra_free: usize) -> Self {
        let mut free_rank = extra_free;
        let mut invariant_factors = Vec::new();
        for x in diag {
            if x.is_zero() {
                free_rank += 1;
            } else if !x.is_one() {
                invariant_factors.push(x.abs());
            }
        }
        debug_assert!(invariant_factors.windows(2).all(|w| (w[1].clone() % w[0].clone()).is_zero()));
        FinAbGroup { free_rank, invariant_factors }
    }

    /// Rebuilds a group from stored fields, checking canonical form.
    pub fn from_parts(free_rank: usize, invariant_factors: Vec<S>) -> Option<Self> {
        let two = S::from_int(2);
        let ok = invariant_factors.iter().all(|a| *a >= two)
            && invariant_factors.windows(2).all(|w| (w[1].clone() % w[0].clone()).is_zero());
        ok.then_some(FinAbGroup { free_rank, invariant_factors })
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn invariant_factors(&self) -> &[S] {
        &self.invariant_factors
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    /// Group order, `None` when the group is infinite.
    pub fn order(&self) -> Option<S> {
        self.is_finite().then(|| self.torsion_order())
    }

    pub fn torsion_order(&self) -> S {
        self.invariant_factors.iter().fold(S::one(), |acc, x| acc * x.clone())
    }

    /// Number of cyclic summands in the presentation.
    pub fn num_generators(&self) -> usize {
        self.free_rank + self.invariant_factors.len()
    }

    /// Cyclic orders of the generators, torsion first, `0` for each free generator.
    pub fn generator_orders(&self) -> Vec<S> {
        let mut v = self.invariant_factors.clone();
        v.extend(std::iter::repeat_n(S::zero(), self.free_rank));
        v
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut orders = self.generator_orders();
        orders.extend(other.generator_orders());
        Self::from_orders(&orders)
    }
}

impl<S: IntScalar> fmt::Display for FinAbGroup<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.invariant_factors.iter().map(|a| format!("Z/{a}")));
        write!(f, "{}", parts.join(" + "))
    }
}
