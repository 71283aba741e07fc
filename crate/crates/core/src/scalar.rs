//! The integer scalar abstraction shared by every exact computation.
//!
//! All algorithms are written against [`IntScalar`]. The crate root exposes
//! concrete aliases over [`num_bigint::BigInt`], which is what the fibre,
//! torus and semi-stable pipelines use by default. Machine integers (`i64`,
//! `i128`) also satisfy the trait and are handy for small, bounded inputs,
//! but they overflow silently on large intermediate values.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// An exact, signed Euclidean ring element: `BigInt`, `i128`, `i64`, ...
pub trait IntScalar:
    Clone + Debug + Display + Hash + Ord + Integer + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    fn from_int(x: i64) -> Self {
        Self::from_i64(x).expect("integer literal out of range for scalar type")
    }

    fn from_count(x: usize) -> Self {
        Self::from_usize(x).expect("count out of range for scalar type")
    }
}

impl<T> IntScalar for T where
    T: Clone + Debug + Display + Hash + Ord + Integer + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
}

/// Greatest common divisor of a sequence, nonnegative; `0` for an empty sequence.
pub fn gcd_all<'a, S: IntScalar>(xs: impl IntoIterator<Item = &'a S>) -> S {
    xs.into_iter().fold(S::zero(), |acc, x| acc.gcd(x))
}

/// Least common multiple of a sequence; `1` for an empty sequence.
pub fn lcm_all<'a, S: IntScalar>(xs: impl IntoIterator<Item = &'a S>) -> S {
    xs.into_iter().fold(S::one(), |acc, x| acc.lcm(x))
}
