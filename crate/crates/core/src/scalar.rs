//! Exact ordered-field scalars.
//!
//! Every probability share, LP coefficient and witness value in the crate is a
//! [`Scalar`]. Only exact types implement it: comparisons such as "this column
//! sums to its quota" are decided by equality, never by a tolerance.

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};
use std::fmt::{Debug, Display};
use std::iter::Sum;

/// An exact, totally ordered field element.
pub trait Scalar:
    Clone + Ord + Num + Signed + ToPrimitive + Sum + Debug + Display + Send + Sync + 'static
{
    /// The integer `n` as a field element.
    fn from_count(n: usize) -> Self;

    /// `numer / denom`; panics on a zero denominator.
    fn ratio(numer: i64, denom: i64) -> Self;

    /// Parses `"p/q"` or `"p"`. The result is always in lowest terms.
    fn parse_exact(s: &str) -> Option<Self>;

    /// Lossy conversion for presentation only.
    fn to_decimal(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

macro_rules! impl_scalar_for_ratio {
    ($($int:ty),*) => {$(
        impl Scalar for Ratio<$int> {
            fn from_count(n: usize) -> Self {
                Ratio::from_integer(<$int>::from_usize(n).expect("count fits the integer type"))
            }

            fn ratio(numer: i64, denom: i64) -> Self {
                Ratio::new(
                    <$int>::from_i64(numer).expect("numerator fits"),
                    <$int>::from_i64(denom).expect("denominator fits"),
                )
            }

            fn parse_exact(s: &str) -> Option<Self> {
                s.trim().parse::<Ratio<$int>>().ok()
            }
        }
    )*};
}

impl_scalar_for_ratio!(i64, i128, BigInt);

/// Sum of borrowed scalars.
pub fn sum_refs<'a, T: Scalar>(values: impl IntoIterator<Item = &'a T>) -> T {
    values.into_iter().fold(T::zero(), |acc, v| acc + v.clone())
}

/// Formats a scalar as an exact fraction string (`"1/3"`, `"0"`, `"-2"`).
pub fn fraction_string<T: Scalar>(v: &T) -> String {
    v.to_string()
}
