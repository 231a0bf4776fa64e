//! Scalar abstractions shared by the statistics and lexical-distance code.
//!
//! Everything that produces a floating-point summary is generic over [`Real`]
//! (`f32` or `f64`). Agreement percentages are never floats: they are exact
//! [`Fraction`]s wrapped in [`Percentage`] and only rounded when rendered.

use std::fmt;

use num_rational::Ratio;
use num_traits::{FromPrimitive, Zero};

/// Floating point scalar: f32 or f64.
pub trait Real:
    num_traits::Float
    + FromPrimitive
    + num_traits::NumCast
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
{
    fn from_usize(n: usize) -> Self {
        <Self as FromPrimitive>::from_usize(n).expect("usize representable as float")
    }

    fn from_f64_lossy(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("f64 representable as float")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Exact non-negative rational used for all agreement arithmetic.
pub type Fraction = Ratio<u64>;

/// A ratio in `[0, 1]` presented as a percentage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Percentage(Fraction);

impl Percentage {
    /// `numerator / denominator`; `None` when the denominator is zero.
    pub fn from_counts(numerator: u64, denominator: u64) -> Option<Self> {
        if denominator == 0 {
            None
        } else {
            Some(Percentage(Fraction::new(numerator, denominator)))
        }
    }

    pub fn zero() -> Self {
        Percentage(Fraction::zero())
    }

    pub fn fraction(&self) -> Fraction {
        self.0
    }

    /// Percentage value scaled by `10^decimals`, rounded half up.
    pub fn scaled_round_half_up(&self, decimals: u32) -> u64 {
        let scale = 100 * 10u64.pow(decimals);
        let num = *self.0.numer() as u128 * scale as u128;
        let den = *self.0.denom() as u128;
        ((2 * num + den) / (2 * den)) as u64
    }

    /// Decimal rendering without a percent sign, e.g. `27.59`.
    pub fn render(&self, decimals: u32) -> String {
        let scaled = self.scaled_round_half_up(decimals);
        if decimals == 0 {
            return scaled.to_string();
        }
        let div = 10u64.pow(decimals);
        format!(
            "{}.{:0width$}",
            scaled / div,
            scaled % div,
            width = decimals as usize
        )
    }

    pub fn to_real<T: Real>(&self) -> T {
        let num = T::from_f64_lossy(*self.0.numer() as f64);
        let den = T::from_f64_lossy(*self.0.denom() as f64);
        num / den * T::from_f64_lossy(100.0)
    }
}

impl fmt::Display for Percentage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}%", self.render(2))
    }
}

/// Arithmetic mean; `None` for an empty slice.
pub fn mean<T: Real>(values: &[T]) -> Option<T> {
    if values.is_empty() {
        return None;
    }
    let sum = values.iter().fold(T::zero(), |acc, &v| acc + v);
    Some(sum / <T as Real>::from_usize(values.len()))
}

/// Population standard deviation (divisor `n`).
pub fn population_stdev<T: Real>(values: &[T]) -> Option<T> {
    let m = mean(values)?;
    let ss = values.iter().fold(T::zero(), |acc, &v| acc + (v - m) * (v - m));
    Some((ss / <T as Real>::from_usize(values.len())).sqrt())
}

/// Sample standard deviation (divisor `n - 1`); a single value has zero spread.
pub fn sample_stdev<T: Real>(values: &[T]) -> Option<T> {
    let m = mean(values)?;
    if values.len() == 1 {
        return Some(T::zero());
    }
    let ss = values.iter().fold(T::zero(), |acc, &v| acc + (v - m) * (v - m));
    Some((ss / <T as Real>::from_usize(values.len() - 1)).sqrt())
}

/// Median: middle order statistic, or the mean of the two middle ones.
pub fn median<T: Real>(values: &[T]) -> Option<T> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("median of NaN"));
    let mid = sorted.len() / 2;
    if sorted.len() % 2 == 1 {
        Some(sorted[mid])
    } else {
        Some((sorted[mid - 1] + sorted[mid]) / <T as Real>::from_f64_lossy(2.0))
    }
}

/// Round half away from zero to `decimals` places.
pub fn round_to<T: Real>(value: T, decimals: i32) -> T {
    let scale = <T as Real>::from_f64_lossy(10f64.powi(decimals));
    (value * scale).round() / scale
}
