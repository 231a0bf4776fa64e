//! Two-sample Mann–Whitney U test.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::num::Real;

/// Largest combined sample the exact null distribution is computed for.
pub const EXACT_LIMIT: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Alternative {
    /// The first sample tends to be smaller.
    Less,
    /// The first sample tends to be larger.
    Greater,
}

impl Alternative {
    pub fn flip(self) -> Self {
        match self {
            Alternative::Less => Alternative::Greater,
            Alternative::Greater => Alternative::Less,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Alternative::Less => "less",
            Alternative::Greater => "greater",
        }
    }
}

impl fmt::Display for Alternative {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Requested procedure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    Exact,
    Approx,
    /// Exact when there are no ties and the combined sample is at most
    /// [`EXACT_LIMIT`], normal approximation otherwise.
    #[default]
    Auto,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Method::Exact),
            "approx" => Ok(Method::Approx),
            "auto" => Ok(Method::Auto),
            other => Err(Error::Validation(format!(
                "unknown method `{other}` (expected exact, approx or auto)"
            ))),
        }
    }
}

/// Procedure actually used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum TestMethod {
    Exact,
    NormalApprox,
}

impl fmt::Display for TestMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TestMethod::Exact => "exact",
            TestMethod::NormalApprox => "normalApprox",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TestResult<T> {
    /// U of the first sample.
    pub statistic_u: T,
    pub p_value: T,
    pub method: TestMethod,
    pub alternative: Alternative,
}

/// Pooled ranks of both samples, tied values sharing their doubled midrank
/// (so every rank stays an integer).
struct Ranking {
    doubled: Vec<u64>,
    /// Sizes of the tie groups, singletons included.
    tie_sizes: Vec<usize>,
}

fn rank<T: Real>(a: &[T], b: &[T]) -> Ranking {
    let n = a.len() + b.len();
    let mut idx: Vec<(T, usize)> = a
        .iter()
        .chain(b)
        .copied()
        .enumerate()
        .map(|(i, v)| (v, i))
        .collect();
    idx.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("NaN in sample"));
    let mut doubled = vec![0; n];
    let mut tie_sizes = Vec::new();
    let mut start = 0;
    while start < n {
        let mut end = start;
        while end + 1 < n && idx[end + 1].0 == idx[start].0 {
            end += 1;
        }
        // 1-based positions start+1 ..= end+1
        let twice_mid = (start + 1 + end + 1) as u64;
        for item in &idx[start..=end] {
            doubled[item.1] = twice_mid;
        }
        tie_sizes.push(end - start + 1);
        start = end + 1;
    }
    Ranking { doubled, tie_sizes }
}

fn check_samples<T: Real>(a: &[T], b: &[T]) -> Result<()> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::UndefinedMetric(
            "Mann-Whitney test needs two non-empty samples".into(),
        ));
    }
    if a.iter().chain(b).any(|v| !v.is_finite()) {
        return Err(Error::Validation("sample contains a non-finite value".into()));
    }
    Ok(())
}

/// Number of `k`-subsets of `ranks` per sum of their elements.
fn subset_sum_counts(ranks: &[u64], k: usize) -> Vec<u128> {
    let total: u64 = ranks.iter().sum();
    let width = total as usize + 1;
    // dp[j][s]: subsets of size j with sum s
    let mut dp = vec![vec![0u128; width]; k + 1];
    dp[0][0] = 1;
    for &r in ranks {
        let r = r as usize;
        for j in (1..=k).rev() {
            let (lo, hi) = dp.split_at_mut(j);
            let prev = &lo[j - 1];
            let cur = &mut hi[0];
            for s in (r..width).rev() {
                if prev[s - r] != 0 {
                    cur[s] += prev[s - r];
                }
            }
        }
    }
    dp.swap_remove(k)
}

fn exact_p(r: &Ranking, n1: usize, observed: u64, alternative: Alternative) -> f64 {
    let counts = subset_sum_counts(&r.doubled, n1);
    let total: u128 = counts.iter().sum();
    let tail: u128 = match alternative {
        Alternative::Greater => counts[observed as usize..].iter().sum(),
        Alternative::Less => counts[..=observed as usize].iter().sum(),
    };
    tail as f64 / total as f64
}

fn approx_p<T: Real>(r: &Ranking, n1: usize, n2: usize, u: T, alternative: Alternative) -> T {
    let n = (n1 + n2) as f64;
    let (n1, n2) = (n1 as f64, n2 as f64);
    let ties: f64 = r
        .tie_sizes
        .iter()
        .map(|&t| {
            let t = t as f64;
            t * t * t - t
        })
        .sum();
    let variance = n1 * n2 / 12.0 * ((n + 1.0) - ties / (n * (n - 1.0)));
    if variance <= 0.0 {
        return T::one();
    }
    let mu = n1 * n2 / 2.0;
    let sd = variance.sqrt();
    let u = u.to_f64_lossy();
    let std_normal = Normal::new(0.0, 1.0).expect("standard normal");
    let p = match alternative {
        Alternative::Greater => std_normal.sf((u - mu - 0.5) / sd),
        Alternative::Less => std_normal.cdf((u - mu + 0.5) / sd),
    };
    T::from_f64_lossy(p.clamp(0.0, 1.0))
}

/// U statistic of `a` against `b`, with midranks for ties.
pub fn u_statistic<T: Real>(a: &[T], b: &[T]) -> T {
    let r = rank(a, b);
    let doubled_sum: u64 = r.doubled[..a.len()].iter().sum();
    u_from_doubled(doubled_sum, a.len())
}

fn u_from_doubled<T: Real>(doubled_sum: u64, n1: usize) -> T {
    let offset = (n1 * (n1 + 1)) as u64;
    // doubled_sum >= offset since midranks of n1 items sum to at least 1+..+n1
    T::from_f64_lossy((doubled_sum - offset) as f64 / 2.0)
}

/// One-sided Mann–Whitney U test of `a` against `b`.
pub fn mann_whitney<T: Real>(
    a: &[T],
    b: &[T],
    alternative: Alternative,
    method: Method,
) -> Result<TestResult<T>> {
    check_samples(a, b)?;
    let (n1, n2) = (a.len(), b.len());
    let n = n1 + n2;
    let r = rank(a, b);
    let doubled_sum: u64 = r.doubled[..n1].iter().sum();
    let u: T = u_from_doubled(doubled_sum, n1);
    let has_ties = r.tie_sizes.iter().any(|&t| t > 1);

    let chosen = match method {
        Method::Exact => {
            if n > EXACT_LIMIT {
                return Err(Error::Capability(format!(
                    "exact test supports at most {EXACT_LIMIT} observations in total, got {n}; use the normal approximation"
                )));
            }
            TestMethod::Exact
        }
        Method::Approx => TestMethod::NormalApprox,
        Method::Auto if !has_ties && n <= EXACT_LIMIT => TestMethod::Exact,
        Method::Auto => TestMethod::NormalApprox,
    };

    let p_value = if r.tie_sizes.len() == 1 {
        // every observation tied: no evidence either way
        T::one()
    } else {
        match chosen {
            TestMethod::Exact => T::from_f64_lossy(exact_p(&r, n1, doubled_sum, alternative)),
            TestMethod::NormalApprox => approx_p(&r, n1, n2, u, alternative),
        }
    };
    Ok(TestResult {
        statistic_u: u,
        p_value,
        method: chosen,
        alternative,
    })
}
