//! Posterior no-lock probabilities given the observed minus count.
//!
//! For `0 < x < n` minuses, `p_minus(x)` is the probability that a box which
//! tested minus is unlocked and `p_plus(x)` the same for a box that tested
//! plus. Their ratio `r(x)` drives the attacker's policy.
//!
//! Three routes compute the same quantities and are cross-checked in tests:
//! - [`posterior_by_reduction`] via the minus-count law of the reduced
//!   model with one box removed,
//! - [`posterior_by_conditional_mean`] via `E(N1 | N = x)`,
//! - [`ratio_from_quality`], which needs only `n`, `k`, `x` and the quality
//!   scalar `c = a/(1-a) * b/(1-b)`.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::combinatorics::{binomial_f64, joint_tx, minus_count_pmf, minus_count_pmf_for, ModelA};
use crate::error::{Error, Result};

/// Ratio of posterior no-lock probabilities, minus box over plus box.
///
/// `Infinite` marks `p_plus = 0` (e.g. perfect specificity), so a float
/// infinity never leaks into downstream arithmetic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Ratio {
    Finite(f64),
    Infinite,
}

impl Ratio {
    fn from_parts(numerator: f64, denominator: f64) -> Self {
        if denominator <= 0.0 {
            Ratio::Infinite
        } else {
            Ratio::Finite(numerator / denominator)
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Ratio::Finite(r) => Some(r),
            Ratio::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Ratio::Infinite)
    }

    /// Lossy view for display and plotting.
    pub fn as_f64(self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ratio::Finite(r) => match f.precision() {
                Some(p) => write!(f, "{r:.p$}"),
                None => write!(f, "{r}"),
            },
            Ratio::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Ratio {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Ratio::Finite(r) => serializer.serialize_f64(*r),
            Ratio::Infinite => serializer.serialize_str("inf"),
        }
    }
}

/// Posterior quantities for one value of the minus count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PosteriorRow {
    pub p_minus: f64,
    pub p_plus: f64,
    pub ratio: Ratio,
}

/// Rows for `x = 1..n-1`. A row is `None` when `P(N = x) = 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PosteriorTable {
    model: ModelA,
    rows: Vec<Option<PosteriorRow>>,
}

impl PosteriorTable {
    pub fn model(&self) -> &ModelA {
        &self.model
    }

    /// Row for `x`; `None` for `x = 0`, `x >= n` or zero-probability `x`.
    pub fn row(&self, x: usize) -> Option<&PosteriorRow> {
        self.rows.get(x).and_then(Option::as_ref)
    }

    /// `(x, row)` pairs over `x = 1..n-1`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, Option<&PosteriorRow>)> + '_ {
        (1..self.model.n()).map(move |x| (x, self.row(x)))
    }
}

/// Posterior from the reduced-model minus-count law `g_{n-1,k}`.
pub fn posterior_by_reduction(model: &ModelA) -> PosteriorTable {
    let (n, k, b) = (model.n(), model.k(), model.b());
    let full = minus_count_pmf(model);
    let reduced = minus_count_pmf_for(n - 1, k, model.a(), b).expect("k <= n - 1");
    let free = (n - k) as f64;

    let mut rows = vec![None; n + 1];
    for (x, slot) in rows.iter_mut().enumerate().take(n).skip(1) {
        let gx = full.get(x);
        if gx <= 0.0 {
            continue;
        }
        let p_minus = free / x as f64 * b * reduced.get(x - 1) / gx;
        let p_plus = free / (n - x) as f64 * (1.0 - b) * reduced.get(x) / gx;
        let ratio = if p_plus <= 0.0 {
            Ratio::Infinite
        } else {
            // Ratio straight from the reduced law rather than p_minus / p_plus.
            Ratio::Finite(
                b / (1.0 - b) * (n - x) as f64 / x as f64 * reduced.get(x - 1) / reduced.get(x),
            )
        };
        *slot = Some(PosteriorRow {
            p_minus,
            p_plus,
            ratio,
        });
    }
    PosteriorTable {
        model: *model,
        rows,
    }
}

/// Posterior from the conditional mean of false minuses.
///
/// `p_minus = E(N2|x) / x` (expected share of correct minuses) and
/// `p_plus = E(U2|x) / (n-x)` (expected share of false pluses).
pub fn posterior_by_conditional_mean(model: &ModelA) -> PosteriorTable {
    let (n, k) = (model.n(), model.k());
    let joint = joint_tx(model);

    let mut rows = vec![None; n + 1];
    for (x, slot) in rows.iter_mut().enumerate().take(n).skip(1) {
        let Ok(false_minus) = joint.conditional_n1_mean(x) else {
            continue;
        };
        let correct_minus = (x as f64 - false_minus).max(0.0);
        let false_plus = ((n - k) as f64 - x as f64 + false_minus).max(0.0);
        let p_minus = correct_minus / x as f64;
        let p_plus = false_plus / (n - x) as f64;
        let ratio = Ratio::from_parts((n - x) as f64 * correct_minus, x as f64 * false_plus);
        *slot = Some(PosteriorRow {
            p_minus,
            p_plus,
            ratio,
        });
    }
    PosteriorTable {
        model: *model,
        rows,
    }
}

/// The test-quality scalar `c = a/(1-a) * b/(1-b)`.
///
/// The ratio `r(x)` depends on `(a, b)` only through `c`, and `c > 1`
/// exactly when `a + b > 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TestQuality {
    c: f64,
}

impl TestQuality {
    pub fn from_rates(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && a < 1.0 && b > 0.0 && b < 1.0) {
            return Err(Error::DegenerateQuality { a, b });
        }
        Ok(Self {
            c: a / (1.0 - a) * (b / (1.0 - b)),
        })
    }

    pub fn from_c(c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::OutOfRange {
                name: "c",
                value: c,
                range: "(0, inf)",
            });
        }
        Ok(Self { c })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// The common rate `a = b` that yields the same `c`.
    pub fn equal_rate(&self) -> f64 {
        let root = self.c.sqrt();
        root / (1.0 + root)
    }

    pub fn is_informative(&self) -> bool {
        self.c > 1.0
    }
}

/// `r_{n,k}(x)` computed from the quality scalar alone.
pub fn ratio_from_quality(n: usize, k: usize, x: usize, quality: TestQuality) -> Result<f64> {
    if k == 0 || k >= n {
        return Err(Error::InvalidModel { n, k });
    }
    if x == 0 || x >= n {
        return Err(Error::InvalidArgument(format!(
            "ratio needs 0 < x < n, got x={x}, n={n}"
        )));
    }
    let inv_c = 1.0 / quality.c();
    let spare = n - k - 1;
    let (mut numerator, mut denominator) = (0.0, 0.0);
    let mut weight = 1.0;
    for i in 0..=k.min(x) {
        let locks = binomial_f64(k, i as i64);
        numerator += locks * binomial_f64(spare, x as i64 - i as i64 - 1) * weight;
        denominator += locks * binomial_f64(spare, x as i64 - i as i64) * weight;
        weight *= inv_c;
    }
    Ok((n - x) as f64 / x as f64 * numerator / denominator)
}

/// [`ratio_from_quality`] with `c` taken from the model's rates.
pub fn ratio_via_quality(model: &ModelA, x: usize) -> Result<f64> {
    let quality = TestQuality::from_rates(model.a(), model.b())?;
    ratio_from_quality(model.n(), model.k(), x, quality)
}

/// `g_{n,k}(x)` written as `a^k b^x (1-b)^(n-k-x) * sum_i C(k,i) C(n-k,x-i) c^-i`.
pub fn minus_count_mass_via_quality(model: &ModelA, x: usize) -> Result<f64> {
    let (n, k, a, b) = (model.n(), model.k(), model.a(), model.b());
    let quality = TestQuality::from_rates(a, b)?;
    if x > n {
        return Ok(0.0);
    }
    let inv_c = 1.0 / quality.c();
    let sum: f64 = (0..=k.min(x))
        .map(|i| {
            binomial_f64(k, i as i64)
                * binomial_f64(n - k, x as i64 - i as i64)
                * inv_c.powi(i as i32)
        })
        .sum();
    Ok(a.powi(k as i32) * b.powi(x as i32) * (1.0 - b).powi((n - k) as i32 - x as i32) * sum)
}

/// Posterior ratio when each box is locked independently with probability
/// `lambda` (so the ratio does not depend on the minus count).
pub fn ratio_independent_locks(a: f64, b: f64, lambda: f64) -> Result<Ratio> {
    crate::error::check_unit("a", a)?;
    crate::error::check_unit("b", b)?;
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::OutOfRange {
            name: "lambda",
            value: lambda,
            range: "(0, 1)",
        });
    }
    let h = a + b - 1.0;
    let denom = b - lambda * h;
    if denom <= 0.0 {
        return Err(Error::DegeneratePosterior(denom));
    }
    if b >= 1.0 {
        return Ok(Ratio::Infinite);
    }
    Ok(Ratio::Finite(
        b / (1.0 - b) * ((1.0 - b + lambda * h) / denom),
    ))
}

/// Unconditional per-box probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MarginalProbs {
    /// `P(T = 0)`, the box is unlocked.
    pub unlocked: f64,
    /// `P(S = 0)`, the box tests minus.
    pub minus: f64,
    /// `P(S = 1)`, the box tests plus.
    pub plus: f64,
}

pub fn marginal_probs(model: &ModelA) -> MarginalProbs {
    let locked = model.k() as f64 / model.n() as f64;
    let (a, b) = (model.a(), model.b());
    MarginalProbs {
        unlocked: 1.0 - locked,
        minus: locked * (1.0 - a) + (1.0 - locked) * b,
        plus: locked * a + (1.0 - locked) * (1.0 - b),
    }
}
