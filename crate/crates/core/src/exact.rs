//! Brute-force Bayesian enumeration for small boards.
//!
//! Lock configurations are indexed in lexicographic order of their locked-box
//! sets and signals in MSB-first bit order (box 0 is the most significant
//! bit, signal index 0 is all minus). Everything here is dense and exhaustive
//! and exists to cross-check the closed forms elsewhere in the crate.

use serde::Serialize;

use crate::combinatorics::{binomial, unrank_combination, ModelA, Pmf};
use crate::error::{check_unit, Error, Result};
use crate::planner::ExplosionModel;
use crate::posterior::PosteriorRow;

/// Largest board the dense enumerations accept.
pub const MAX_BOXES: usize = 8;
/// Largest bomb count the allocation oracle accepts.
pub const MAX_ORACLE_BOMBS: u32 = 12;
/// Largest number of lock configurations the prior grid search accepts.
pub const MAX_GRID_CONFIGS: usize = 3;
/// Two candidate values closer than this are treated as tied.
pub const TIE_TOLERANCE: f64 = 1e-12;

fn guard_boxes(n: usize) -> Result<()> {
    if n > MAX_BOXES {
        return Err(Error::TooLarge {
            what: "number of boxes",
            actual: n,
            limit: MAX_BOXES,
        });
    }
    Ok(())
}

/// Lock placement `γ`: `bits[i] = 1` when box `i` is locked.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct LockConfig {
    bits: Vec<u8>,
}

impl LockConfig {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::InvalidArgument("lock bits must be 0 or 1".into()));
        }
        Ok(Self { bits })
    }

    pub fn from_locked(n: usize, locked: &[usize]) -> Result<Self> {
        let mut bits = vec![0u8; n];
        for &i in locked {
            if i >= n {
                return Err(Error::InvalidArgument(format!(
                    "box {i} out of range 0..{n}"
                )));
            }
            bits[i] = 1;
        }
        Ok(Self { bits })
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn n(&self) -> usize {
        self.bits.len()
    }

    pub fn locks(&self) -> usize {
        self.bits.iter().filter(|&&b| b == 1).count()
    }

    pub fn is_locked(&self, i: usize) -> bool {
        self.bits[i] == 1
    }
}

impl std::fmt::Display for LockConfig {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.bits.iter().try_for_each(|b| write!(f, "{b}"))
    }
}

/// All `C(n, k)` lock configurations in lexicographic order.
pub fn lock_configs(n: usize, k: usize) -> Result<Vec<LockConfig>> {
    guard_boxes(n)?;
    if k > n {
        return Err(Error::InvalidModel { n, k });
    }
    (0..binomial(n as u64, k as u64))
        .map(|rank| LockConfig::from_locked(n, &unrank_combination(n, k, rank)?))
        .collect()
}

/// Test outcome vector: `bits[i] = 1` is a plus on box `i`, `0` a minus.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Signal {
    bits: Vec<u8>,
}

impl Signal {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::InvalidArgument("signal bits must be 0 or 1".into()));
        }
        Ok(Self { bits })
    }

    pub fn from_index(n: usize, index: usize) -> Self {
        let bits = (0..n).map(|i| ((index >> (n - 1 - i)) & 1) as u8).collect();
        Self { bits }
    }

    pub fn index(&self) -> usize {
        self.bits.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn n(&self) -> usize {
        self.bits.len()
    }

    pub fn is_minus(&self, i: usize) -> bool {
        self.bits[i] == 0
    }

    /// `N(s)`, the number of minus signals.
    pub fn minus_count(&self) -> usize {
        self.bits.iter().filter(|&&b| b == 0).count()
    }
}

impl std::fmt::Display for Signal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.bits.iter().try_for_each(|b| write!(f, "{b}"))
    }
}

/// All `2^n` signals in index order.
pub fn signals(n: usize) -> Result<Vec<Signal>> {
    guard_boxes(n)?;
    Ok((0..1usize << n).map(|j| Signal::from_index(n, j)).collect())
}

/// Defender's distribution over lock configurations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Prior {
    n: usize,
    k: usize,
    configs: Vec<LockConfig>,
    weights: Vec<f64>,
}

impl Prior {
    pub fn new(n: usize, k: usize, weights: Vec<f64>) -> Result<Self> {
        let configs = lock_configs(n, k)?;
        if weights.len() != configs.len() {
            return Err(Error::InvalidPrior(format!(
                "expected {} weights, got {}",
                configs.len(),
                weights.len()
            )));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::InvalidPrior(
                "weights must be finite and non-negative".into(),
            ));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > TIE_TOLERANCE {
            return Err(Error::InvalidPrior(format!(
                "weights sum to {total}, not 1"
            )));
        }
        Ok(Self {
            n,
            k,
            configs,
            weights,
        })
    }

    /// Locks placed uniformly at random.
    pub fn uniform(n: usize, k: usize) -> Result<Self> {
        let len = lock_configs(n, k)?.len();
        Self::new(n, k, vec![1.0 / len as f64; len])
    }

    pub fn point_mass(n: usize, k: usize, index: usize) -> Result<Self> {
        let len = lock_configs(n, k)?.len();
        if index >= len {
            return Err(Error::InvalidPrior(format!(
                "index {index} out of range 0..{len}"
            )));
        }
        let mut weights = vec![0.0; len];
        weights[index] = 1.0;
        Self::new(n, k, weights)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn configs(&self) -> &[LockConfig] {
        &self.configs
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `P(T_i = 1)` under this prior.
    pub fn lock_probability(&self, i: usize) -> f64 {
        self.configs
            .iter()
            .zip(&self.weights)
            .filter(|(g, _)| g.is_locked(i))
            .map(|(_, w)| w)
            .sum()
    }
}

fn check_rates(a: f64, b: f64) -> Result<()> {
    check_unit("a", a)?;
    check_unit("b", b)
}

/// `p(s | γ)`: locked boxes test plus with probability `a`, unlocked boxes
/// test minus with probability `b`.
///
/// # Panics
/// If `gamma` and `s` have different lengths.
pub fn likelihood(gamma: &LockConfig, s: &Signal, a: f64, b: f64) -> f64 {
    assert_eq!(gamma.n(), s.n(), "lock config and signal lengths differ");
    gamma
        .bits
        .iter()
        .zip(&s.bits)
        .map(|(&lock, &plus)| match (lock, plus) {
            (1, 1) => a,
            (1, _) => 1.0 - a,
            (_, 0) => b,
            _ => 1.0 - b,
        })
        .product()
}

/// `p(s | π) = Σ_γ π(γ) p(s | γ)`.
pub fn signal_prob(prior: &Prior, s: &Signal, a: f64, b: f64) -> f64 {
    prior
        .configs
        .iter()
        .zip(&prior.weights)
        .map(|(g, w)| w * likelihood(g, s, a, b))
        .sum()
}

/// `θ(γ | s, π)` for every signal; rows with `p(s | π) = 0` are `None`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PosteriorMatrix {
    pub signals: Vec<Signal>,
    pub signal_probs: Vec<f64>,
    pub rows: Vec<Option<Vec<f64>>>,
}

pub fn posterior_matrix(prior: &Prior, a: f64, b: f64) -> Result<PosteriorMatrix> {
    check_rates(a, b)?;
    let signals = signals(prior.n)?;
    let mut signal_probs = Vec::with_capacity(signals.len());
    let rows = signals
        .iter()
        .map(|s| {
            let joint: Vec<f64> = prior
                .configs
                .iter()
                .zip(&prior.weights)
                .map(|(g, w)| w * likelihood(g, s, a, b))
                .collect();
            let total: f64 = joint.iter().sum();
            signal_probs.push(total);
            (total > 0.0).then(|| joint.iter().map(|j| j / total).collect())
        })
        .collect();
    Ok(PosteriorMatrix {
        signals,
        signal_probs,
        rows,
    })
}

/// `α_i(s, π) = P(T_i = 0 | s, π)` for every signal and box.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MarginalMatrix {
    pub signals: Vec<Signal>,
    pub signal_probs: Vec<f64>,
    pub rows: Vec<Option<Vec<f64>>>,
}

impl MarginalMatrix {
    pub fn row(&self, s: &Signal) -> Option<&[f64]> {
        self.rows.get(s.index())?.as_deref()
    }
}

pub fn marginal_matrix(prior: &Prior, a: f64, b: f64) -> Result<MarginalMatrix> {
    let post = posterior_matrix(prior, a, b)?;
    let rows = post
        .rows
        .iter()
        .map(|row| {
            row.as_ref().map(|theta| {
                (0..prior.n)
                    .map(|i| {
                        prior
                            .configs
                            .iter()
                            .zip(theta)
                            .filter(|(g, _)| !g.is_locked(i))
                            .map(|(_, t)| t)
                            .sum()
                    })
                    .collect()
            })
        })
        .collect();
    Ok(MarginalMatrix {
        signals: post.signals,
        signal_probs: post.signal_probs,
        rows,
    })
}

/// Minus-count distribution by summing `p(s | π_*)` over all signals.
pub fn minus_count_pmf_by_enumeration(model: &ModelA) -> Result<Pmf> {
    let prior = Prior::uniform(model.n(), model.k())?;
    let mut mass = vec![0.0; model.n() + 1];
    for s in signals(model.n())? {
        mass[s.minus_count()] += signal_prob(&prior, &s, model.a(), model.b());
    }
    Pmf::new(mass)
}

/// `(p⁻(x), p⁺(x))` for `x = 0..=n` read off the uniform-prior marginal
/// matrix at the first signal with `x` minuses. An entry is `None` when that
/// signal has zero probability; at `x = 0` (`x = n`) only the plus (minus)
/// half is meaningful and the other is reported as `NaN`.
pub fn posterior_by_enumeration(model: &ModelA) -> Result<Vec<Option<(f64, f64)>>> {
    let prior = Prior::uniform(model.n(), model.k())?;
    let alpha = marginal_matrix(&prior, model.a(), model.b())?;
    let n = model.n();
    Ok((0..=n)
        .map(|x| {
            // Minuses first: boxes 0..x minus, the rest plus.
            let s = Signal::from_index(n, (1usize << (n - x)) - 1);
            alpha.row(&s).map(|row| {
                let minus = if x > 0 { row[0] } else { f64::NAN };
                let plus = if x < n { row[n - 1] } else { f64::NAN };
                (minus, plus)
            })
        })
        .collect())
}

/// Sizes of the cells `G(t, x)` of pairs `(γ, s)` with `t` false minuses and
/// `x` minuses, and the common probability `p(t, x)` of each pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartitionTable {
    pub n: usize,
    pub k: usize,
    /// `counts[t][x] = |G(t, x)|`.
    pub counts: Vec<Vec<u64>>,
    /// `pair_prob[t][x] = p(s | γ)` for any `(γ, s)` in `G(t, x)`; 0 for empty cells.
    pub pair_prob: Vec<Vec<f64>>,
}

impl PartitionTable {
    pub fn count(&self, t: usize, x: usize) -> u64 {
        self.counts
            .get(t)
            .and_then(|r| r.get(x))
            .copied()
            .unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }
}

/// `|G(t, x)| = C(n,k) C(k,t) C(n-k, x-t)`.
pub fn partition_counts(model: &ModelA) -> PartitionTable {
    let (n, k) = (model.n(), model.k());
    let (a, b) = (model.a(), model.b());
    let mut counts = vec![vec![0u64; n + 1]; k + 1];
    let mut pair_prob = vec![vec![0.0; n + 1]; k + 1];
    for t in 0..=k {
        for x in t..=(t + n - k) {
            counts[t][x] = binomial(n as u64, k as u64)
                * binomial(k as u64, t as u64)
                * binomial((n - k) as u64, (x - t) as u64);
            let correct_minus = (x - t) as i32;
            pair_prob[t][x] = (1.0 - a).powi(t as i32)
                * a.powi((k - t) as i32)
                * b.powi(correct_minus)
                * (1.0 - b).powi((n - k) as i32 - correct_minus);
        }
    }
    PartitionTable {
        n,
        k,
        counts,
        pair_prob,
    }
}

/// `|G(t, x)|` by walking every `(γ, s)` pair.
pub fn partition_counts_by_enumeration(n: usize, k: usize) -> Result<Vec<Vec<u64>>> {
    let mut counts = vec![vec![0u64; n + 1]; k + 1];
    let configs = lock_configs(n, k)?;
    for s in signals(n)? {
        for g in &configs {
            let t = (0..n).filter(|&i| g.is_locked(i) && s.is_minus(i)).count();
            counts[t][s.minus_count()] += 1;
        }
    }
    Ok(counts)
}

/// Attacker's single-bomb response to every signal.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Stage2Response {
    /// Per signal, the probability of bombing each box; `None` for
    /// zero-probability signals.
    pub response: Vec<Option<Vec<f64>>>,
    /// `v(π)`, the total expected damage.
    pub value: f64,
}

fn check_costs(n: usize, costs: &[f64]) -> Result<()> {
    if costs.len() != n || costs.iter().any(|c| !(c.is_finite() && *c > 0.0)) {
        return Err(Error::InvalidArgument(format!(
            "need {n} positive finite box values"
        )));
    }
    Ok(())
}

fn tied_argmax(losses: &[f64]) -> Vec<f64> {
    let best = losses.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let tol = TIE_TOLERANCE * best.abs().max(1.0);
    let winners = losses.iter().filter(|&&l| best - l <= tol).count();
    losses
        .iter()
        .map(|&l| {
            if best - l <= tol {
                1.0 / winners as f64
            } else {
                0.0
            }
        })
        .collect()
}

/// One bomb aimed at the box with the largest loss `p c_i α_i(s, π)`, ties
/// split evenly.
pub fn stage2_response(
    prior: &Prior,
    a: f64,
    b: f64,
    explosion: &ExplosionModel,
    costs: &[f64],
) -> Result<Stage2Response> {
    check_costs(prior.n, costs)?;
    let alpha = marginal_matrix(prior, a, b)?;
    let p = explosion.p();
    let mut value = 0.0;
    let response = alpha
        .rows
        .iter()
        .zip(&alpha.signal_probs)
        .map(|(row, &ps)| {
            row.as_ref().map(|alpha| {
                let losses: Vec<f64> = alpha.iter().zip(costs).map(|(al, c)| p * c * al).collect();
                value += ps * losses.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                tied_argmax(&losses)
            })
        })
        .collect();
    Ok(Stage2Response { response, value })
}

/// A candidate allocation split by signal, each side sorted descending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplitAllocation {
    pub minus: Vec<u32>,
    pub plus: Vec<u32>,
}

/// Best value found by exhaustive search and every allocation attaining it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleResult<A> {
    pub value: f64,
    pub maximizers: Vec<A>,
}

fn guard_oracle(n: usize, m: u32) -> Result<()> {
    guard_boxes(n)?;
    if m > MAX_ORACLE_BOMBS {
        return Err(Error::TooLarge {
            what: "number of bombs",
            actual: m as usize,
            limit: MAX_ORACLE_BOMBS as usize,
        });
    }
    Ok(())
}

/// Non-increasing sequences of `len` counts summing to `total`.
pub fn multisets(len: usize, total: u32) -> Vec<Vec<u32>> {
    fn go(len: usize, total: u32, cap: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if len == 0 {
            if total == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        let lo = total.div_ceil(len as u32);
        for u in (lo..=cap.min(total)).rev() {
            prefix.push(u);
            go(len - 1, total - u, u, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(len, total, total, &mut Vec::with_capacity(len), &mut out);
    out
}

/// Every ordered way to put `total` bombs into `len` boxes.
pub fn compositions(len: usize, total: u32) -> Vec<Vec<u32>> {
    fn go(len: usize, total: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if len == 1 {
            prefix.push(total);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for u in (0..=total).rev() {
            prefix.push(u);
            go(len - 1, total - u, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if len == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(len, total, &mut Vec::with_capacity(len), &mut out);
    out
}

fn collect_best<A>(candidates: impl Iterator<Item = (f64, A)>) -> OracleResult<A> {
    let mut best = OracleResult {
        value: f64::NEG_INFINITY,
        maximizers: Vec::new(),
    };
    for (v, alloc) in candidates {
        let tol = TIE_TOLERANCE * v.abs().max(1.0);
        if v > best.value + tol {
            best.value = v;
            best.maximizers.clear();
            best.maximizers.push(alloc);
        } else if (v - best.value).abs() <= tol {
            best.value = best.value.max(v);
            best.maximizers.push(alloc);
        }
    }
    best
}

/// Maximise the split strategy value over all multisets of `m` bombs on `x`
/// minus and `n - x` plus boxes.
pub fn oracle_best_allocation(
    row: &PosteriorRow,
    explosion: &ExplosionModel,
    n: usize,
    x: usize,
    m: u32,
) -> Result<OracleResult<SplitAllocation>> {
    guard_oracle(n, m)?;
    if x > n {
        return Err(Error::InvalidArgument(format!("x={x} exceeds n={n}")));
    }
    let damage = |c: &[u32]| -> f64 { c.iter().map(|&u| explosion.destroy_prob(u)).sum() };
    let candidates = (0..=m).flat_map(|on_minus| {
        let minus_sets = multisets(x, on_minus);
        let plus_sets = multisets(n - x, m - on_minus);
        minus_sets.into_iter().flat_map(move |minus| {
            plus_sets.clone().into_iter().map(move |plus| {
                let v = row.p_minus * damage(&minus) + row.p_plus * damage(&plus);
                (
                    v,
                    SplitAllocation {
                        minus: minus.clone(),
                        plus,
                    },
                )
            })
        })
    });
    Ok(collect_best(candidates))
}

/// Maximise `Σ_i α_i p(u_i)` over every composition of `m` bombs into the
/// boxes, for an arbitrary per-box unlocked-probability row `α`.
pub fn oracle_best_allocation_weighted(
    alpha: &[f64],
    explosion: &ExplosionModel,
    m: u32,
) -> Result<OracleResult<Vec<u32>>> {
    guard_oracle(alpha.len(), m)?;
    let candidates = compositions(alpha.len(), m).into_iter().map(|u| {
        let v = alpha
            .iter()
            .zip(&u)
            .map(|(al, &b)| al * explosion.destroy_prob(b))
            .sum();
        (v, u)
    });
    Ok(collect_best(candidates))
}

/// Grid points minimising `v(π)` and the minimum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridSearchResult {
    pub configs: Vec<LockConfig>,
    pub steps: u32,
    pub value: f64,
    pub minimizers: Vec<Vec<f64>>,
}

/// Integer points of the simplex `{w : Σ w_j = steps}` in `dim` coordinates.
fn simplex_points(dim: usize, steps: u32) -> Vec<Vec<u32>> {
    compositions(dim, steps)
}

/// Search the prior simplex on a grid of spacing `1/steps` for the priors
/// minimising single-bomb damage `v(π)`.
///
/// Every grid point within `1e-9` of the minimum is reported.
pub fn gridsearch_prior(
    n: usize,
    k: usize,
    a: f64,
    b: f64,
    explosion: &ExplosionModel,
    costs: &[f64],
    steps: u32,
) -> Result<GridSearchResult> {
    check_rates(a, b)?;
    check_costs(n, costs)?;
    if steps == 0 {
        return Err(Error::InvalidArgument(
            "grid needs at least one step".into(),
        ));
    }
    let configs = lock_configs(n, k)?;
    if configs.len() > MAX_GRID_CONFIGS {
        return Err(Error::TooLarge {
            what: "number of lock configurations",
            actual: configs.len(),
            limit: MAX_GRID_CONFIGS,
        });
    }
    let sigs = signals(n)?;
    // weight[s][γ][i] = c_i p(s|γ) if box i is unlocked under γ, else 0, so
    // v(π) = p Σ_s max_i Σ_γ π(γ) weight[s][γ][i].
    let weight: Vec<Vec<Vec<f64>>> = sigs
        .iter()
        .map(|s| {
            configs
                .iter()
                .map(|g| {
                    let l = likelihood(g, s, a, b);
                    (0..n)
                        .map(|i| if g.is_locked(i) { 0.0 } else { costs[i] * l })
                        .collect()
                })
                .collect()
        })
        .collect();
    let value_at = |pi: &[f64]| -> f64 {
        explosion.p()
            * weight
                .iter()
                .map(|per_config| {
                    (0..n)
                        .map(|i| {
                            per_config
                                .iter()
                                .zip(pi)
                                .map(|(w, p)| w[i] * p)
                                .sum::<f64>()
                        })
                        .fold(f64::NEG_INFINITY, f64::max)
                })
                .sum::<f64>()
    };
    let scored: Vec<(f64, Vec<f64>)> = simplex_points(configs.len(), steps)
        .into_iter()
        .map(|pt| {
            let pi: Vec<f64> = pt
                .iter()
                .map(|&w| f64::from(w) / f64::from(steps))
                .collect();
            (value_at(&pi), pi)
        })
        .collect();
    let min = scored.iter().map(|(v, _)| *v).fold(f64::INFINITY, f64::min);
    let minimizers = scored
        .into_iter()
        .filter(|(v, _)| *v - min <= 1e-9)
        .map(|(_, pi)| pi)
        .collect();
    Ok(GridSearchResult {
        configs,
        steps,
        value: min,
        minimizers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::posterior::posterior_by_reduction;

    const A: f64 = 7.0 / 12.0;
    const B: f64 = 9.0 / 12.0;

    fn sig(bits: &[u8]) -> Signal {
        Signal::new(bits.to_vec()).unwrap()
    }

    fn boom() -> ExplosionModel {
        ExplosionModel::new(0.6).unwrap()
    }

    #[test]
    fn enumeration_order() {
        let g = lock_configs(4, 2).unwrap();
        let shown: Vec<String> = g.iter().map(|c| c.to_string()).collect();
        assert_eq!(shown, ["1100", "1010", "1001", "0110", "0101", "0011"]);
        let s = signals(3).unwrap();
        assert_eq!(s[0].to_string(), "000");
        assert_eq!(s[1].to_string(), "001");
        assert_eq!(s[6].to_string(), "110");
        assert!(s.iter().enumerate().all(|(j, s)| s.index() == j));
        assert!(lock_configs(9, 2).is_err());
        assert!(Signal::new(vec![0, 2]).is_err());
    }

    #[test]
    fn likelihood_examples() {
        let g = LockConfig::new(vec![1, 0]).unwrap();
        assert!((likelihood(&g, &sig(&[1, 1]), A, B) - A * (1.0 - B)).abs() < 1e-15);
        let g = LockConfig::new(vec![1, 0, 0]).unwrap();
        assert!((likelihood(&g, &sig(&[0, 0, 0]), A, B) - (1.0 - A) * B * B).abs() < 1e-15);
        for s in signals(3).unwrap() {
            let l = likelihood(&g, &s, 1.0, 1.0);
            assert_eq!(l, if s.bits() == [1, 0, 0] { 1.0 } else { 0.0 });
        }
    }

    #[test]
    fn signal_probability_examples() {
        let uni = Prior::uniform(2, 1).unwrap();
        assert!((signal_prob(&uni, &sig(&[1, 1]), A, B) - A * (1.0 - B)).abs() < 1e-15);
        let uni = Prior::uniform(3, 1).unwrap();
        let e2 = A * B * (1.0 - B);
        let e3 = (1.0 - A) * (1.0 - B) * (1.0 - B);
        let want = (2.0 * e2 + e3) / 3.0;
        assert!((signal_prob(&uni, &sig(&[1, 1, 0]), A, B) - want).abs() < 1e-15);
        let point = Prior::point_mass(3, 1, 2).unwrap();
        let g = &point.configs()[2];
        for s in signals(3).unwrap() {
            assert_eq!(signal_prob(&point, &s, A, B), likelihood(g, &s, A, B));
        }
    }

    #[test]
    fn prior_validation() {
        assert!(Prior::new(2, 1, vec![0.5, 0.6]).is_err());
        assert!(Prior::new(2, 1, vec![1.0]).is_err());
        assert!(Prior::new(2, 1, vec![1.5, -0.5]).is_err());
        assert!(Prior::point_mass(2, 1, 2).is_err());
        let uni = Prior::uniform(5, 2).unwrap();
        for i in 0..5 {
            assert!((uni.lock_probability(i) - 0.4).abs() < 1e-15);
        }
    }

    #[test]
    fn posterior_examples() {
        let post = posterior_matrix(&Prior::uniform(2, 1).unwrap(), A, B).unwrap();
        assert_eq!(
            post.rows[sig(&[1, 1]).index()].as_deref(),
            Some(&[0.5, 0.5][..])
        );
        let e2 = A * B;
        let e3 = (1.0 - A) * (1.0 - B);
        let theta = post.rows[sig(&[1, 0]).index()].as_ref().unwrap();
        assert!((theta[0] - e2 / (e2 + e3)).abs() < 1e-15);

        let point = Prior::point_mass(3, 1, 1).unwrap();
        let post = posterior_matrix(&point, A, B).unwrap();
        for row in post.rows.iter().flatten() {
            assert_eq!(row, point.weights());
        }
    }

    #[test]
    fn marginal_examples() {
        let alpha = marginal_matrix(&Prior::uniform(3, 1).unwrap(), A, B).unwrap();
        assert!((alpha.row(&sig(&[0, 1, 1])).unwrap()[0] - 42.0 / 47.0).abs() < 1e-14);
        for row in alpha.rows.iter().flatten() {
            assert!((row.iter().sum::<f64>() - 2.0).abs() < 1e-12);
        }
        let alpha = marginal_matrix(&Prior::uniform(2, 1).unwrap(), A, B).unwrap();
        let row = alpha.row(&sig(&[0, 1])).unwrap();
        assert!((row[0] - 21.0 / 26.0).abs() < 1e-14);
        assert!((row[1] - 5.0 / 26.0).abs() < 1e-14);
    }

    #[test]
    fn perfect_tests_leave_signals_with_zero_probability() {
        let alpha = marginal_matrix(&Prior::uniform(3, 1).unwrap(), 1.0, 1.0).unwrap();
        assert!(alpha.row(&sig(&[0, 0, 0])).is_none());
        assert_eq!(alpha.row(&sig(&[0, 1, 0])).unwrap(), &[1.0, 0.0, 1.0]);
    }

    #[test]
    fn partition_examples() {
        let m31 = ModelA::new(3, 1, A, B).unwrap();
        let t = partition_counts(&m31);
        assert_eq!(t.count(0, 1), 6);
        assert_eq!(t.total(), 3 * 8);
        assert_eq!(t.counts, partition_counts_by_enumeration(3, 1).unwrap());
        let m21 = ModelA::new(2, 1, A, B).unwrap();
        let t = partition_counts(&m21);
        let cells: Vec<u64> = t
            .counts
            .iter()
            .flatten()
            .copied()
            .filter(|&c| c > 0)
            .collect();
        assert_eq!(cells, [2, 2, 2, 2]);
    }

    #[test]
    fn stage2_single_bomb() {
        let uni = Prior::uniform(2, 1).unwrap();
        let res = stage2_response(&uni, A, B, &boom(), &[1.0, 1.0]).unwrap();
        assert!((res.value - 0.4).abs() < 1e-12);
        assert_eq!(
            res.response[sig(&[0, 1]).index()].as_deref(),
            Some(&[1.0, 0.0][..])
        );
        assert_eq!(
            res.response[sig(&[1, 0]).index()].as_deref(),
            Some(&[0.0, 1.0][..])
        );
        assert_eq!(
            res.response[sig(&[0, 0]).index()].as_deref(),
            Some(&[0.5, 0.5][..])
        );

        let uni = Prior::uniform(3, 1).unwrap();
        let res = stage2_response(&uni, A, B, &boom(), &[1.0; 3]).unwrap();
        let third = 1.0 / 3.0;
        assert_eq!(res.response[0].as_deref(), Some(&[third, third, third][..]));
        assert!(stage2_response(&uni, A, B, &boom(), &[1.0, 0.0, 1.0]).is_err());
    }

    #[test]
    fn oracle_examples() {
        let m = ModelA::new(2, 1, A, B).unwrap();
        let post = posterior_by_reduction(&m);
        let best = oracle_best_allocation(post.row(1).unwrap(), &boom(), 2, 1, 2).unwrap();
        assert!((best.value - 0.84 * 21.0 / 26.0).abs() < 1e-12);
        assert_eq!(
            best.maximizers,
            [SplitAllocation {
                minus: vec![2],
                plus: vec![0]
            }]
        );
        let zero = oracle_best_allocation(post.row(1).unwrap(), &boom(), 2, 1, 0).unwrap();
        assert_eq!(zero.value, 0.0);

        let m = ModelA::new(7, 3, A, B).unwrap();
        let post = posterior_by_reduction(&m);
        let best = oracle_best_allocation(post.row(6).unwrap(), &boom(), 7, 6, 12).unwrap();
        assert_eq!(best.maximizers.len(), 1);
        assert!(oracle_best_allocation(post.row(6).unwrap(), &boom(), 7, 6, 13).is_err());
    }

    #[test]
    fn multiset_and_composition_counts() {
        assert_eq!(
            multisets(3, 4),
            [vec![4, 0, 0], vec![3, 1, 0], vec![2, 2, 0], vec![2, 1, 1]]
        );
        assert_eq!(multisets(0, 0), [Vec::<u32>::new()]);
        assert!(multisets(0, 2).is_empty());
        assert_eq!(compositions(3, 4).len(), 15);
        assert_eq!(compositions(8, 12).len() as u64, binomial(19, 7));
    }

    #[test]
    fn weighted_oracle_agrees_with_split_oracle() {
        let m = ModelA::new(4, 2, 0.8, 0.7).unwrap();
        let post = posterior_by_reduction(&m);
        let row = post.row(2).unwrap();
        let alpha = [row.p_minus, row.p_minus, row.p_plus, row.p_plus];
        for bombs in 0..=8 {
            let split = oracle_best_allocation(row, &boom(), 4, 2, bombs).unwrap();
            let full = oracle_best_allocation_weighted(&alpha, &boom(), bombs).unwrap();
            assert!((split.value - full.value).abs() < 1e-12);
        }
    }

    #[test]
    fn gridsearch_examples() {
        let res = gridsearch_prior(2, 1, A, B, &boom(), &[1.0, 1.0], 1000).unwrap();
        assert!(res
            .minimizers
            .iter()
            .all(|pi| (pi[0] - 0.5).abs() <= 1e-3 + 1e-12));

        let res = gridsearch_prior(2, 1, A, B, &boom(), &[5.0, 1.0], 1000).unwrap();
        assert!(res.minimizers.iter().all(|pi| pi[0] > 0.5));

        // Uninformative tests: v(π) = p max_i c_i P(T_i = 0).
        let res = gridsearch_prior(3, 1, 0.5, 0.5, &boom(), &[1.0; 3], 30).unwrap();
        let third = 1.0 / 3.0;
        assert_eq!(res.minimizers.len(), 1);
        assert!(res.minimizers[0].iter().all(|w| (w - third).abs() < 1e-12));
        assert!((res.value - 0.6 * 2.0 / 3.0).abs() < 1e-12);

        assert!(gridsearch_prior(4, 2, A, B, &boom(), &[1.0; 4], 10).is_err());
        assert!(gridsearch_prior(2, 1, A, B, &boom(), &[1.0, 1.0], 0).is_err());
    }
}
