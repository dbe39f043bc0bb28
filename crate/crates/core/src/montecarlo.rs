//! Seeded simulation of the full game: random locks, noisy tests, the
//! fill-and-switch attack, and independent explosions.
//!
//! Stream rule v1: trials are cut into batches of [`BATCH_SIZE`]; batch `j`
//! draws from `ChaCha8Rng::seed_from_u64(seed)` on stream `j`. Per-batch
//! tallies are integers, so the parallel reduction is exact and the result is
//! the same bit for bit regardless of thread count or scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::combinatorics::{binomial, unrank_combination, ModelA};
use crate::error::{Error, Result};
use crate::planner::{solve, uniform_layers, ExplosionModel};

/// Trials per random stream.
pub const BATCH_SIZE: u64 = 4096;
/// Identifier of the trial-to-stream mapping.
pub const STREAM_RULE: &str = "chacha8-batch4096-v1";

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimConfig {
    pub model: ModelA,
    pub explosion: ExplosionModel,
    pub m: u32,
    pub trials: u64,
    pub seed: u64,
}

/// Statistics over the trials that observed a given minus count.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct XSummary {
    pub x: usize,
    pub trials: u64,
    pub mean: Option<f64>,
    pub std_error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimResult {
    pub trials: u64,
    pub mean_destroyed: f64,
    pub std_error: f64,
    /// One entry for every `x = 0..=n`.
    pub per_x: Vec<XSummary>,
    pub stream_rule: &'static str,
}

#[derive(Debug, Clone, Default, PartialEq)]
struct Tally {
    count: u64,
    sum: u64,
    sum_sq: u64,
}

impl Tally {
    fn add(&mut self, destroyed: u64) {
        self.count += 1;
        self.sum += destroyed;
        self.sum_sq += destroyed * destroyed;
    }

    fn merge(&mut self, other: &Tally) {
        self.count += other.count;
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
    }

    fn mean(&self) -> Option<f64> {
        (self.count > 0).then(|| self.sum as f64 / self.count as f64)
    }

    /// Standard error of the mean from the unbiased sample variance.
    fn std_error(&self) -> Option<f64> {
        if self.count == 0 {
            return None;
        }
        if self.count == 1 {
            return Some(0.0);
        }
        let n = u128::from(self.count);
        let spread = n * u128::from(self.sum_sq) - u128::from(self.sum).pow(2);
        let variance = spread as f64 / (n * (n - 1)) as f64;
        Some((variance / self.count as f64).sqrt())
    }
}

/// Bombs per box for a given signal, indexed by minus rank and plus rank.
struct Plan {
    minus: Vec<Vec<u32>>,
    plus: Vec<Vec<u32>>,
}

fn build_plan(model: &ModelA, explosion: &ExplosionModel, m: u32) -> Result<Plan> {
    let n = model.n();
    let tables = solve(model, explosion, m)?;
    let (l, e) = uniform_layers(n, m);
    let spread: Vec<u32> = (0..n as u32)
        .map(|i| if i < e { l + 1 } else { l })
        .collect();
    let mut minus = vec![Vec::new(); n + 1];
    let mut plus = vec![Vec::new(); n + 1];
    minus[n] = spread.clone();
    plus[0] = spread;
    for x in 1..n {
        if let Some(t) = tables.tuple(x, m) {
            let (mi, pl) = t.counts(n, x);
            minus[x] = mi;
            plus[x] = pl;
        }
    }
    Ok(Plan { minus, plus })
}

fn run_batch(config: &SimConfig, plan: &Plan, batch: u64, trials: u64) -> Result<Vec<Tally>> {
    let model = &config.model;
    let (n, k) = (model.n(), model.k());
    let (a, b) = (model.a(), model.b());
    let configs = binomial(n as u64, k as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(batch);

    let mut tallies = vec![Tally::default(); n + 1];
    let mut locked = vec![false; n];
    let mut minus = vec![false; n];
    for _ in 0..trials {
        locked.fill(false);
        for i in unrank_combination(n, k, rng.random_range(0..configs))? {
            locked[i] = true;
        }
        for i in 0..n {
            let plus_prob = if locked[i] { a } else { 1.0 - b };
            minus[i] = rng.random::<f64>() >= plus_prob;
        }
        let x = minus.iter().filter(|&&s| s).count();
        let (mut next_minus, mut next_plus) = (0, 0);
        let mut destroyed = 0u64;
        for i in 0..n {
            let bombs = if minus[i] {
                next_minus += 1;
                plan.minus[x][next_minus - 1]
            } else {
                next_plus += 1;
                plan.plus[x][next_plus - 1]
            };
            if !locked[i] && bombs > 0 && rng.random::<f64>() < config.explosion.destroy_prob(bombs)
            {
                destroyed += 1;
            }
        }
        tallies[x].add(destroyed);
    }
    Ok(tallies)
}

/// Estimate the expected number of destroyed boxes by simulation.
pub fn simulate(config: &SimConfig) -> Result<SimResult> {
    if config.trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let plan = build_plan(&config.model, &config.explosion, config.m)?;
    let batches = config.trials.div_ceil(BATCH_SIZE);
    let per_batch: Vec<Vec<Tally>> = (0..batches)
        .into_par_iter()
        .map(|j| {
            let size = BATCH_SIZE.min(config.trials - j * BATCH_SIZE);
            run_batch(config, &plan, j, size)
        })
        .collect::<Result<_>>()?;

    let n = config.model.n();
    let mut by_x = vec![Tally::default(); n + 1];
    for tallies in &per_batch {
        for (acc, t) in by_x.iter_mut().zip(tallies) {
            acc.merge(t);
        }
    }
    let mut overall = Tally::default();
    by_x.iter().for_each(|t| overall.merge(t));

    Ok(SimResult {
        trials: config.trials,
        mean_destroyed: overall.mean().unwrap_or(0.0),
        std_error: overall.std_error().unwrap_or(0.0),
        per_x: by_x
            .iter()
            .enumerate()
            .map(|(x, t)| XSummary {
                x,
                trials: t.count,
                mean: t.mean(),
                std_error: t.std_error(),
            })
            .collect(),
        stream_rule: STREAM_RULE,
    })
}
