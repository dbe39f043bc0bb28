//! Locked-box testing games.
//!
//! `n` boxes of which `k` are locked. A noisy test marks each box with a
//! signal, `-` (looks unlocked) or `+` (looks locked), with sensitivity `a`
//! (`P(+ | locked)`) and specificity `b` (`P(- | unlocked)`). An attacker sees
//! the signals and drops `m` bombs; each bomb independently destroys an
//! unlocked box with probability `p`.
//!
//! * [`combinatorics`]: the minus-count distribution and the joint law.
//! * [`posterior`]: per-signal posteriors and the likelihood ratio `r(x)`.
//! * [`planner`]: thresholds, fill-and-switch allocations, game values.
//! * [`exact`]: brute-force Bayesian enumeration for small boards.
//! * [`montecarlo`]: seeded, reproducible simulation of the game.

pub mod combinatorics;
pub mod error;
pub mod exact;
pub mod montecarlo;
pub mod planner;
pub mod posterior;

pub use error::{Error, Result};
