//! Command-line flags.

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Solve and inspect locked-box testing games.
#[derive(Debug, Parser)]
#[command(name = "lbt", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Decimal places (text defaults to 3; csv and json default to full precision).
    #[arg(long, global = true)]
    pub precision: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    /// p(s | γ) for every lock placement and signal.
    Likelihood,
    /// Joint law of false minuses and minuses, with the minus-count row.
    Joint,
    /// Posteriors and likelihood ratios.
    Ratios,
    /// v(x, m) and v(m).
    Values,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Number of boxes.
    #[arg(long)]
    pub n: usize,
    /// Number of locks.
    #[arg(long)]
    pub k: usize,
    /// Sensitivity P(+ | locked), decimal or fraction such as 7/12.
    #[arg(long, value_parser = parse_number)]
    pub a: f64,
    /// Specificity P(- | unlocked), decimal or fraction.
    #[arg(long, value_parser = parse_number)]
    pub b: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Thresholds, allocations and game values.
    Solve {
        #[command(flatten)]
        model: ModelArgs,
        /// Single-bomb explosion probability.
        #[arg(long, value_parser = parse_number)]
        p: f64,
        /// Report a single bomb count.
        #[arg(long, conflicts_with = "m_max", required_unless_present = "m_max")]
        m: Option<u32>,
        /// Report every bomb count from 1 up to this one.
        #[arg(long)]
        m_max: Option<u32>,
    },
    /// Posterior probabilities and the likelihood ratio r(x).
    Ratios {
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Distribution of the number of minus signals.
    Dist {
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Reference tables.
    Tables {
        #[arg(long, value_enum)]
        which: Which,
        #[command(flatten)]
        model: ModelArgs,
        /// Explosion probability (values table only).
        #[arg(long, value_parser = parse_number)]
        p: Option<f64>,
        /// Largest bomb count (values table only).
        #[arg(long)]
        m_max: Option<u32>,
    },
    /// Compare the planner with exhaustive allocation search.
    Oracle {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_parser = parse_number)]
        p: f64,
        #[arg(long)]
        m: u32,
        /// Restrict to one minus count (default: every 0 < x < n).
        #[arg(long)]
        x: Option<usize>,
    },
    /// Monte Carlo estimate of the game value.
    Simulate {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_parser = parse_number)]
        p: f64,
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        /// Random seed; falls back to LBT_SEED, then 0.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Grid search over lock-placement priors for single-bomb damage.
    Gridsearch {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_parser = parse_number)]
        p: f64,
        /// Grid spacing; its reciprocal must be an integer.
        #[arg(long, value_parser = parse_number, default_value = "0.001")]
        resolution: f64,
        /// Per-box values, comma separated (default: all 1).
        #[arg(long, value_delimiter = ',', value_parser = parse_number)]
        costs: Option<Vec<f64>>,
    },
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Parse `"0.75"`, `"3"` or an exact fraction `"9/12"`.
///
/// Fractions are reduced in integers before the single division.
pub fn parse_number(text: &str) -> Result<f64, String> {
    let text = text.trim();
    let value = match text.split_once('/') {
        Some((num, den)) => {
            let num: i128 = num
                .trim()
                .parse()
                .map_err(|_| format!("bad numerator in '{text}'"))?;
            let den: i128 = den
                .trim()
                .parse()
                .map_err(|_| format!("bad denominator in '{text}'"))?;
            if den == 0 {
                return Err(format!("zero denominator in '{text}'"));
            }
            let g = gcd(num.unsigned_abs(), den.unsigned_abs()).max(1) as i128;
            let (num, den) = (num / g, den / g);
            let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
            num as f64 / den as f64
        }
        None => text
            .parse::<f64>()
            .map_err(|_| format!("'{text}' is not a number or fraction"))?,
    };
    if !value.is_finite() {
        return Err(format!("'{text}' is not finite"));
    }
    Ok(value)
}
