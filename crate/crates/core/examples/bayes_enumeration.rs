//! Brute-force Bayesian enumeration: likelihoods, posteriors over lock
//! placements and per-box probabilities of being unlocked.
//!
//! cargo run -p lbt-core --example bayes_enumeration

use lbt_core::exact::{likelihood, marginal_matrix, posterior_matrix, Prior};

fn main() -> lbt_core::Result<()> {
    let (a, b) = (7.0 / 12.0, 9.0 / 12.0);
    let prior = Prior::uniform(3, 1)?;
    let post = posterior_matrix(&prior, a, b)?;
    let alpha = marginal_matrix(&prior, a, b)?;

    let header: Vec<String> = prior
        .configs()
        .iter()
        .map(|g| format!("theta({g})"))
        .collect();
    println!("s     p(s)      {}   alpha", header.join("  "));
    for ((s, ps), (theta, al)) in post
        .signals
        .iter()
        .zip(&post.signal_probs)
        .zip(post.rows.iter().zip(&alpha.rows))
    {
        let theta = theta
            .as_ref()
            .expect("imperfect tests give every signal mass");
        let al = al.as_ref().expect("same rows");
        let cols: Vec<String> = theta.iter().map(|t| format!("{t:>10.6}")).collect();
        println!("{s}  {ps:.6}  {}   {al:.4?}", cols.join("  "));
    }

    let g = &prior.configs()[0];
    let total: f64 = post.signals.iter().map(|s| likelihood(g, s, a, b)).sum();
    println!("\nlikelihoods of {g} sum to {total}");
    Ok(())
}
