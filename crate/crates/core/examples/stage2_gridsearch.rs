//! Single-bomb attacker response and the defender's search over lock
//! placement priors.
//!
//! cargo run -p lbt-core --example stage2_gridsearch

use lbt_core::exact::{gridsearch_prior, stage2_response, Prior};
use lbt_core::planner::ExplosionModel;

fn main() -> lbt_core::Result<()> {
    let (a, b) = (7.0 / 12.0, 9.0 / 12.0);
    let explosion = ExplosionModel::new(0.6)?;

    let uniform = Prior::uniform(2, 1)?;
    let resp = stage2_response(&uniform, a, b, &explosion, &[1.0, 1.0])?;
    println!("uniform prior, equal box values: v = {:.6}", resp.value);

    for costs in [[1.0, 1.0], [3.0, 1.0]] {
        let grid = gridsearch_prior(2, 1, a, b, &explosion, &costs, 1000)?;
        let shown: Vec<String> = grid
            .minimizers
            .iter()
            .map(|pi| format!("{pi:.3?}"))
            .collect();
        println!(
            "box values {costs:?}: min v = {:.6} at {} (weights on {:?})",
            grid.value,
            shown.join(", "),
            grid.configs
                .iter()
                .map(|g| g.to_string())
                .collect::<Vec<_>>()
        );
    }
    Ok(())
}
