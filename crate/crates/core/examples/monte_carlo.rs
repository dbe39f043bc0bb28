//! Seeded simulation of the whole game against the solved value.
//!
//! cargo run --release -p lbt-core --example monte_carlo

use lbt_core::combinatorics::ModelA;
use lbt_core::montecarlo::{simulate, SimConfig};
use lbt_core::planner::{solve, ExplosionModel};

fn main() -> lbt_core::Result<()> {
    let model = ModelA::new(7, 3, 7.0 / 12.0, 9.0 / 12.0)?;
    let explosion = ExplosionModel::new(0.6)?;
    let m = 5;
    let game = solve(&model, &explosion, m)?;
    let res = simulate(&SimConfig {
        model,
        explosion,
        m,
        trials: 200_000,
        seed: 1,
    })?;

    println!(
        "simulated {:.4} +/- {:.4} (1 SE), solved v({m}) = {:.4}",
        res.mean_destroyed,
        res.std_error,
        game.game_value(m).unwrap_or(f64::NAN)
    );
    for s in &res.per_x {
        if let (Some(mean), Some(se)) = (s.mean, s.std_error) {
            println!(
                "  x={}  trials={:>6}  mean={mean:.4} +/- {se:.4}  v(x,m)={:.4}",
                s.x,
                s.trials,
                game.value(s.x, m).unwrap_or(f64::NAN)
            );
        }
    }
    Ok(())
}
