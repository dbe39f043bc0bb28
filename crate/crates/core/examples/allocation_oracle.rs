//! Exhaustive allocation search next to the planner's closed form.
//!
//! cargo run -p lbt-core --example allocation_oracle

use lbt_core::combinatorics::ModelA;
use lbt_core::exact::oracle_best_allocation;
use lbt_core::planner::{solve, ExplosionModel};

fn main() -> lbt_core::Result<()> {
    let model = ModelA::new(2, 1, 7.0 / 12.0, 9.0 / 12.0)?;
    let explosion = ExplosionModel::new(0.6)?;
    let game = solve(&model, &explosion, 5)?;
    let row = game.posterior.row(1).expect("x = 1 is possible");

    println!("A(2,1), x = 1 (one minus box, one plus box)");
    for m in 1..=5 {
        let best = oracle_best_allocation(row, &explosion, 2, 1, m)?;
        let planned = game.tuple(1, m).expect("interior x");
        let shown: Vec<String> = best
            .maximizers
            .iter()
            .map(|a| format!("({},{})", a.minus[0], a.plus[0]))
            .collect();
        println!(
            "  m={m}: oracle {:.6} at {}   planner {:.6} with {planned}",
            best.value,
            shown.join(" "),
            game.value(1, m).unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
