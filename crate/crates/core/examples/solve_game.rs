//! Thresholds, fill-and-switch allocations and game values.
//!
//! cargo run -p lbt-core --example solve_game

use lbt_core::combinatorics::ModelA;
use lbt_core::planner::{solve, ExplosionModel};

fn main() -> lbt_core::Result<()> {
    let model = ModelA::new(7, 3, 7.0 / 12.0, 9.0 / 12.0)?;
    let explosion = ExplosionModel::new(0.6)?;
    let game = solve(&model, &explosion, 15)?;

    for x in 1..model.n() {
        println!("d({x}) = {:?}", game.threshold(x).expect("interior x"));
    }
    for m in [5, 15] {
        println!("\nm = {m}");
        for x in 0..=model.n() {
            let tuple = game
                .tuple(x, m)
                .map_or(String::from("uniform"), |t| t.to_string());
            println!(
                "  x={x}  v(x,m)={:.4}  allocation {tuple}",
                game.value(x, m).unwrap_or(f64::NAN)
            );
        }
        println!("  v(m) = {:.6}", game.game_value(m).unwrap_or(f64::NAN));
    }
    Ok(())
}
