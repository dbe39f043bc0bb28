//! Posterior probabilities and likelihood ratios for a small board, computed
//! three independent ways.
//!
//! cargo run -p lbt-core --example posterior_ratios

use lbt_core::combinatorics::ModelA;
use lbt_core::posterior::{
    posterior_by_conditional_mean, posterior_by_reduction, ratio_via_quality, TestQuality,
};

fn main() -> lbt_core::Result<()> {
    let model = ModelA::new(7, 3, 7.0 / 12.0, 9.0 / 12.0)?;
    let quality = TestQuality::from_rates(model.a(), model.b())?;
    println!("A(7,3), a=7/12, b=9/12, test quality c={:.4}", quality.c());

    let reduced = posterior_by_reduction(&model);
    let cond = posterior_by_conditional_mean(&model);
    println!(
        "{:>3} {:>9} {:>9} {:>9} {:>9} {:>9}",
        "x", "p-", "p+", "r", "r(cond)", "r(c)"
    );
    for (x, row) in reduced.iter() {
        let Some(row) = row else { continue };
        let c = cond.row(x).expect("same support");
        println!(
            "{x:>3} {:>9.6} {:>9.6} {:>9.6} {:>9.6} {:>9.6}",
            row.p_minus,
            row.p_plus,
            row.ratio,
            c.p_minus / c.p_plus,
            ratio_via_quality(&model, x)?
        );
    }
    Ok(())
}
