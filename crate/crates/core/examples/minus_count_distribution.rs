//! Distribution of the number of minus signals and its split into false and
//! correct minuses.
//!
//! cargo run -p lbt-core --example minus_count_distribution

use lbt_core::combinatorics::{joint_tx, minus_count_pmf, ModelA};
use lbt_core::exact::minus_count_pmf_by_enumeration;

fn main() -> lbt_core::Result<()> {
    let model = ModelA::new(3, 1, 7.0 / 12.0, 9.0 / 12.0)?;
    let g = minus_count_pmf(&model);
    let brute = minus_count_pmf_by_enumeration(&model)?;
    let joint = joint_tx(&model);

    println!("x   g(x)*192   by enumeration   E(N1|x)");
    for x in 0..=model.n() {
        let mean = joint
            .conditional_n1_mean(x)
            .map_or("-".into(), |v| format!("{v:.6}"));
        println!(
            "{x}   {:>8.3}   {:>14.3}   {mean}",
            192.0 * g.get(x),
            192.0 * brute.get(x)
        );
    }

    println!("\njoint law s(t,x) * 192 (rows t = false minuses)");
    for t in 0..=model.k() {
        let row: Vec<String> = (0..=model.n())
            .map(|x| format!("{:>6.1}", 192.0 * joint.get(t, x)))
            .collect();
        println!("t={t} {}", row.join(""));
    }
    Ok(())
}
