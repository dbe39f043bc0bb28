//! The fill-and-switch planner against exhaustive allocation search.

use lbt_core::combinatorics::ModelA;
use lbt_core::exact::{oracle_best_allocation, oracle_best_allocation_weighted};
use lbt_core::planner::{solve, strategy_value, threshold_d, ExplosionModel, Threshold};

const RATES: [f64; 3] = [0.6, 0.75, 0.9];
const BLAST: [f64; 2] = [0.3, 0.7];
const MAX_BOMBS: u32 = 8;

struct Case {
    model: ModelA,
    explosion: ExplosionModel,
}

fn cases() -> Vec<Case> {
    let mut out = Vec::new();
    for n in 2..=5 {
        for k in 1..n {
            for a in RATES {
                for b in RATES {
                    for p in BLAST {
                        out.push(Case {
                            model: ModelA::new(n, k, a, b).unwrap(),
                            explosion: ExplosionModel::new(p).unwrap(),
                        });
                    }
                }
            }
        }
    }
    out
}

#[test]
fn planner_value_is_the_brute_force_maximum() {
    let mut checked = 0;
    for case in cases() {
        let (n, model, boom) = (case.model.n(), &case.model, &case.explosion);
        let tables = solve(model, boom, MAX_BOMBS).unwrap();
        for x in 1..n {
            let row = tables.posterior.row(x).unwrap();
            let mut alpha = vec![row.p_minus; x];
            alpha.extend(vec![row.p_plus; n - x]);
            for m in 0..=MAX_BOMBS {
                let planned = tables.value(x, m).unwrap();
                let full = oracle_best_allocation_weighted(&alpha, boom, m).unwrap();
                assert!(
                    (planned - full.value).abs() < 1e-10,
                    "{model:?} p={} x={x} m={m}: {planned} vs {}",
                    boom.p(),
                    full.value
                );

                let tuple = tables.tuple(x, m).unwrap();
                let (minus, plus) = tuple.counts(n, x);
                let attained = strategy_value(row, boom, n, x, &minus, &plus).unwrap();
                assert!((attained - full.value).abs() < 1e-10);

                let split = oracle_best_allocation(row, boom, n, x, m).unwrap();
                assert!((split.value - full.value).abs() < 1e-12);
                checked += 1;
            }
        }
    }
    assert!(checked > 1000);
}

#[test]
fn unique_optima_are_uniform_within_sign_and_respect_the_threshold() {
    for case in cases() {
        let (n, model, boom) = (case.model.n(), &case.model, &case.explosion);
        let tables = solve(model, boom, MAX_BOMBS).unwrap();
        for x in 1..n {
            let row = tables.posterior.row(x).unwrap();
            let Threshold::Level(d) = threshold_d(row.ratio, boom).unwrap() else {
                panic!("finite ratio expected")
            };
            let r = row.ratio.finite().unwrap();
            let knife_edge = (r * boom.q().powi(d as i32 - 1) - 1.0).abs() < 1e-9;
            for m in 0..=MAX_BOMBS {
                let best = oracle_best_allocation(row, boom, n, x, m).unwrap();
                if best.maximizers.len() != 1 || knife_edge {
                    continue;
                }
                let alloc = &best.maximizers[0];
                let spread =
                    |c: &[u32]| c.iter().max().unwrap_or(&0) - c.iter().min().unwrap_or(&0);
                assert!(spread(&alloc.minus) <= 1 && spread(&alloc.plus) <= 1);

                let planned = tables.tuple(x, m).unwrap().counts(n, x);
                assert_eq!((alloc.minus.clone(), alloc.plus.clone()), planned);

                for &j in alloc.plus.iter().filter(|&&j| j >= 1) {
                    for &i in &alloc.minus {
                        let gap = i as i64 - j as i64;
                        assert!(
                            gap == d as i64 - 1 || gap == d as i64,
                            "{model:?} x={x} m={m}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn single_bomb_moves_never_improve_the_plan() {
    for case in cases() {
        let (n, model, boom) = (case.model.n(), &case.model, &case.explosion);
        let tables = solve(model, boom, MAX_BOMBS).unwrap();
        for x in 1..n {
            let row = tables.posterior.row(x).unwrap();
            for m in 1..=MAX_BOMBS {
                let (minus, plus) = tables.tuple(x, m).unwrap().counts(n, x);
                let base = strategy_value(row, boom, n, x, &minus, &plus).unwrap();
                for i in 0..x {
                    for j in 0..n - x {
                        let (mut mi, mut pl) = (minus.clone(), plus.clone());
                        if mi[i] > 0 {
                            mi[i] -= 1;
                            pl[j] += 1;
                            let moved = strategy_value(row, boom, n, x, &mi, &pl).unwrap();
                            assert!(moved <= base + 1e-12);
                        }
                        let (mut mi, mut pl) = (minus.clone(), plus.clone());
                        if pl[j] > 0 {
                            pl[j] -= 1;
                            mi[i] += 1;
                            let moved = strategy_value(row, boom, n, x, &mi, &pl).unwrap();
                            assert!(moved <= base + 1e-12);
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn game_tables_invariants() {
    for case in cases() {
        let (n, k) = (case.model.n(), case.model.k());
        let tables = solve(&case.model, &case.explosion, MAX_BOMBS).unwrap();
        for m in 0..=MAX_BOMBS {
            assert_eq!(tables.value(0, m), tables.value(n, m));
            let avg: f64 = (0..=n)
                .map(|x| tables.minus_count.get(x) * tables.value(x, m).unwrap())
                .sum();
            assert!((avg - tables.game_value(m).unwrap()).abs() < 1e-12);
            for x in 0..=n {
                let v = tables.value(x, m).unwrap();
                assert!(v >= 0.0 && v <= (n - k) as f64 + 1e-12);
                if m > 0 {
                    assert!(v >= tables.value(x, m - 1).unwrap());
                }
            }
        }
    }
}
