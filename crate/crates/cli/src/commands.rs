//! One function per subcommand, each building a [`Report`].

use lbt_core::combinatorics::{joint_tx, minus_count_pmf, ModelA};
use lbt_core::exact::{
    gridsearch_prior, likelihood, lock_configs, oracle_best_allocation, signals, MAX_BOXES,
};
use lbt_core::montecarlo::{simulate, SimConfig, BATCH_SIZE, STREAM_RULE};
use lbt_core::planner::{solve, ExplosionModel, GameTables, Threshold};
use lbt_core::posterior::{posterior_by_reduction, Ratio, TestQuality};
use serde_json::{json, Map, Value};

use crate::args::{Command, ModelArgs, Which};
use crate::reference::{discrepancies, Quantity};
use crate::report::{Cell, Report, Table};
use crate::CliError;

fn model_of(args: &ModelArgs) -> Result<ModelA, CliError> {
    for (flag, v) in [("--a", args.a), ("--b", args.b)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(CliError::Usage(format!(
                "{flag} must lie in [0, 1], got {v}"
            )));
        }
    }
    ModelA::new(args.n, args.k, args.a, args.b).map_err(|_| {
        CliError::Usage(format!(
            "--n/--k: need 0 < k < n, got n={}, k={}",
            args.n, args.k
        ))
    })
}

fn explosion_of(p: f64) -> Result<ExplosionModel, CliError> {
    ExplosionModel::new(p).map_err(|_| CliError::Usage(format!("--p must lie in (0, 1], got {p}")))
}

fn model_params(model: &ModelA) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("n".into(), json!(model.n()));
    m.insert("k".into(), json!(model.k()));
    m.insert("a".into(), json!(model.a()));
    m.insert("b".into(), json!(model.b()));
    m
}

fn ratio_cell(r: Ratio) -> Cell {
    match r {
        Ratio::Finite(v) => Cell::Num(v),
        Ratio::Infinite => Cell::Num(f64::INFINITY),
    }
}

fn threshold_cell(t: Threshold) -> Cell {
    match t {
        Threshold::Level(d) => d.into(),
        Threshold::Unbounded => "unbounded".into(),
    }
}

pub fn execute(command: &Command) -> Result<Report, CliError> {
    match command {
        Command::Solve { model, p, m, m_max } => {
            let model = model_of(model)?;
            let boom = explosion_of(*p)?;
            let (lo, hi) = match (m, m_max) {
                (Some(m), _) => (*m, *m),
                (None, Some(mm)) => (1, *mm),
                (None, None) => {
                    return Err(CliError::Usage("one of --m or --m-max is required".into()))
                }
            };
            run_solve(&model, &boom, lo, hi)
        }
        Command::Ratios { model } => ratios(&model_of(model)?),
        Command::Dist { model } => dist(&model_of(model)?),
        Command::Tables {
            which,
            model,
            p,
            m_max,
        } => {
            let model = model_of(model)?;
            match which {
                Which::Likelihood => likelihood_table(&model),
                Which::Joint => joint_table(&model),
                Which::Ratios => ratios(&model),
                Which::Values => {
                    let p = p.ok_or_else(|| {
                        CliError::Usage("--p is required for the values table".into())
                    })?;
                    let m_max = m_max.ok_or_else(|| {
                        CliError::Usage("--m-max is required for the values table".into())
                    })?;
                    run_solve(&model, &explosion_of(p)?, 1, m_max)
                }
            }
        }
        Command::Oracle { model, p, m, x } => oracle(&model_of(model)?, &explosion_of(*p)?, *m, *x),
        Command::Simulate {
            model,
            p,
            m,
            trials,
            seed,
        } => {
            let model = model_of(model)?;
            let boom = explosion_of(*p)?;
            if *trials == 0 {
                return Err(CliError::Usage("--trials must be at least 1".into()));
            }
            let (seed, source) = resolve_seed(*seed)?;
            run_simulation(&model, &boom, *m, *trials, seed, source)
        }
        Command::Gridsearch {
            model,
            p,
            resolution,
            costs,
        } => {
            let model = model_of(model)?;
            let boom = explosion_of(*p)?;
            let steps = steps_of(*resolution)?;
            let costs = costs.clone().unwrap_or_else(|| vec![1.0; model.n()]);
            if costs.len() != model.n() || costs.iter().any(|c| *c <= 0.0) {
                return Err(CliError::Usage(format!(
                    "--costs needs {} positive values",
                    model.n()
                )));
            }
            grid(&model, &boom, steps, &costs)
        }
    }
}

fn resolve_seed(flag: Option<u64>) -> Result<(u64, &'static str), CliError> {
    if let Some(s) = flag {
        return Ok((s, "flag"));
    }
    match std::env::var("LBT_SEED") {
        Ok(text) => text.trim().parse().map(|s| (s, "LBT_SEED")).map_err(|_| {
            CliError::Usage(format!(
                "LBT_SEED must be a 64-bit unsigned integer, got '{text}'"
            ))
        }),
        Err(_) => Ok((0, "default")),
    }
}

fn steps_of(resolution: f64) -> Result<u32, CliError> {
    let bad = || {
        CliError::Usage(format!(
            "--resolution must be 1/N for a positive integer N, got {resolution}"
        ))
    };
    if !(resolution > 0.0 && resolution <= 1.0) {
        return Err(bad());
    }
    let steps = (1.0 / resolution).round();
    if (steps * resolution - 1.0).abs() > 1e-9 || steps > f64::from(u32::MAX) {
        return Err(bad());
    }
    Ok(steps as u32)
}

fn run_solve(model: &ModelA, boom: &ExplosionModel, lo: u32, hi: u32) -> Result<Report, CliError> {
    let tables = solve(model, boom, hi)?;
    let n = model.n();
    let mut params = model_params(model);
    params.insert("p".into(), json!(boom.p()));
    params.insert("m_from".into(), json!(lo));
    params.insert("m_to".into(), json!(hi));
    let mut report = Report::new(params);

    let mut thresholds = Table::grid("thresholds", &["x", "d"]);
    for x in 1..n {
        thresholds.push(vec![
            x.into(),
            tables.threshold(x).map_or(Cell::Missing, threshold_cell),
        ]);
    }
    report.tables.push(thresholds);

    let ms: Vec<u32> = if hi == 0 {
        Vec::new()
    } else {
        (lo.max(1)..=hi).collect()
    };
    let mut columns = vec!["m".to_string()];
    columns.extend((0..=n).map(|x| format!("v(x={x})")));
    columns.push("v(m)".into());
    let mut values = Table::grid_owned("values", columns);
    for &m in &ms {
        let mut row: Vec<Cell> = vec![m.into()];
        row.extend((0..=n).map(|x| Cell::from(tables.value(x, m))));
        row.push(tables.game_value(m).into());
        values.push(row);
    }

    let found = discrepancies(model, boom.p(), |q| match q {
        Quantity::ValueAt { x, m } if ms.contains(&m) => tables.value(x, m),
        Quantity::Value { m } if ms.contains(&m) => tables.game_value(m),
        _ => None,
    });
    for d in &found {
        let r = ms.iter().position(|&m| match d.quantity {
            Quantity::ValueAt { m: dm, .. } | Quantity::Value { m: dm } => dm == m,
        });
        let c = match d.quantity {
            Quantity::ValueAt { x, .. } => x + 1,
            Quantity::Value { .. } => n + 2,
        };
        if let Some(r) = r {
            values.flagged.push((r, c));
        }
        report.warnings.push(d.message.clone());
    }
    report.tables.push(values);
    report.tables.push(allocation_table(&tables, &ms));

    if lo == hi && hi > 0 {
        report.tables.push(Table::summary(
            "summary",
            vec![("m", hi.into()), ("v(m)", tables.game_value(hi).into())],
        ));
    }
    Ok(report)
}

fn allocation_table(tables: &GameTables, ms: &[u32]) -> Table {
    let n = tables.model.n();
    let mut t = Table::grid(
        "allocations",
        &["m", "x", "l_minus", "e_minus", "l_plus", "e_plus"],
    );
    for &m in ms {
        for x in 1..n {
            if let Some(tu) = tables.tuple(x, m) {
                t.push(vec![
                    m.into(),
                    x.into(),
                    tu.l_minus.into(),
                    tu.e_minus.into(),
                    tu.l_plus.into(),
                    tu.e_plus.into(),
                ]);
            }
        }
    }
    t
}

fn ratios(model: &ModelA) -> Result<Report, CliError> {
    let mut report = Report::new(model_params(model));
    let post = posterior_by_reduction(model);
    let mut t = Table::grid("ratios", &["x", "p_minus", "p_plus", "r"]);
    for (x, row) in post.iter() {
        match row {
            Some(r) => t.push(vec![
                x.into(),
                r.p_minus.into(),
                r.p_plus.into(),
                ratio_cell(r.ratio),
            ]),
            None => t.push(vec![x.into(), Cell::Missing, Cell::Missing, Cell::Missing]),
        }
    }
    report.tables.push(t);
    if let Ok(q) = TestQuality::from_rates(model.a(), model.b()) {
        report.tables.push(Table::summary(
            "quality",
            vec![("c", q.c().into()), ("equal_rate", q.equal_rate().into())],
        ));
    }
    Ok(report)
}

fn dist(model: &ModelA) -> Result<Report, CliError> {
    let mut report = Report::new(model_params(model));
    let g = minus_count_pmf(model);
    let joint = joint_tx(model);
    let mut t = Table::grid("minus_count", &["x", "g(x)", "E(N1|x)"]);
    for x in 0..=model.n() {
        t.push(vec![
            x.into(),
            g.get(x).into(),
            joint.conditional_n1_mean(x).ok().into(),
        ]);
    }
    report.tables.push(t);
    report.tables.push(Table::summary(
        "moments",
        vec![("mean", g.mean().into()), ("total", g.total().into())],
    ));
    Ok(report)
}

fn likelihood_table(model: &ModelA) -> Result<Report, CliError> {
    let n = model.n();
    if n > MAX_BOXES {
        return Err(CliError::Domain(format!(
            "the likelihood table has 2^n columns; n={n} exceeds the limit {MAX_BOXES} (use 'dist' or 'tables --which joint' for large n)"
        )));
    }
    let sigs = signals(n)?;
    let mut columns = vec!["gamma".to_string()];
    columns.extend(sigs.iter().map(|s| format!("s={s}")));
    let mut t = Table::grid_owned("likelihood", columns);
    for g in lock_configs(n, model.k())? {
        let mut row: Vec<Cell> = vec![g.to_string().into()];
        row.extend(
            sigs.iter()
                .map(|s| Cell::Num(likelihood(&g, s, model.a(), model.b()))),
        );
        t.push(row);
    }
    let mut report = Report::new(model_params(model));
    report.tables.push(t);
    Ok(report)
}

fn joint_table(model: &ModelA) -> Result<Report, CliError> {
    let joint = joint_tx(model);
    let n = model.n();
    let mut columns = vec!["t".to_string()];
    columns.extend((0..=n).map(|x| format!("x={x}")));
    let mut t = Table::grid_owned("joint", columns);
    for tt in 0..=model.k() {
        let mut row: Vec<Cell> = vec![tt.to_string().into()];
        row.extend((0..=n).map(|x| Cell::Num(joint.get(tt, x))));
        t.push(row);
    }
    let mut g_row: Vec<Cell> = vec!["g".into()];
    g_row.extend(joint.column_sums().into_iter().map(Cell::Num));
    t.push(g_row);
    let mut report = Report::new(model_params(model));
    report.tables.push(t);
    Ok(report)
}

fn oracle(
    model: &ModelA,
    boom: &ExplosionModel,
    m: u32,
    only: Option<usize>,
) -> Result<Report, CliError> {
    let n = model.n();
    if let Some(x) = only {
        if x == 0 || x >= n {
            return Err(CliError::Usage(format!(
                "--x must satisfy 0 < x < n, got {x}"
            )));
        }
    }
    let tables = solve(model, boom, m)?;
    let mut params = model_params(model);
    params.insert("p".into(), json!(boom.p()));
    params.insert("m".into(), json!(m));
    let mut report = Report::new(params);
    let mut t = Table::grid(
        "oracle",
        &["x", "planner", "oracle", "agree", "tuple", "maximizers"],
    );
    for x in (1..n).filter(|x| only.is_none_or(|o| o == *x)) {
        let Some(row) = tables.posterior.row(x) else {
            continue;
        };
        let best = oracle_best_allocation(row, boom, n, x, m)?;
        let planned = tables.value(x, m).unwrap_or(f64::NAN);
        let maximizers: Vec<String> = best
            .maximizers
            .iter()
            .map(|a| format!("minus{:?} plus{:?}", a.minus, a.plus))
            .collect();
        t.push(vec![
            x.into(),
            planned.into(),
            best.value.into(),
            ((planned - best.value).abs() < 1e-10).into(),
            tables
                .tuple(x, m)
                .map_or(Cell::Missing, |tu| tu.to_string().into()),
            maximizers.join("; ").into(),
        ]);
    }
    report.tables.push(t);
    Ok(report)
}

fn run_simulation(
    model: &ModelA,
    boom: &ExplosionModel,
    m: u32,
    trials: u64,
    seed: u64,
    seed_source: &str,
) -> Result<Report, CliError> {
    let res = simulate(&SimConfig {
        model: *model,
        explosion: *boom,
        m,
        trials,
        seed,
    })?;
    let tables = solve(model, boom, m)?;
    let analytic = tables.game_value(m).unwrap_or(f64::NAN);

    let mut params = model_params(model);
    params.insert("p".into(), json!(boom.p()));
    params.insert("m".into(), json!(m));
    params.insert("trials".into(), json!(trials));
    params.insert("seed".into(), json!(seed));
    params.insert("seed_source".into(), json!(seed_source));
    params.insert("stream_rule".into(), json!(STREAM_RULE));
    params.insert("batch_size".into(), json!(BATCH_SIZE));
    let mut report = Report::new(params);

    let z = (res.mean_destroyed - analytic) / res.std_error;
    report.tables.push(Table::summary(
        "summary",
        vec![
            ("mean_destroyed", res.mean_destroyed.into()),
            ("std_error", res.std_error.into()),
            (
                "ci95_low",
                (res.mean_destroyed - 1.96 * res.std_error).into(),
            ),
            (
                "ci95_high",
                (res.mean_destroyed + 1.96 * res.std_error).into(),
            ),
            ("v(m)", analytic.into()),
            (
                "z",
                if z.is_finite() {
                    z.into()
                } else {
                    Cell::Missing
                },
            ),
        ],
    ));
    let mut per_x = Table::grid("per_x", &["x", "trials", "mean", "std_error", "v(x,m)"]);
    for s in &res.per_x {
        per_x.push(vec![
            s.x.into(),
            s.trials.into(),
            s.mean.into(),
            s.std_error.into(),
            tables.value(s.x, m).into(),
        ]);
    }
    report.tables.push(per_x);
    for d in discrepancies(model, boom.p(), |q| match q {
        Quantity::Value { m: qm } if qm == m => Some(analytic),
        _ => None,
    }) {
        report.warnings.push(d.message);
    }
    if seed_source == "default" {
        report
            .warnings
            .push("no --seed or LBT_SEED given; used seed 0".into());
    }
    Ok(report)
}

fn grid(
    model: &ModelA,
    boom: &ExplosionModel,
    steps: u32,
    costs: &[f64],
) -> Result<Report, CliError> {
    let res = gridsearch_prior(
        model.n(),
        model.k(),
        model.a(),
        model.b(),
        boom,
        costs,
        steps,
    )?;
    let mut params = model_params(model);
    params.insert("p".into(), json!(boom.p()));
    params.insert("steps".into(), json!(steps));
    params.insert("costs".into(), json!(costs));
    let mut report = Report::new(params);

    let mut columns = vec!["minimizer".to_string()];
    columns.extend(res.configs.iter().map(|g| format!("pi({g})")));
    let mut t = Table::grid_owned("minimizers", columns);
    for (i, pi) in res.minimizers.iter().enumerate() {
        let mut row: Vec<Cell> = vec![(i + 1).into()];
        row.extend(pi.iter().map(|&w| Cell::Num(w)));
        t.push(row);
    }
    report.tables.push(t);
    report.tables.push(Table::summary(
        "summary",
        vec![
            ("min_value", res.value.into()),
            ("minimizers", res.minimizers.len().into()),
        ],
    ));
    Ok(report)
}
