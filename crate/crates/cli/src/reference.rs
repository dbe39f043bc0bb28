//! Published reference values for the worked examples, and the warnings
//! raised when a computed value disagrees with them beyond rounding.

use lbt_core::combinatorics::ModelA;

/// Published values are given to three decimals.
pub const ROUNDING: f64 = 5e-4 + 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Quantity {
    /// `v(x, m)`.
    ValueAt { x: usize, m: u32 },
    /// `v(m)`.
    Value { m: u32 },
}

impl std::fmt::Display for Quantity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Quantity::ValueAt { x, m } => write!(f, "v(x={x}, m={m})"),
            Quantity::Value { m } => write!(f, "v(m={m})"),
        }
    }
}

pub struct Instance {
    pub name: &'static str,
    pub n: usize,
    pub k: usize,
    pub a: f64,
    pub b: f64,
    pub p: f64,
    pub values: Vec<(Quantity, f64)>,
}

impl Instance {
    pub fn matches(&self, model: &ModelA, p: f64) -> bool {
        let eq = |u: f64, v: f64| (u - v).abs() < 1e-12;
        self.n == model.n()
            && self.k == model.k()
            && eq(self.a, model.a())
            && eq(self.b, model.b())
            && eq(self.p, p)
    }
}

fn row(x: usize, ms: std::ops::RangeInclusive<u32>, vals: &[f64]) -> Vec<(Quantity, f64)> {
    ms.zip(vals)
        .map(|(m, &v)| (Quantity::ValueAt { x, m }, v))
        .collect()
}

/// The two worked examples with a = 7/12, b = 9/12, p = 0.6.
pub fn instances() -> Vec<Instance> {
    let (a, b, p) = (7.0 / 12.0, 9.0 / 12.0, 0.6);

    let mut two = Vec::new();
    for x in [0, 2] {
        two.extend(row(x, 1..=5, &[0.3, 0.6, 0.72, 0.84, 0.888]));
    }
    two.extend(row(1, 1..=5, &[0.485, 0.6, 0.794, 0.84, 0.918]));
    two.extend(
        (1..=5)
            .zip([0.4, 0.6, 0.766, 0.84, 0.904])
            .map(|(m, v)| (Quantity::Value { m }, v)),
    );

    let mut seven = Vec::new();
    let v5 = [1.714, 1.770, 1.964, 2.158, 2.352, 2.545, 2.545, 2.545];
    let v15 = [3.415, 3.441, 3.439, 3.436, 3.431, 3.426, 3.480, 3.415];
    for x in 0..=7 {
        seven.push((Quantity::ValueAt { x, m: 5 }, v5[x]));
        seven.push((Quantity::ValueAt { x, m: 15 }, v15[x]));
    }
    seven.push((Quantity::Value { m: 5 }, 2.348));
    seven.push((Quantity::Value { m: 15 }, 3.437));

    vec![
        Instance {
            name: "A(2,1) value table",
            n: 2,
            k: 1,
            a,
            b,
            p,
            values: two,
        },
        Instance {
            name: "A(7,3) worked example",
            n: 7,
            k: 3,
            a,
            b,
            p,
            values: seven,
        },
    ]
}

/// A published value that the computation does not reproduce.
#[derive(Debug, Clone, PartialEq)]
pub struct Discrepancy {
    pub quantity: Quantity,
    pub published: f64,
    pub computed: f64,
    pub message: String,
}

/// Compare computed quantities with any published reference for this
/// instance. `lookup` returns `None` for quantities not computed.
pub fn discrepancies(
    model: &ModelA,
    p: f64,
    lookup: impl Fn(Quantity) -> Option<f64>,
) -> Vec<Discrepancy> {
    instances()
        .into_iter()
        .filter(|inst| inst.matches(model, p))
        .flat_map(|inst| {
            inst.values
                .into_iter()
                .filter_map(|(q, published)| {
                    let computed = lookup(q)?;
                    ((computed - published).abs() > ROUNDING).then(|| Discrepancy {
                        quantity: q,
                        published,
                        computed,
                        message: format!(
                            "{q}: published {} reference value {published:.3} differs from the computed optimum {computed:.6}",
                            inst.name
                        ),
                    })
                })
                .collect::<Vec<_>>()
        })
        .collect()
}
