//! The attacker's optimal allocation of bombs and the resulting game values.
//!
//! Given `x` minus signals, bombs go to minus boxes until each holds `d(x)`
//! bombs, then one layer to the plus boxes, then one more layer to the minus
//! boxes, and so on ("fill and switch"). The advantage level `d(x)` is the
//! smallest `i >= 1` with `r(x) q^i < 1`.

use serde::Serialize;

use crate::combinatorics::{minus_count_pmf, ModelA, Pmf};
use crate::error::{Error, Result};
use crate::posterior::{posterior_by_reduction, PosteriorRow, PosteriorTable, Ratio};

/// Independent explosions with single-bomb probability `p`:
/// `u` bombs in an unlocked box destroy it with probability `1 - q^u`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExplosionModel {
    p: f64,
}

impl ExplosionModel {
    pub fn new(p: f64) -> Result<Self> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::OutOfRange {
                name: "p",
                value: p,
                range: "(0, 1]",
            });
        }
        Ok(Self { p })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        1.0 - self.p
    }

    /// `p(u) = 1 - q^u`.
    pub fn destroy_prob(&self, bombs: u32) -> f64 {
        1.0 - self.q().powi(bombs as i32)
    }
}

/// Depth a minus box must reach before a plus box gets its next bomb.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Threshold {
    Level(u32),
    /// Plus boxes are worthless (`p_plus = 0`): every bomb goes to minus boxes.
    Unbounded,
}

impl Threshold {
    /// Concrete depth for `m` bombs; `Unbounded` saturates at `m`.
    pub fn depth(self, m: u32) -> u32 {
        match self {
            Threshold::Level(d) => d,
            Threshold::Unbounded => m.max(1),
        }
    }
}

/// `d(x) = min { i >= 1 : r q^i < 1 }`, or 1 when `p = 1`.
pub fn threshold_d(ratio: Ratio, explosion: &ExplosionModel) -> Result<Threshold> {
    let r = match ratio {
        Ratio::Infinite => return Ok(Threshold::Unbounded),
        Ratio::Finite(r) => r,
    };
    if r.is_nan() || r <= 1.0 {
        return Err(Error::NonInformativeRatio(r));
    }
    let q = explosion.q();
    if q <= 0.0 {
        return Ok(Threshold::Level(1));
    }
    let below = |i: u32| r * q.powf(f64::from(i)) < 1.0;
    // Start near the analytic crossing and settle it with the strict test.
    let guess = (r.ln() / -q.ln())
        .floor()
        .clamp(1.0, f64::from(u32::MAX - 1)) as u32;
    let mut d = guess.max(1);
    while d > 1 && below(d - 1) {
        d -= 1;
    }
    while !below(d) {
        d += 1;
    }
    Ok(Threshold::Level(d))
}

/// Layer/remainder encoding of a d-UAP allocation with `x` minus boxes:
/// `e_minus` minus boxes hold `l_minus + 1` bombs and the rest `l_minus`;
/// likewise for the plus boxes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AllocationTuple {
    pub l_minus: u32,
    pub e_minus: u32,
    pub l_plus: u32,
    pub e_plus: u32,
}

impl AllocationTuple {
    pub fn minus_bombs(&self, x: usize) -> u32 {
        self.l_minus * x as u32 + self.e_minus
    }

    pub fn plus_bombs(&self, n: usize, x: usize) -> u32 {
        self.l_plus * (n - x) as u32 + self.e_plus
    }

    /// Per-box counts, fuller boxes first: `(minus boxes, plus boxes)`.
    pub fn counts(&self, n: usize, x: usize) -> (Vec<u32>, Vec<u32>) {
        let layer = |len: usize, l: u32, e: u32| {
            (0..len as u32)
                .map(|i| if i < e { l + 1 } else { l })
                .collect::<Vec<_>>()
        };
        (
            layer(x, self.l_minus, self.e_minus),
            layer(n - x, self.l_plus, self.e_plus),
        )
    }
}

impl std::fmt::Display for AllocationTuple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "({},{};{},{})",
            self.l_minus, self.e_minus, self.l_plus, self.e_plus
        )
    }
}

/// The fill-and-switch allocation of `m` bombs with `0 < x < n` minus boxes
/// and advantage level `d >= 1`.
pub fn allocate_duap(n: usize, x: usize, m: u32, d: u32) -> Result<AllocationTuple> {
    if x == 0 || x >= n {
        return Err(Error::InvalidArgument(format!(
            "d-UAP needs 0 < x < n, got x={x}, n={n}"
        )));
    }
    if d == 0 {
        return Err(Error::InvalidArgument(
            "advantage level must be >= 1".into(),
        ));
    }
    let (minus, plus) = (x as u64, (n - x) as u64);
    let m = u64::from(m);
    let first_phase = minus.saturating_mul(u64::from(d));
    if m <= first_phase {
        return Ok(AllocationTuple {
            l_minus: (m / minus) as u32,
            e_minus: (m % minus) as u32,
            l_plus: 0,
            e_plus: 0,
        });
    }
    // After the first phase every cycle adds one plus layer then one minus layer.
    let rest = m - first_phase;
    let cycles = rest / n as u64;
    let tail = rest % n as u64;
    let base = u64::from(d) + cycles;
    let tuple = if tail < plus {
        AllocationTuple {
            l_minus: base as u32,
            e_minus: 0,
            l_plus: cycles as u32,
            e_plus: tail as u32,
        }
    } else {
        AllocationTuple {
            l_minus: base as u32,
            e_minus: (tail - plus) as u32,
            l_plus: cycles as u32 + 1,
            e_plus: 0,
        }
    };
    Ok(tuple)
}

/// Uniform spread of `m` bombs over all `n` boxes: `(l, e)` with `m = n l + e`.
pub fn uniform_layers(n: usize, m: u32) -> (u32, u32) {
    (m / n as u32, m % n as u32)
}

/// `v(0, m) = v(n, m)`: all signals agree, bombs are spread uniformly.
pub fn value_boundary(model: &ModelA, explosion: &ExplosionModel, m: u32) -> f64 {
    let n = model.n();
    let (l, e) = uniform_layers(n, m);
    model.free() as f64 / n as f64
        * (f64::from(e) * explosion.destroy_prob(l + 1)
            + (n as f64 - f64::from(e)) * explosion.destroy_prob(l))
}

/// Expected destroyed boxes for explicit per-box counts, split by signal.
///
/// Only the multisets matter, not which minus (plus) box holds which count.
pub fn strategy_value(
    row: &PosteriorRow,
    explosion: &ExplosionModel,
    n: usize,
    x: usize,
    minus_counts: &[u32],
    plus_counts: &[u32],
) -> Result<f64> {
    if minus_counts.len() != x || plus_counts.len() != n - x.min(n) {
        return Err(Error::InvalidAllocation(format!(
            "expected {x} minus and {} plus counts, got {} and {}",
            n.saturating_sub(x),
            minus_counts.len(),
            plus_counts.len()
        )));
    }
    let damage =
        |counts: &[u32]| -> f64 { counts.iter().map(|&u| explosion.destroy_prob(u)).sum() };
    Ok(row.p_minus * damage(minus_counts) + row.p_plus * damage(plus_counts))
}

/// Value of the tuple in closed form.
pub fn tuple_value(
    row: &PosteriorRow,
    explosion: &ExplosionModel,
    n: usize,
    x: usize,
    tuple: &AllocationTuple,
) -> f64 {
    let pu = |u| explosion.destroy_prob(u);
    let minus = (x as f64 - f64::from(tuple.e_minus)) * pu(tuple.l_minus)
        + f64::from(tuple.e_minus) * pu(tuple.l_minus + 1);
    let plus = ((n - x) as f64 - f64::from(tuple.e_plus)) * pu(tuple.l_plus)
        + f64::from(tuple.e_plus) * pu(tuple.l_plus + 1);
    row.p_minus * minus + row.p_plus * plus
}

/// Change in value from moving one bomb out of a minus box holding `from`
/// bombs into a plus box holding `to` bombs: `p q^to p_plus (r q^(from-to-1) - 1)`
/// with the sign flipped, i.e. a positive result means the move helps.
///
/// `from >= 1` is required.
pub fn minus_to_plus_gain(
    row: &PosteriorRow,
    explosion: &ExplosionModel,
    from: u32,
    to: u32,
) -> f64 {
    let (p, q) = (explosion.p(), explosion.q());
    let lost = p * row.p_minus * q.powi(from as i32 - 1);
    let gained = p * row.p_plus * q.powi(to as i32);
    gained - lost
}

/// Threshold, allocation and value for one interior `x`.
pub fn value_interior(
    row: &PosteriorRow,
    explosion: &ExplosionModel,
    n: usize,
    x: usize,
    m: u32,
) -> Result<(f64, AllocationTuple)> {
    let d = threshold_d(row.ratio, explosion)?.depth(m);
    let tuple = allocate_duap(n, x, m, d)?;
    Ok((tuple_value(row, explosion, n, x, &tuple), tuple))
}

/// Solved game: thresholds, allocations and values for `m = 0..=m_max`.
#[derive(Debug, Clone, Serialize)]
pub struct GameTables {
    pub model: ModelA,
    pub explosion: ExplosionModel,
    pub m_max: u32,
    pub minus_count: Pmf,
    pub posterior: PosteriorTable,
    /// `thresholds[x]` for `0 < x < n`; `None` at the boundary and for
    /// zero-probability `x`.
    pub thresholds: Vec<Option<Threshold>>,
    /// `v_xm[x][m]`; `None` for zero-probability interior `x`.
    pub v_xm: Vec<Vec<Option<f64>>>,
    /// `alloc[x][m]` for interior `x`.
    pub alloc: Vec<Vec<Option<AllocationTuple>>>,
    /// `v_m[m] = sum_x P(N = x) v(x, m)`.
    pub v_m: Vec<f64>,
}

impl GameTables {
    pub fn value(&self, x: usize, m: u32) -> Option<f64> {
        self.v_xm.get(x)?.get(m as usize).copied().flatten()
    }

    pub fn game_value(&self, m: u32) -> Option<f64> {
        self.v_m.get(m as usize).copied()
    }

    pub fn tuple(&self, x: usize, m: u32) -> Option<AllocationTuple> {
        self.alloc.get(x)?.get(m as usize).copied().flatten()
    }

    pub fn threshold(&self, x: usize) -> Option<Threshold> {
        self.thresholds.get(x).copied().flatten()
    }
}

/// Solve `A(n, k)` for every `x` and `m = 0..=m_max`.
///
/// Requires informative tests (`a + b > 1`).
pub fn solve(model: &ModelA, explosion: &ExplosionModel, m_max: u32) -> Result<GameTables> {
    if !model.is_informative() {
        return Err(Error::UnsupportedRegime(model.a() + model.b()));
    }
    let n = model.n();
    let minus_count = minus_count_pmf(model);
    let posterior = posterior_by_reduction(model);
    let ms = m_max as usize + 1;

    let mut thresholds = vec![None; n + 1];
    let mut v_xm = vec![vec![None; ms]; n + 1];
    let mut alloc = vec![vec![None; ms]; n + 1];

    let boundary: Vec<Option<f64>> = (0..=m_max)
        .map(|m| Some(value_boundary(model, explosion, m)))
        .collect();
    v_xm[0] = boundary.clone();
    v_xm[n] = boundary;

    for (x, row) in posterior.iter() {
        let Some(row) = row else { continue };
        thresholds[x] = Some(threshold_d(row.ratio, explosion)?);
        for m in 0..=m_max {
            let (v, tuple) = value_interior(row, explosion, n, x, m)?;
            v_xm[x][m as usize] = Some(v);
            alloc[x][m as usize] = Some(tuple);
        }
    }

    let v_m = (0..ms)
        .map(|m| {
            (0..=n)
                .filter_map(|x| v_xm[x][m].map(|v| minus_count.get(x) * v))
                .sum()
        })
        .collect();

    Ok(GameTables {
        model: *model,
        explosion: *explosion,
        m_max,
        minus_count,
        posterior,
        thresholds,
        v_xm,
        alloc,
        v_m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const A: f64 = 7.0 / 12.0;
    const B: f64 = 9.0 / 12.0;

    fn boom() -> ExplosionModel {
        ExplosionModel::new(0.6).unwrap()
    }

    /// Literal bomb-by-bomb fill and switch, kept separate from the closed form.
    fn fill_and_switch(n: usize, x: usize, m: u32, d: u32) -> (Vec<u32>, Vec<u32>) {
        let mut minus = vec![0u32; x];
        let mut plus = vec![0u32; n - x];
        let mut target_minus = d;
        let mut target_plus = 1;
        let mut left = m;
        let mut on_minus = true;
        while left > 0 {
            let boxes = if on_minus { &mut minus } else { &mut plus };
            let target = if on_minus { target_minus } else { target_plus };
            // Level filling: the emptiest box below target takes the bomb.
            if let Some(slot) = boxes
                .iter_mut()
                .filter(|u| **u < target)
                .min_by_key(|u| **u)
            {
                *slot += 1;
                left -= 1;
            } else if on_minus {
                on_minus = false;
                target_minus += 1;
            } else {
                on_minus = true;
                target_plus += 1;
            }
        }
        (minus, plus)
    }

    #[test]
    fn thresholds() {
        assert_eq!(
            threshold_d(Ratio::Finite(4.2), &boom()).unwrap(),
            Threshold::Level(2)
        );
        let one = ExplosionModel::new(1.0).unwrap();
        assert_eq!(
            threshold_d(Ratio::Finite(50.0), &one).unwrap(),
            Threshold::Level(1)
        );
        assert!(matches!(
            threshold_d(Ratio::Finite(1.0), &boom()),
            Err(Error::NonInformativeRatio(_))
        ));
        assert_eq!(
            threshold_d(Ratio::Infinite, &boom()).unwrap(),
            Threshold::Unbounded
        );
        assert_eq!(Threshold::Unbounded.depth(9), 9);
    }

    #[test]
    fn threshold_is_minimal() {
        for &r in &[1.0001, 1.5, 2.5, 4.2, 17.0, 1e6] {
            for &p in &[0.01, 0.2, 0.6, 0.99] {
                let e = ExplosionModel::new(p).unwrap();
                let Threshold::Level(d) = threshold_d(Ratio::Finite(r), &e).unwrap() else {
                    panic!()
                };
                assert!(r * e.q().powi(d as i32) < 1.0);
                if d > 1 {
                    assert!(r * e.q().powi(d as i32 - 1) >= 1.0);
                }
            }
        }
    }

    #[test]
    fn reference_tuples() {
        let t = allocate_duap(7, 2, 15, 1).unwrap();
        assert_eq!(t.to_string(), "(2,1;2,0)");
        let t = allocate_duap(7, 6, 15, 2).unwrap();
        assert_eq!(t.to_string(), "(2,2;1,0)");
        let t = allocate_duap(5, 3, 12, 3).unwrap();
        assert_eq!(t.counts(5, 3), (vec![4, 3, 3], vec![1, 1]));
        let t = allocate_duap(5, 3, 12, 2).unwrap();
        assert_eq!(t.counts(5, 3), (vec![3, 3, 3], vec![2, 1]));
        assert!(allocate_duap(5, 0, 3, 1).is_err());
        assert!(allocate_duap(5, 2, 3, 0).is_err());
    }

    #[test]
    fn closed_form_matches_literal_fill() {
        for n in 2..=7 {
            for x in 1..n {
                for d in 1..=4 {
                    for m in 0..=30 {
                        let t = allocate_duap(n, x, m, d).unwrap();
                        let (mut minus, mut plus) = fill_and_switch(n, x, m, d);
                        minus.sort_unstable_by(|a, b| b.cmp(a));
                        plus.sort_unstable_by(|a, b| b.cmp(a));
                        assert_eq!(t.counts(n, x), (minus, plus), "n={n} x={x} m={m} d={d}");

                        assert_eq!(t.minus_bombs(x) + t.plus_bombs(n, x), m);
                        assert_eq!(t.e_minus * t.e_plus, 0);
                        assert!(t.e_minus < x as u32 && t.e_plus < (n - x) as u32);
                        if t.plus_bombs(n, x) == 0 {
                            assert!(m <= x as u32 * d);
                        }
                        if t.e_plus > 0 {
                            assert_eq!(t.l_minus - t.l_plus, d);
                        } else if t.l_plus > 0 {
                            assert!(t.l_minus - t.l_plus == d - 1 || t.l_minus - t.l_plus == d);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn boundary_values() {
        let m21 = ModelA::new(2, 1, A, B).unwrap();
        let want = [0.3, 0.6, 0.72, 0.84, 0.888];
        for (m, w) in (1..=5).zip(want) {
            assert!((value_boundary(&m21, &boom(), m) - w).abs() < 1e-12);
        }
        let m73 = ModelA::new(7, 3, A, B).unwrap();
        for m in 0..=7 {
            let v = value_boundary(&m73, &boom(), m);
            assert!((v - 4.0 / 7.0 * 0.6 * f64::from(m)).abs() < 1e-12);
        }
        assert_eq!(value_boundary(&m73, &boom(), 0), 0.0);
    }

    #[test]
    fn interior_values_for_a21() {
        let m = ModelA::new(2, 1, A, B).unwrap();
        let post = posterior_by_reduction(&m);
        let row = post.row(1).unwrap();
        let v = |bombs| value_interior(row, &boom(), 2, 1, bombs).unwrap().0;
        assert!((v(1) - 0.485).abs() < 5e-4);
        assert!((v(3) - 0.794).abs() < 5e-4);
        assert!((v(5) - 0.918).abs() < 5e-4);
        // Oracle-certified optima with (2,0) and (3,1).
        assert!((v(2) - 0.84 * 21.0 / 26.0).abs() < 1e-12);
        assert!((v(4) - (0.936 * 21.0 + 0.6 * 5.0) / 26.0).abs() < 1e-12);
    }

    #[test]
    fn strategy_values() {
        let m = ModelA::new(2, 1, A, B).unwrap();
        let post = posterior_by_reduction(&m);
        let row = post.row(1).unwrap();
        let w = strategy_value(row, &boom(), 2, 1, &[2], &[0]).unwrap();
        assert!((w - 0.84 * 21.0 / 26.0).abs() < 1e-12);
        assert_eq!(strategy_value(row, &boom(), 2, 1, &[0], &[0]).unwrap(), 0.0);
        assert!(strategy_value(row, &boom(), 2, 1, &[1, 1], &[]).is_err());

        let m = ModelA::new(3, 1, A, B).unwrap();
        let post = posterior_by_reduction(&m);
        let w = strategy_value(post.row(1).unwrap(), &boom(), 3, 1, &[1], &[0, 0]).unwrap();
        assert!((w - 0.6 * 42.0 / 47.0).abs() < 1e-12);

        // Written through the ratio: p_plus [r * minus damage + plus damage].
        let row = post.row(2).unwrap();
        let w = strategy_value(row, &boom(), 3, 2, &[3, 1], &[2]).unwrap();
        let r = row.ratio.finite().unwrap();
        let via_ratio = row.p_plus
            * (r * (boom().destroy_prob(3) + boom().destroy_prob(1)) + boom().destroy_prob(2));
        assert!((w - via_ratio).abs() < 1e-12);
    }

    #[test]
    fn transfer_gain_matches_direct_difference() {
        let m = ModelA::new(5, 2, 0.7, 0.8).unwrap();
        let post = posterior_by_reduction(&m);
        let row = post.row(2).unwrap();
        for i in 1..6 {
            for j in 0..5 {
                let before = strategy_value(row, &boom(), 5, 2, &[i, 0], &[j, 0, 0]).unwrap();
                let after =
                    strategy_value(row, &boom(), 5, 2, &[i - 1, 0], &[j + 1, 0, 0]).unwrap();
                let gain = minus_to_plus_gain(row, &boom(), i, j);
                assert!((after - before - gain).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn solve_a73_structure() {
        let m = ModelA::new(7, 3, A, B).unwrap();
        let g = solve(&m, &boom(), 15).unwrap();
        let d: Vec<_> = (1..7).map(|x| g.threshold(x).unwrap()).collect();
        assert_eq!(d, [1, 1, 1, 1, 1, 2].map(Threshold::Level).to_vec());
        assert_eq!(g.tuple(2, 15).unwrap().to_string(), "(2,1;2,0)");
        assert_eq!(g.tuple(6, 15).unwrap().to_string(), "(2,2;1,0)");
        assert_eq!(g.value(0, 9), g.value(7, 9));
        // Frozen from an exact enumeration plus exhaustive allocation search.
        let v5 = [
            1.714_285_714_285_714_2,
            1.769_696_969_696_969_8,
            1.834_996_232_102_486_6,
            1.910_008_537_861_205_5,
            1.989_586_389_612_664_4,
            2.057_519_209_659_714_6,
            1.879_518_072_289_156_7,
            1.714_285_714_285_714_2,
        ];
        for (x, want) in v5.iter().enumerate() {
            assert!((g.value(x, 5).unwrap() - want).abs() < 1e-12, "x={x}");
        }
        assert!((g.game_value(5).unwrap() - 1.960_908_978_174_603_2).abs() < 1e-12);
        assert!((g.game_value(15).unwrap() - 3.429_726_500_496_031_3).abs() < 1e-12);
    }

    #[test]
    fn solve_rejects_uninformative_tests() {
        let m = ModelA::new(4, 1, 0.4, 0.5).unwrap();
        assert!(matches!(
            solve(&m, &boom(), 3),
            Err(Error::UnsupportedRegime(_))
        ));
    }

    #[test]
    fn solve_averages_and_monotonicity() {
        let m = ModelA::new(6, 2, 0.65, 0.8).unwrap();
        let g = solve(&m, &ExplosionModel::new(0.35).unwrap(), 20).unwrap();
        for mm in 0..=20u32 {
            let avg: f64 = (0..=6)
                .map(|x| g.minus_count.get(x) * g.value(x, mm).unwrap())
                .sum();
            assert!((avg - g.game_value(mm).unwrap()).abs() < 1e-12);
            for x in 0..=6 {
                let v = g.value(x, mm).unwrap();
                assert!((0.0..=4.0 + 1e-12).contains(&v));
                if mm > 0 {
                    assert!(v >= g.value(x, mm - 1).unwrap());
                }
            }
        }
    }

    #[test]
    fn perfect_specificity_sends_everything_to_minus_boxes() {
        let m = ModelA::new(4, 1, 0.9, 1.0).unwrap();
        let g = solve(&m, &boom(), 10).unwrap();
        for x in 3..4 {
            assert_eq!(g.threshold(x), Some(Threshold::Unbounded));
            let t = g.tuple(x, 10).unwrap();
            assert_eq!(t.plus_bombs(4, x), 0);
        }
        for x in 1..3 {
            assert_eq!(g.value(x, 4), None);
        }
    }
}
