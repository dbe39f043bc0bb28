//! Exact finite probability machinery for the symmetric model.
//!
//! The number of minus signals `N` splits into false minuses `N1 ~ Bin(k, 1-a)`
//! (locked boxes that tested minus) and correct minuses `N2 ~ Bin(n-k, b)`.
//! The two are independent, so the law of `N` is their convolution and the
//! joint law of `(N1, N)` is a simple product.

use serde::Serialize;

use crate::error::{check_unit, Error, Result};

/// Tolerance for accepting a raw mass vector as a pmf.
pub const PMF_TOLERANCE: f64 = 1e-9;

/// Binomial coefficient `C(n, k)` as an exact integer; zero when `k > n`.
///
/// Panics on `u64` overflow, which needs `n` well beyond anything enumerable.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    u64::try_from(acc).expect("binomial coefficient overflows u64")
}

/// `C(n, k)` as a float, zero outside the support. Accepts signed `k` so
/// callers can sum over ranges without clamping.
pub fn binomial_f64(n: usize, k: i64) -> f64 {
    if k < 0 || k as usize > n {
        0.0
    } else {
        binomial(n as u64, k as u64) as f64
    }
}

/// The `rank`-th `k`-subset of `{0, .., n-1}` in lexicographic order.
///
/// Rank 0 is `{0, 1, .., k-1}`; rank `C(n,k) - 1` is `{n-k, .., n-1}`.
pub fn unrank_combination(n: usize, k: usize, rank: u64) -> Result<Vec<usize>> {
    let total = binomial(n as u64, k as u64);
    if k > n || rank >= total {
        return Err(Error::InvalidArgument(format!(
            "rank {rank} out of range for C({n},{k}) = {total}"
        )));
    }
    let mut out = Vec::with_capacity(k);
    let mut rank = rank;
    let mut next = 0usize;
    for slot in 0..k {
        let remaining = (k - slot - 1) as u64;
        loop {
            // Subsets that start with `next` at this slot.
            let block = binomial((n - next - 1) as u64, remaining);
            if rank < block {
                break;
            }
            rank -= block;
            next += 1;
        }
        out.push(next);
        next += 1;
    }
    Ok(out)
}

/// A symmetric instance `A(n, k)`: `n` boxes, `k` locks, sensitivity `a`
/// (P(plus | lock)) and specificity `b` (P(minus | no lock)).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelA {
    n: usize,
    k: usize,
    a: f64,
    b: f64,
}

impl ModelA {
    pub fn new(n: usize, k: usize, a: f64, b: f64) -> Result<Self> {
        if k == 0 || k >= n {
            return Err(Error::InvalidModel { n, k });
        }
        check_unit("a", a)?;
        check_unit("b", b)?;
        Ok(Self { n, k, a, b })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Number of unlocked boxes.
    pub fn free(&self) -> usize {
        self.n - self.k
    }

    /// Whether `a + b > 1`, i.e. a minus signal is evidence of no lock.
    pub fn is_informative(&self) -> bool {
        self.a + self.b > 1.0
    }
}

/// A probability mass function on `{0, .., support_max}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Pmf {
    mass: Vec<f64>,
}

impl Pmf {
    /// Validates a raw mass vector. Rejects negative entries and totals
    /// further than [`PMF_TOLERANCE`] from one; never renormalizes.
    pub fn new(mass: Vec<f64>) -> Result<Self> {
        if mass.is_empty() {
            return Err(Error::InvalidPmf("empty mass vector".into()));
        }
        if let Some((j, v)) = mass
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v >= 0.0))
        {
            return Err(Error::InvalidPmf(format!("mass[{j}] = {v}")));
        }
        let total: f64 = mass.iter().sum();
        if (total - 1.0).abs() > PMF_TOLERANCE {
            return Err(Error::InvalidPmf(format!("total mass {total}")));
        }
        Ok(Self { mass })
    }

    pub fn point_mass(at: usize) -> Self {
        let mut mass = vec![0.0; at + 1];
        mass[at] = 1.0;
        Self { mass }
    }

    pub fn support_max(&self) -> usize {
        self.mass.len() - 1
    }

    /// Mass at `j`; zero outside the support.
    pub fn get(&self, j: usize) -> f64 {
        self.mass.get(j).copied().unwrap_or(0.0)
    }

    /// Same as [`Pmf::get`] but tolerates negative indices.
    pub fn at(&self, j: i64) -> f64 {
        if j < 0 {
            0.0
        } else {
            self.get(j as usize)
        }
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn total(&self) -> f64 {
        self.mass.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.mass
            .iter()
            .enumerate()
            .map(|(j, m)| j as f64 * m)
            .sum()
    }
}

/// `Bin(trials, p)` pmf.
pub fn binomial_pmf(trials: usize, p: f64) -> Result<Pmf> {
    check_unit("p", p)?;
    let q = 1.0 - p;
    let mass = (0..=trials)
        .map(|j| {
            binomial(trials as u64, j as u64) as f64
                * p.powi(j as i32)
                * q.powi((trials - j) as i32)
        })
        .collect();
    Ok(Pmf { mass })
}

/// Pmf of the sum of two independent variables.
pub fn convolve(f: &Pmf, g: &Pmf) -> Pmf {
    let mut mass = vec![0.0; f.mass.len() + g.mass.len() - 1];
    for (i, fi) in f.mass.iter().enumerate() {
        for (j, gj) in g.mass.iter().enumerate() {
            mass[i + j] += fi * gj;
        }
    }
    Pmf { mass }
}

/// Law of the minus count with `boxes` boxes and `locks` locks, `locks <= boxes`.
///
/// Unlike [`minus_count_pmf`] this accepts the reduced model `(n-1, k)`,
/// which can have `k = n - 1` locks in `n - 1` boxes.
pub fn minus_count_pmf_for(boxes: usize, locks: usize, a: f64, b: f64) -> Result<Pmf> {
    if locks > boxes {
        return Err(Error::InvalidModel { n: boxes, k: locks });
    }
    let false_minus = binomial_pmf(locks, 1.0 - a)?;
    let true_minus = binomial_pmf(boxes - locks, b)?;
    Ok(convolve(&false_minus, &true_minus))
}

/// `g_{n,k}`: the law of the number of minus signals under uniform lock placement.
pub fn minus_count_pmf(model: &ModelA) -> Pmf {
    minus_count_pmf_for(model.n, model.k, model.a, model.b)
        .expect("validated model always yields a pmf")
}

/// Joint law of the false-minus count `N1` (rows `t = 0..=k`) and the
/// minus count `N` (columns `x = 0..=n`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JointTx {
    k: usize,
    n: usize,
    mass: Vec<Vec<f64>>,
}

impl JointTx {
    /// `P(N1 = t, N = x)`; zero outside the table or the support.
    pub fn get(&self, t: usize, x: usize) -> f64 {
        self.mass
            .get(t)
            .and_then(|row| row.get(x))
            .copied()
            .unwrap_or(0.0)
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.mass
    }

    pub fn max_t(&self) -> usize {
        self.k
    }

    pub fn max_x(&self) -> usize {
        self.n
    }

    /// Marginal over `t`, i.e. `g_{n,k}`.
    pub fn column_sums(&self) -> Vec<f64> {
        (0..=self.n)
            .map(|x| (0..=self.k).map(|t| self.get(t, x)).sum())
            .collect()
    }

    pub fn total(&self) -> f64 {
        self.mass.iter().flatten().sum()
    }

    /// `E(N1 | N = x)`.
    pub fn conditional_n1_mean(&self, x: usize) -> Result<f64> {
        let column: f64 = (0..=self.k).map(|t| self.get(t, x)).sum();
        if x > self.n || column <= 0.0 {
            return Err(Error::ZeroProbability { x });
        }
        let weighted: f64 = (0..=self.k).map(|t| t as f64 * self.get(t, x)).sum();
        Ok(weighted / column)
    }
}

/// `s(t, x) = p1(t) p2(x - t)`.
pub fn joint_tx(model: &ModelA) -> JointTx {
    let false_minus = binomial_pmf(model.k, 1.0 - model.a).expect("validated");
    let true_minus = binomial_pmf(model.free(), model.b).expect("validated");
    let mass = (0..=model.k)
        .map(|t| {
            (0..=model.n)
                .map(|x| false_minus.get(t) * true_minus.at(x as i64 - t as i64))
                .collect()
        })
        .collect();
    JointTx {
        k: model.k,
        n: model.n,
        mass,
    }
}

/// `E(N1 | N = x)`, the expected number of locked boxes among the `x` minuses.
pub fn conditional_n1_mean(model: &ModelA, x: usize) -> Result<f64> {
    joint_tx(model).conditional_n1_mean(x)
}
