//! Timing harness: streaming Goertzel against the bitset DP on random sets.

use crate::oracles::dp_decision;
use crate::set::IntegerSet;
use crate::spectral::{goertzel_count, GridSpec};
use crate::{Error, Result};
use rand::rngs::StdRng;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

pub const DEFAULT_SEED: u64 = 0x5eed_2015;

/// `n` distinct nonzero integers with `|a| <= max_abs`; negatives only when `signed`.
pub fn random_set(rng: &mut impl Rng, n: usize, max_abs: i64, signed: bool) -> Result<IntegerSet> {
    let available = if signed { 2 * max_abs } else { max_abs };
    if n == 0 || max_abs < 1 || n as i64 > available {
        return Err(Error::OutOfRange(format!("cannot draw {n} distinct values with |a| <= {max_abs}")));
    }
    let mut seen = BTreeSet::new();
    let mut elements = Vec::with_capacity(n);
    while elements.len() < n {
        let mut a = rng.random_range(1..=max_abs);
        if signed && rng.random_bool(0.5) {
            a = -a;
        }
        if seen.insert(a) {
            elements.push(a);
        }
    }
    IntegerSet::new(elements)
}

/// Sum of a random nonempty subset: a target known to be feasible.
pub fn random_feasible_target(rng: &mut impl Rng, set: &IntegerSet) -> i64 {
    let mut picks: Vec<i64> = set.elements().iter().copied().filter(|_| rng.random_bool(0.5)).collect();
    if picks.is_empty() {
        picks.push(*set.elements().choose(rng).expect("sets are nonempty"));
    }
    picks.iter().sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BenchMethod {
    Goertzel,
    Dp,
}

impl BenchMethod {
    pub fn name(self) -> &'static str {
        match self {
            BenchMethod::Goertzel => "goertzel",
            BenchMethod::Dp => "dp",
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub max_abs: i64,
    pub signed: bool,
    pub seed: u64,
    /// Cells slower than this are flagged; larger sizes of that method are skipped.
    pub timeout: Duration,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self { sizes: (8..=16).collect(), max_abs: 1000, signed: true, seed: DEFAULT_SEED, timeout: Duration::from_secs(60) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub n: usize,
    /// Samples per period, `2 f_max + 1`.
    pub p: u64,
    pub target: i64,
    pub method: BenchMethod,
    /// `None` when the cell was skipped after an earlier timeout.
    pub ms: Option<f64>,
    pub decision: Option<bool>,
    /// Goertzel and DP decisions coincide (same value on both rows of a size).
    pub agree: Option<bool>,
    pub timed_out: bool,
}

fn timed<T>(f: impl FnOnce() -> Result<T>) -> (Result<T>, f64) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_secs_f64() * 1e3)
}

/// One row per (size, method), sizes in the given order.
pub fn run_bench(config: &BenchConfig) -> Result<Vec<BenchRow>> {
    let mut rng = StdRng::seed_from_u64(config.seed);
    let mut skip = BTreeSet::new();
    let mut rows = Vec::new();
    for &n in &config.sizes {
        let set = random_set(&mut rng, n, config.max_abs, config.signed)?;
        let target = random_feasible_target(&mut rng, &set);
        let p = GridSpec::for_set(&set).samples;
        let mut cells = Vec::new();
        for method in [BenchMethod::Goertzel, BenchMethod::Dp] {
            if skip.contains(&method) {
                cells.push(BenchRow { n, p, target, method, ms: None, decision: None, agree: None, timed_out: true });
                continue;
            }
            let (decision, ms) = match method {
                BenchMethod::Goertzel => timed(|| goertzel_count(&set, target).map(|c| c > 0)),
                BenchMethod::Dp => timed(|| dp_decision(&set, target)),
            };
            let timed_out = ms > config.timeout.as_secs_f64() * 1e3;
            if timed_out {
                skip.insert(method);
            }
            cells.push(BenchRow { n, p, target, method, ms: Some(ms), decision: Some(decision?), agree: None, timed_out });
        }
        let agree = match (cells[0].decision, cells[1].decision) {
            (Some(a), Some(b)) => Some(a == b),
            _ => None,
        };
        for mut row in cells {
            row.agree = agree;
            rows.push(row);
        }
    }
    Ok(rows)
}

fn opt<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map_or(String::new(), |v| v.to_string())
}

/// `n,p,method,ms,agree` rows; timed-out and skipped cells carry `timeout` in `agree`.
pub fn bench_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from("n,p,method,ms,agree\n");
    for r in rows {
        let agree = if r.timed_out { "timeout".to_string() } else { opt(r.agree) };
        let ms = r.ms.map_or(String::new(), |ms| format!("{ms:.6}"));
        let _ = writeln!(out, "{},{},{},{},{}", r.n, r.p, r.method.name(), ms, agree);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingPoint {
    pub p: u64,
    pub ms: f64,
}

/// Goertzel timings at fixed `n` for sets scaled by each factor; the best of `repeats` runs is
/// kept per point.
pub fn scaling_sweep(n: usize, max_abs: i64, factors: &[i64], repeats: usize, seed: u64) -> Result<Vec<ScalingPoint>> {
    let mut rng = StdRng::seed_from_u64(seed);
    let base = random_set(&mut rng, n, max_abs, true)?;
    let target = random_feasible_target(&mut rng, &base);
    factors
        .iter()
        .map(|&c| {
            let set = IntegerSet::new(base.elements().iter().map(|a| a * c).collect())?;
            let mut best = f64::INFINITY;
            for _ in 0..repeats.max(1) {
                let (count, ms) = timed(|| goertzel_count(&set, target * c));
                count?;
                best = best.min(ms);
            }
            Ok(ScalingPoint { p: GridSpec::for_set(&set).samples, ms: best })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogLogFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Least-squares line through `(ln p, ln ms)`.
pub fn loglog_fit(points: &[ScalingPoint]) -> Result<LogLogFit> {
    if points.len() < 2 || points.iter().any(|pt| pt.p == 0 || pt.ms <= 0.0) {
        return Err(Error::OutOfRange("need at least two points with positive p and time".into()));
    }
    let xs: Vec<f64> = points.iter().map(|pt| (pt.p as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|pt| pt.ms.ln()).collect();
    let m = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / m, ys.iter().sum::<f64>() / m);
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::OutOfRange("all points share one p".into()));
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(LogLogFit { slope, intercept: my - slope * mx, r_squared })
}
