//! Subset-sum counting from the spectrum of the generating signal
//! `g(x) = -1 + prod_j (1 + e^{i 2 pi a_j x})`.
//!
//! Expanding the product gives one unit-amplitude exponential per nonempty subset, at the
//! frequency equal to the subset's sum. Sampling one period at `N = 2 f_max + 1` points is
//! therefore alias-free, and the DFT bin for integer frequency `f` (analysis kernel
//! `e^{-i 2 pi f x}`) is exactly the number of subsets summing to `f`.
//!
//! Two evaluation routes are provided: [`full_spectrum`] runs one odd-length FFT over all
//! samples, and [`goertzel_count`]/[`spectrum_window`] stream the samples through per-bin
//! Goertzel recurrences in `O(1)` memory.

mod engine;
mod phase;

use crate::oracles;
use crate::set::IntegerSet;
use crate::{Error, Result};
use engine::QueryGroup;
use num_complex::Complex64;
use phase::{HalfAngleTable, Sampler};
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;

/// Default cap on the sample count of an in-memory FFT.
pub const DEFAULT_BUDGET_SAMPLES: u64 = 1 << 26;

/// Distance from the nearest integer above which a coefficient is rejected.
pub const ROUNDING_GUARD: f64 = 0.25;

/// Counts for 64-bit bins stay exact only while `2^n` fits; larger sets are refused.
pub const MAX_SPECTRAL_ELEMENTS: usize = 62;

const TARGETS_PER_SWEEP: usize = 64;

/// Widest window [`spectrum_window`] and [`Spectrum::restrict`] will build.
pub const MAX_WINDOW_BINS: u64 = 1 << 24;

/// Integer subset counts over an inclusive frequency window.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    lo: i64,
    hi: i64,
    counts: Vec<u64>,
    residual: f64,
}

impl Spectrum {
    pub(crate) fn from_counts(lo: i64, hi: i64, counts: Vec<u64>, residual: f64) -> Self {
        debug_assert_eq!(counts.len() as i64, hi - lo + 1);
        Self { lo, hi, counts, residual }
    }

    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    /// The same counts over another window; bins outside the original window are zero.
    pub fn restrict(&self, lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::OutOfRange(format!("empty window {lo}:{hi}")));
        }
        let width = (hi as i128 - lo as i128 + 1) as u128;
        if width > MAX_WINDOW_BINS as u128 {
            return Err(Error::OutOfRange(format!("window of {width} bins is too wide")));
        }
        Ok(Self::from_counts(lo, hi, (lo..=hi).map(|f| self.get(f)).collect(), self.residual))
    }

    /// Count at `f`, zero outside the window.
    pub fn get(&self, f: i64) -> u64 {
        if f < self.lo || f > self.hi {
            0
        } else {
            self.counts[(f - self.lo) as usize]
        }
    }

    /// Largest `|raw coefficient - rounded count|` seen while building the spectrum.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, u64)> + '_ {
        (self.lo..=self.hi).zip(self.counts.iter().copied())
    }

    pub fn total(&self) -> u128 {
        self.counts.iter().map(|&c| c as u128).sum()
    }

    /// Nonzero bins only.
    pub fn support(&self) -> BTreeMap<i64, u64> {
        self.iter().filter(|&(_, c)| c > 0).collect()
    }

    /// `f,count` rows with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("f,count\n");
        for (f, c) in self.iter() {
            let _ = writeln!(out, "{f},{c}");
        }
        out
    }

    /// JSON object mapping each frequency in the window to its count.
    pub fn to_json_map(&self) -> serde_json::Value {
        let map: serde_json::Map<String, serde_json::Value> =
            self.iter().map(|(f, c)| (f.to_string(), c.into())).collect();
        serde_json::Value::Object(map)
    }
}

/// Sampling grid for a set: `N = 2 f_max + 1` points over the unit period.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub f_max: u64,
    pub samples: u64,
}

impl GridSpec {
    pub fn for_set(set: &IntegerSet) -> Self {
        let f_max = f_max(set);
        Self { f_max, samples: 2 * f_max + 1 }
    }
}

/// Largest achievable `|subset sum|`: the larger of the positive-part sum and the negated
/// negative-part sum.
pub fn f_max(set: &IntegerSet) -> u64 {
    f_max_of(set.elements())
}

fn f_max_of(elements: &[i64]) -> u64 {
    let pos: i64 = elements.iter().filter(|&&a| a > 0).sum();
    let neg: i64 = elements.iter().filter(|&&a| a < 0).sum();
    pos.max(-neg) as u64
}

fn check_size(set: &IntegerSet) -> Result<()> {
    if set.len() > MAX_SPECTRAL_ELEMENTS {
        return Err(Error::TooLarge {
            what: "spectral solver",
            n: set.len(),
            limit: MAX_SPECTRAL_ELEMENTS,
        });
    }
    Ok(())
}

/// `g(k / N)`, with each phase `a_j k mod N` reduced exactly before the trigonometric call and
/// the factor product accumulated in order.
pub fn eval_g(set: &IntegerSet, k: u64, samples: u64) -> Result<Complex64> {
    if samples == 0 || k >= samples {
        return Err(Error::OutOfRange(format!("sample index {k} not in [0, {samples})")));
    }
    let one = Complex64::new(1.0, 0.0);
    let product = set.elements().iter().fold(one, |acc, &a| {
        let m = phase::mul_mod(a.rem_euclid(samples as i64) as u64, k, samples);
        acc * (one + Complex64::from_polar(1.0, 2.0 * PI * (m as f64 / samples as f64)))
    });
    Ok(product - one)
}

fn round_count(raw: Complex64, f: i64) -> Result<(u64, f64)> {
    let rounded = raw.re.round();
    let residual = (raw - rounded).norm();
    if residual >= ROUNDING_GUARD || rounded < 0.0 {
        return Err(Error::PrecisionLoss { frequency: f, residual });
    }
    Ok((rounded as u64, residual))
}

/// Exact spectrum over `[-f_max, f_max]` via one odd-length FFT, capped at the default budget.
pub fn full_spectrum(set: &IntegerSet) -> Result<Spectrum> {
    full_spectrum_with_budget(set, DEFAULT_BUDGET_SAMPLES)
}

pub fn full_spectrum_with_budget(set: &IntegerSet, budget_samples: u64) -> Result<Spectrum> {
    check_size(set)?;
    let grid = GridSpec::for_set(set);
    if grid.samples > budget_samples {
        return Err(Error::BudgetExceeded { samples: grid.samples, budget: budget_samples });
    }
    let n = grid.samples as usize;
    let mut buffer = sample_period(set.elements(), grid.samples);
    FftPlanner::<f64>::new().plan_fft_forward(n).process(&mut buffer);

    let f_max = grid.f_max as i64;
    let scale = 1.0 / grid.samples as f64;
    let mut counts = Vec::with_capacity(n);
    let mut residual = 0.0f64;
    for f in -f_max..=f_max {
        let raw = buffer[f.rem_euclid(grid.samples as i64) as usize] * scale;
        let (count, r) = round_count(raw, f)?;
        residual = residual.max(r);
        counts.push(count);
    }
    Ok(Spectrum::from_counts(-f_max, f_max, counts, residual))
}

/// All `N` samples of one period; the upper half is filled by conjugate symmetry.
fn sample_period(elements: &[i64], samples: u64) -> Vec<Complex64> {
    let table = HalfAngleTable::new(samples);
    let n = samples as usize;
    let mut buffer = vec![Complex64::new(0.0, 0.0); n];
    let mut sampler = Sampler::new(&table, elements, 0);
    let half = (n - 1) / 2;
    for slot in buffer.iter_mut().take(half + 1) {
        *slot = sampler.value();
        sampler.advance();
    }
    for k in 1..=half {
        buffer[n - k] = buffer[k].conj();
    }
    buffer
}

/// Streaming single-bin count of nonempty subsets summing to `s`.
pub fn goertzel_count(set: &IntegerSet, s: i64) -> Result<u64> {
    Ok(goertzel_counts(set, &[s])?[0])
}

/// Streaming counts for several targets, sharing one pass over the samples per batch of bins.
pub fn goertzel_counts(set: &IntegerSet, targets: &[i64]) -> Result<Vec<u64>> {
    Ok(goertzel_bins(set, targets)?.into_iter().map(|(c, _)| c).collect())
}

/// Counts together with the rounding residual of each bin.
pub fn goertzel_bins(set: &IntegerSet, targets: &[i64]) -> Result<Vec<(u64, f64)>> {
    check_size(set)?;
    let grid = GridSpec::for_set(set);
    let f_max = grid.f_max as i64;
    let mut out = vec![(0u64, 0.0f64); targets.len()];
    let live: Vec<usize> = (0..targets.len()).filter(|&i| targets[i].abs() <= f_max).collect();
    for chunk in live.chunks(TARGETS_PER_SWEEP) {
        let group = QueryGroup {
            members: (0..set.len()).collect(),
            targets: chunk.iter().map(|&i| targets[i]).collect(),
        };
        let raw = engine::correlate(set.elements(), &[group], grid.samples);
        for (&i, &c) in chunk.iter().zip(&raw[0]) {
            out[i] = round_count(Complex64::new(c, 0.0), targets[i])?;
        }
    }
    Ok(out)
}

/// Counts for every integer `f` in `[lo, hi]`, each evaluated with the streaming single-bin
/// route. Bins outside `[-f_max, f_max]` are zero without computation.
pub fn spectrum_window(set: &IntegerSet, lo: i64, hi: i64) -> Result<Spectrum> {
    if lo > hi {
        return Err(Error::OutOfRange(format!("empty window {lo}:{hi}")));
    }
    let width = (hi as i128 - lo as i128 + 1) as u128;
    if width > MAX_WINDOW_BINS as u128 {
        return Err(Error::OutOfRange(format!("window of {width} bins is too wide")));
    }
    let f_max = f_max(set) as i64;
    let clip_lo = lo.max(-f_max);
    let clip_hi = hi.min(f_max);
    let mut counts = vec![0u64; width as usize];
    let mut residual = 0.0f64;
    if clip_lo <= clip_hi {
        let targets: Vec<i64> = (clip_lo..=clip_hi).collect();
        for (f, (c, r)) in targets.iter().zip(goertzel_bins(set, &targets)?) {
            counts[(f - lo) as usize] = c;
            residual = residual.max(r);
        }
    }
    Ok(Spectrum::from_counts(lo, hi, counts, residual))
}

/// Which solver answers a subset-sum query.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Fft,
    Goertzel,
    Dp,
    Brute,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Fft, Method::Goertzel, Method::Dp, Method::Brute];

    pub fn name(self) -> &'static str {
        match self {
            Method::Fft => "fft",
            Method::Goertzel => "goertzel",
            Method::Dp => "dp",
            Method::Brute => "brute",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fft" => Ok(Method::Fft),
            "goertzel" => Ok(Method::Goertzel),
            "dp" => Ok(Method::Dp),
            "brute" => Ok(Method::Brute),
            other => Err(Error::OutOfRange(format!("unknown method {other:?}"))),
        }
    }
}

/// Subset count at `s` for the counting methods; `None` for the decision-only DP.
pub fn count_subsets(set: &IntegerSet, s: i64, method: Method) -> Result<Option<u64>> {
    match method {
        Method::Fft => Ok(Some(full_spectrum(set)?.get(s))),
        Method::Goertzel => goertzel_count(set, s).map(Some),
        Method::Brute => oracles::brute_force_count(set, s).map(Some),
        Method::Dp => Ok(None),
    }
}

/// Whether some nonempty subset sums to `s`.
pub fn solve_decision(set: &IntegerSet, s: i64, method: Method) -> Result<bool> {
    match method {
        Method::Dp => oracles::dp_decision(set, s),
        _ => Ok(count_subsets(set, s, method)?.unwrap_or(0) > 0),
    }
}

/// A subset recovered by sequential element disabling.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Recovery {
    pub subset: Vec<i64>,
    /// Count evaluations made after the initial decision.
    pub evaluations: usize,
}

/// Finds a subset summing to `s`, or `None` when the decision is negative.
///
/// Elements are scanned in input order. Each is tentatively disabled and the count at `s` is
/// re-evaluated on the remaining active elements; if it stays positive the element is dropped
/// for good. Whatever survives is a subset in which every element is needed, so it is the
/// solution itself.
pub fn recover_subset(set: &IntegerSet, s: i64) -> Result<Option<Recovery>> {
    Ok(recover_subsets(set, &[s])?.pop().flatten())
}

/// [`recover_subset`] for several targets in lockstep, sharing one sample pass per element.
pub fn recover_subsets(set: &IntegerSet, targets: &[i64]) -> Result<Vec<Option<Recovery>>> {
    let initial = goertzel_counts(set, targets)?;
    let n = set.len();
    let elements = set.elements();
    let mut active: Vec<Option<Vec<bool>>> =
        initial.iter().map(|&c| (c > 0).then(|| vec![true; n])).collect();
    let mut evaluations = vec![0usize; targets.len()];

    for i in 0..n {
        let mut groups = Vec::new();
        let mut owners = Vec::new();
        for (t, mask) in active.iter().enumerate() {
            let Some(mask) = mask else { continue };
            let members: Vec<usize> = (0..n).filter(|&j| j != i && mask[j]).collect();
            evaluations[t] += 1;
            if members.is_empty() {
                continue;
            }
            let reach = f_max_of(&members.iter().map(|&j| elements[j]).collect::<Vec<_>>());
            if (targets[t].unsigned_abs()) > reach {
                continue;
            }
            groups.push(QueryGroup { members, targets: vec![targets[t]] });
            owners.push(t);
        }
        if groups.is_empty() {
            continue;
        }
        let samples = groups
            .iter()
            .map(|g| 2 * f_max_of(&g.members.iter().map(|&j| elements[j]).collect::<Vec<_>>()) + 1)
            .max()
            .unwrap_or(1);
        let raw = engine::correlate(elements, &groups, samples);
        for (&t, coeffs) in owners.iter().zip(&raw) {
            let (count, _) = round_count(Complex64::new(coeffs[0], 0.0), targets[t])?;
            if count > 0 {
                if let Some(mask) = active[t].as_mut() {
                    mask[i] = false;
                }
            }
        }
    }

    active
        .into_iter()
        .zip(targets)
        .zip(evaluations)
        .map(|((mask, &s), evaluations)| {
            let Some(mask) = mask else { return Ok(None) };
            let subset: Vec<i64> =
                elements.iter().zip(&mask).filter(|(_, &on)| on).map(|(&a, _)| a).collect();
            let sum: i64 = subset.iter().sum();
            if subset.is_empty() || sum != s {
                return Err(Error::Inconsistent(format!(
                    "recovered subset {subset:?} sums to {sum}, expected {s}"
                )));
            }
            Ok(Some(Recovery { subset, evaluations }))
        })
        .collect()
}

/// [`recover_subset`] with every decision answered by `method` on the active elements.
pub fn recover_subset_with(set: &IntegerSet, s: i64, method: Method) -> Result<Option<Recovery>> {
    let decide = |mask: &[bool]| -> Result<bool> {
        let members: Vec<i64> =
            set.elements().iter().zip(mask).filter(|(_, &on)| on).map(|(&a, _)| a).collect();
        if members.is_empty() {
            return Ok(false);
        }
        solve_decision(&IntegerSet::new_multiset(members)?, s, method)
    };
    let mut mask = vec![true; set.len()];
    if !decide(&mask)? {
        return Ok(None);
    }
    let mut evaluations = 0;
    for i in 0..set.len() {
        mask[i] = false;
        evaluations += 1;
        if !decide(&mask)? {
            mask[i] = true;
        }
    }
    let subset: Vec<i64> = set.elements().iter().zip(&mask).filter(|(_, &on)| on).map(|(&a, _)| a).collect();
    if subset.iter().sum::<i64>() != s {
        return Err(Error::Inconsistent(format!("recovered subset {subset:?} does not sum to {s}")));
    }
    Ok(Some(Recovery { subset, evaluations }))
}

/// Operation-count model of the spectral solver for `n` elements and precision `p` samples.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlopEstimate {
    /// `4 n p`: complex exponentials and products needed to sample `g`.
    pub sample_generation: u64,
    /// `p log2 p`: one full FFT.
    pub full_transform: f64,
    /// `p` per queried bin with Goertzel.
    pub single_bin: u64,
    /// `(n + log2 p) p`, the order of the all-bins route.
    pub total_order: f64,
}

pub fn flop_estimate(n: u64, p: u64) -> Result<FlopEstimate> {
    if n == 0 || p == 0 {
        return Err(Error::OutOfRange("flop_estimate needs n, p >= 1".into()));
    }
    let log_p = (p as f64).log2();
    Ok(FlopEstimate {
        sample_generation: 4 * n * p,
        full_transform: p as f64 * log_p,
        single_bin: p,
        total_order: (n as f64 + log_p) * p as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[i64]) -> IntegerSet {
        IntegerSet::new(v.to_vec()).unwrap()
    }

    #[test]
    fn f_max_examples() {
        assert_eq!(f_max(&set(&[-3, 1, 2])), 3);
        assert_eq!(f_max(&set(&[1, 2, 3])), 6);
        let g = set(&[-5, 2, 9, -1]);
        assert!((f_max(&g) as i64) < g.len() as i64 * g.max_abs());
    }

    #[test]
    fn eval_g_examples() {
        let g = set(&[1, 2, 3]);
        assert!((eval_g(&g, 0, 13).unwrap() - Complex64::new(7.0, 0.0)).norm() < 1e-12);

        let single = set(&[1]);
        let want = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
        assert!((eval_g(&single, 1, 3).unwrap() - want).norm() < 1e-12);

        let g = set(&[4, -7, 9]);
        let n = 2 * 13 + 1;
        for k in 1..n {
            let a = eval_g(&g, k, n).unwrap();
            let b = eval_g(&g, n - k, n).unwrap();
            assert!((a - b.conj()).norm() < 1e-10);
        }
        assert!(eval_g(&g, n, n).is_err());
    }

    #[test]
    fn full_spectrum_small_sets() {
        let s = full_spectrum(&set(&[1, 2])).unwrap();
        assert_eq!(s.support(), BTreeMap::from([(1, 1), (2, 1), (3, 1)]));
        assert_eq!(s.window(), (-3, 3));

        let s = full_spectrum(&set(&[1, -1])).unwrap();
        assert_eq!(s.support(), BTreeMap::from([(-1, 1), (0, 1), (1, 1)]));

        let s = full_spectrum(&set(&[1, 2, 3])).unwrap();
        assert_eq!(s.get(3), 2);
        assert_eq!(s.total(), 7);
        assert!(s.residual() < ROUNDING_GUARD);
    }

    #[test]
    fn full_spectrum_budget() {
        let g = set(&[1000, 2000]);
        match full_spectrum_with_budget(&g, 100) {
            Err(Error::BudgetExceeded { samples, budget }) => {
                assert_eq!((samples, budget), (6001, 100));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn goertzel_examples() {
        let g = set(&[1, 2, 3]);
        assert_eq!(goertzel_count(&g, 6).unwrap(), 1);
        assert_eq!(goertzel_count(&g, 7).unwrap(), 0);
        // {3,7}, {2,3,5}; brute force gives 2
        assert_eq!(goertzel_count(&set(&[2, 3, 5, 7, 11]), 10).unwrap(), 2);
    }

    #[test]
    fn decision_examples() {
        let g = set(&[1, 2]);
        for m in Method::ALL {
            assert!(solve_decision(&g, 3, m).unwrap(), "{m:?}");
            assert!(!solve_decision(&g, 0, m).unwrap(), "{m:?}");
        }
    }

    #[test]
    fn recovery_examples() {
        let r = recover_subset(&set(&[1, 2, 3]), 3).unwrap().unwrap();
        assert_eq!(r.subset.iter().sum::<i64>(), 3);
        // first feasible removal drops 1, then 2: {3} remains
        assert_eq!(r.subset, vec![3]);
        assert!(r.evaluations <= 3);

        assert!(recover_subset(&set(&[1, 2]), 5).unwrap().is_none());

        let r = recover_subset(&set(&[-3, 1, 2]), 0).unwrap().unwrap();
        assert_eq!(r.subset, vec![-3, 1, 2]);

        let g = set(&[4, -1, 7, 2, -5, 9]);
        for s in -6..=22 {
            let streamed = recover_subset(&g, s).unwrap();
            for method in Method::ALL {
                assert_eq!(recover_subset_with(&g, s, method).unwrap(), streamed, "s = {s}, {method:?}");
            }
        }
    }

    #[test]
    fn window_examples() {
        let g = set(&[1, 2, 3]);
        let w = spectrum_window(&g, 2, 4).unwrap();
        // {2}, {3} and {1,2}, {1,3}
        assert_eq!(w.iter().collect::<Vec<_>>(), vec![(2, 1), (3, 2), (4, 1)]);
        for (f, c) in w.iter() {
            assert_eq!(c, crate::oracles::brute_force_count(&g, f).unwrap());
        }

        let far = spectrum_window(&g, 100, 110).unwrap();
        assert_eq!(far.total(), 0);

        assert_eq!(spectrum_window(&g, 5, 5).unwrap().get(5), goertzel_count(&g, 5).unwrap());
        assert!(spectrum_window(&g, 3, 2).is_err());
    }

    #[test]
    fn flop_examples() {
        assert_eq!(flop_estimate(10, 100).unwrap().sample_generation, 4000);
        assert_eq!(flop_estimate(1, 1).unwrap().sample_generation, 4);
        let a = flop_estimate(3, 50).unwrap();
        let b = flop_estimate(4, 50).unwrap();
        let c = flop_estimate(3, 60).unwrap();
        assert!(b.sample_generation > a.sample_generation && b.total_order > a.total_order);
        assert!(c.sample_generation > a.sample_generation && c.total_order > a.total_order);
        assert!(flop_estimate(0, 5).is_err());
    }

    #[test]
    fn csv_and_json_output() {
        let s = spectrum_window(&set(&[1, 2]), 1, 3).unwrap();
        assert_eq!(s.to_csv(), "f,count\n1,1\n2,1\n3,1\n");
        assert_eq!(s.to_json_map()["3"], 1);
    }
}
