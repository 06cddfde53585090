//! Closed-form model of a chain of complex-voltage-multiplier memprocessors.
//!
//! Each stage multiplies the complex signal arriving on its two input terminals (real and
//! imaginary parts) by `1 + e^{i omega t}`, where `omega = 2 pi f` is set by the stage's
//! sinusoidal generator `v = 1 + cos(omega t)`. Swapping the stage's terminals conjugates the
//! rotation, which stores a negative datum. Feeding the first stage from a unit DC source and
//! subtracting 1 at the end yields `g(t)`; an ideal band-pass followed by a signal analyzer
//! reads the subset counts directly.
//!
//! Components are ideal: no noise, no bandwidth limits. Time is a plain `f64`, so this path
//! is numerically independent of the exact-phase sampler in [`crate::spectral`].

use crate::set::IntegerSet;
use crate::spectral::{GridSpec, Spectrum, DEFAULT_BUDGET_SAMPLES, ROUNDING_GUARD};
use crate::{Error, Result};
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt::Write as _;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CvmStage {
    /// Generator frequency in cycles per unit time.
    frequency: i64,
    /// Terminals swapped: the stage rotates by `-omega t`.
    inverted: bool,
}

impl CvmStage {
    /// Stage storing `a`: the generator runs at `|a|` and negative data use inverted terminals.
    pub fn encode(a: i64) -> Self {
        Self { frequency: a.abs(), inverted: a < 0 }
    }

    /// Stage with an explicit generator frequency and terminal orientation.
    pub fn with_terminals(frequency: i64, inverted: bool) -> Self {
        Self { frequency, inverted }
    }

    /// The datum the stage stores.
    pub fn datum(&self) -> i64 {
        if self.inverted {
            -self.frequency
        } else {
            self.frequency
        }
    }

    /// Angular frequency of the generator, `2 pi f`.
    pub fn omega(&self) -> f64 {
        2.0 * PI * self.frequency as f64
    }

    pub fn inverted(&self) -> bool {
        self.inverted
    }

    /// Generator voltage `1 + cos(omega t)` at time `t`.
    pub fn source_voltage(&self, t: f64) -> f64 {
        1.0 + (self.omega() * t).cos()
    }
}

/// `input * (1 + e^{i sgn omega t})`, with `sgn = -1` for an inverted stage.
pub fn cvm_stage_transfer(input: Complex64, stage: &CvmStage, t: f64) -> Complex64 {
    let sign = if stage.inverted { -1.0 } else { 1.0 };
    input * (Complex64::new(1.0, 0.0) + Complex64::from_polar(1.0, sign * stage.omega() * t))
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CvmChain {
    pub stages: Vec<CvmStage>,
}

impl CvmChain {
    pub fn from_set(set: &IntegerSet) -> Self {
        Self { stages: set.elements().iter().map(|&a| CvmStage::encode(a)).collect() }
    }

    /// Largest frequency present at the output.
    pub fn f_max(&self) -> u64 {
        let pos: i64 = self.stages.iter().map(CvmStage::datum).filter(|&a| a > 0).sum();
        let neg: i64 = self.stages.iter().map(CvmStage::datum).filter(|&a| a < 0).sum();
        pos.max(-neg) as u64
    }

    pub fn grid(&self) -> GridSpec {
        let f_max = self.f_max();
        GridSpec { f_max, samples: 2 * f_max + 1 }
    }
}

/// Output of the whole chain at time `t`: unit DC source through every stage, minus 1.
pub fn chain_output(chain: &CvmChain, t: f64) -> Complex64 {
    let v = chain
        .stages
        .iter()
        .fold(Complex64::new(1.0, 0.0), |acc, stage| cvm_stage_transfer(acc, stage, t));
    v - 1.0
}

/// One period of the chain output at `t_k = k / N`.
pub fn sample_chain(chain: &CvmChain) -> Vec<(u64, f64, Complex64)> {
    let samples = chain.grid().samples;
    (0..samples)
        .map(|k| {
            let t = k as f64 / samples as f64;
            (k, t, chain_output(chain, t))
        })
        .collect()
}

/// `k,t,re,im` rows for a sample list.
pub fn samples_csv(samples: &[(u64, f64, Complex64)]) -> String {
    let mut out = String::from("k,t,re,im\n");
    for (k, t, z) in samples {
        let _ = writeln!(out, "{k},{t:.17e},{:.17e},{:.17e}", z.re, z.im);
    }
    out
}

fn analyze(
    samples: Vec<Complex64>,
    lo: i64,
    hi: i64,
) -> Result<Spectrum> {
    let n = samples.len();
    let mut buffer = samples;
    FftPlanner::<f64>::new().plan_fft_forward(n).process(&mut buffer);
    let f_max = (n as i64 - 1) / 2;
    let mut counts = Vec::with_capacity((hi - lo + 1) as usize);
    let mut residual = 0.0f64;
    for f in lo..=hi {
        if f.abs() > f_max {
            counts.push(0);
            continue;
        }
        let raw = buffer[f.rem_euclid(n as i64) as usize] / n as f64;
        let rounded = raw.re.round();
        let r = (raw - rounded).norm();
        if r >= ROUNDING_GUARD || rounded < 0.0 {
            return Err(Error::PrecisionLoss { frequency: f, residual: r });
        }
        residual = residual.max(r);
        counts.push(rounded as u64);
    }
    Ok(Spectrum::from_counts(lo, hi, counts, residual))
}

/// Spectrum of a single stage read in isolation: DC source on one port, analyzer on the
/// other. Without the `-1` offset the two components sit at `0` and at the stored datum.
pub fn read_isolated(stage: &CvmStage) -> Result<Spectrum> {
    let f = stage.frequency.unsigned_abs();
    let samples = 2 * f + 1;
    let buffer: Vec<Complex64> = (0..samples)
        .map(|k| cvm_stage_transfer(Complex64::new(1.0, 0.0), stage, k as f64 / samples as f64))
        .collect();
    analyze(buffer, -(f as i64), f as i64)
}

/// Samples one period of the chain at `N = 2 f_max + 1` points, transforms once, and keeps the
/// bins inside `[lo, hi]` (ideal brick-wall band-pass).
pub fn analyzer_spectrum(chain: &CvmChain, lo: i64, hi: i64) -> Result<Spectrum> {
    analyzer_spectrum_with_budget(chain, lo, hi, DEFAULT_BUDGET_SAMPLES)
}

pub fn analyzer_spectrum_with_budget(chain: &CvmChain, lo: i64, hi: i64, budget: u64) -> Result<Spectrum> {
    if lo > hi {
        return Err(Error::OutOfRange(format!("empty window {lo}:{hi}")));
    }
    let grid = chain.grid();
    if grid.samples > budget {
        return Err(Error::BudgetExceeded { samples: grid.samples, budget });
    }
    let buffer = sample_chain(chain).into_iter().map(|(_, _, z)| z).collect();
    analyze(buffer, lo, hi)
}
