//! Exact-phase sampling of the generating signal.
//!
//! Every factor `1 + e^{i 2 pi a k / N}` is rewritten as `2 cos(pi a k / N) e^{i pi a k / N}`, so a
//! sample is `2^n * prod cos(pi phi_j / N) * e^{i pi (sum phi_j) / N} - 1` with integer phases
//! `phi_j = a_j k mod 2N`. Phases are advanced with integer arithmetic and never drift; the
//! trigonometric values come from a two-level table (`m = coarse * 4096 + fine`).

use num_complex::Complex64;
use std::f64::consts::PI;

const FINE_BITS: u32 = 12;
const FINE_LEN: usize = 1 << FINE_BITS;
const FINE_MASK: u64 = (FINE_LEN as u64) - 1;

/// `cos`/`sin` of `pi m / N` for `m in [0, 2N)`.
pub(crate) struct HalfAngleTable {
    samples: u64,
    coarse: Vec<(f64, f64)>,
    fine: Vec<(f64, f64)>,
}

impl HalfAngleTable {
    pub fn new(samples: u64) -> Self {
        assert!(samples >= 1);
        let period = 2 * samples;
        let angle = |m: u64| {
            // reduce to (-N, N] before scaling so the argument stays within [-pi, pi]
            let signed = if m > samples { m as f64 - period as f64 } else { m as f64 };
            PI * (signed / samples as f64)
        };
        let coarse_len = (period >> FINE_BITS) as usize + 1;
        let coarse = (0..coarse_len)
            .map(|h| {
                let (s, c) = angle((h as u64) << FINE_BITS).sin_cos();
                (c, s)
            })
            .collect();
        let fine = (0..FINE_LEN)
            .map(|l| {
                let x = PI * (l as f64 / samples as f64);
                let (s, c) = x.sin_cos();
                (c, s)
            })
            .collect();
        Self { samples, coarse, fine }
    }

    pub fn samples(&self) -> u64 {
        self.samples
    }

    pub fn period(&self) -> u64 {
        2 * self.samples
    }

    #[inline]
    pub fn cos(&self, m: u64) -> f64 {
        let (ch, sh) = self.coarse[(m >> FINE_BITS) as usize];
        let (cl, sl) = self.fine[(m & FINE_MASK) as usize];
        ch * cl - sh * sl
    }

    #[inline]
    pub fn cis(&self, m: u64) -> Complex64 {
        let (ch, sh) = self.coarse[(m >> FINE_BITS) as usize];
        let (cl, sl) = self.fine[(m & FINE_MASK) as usize];
        Complex64::new(ch * cl - sh * sl, sh * cl + ch * sl)
    }
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Generates `g(k / N)` for a fixed element list, sequentially from any starting index.
pub(crate) struct Sampler<'a> {
    table: &'a HalfAngleTable,
    steps: Vec<u64>,
    phases: Vec<u64>,
    scale: f64,
}

impl<'a> Sampler<'a> {
    pub fn new(table: &'a HalfAngleTable, elements: &[i64], start: u64) -> Self {
        let period = table.period();
        let steps: Vec<u64> =
            elements.iter().map(|&a| a.rem_euclid(period as i64) as u64).collect();
        let phases = steps.iter().map(|&s| mul_mod(s, start, period)).collect();
        Self { table, steps, phases, scale: (2.0f64).powi(elements.len() as i32) }
    }

    /// Current integer half-angle phases `a_j k mod 2N`.
    #[inline]
    pub fn phases(&self) -> &[u64] {
        &self.phases
    }

    #[inline]
    pub fn advance(&mut self) {
        let period = self.table.period();
        for (p, &s) in self.phases.iter_mut().zip(&self.steps) {
            *p += s;
            if *p >= period {
                *p -= period;
            }
        }
    }

    /// Sample at the current index.
    #[inline]
    pub fn value(&self) -> Complex64 {
        let period = self.table.period();
        let mut magnitude = self.scale;
        let mut total = 0u64;
        for &p in &self.phases {
            magnitude *= self.table.cos(p);
            total += p;
        }
        magnitude * self.table.cis(total % period) - 1.0
    }
}
