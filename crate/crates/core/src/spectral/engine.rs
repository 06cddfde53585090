//! Streaming single-bin evaluation of the generating signal's spectrum.
//!
//! The sample stream `k = 1..=(N-1)/2` is cut into fixed blocks. Inside a block each requested
//! bin runs Goertzel's second-order recurrence; at the block end the recurrence output is
//! rotated back to the global time origin with an exactly reduced integer phase and added to a
//! compensated accumulator. Keeping the recurrence short bounds its round-off growth, and fixed
//! block boundaries make the result independent of how blocks are spread over threads.
//!
//! The coefficients are real, so `c_f = (g(0) + 2 Re sum_{k=1}^{(N-1)/2} g_k e^{-i 2 pi f k / N}) / N`.

use super::phase::{mul_mod, HalfAngleTable, Sampler};
use crate::compensated::ComplexSum;
use num_complex::Complex64;
use rayon::prelude::*;

const BLOCK: usize = 1024;
const BLOCKS_PER_TASK: u64 = 16;

/// A subset of the element list (by index) together with the bins to evaluate for it.
#[derive(Clone, Debug)]
pub(crate) struct QueryGroup {
    pub members: Vec<usize>,
    pub targets: Vec<i64>,
}

struct TargetState {
    coeff: Vec<f64>,
    back_rotation: Vec<Complex64>,
    doubled: Vec<u64>,
    s1_re: Vec<f64>,
    s1_im: Vec<f64>,
    s2_re: Vec<f64>,
    s2_im: Vec<f64>,
}

impl TargetState {
    fn new(table: &HalfAngleTable, targets: &[i64]) -> Self {
        let period = table.period();
        let doubled: Vec<u64> = targets
            .iter()
            .map(|&s| (2 * s.rem_euclid(table.samples() as i64) as u64) % period)
            .collect();
        let coeff = doubled.iter().map(|&m| 2.0 * table.cos(m)).collect();
        let back_rotation = doubled.iter().map(|&m| table.cis((period - m) % period)).collect();
        let t = targets.len();
        Self {
            coeff,
            back_rotation,
            doubled,
            s1_re: vec![0.0; t],
            s1_im: vec![0.0; t],
            s2_re: vec![0.0; t],
            s2_im: vec![0.0; t],
        }
    }

    #[inline]
    fn push(&mut self, x: Complex64) {
        for t in 0..self.coeff.len() {
            let re = x.re + self.coeff[t] * self.s1_re[t] - self.s2_re[t];
            let im = x.im + self.coeff[t] * self.s1_im[t] - self.s2_im[t];
            self.s2_re[t] = self.s1_re[t];
            self.s2_im[t] = self.s1_im[t];
            self.s1_re[t] = re;
            self.s1_im[t] = im;
        }
    }

    /// Closes a block whose last sample had global index `last`, adding
    /// `sum_m x_m e^{-i w k_m}` to `acc`.
    #[allow(clippy::needless_range_loop)]
    fn flush(&mut self, table: &HalfAngleTable, last: u64, acc: &mut [ComplexSum]) {
        let period = table.period();
        for t in 0..self.coeff.len() {
            let s1 = Complex64::new(self.s1_re[t], self.s1_im[t]);
            let s2 = Complex64::new(self.s2_re[t], self.s2_im[t]);
            let y = s1 - self.back_rotation[t] * s2;
            let phase = mul_mod(self.doubled[t], last, period);
            acc[t] += y * table.cis((period - phase) % period);
            self.s1_re[t] = 0.0;
            self.s1_im[t] = 0.0;
            self.s2_re[t] = 0.0;
            self.s2_im[t] = 0.0;
        }
    }
}

/// Raw real coefficients `c_f` for every group and target, using `samples` points per period.
///
/// `samples` must be odd and at least `2 f_max + 1` for every group's member subset.
pub(crate) fn correlate(elements: &[i64], groups: &[QueryGroup], samples: u64) -> Vec<Vec<f64>> {
    assert!(samples % 2 == 1, "sample count must be odd");
    let table = HalfAngleTable::new(samples);
    let half = (samples - 1) / 2;
    let per_task = BLOCK as u64 * BLOCKS_PER_TASK;
    let tasks = half.div_ceil(per_task);

    let partials: Vec<Vec<Vec<ComplexSum>>> = (0..tasks)
        .into_par_iter()
        .map(|task| {
            let start = 1 + task * per_task;
            let end = (start + per_task).min(half + 1);
            run_task(&table, elements, groups, start, end)
        })
        .collect();

    groups
        .iter()
        .enumerate()
        .map(|(g, group)| {
            let dc = (2.0f64).powi(group.members.len() as i32) - 1.0;
            (0..group.targets.len())
                .map(|t| {
                    let mut total = ComplexSum::default();
                    for part in &partials {
                        total += part[g][t].value();
                    }
                    (dc + 2.0 * total.value().re) / samples as f64
                })
                .collect()
        })
        .collect()
}

fn run_task(
    table: &HalfAngleTable,
    elements: &[i64],
    groups: &[QueryGroup],
    start: u64,
    end: u64,
) -> Vec<Vec<ComplexSum>> {
    let period = table.period();
    let mut sampler = Sampler::new(table, elements, start);
    let mut states: Vec<TargetState> =
        groups.iter().map(|g| TargetState::new(table, &g.targets)).collect();
    let mut acc: Vec<Vec<ComplexSum>> =
        groups.iter().map(|g| vec![ComplexSum::default(); g.targets.len()]).collect();
    let scales: Vec<f64> = groups.iter().map(|g| (2.0f64).powi(g.members.len() as i32)).collect();
    let full: Vec<bool> = groups
        .iter()
        .map(|g| g.members.len() == elements.len() && g.members.iter().enumerate().all(|(i, &m)| i == m))
        .collect();
    let mut cosines = vec![0.0f64; elements.len()];

    let mut k = start;
    let mut in_block = 0usize;
    while k < end {
        let phases = sampler.phases();
        for (c, &p) in cosines.iter_mut().zip(phases) {
            *c = table.cos(p);
        }
        for (g, group) in groups.iter().enumerate() {
            let (magnitude, total) = if full[g] {
                (cosines.iter().product::<f64>(), phases.iter().sum::<u64>())
            } else {
                group
                    .members
                    .iter()
                    .fold((1.0, 0u64), |(m, t), &j| (m * cosines[j], t + phases[j]))
            };
            let x = scales[g] * magnitude * table.cis(total % period) - 1.0;
            states[g].push(x);
        }
        sampler.advance();
        in_block += 1;
        if in_block == BLOCK || k + 1 == end {
            for (state, a) in states.iter_mut().zip(acc.iter_mut()) {
                state.flush(table, k, a);
            }
            in_block = 0;
        }
        k += 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn naive_coefficient(elements: &[i64], f: i64, samples: u64) -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..samples {
            let x = k as f64 / samples as f64;
            let g = elements
                .iter()
                .map(|&a| Complex64::new(1.0, 0.0) + Complex64::from_polar(1.0, 2.0 * PI * a as f64 * x))
                .product::<Complex64>()
                - 1.0;
            acc += g * Complex64::from_polar(1.0, -2.0 * PI * f as f64 * x);
        }
        acc.re / samples as f64
    }

    #[test]
    fn matches_naive_dft() {
        let elements = [4i64, -9, 6, 1, -2];
        let samples = 2 * 11 + 1;
        let targets: Vec<i64> = (-12..=12).collect();
        let got = correlate(&elements, &[QueryGroup { members: (0..5).collect(), targets: targets.clone() }], samples);
        for (t, &f) in targets.iter().enumerate() {
            let want = naive_coefficient(&elements, f, samples);
            assert!((got[0][t] - want).abs() < 1e-9, "f={f}: {} vs {want}", got[0][t]);
        }
    }

    #[test]
    fn spans_multiple_blocks_and_tasks() {
        // f_max = 20_000 gives ~20k samples in the half range: several blocks, two tasks.
        let elements = [10_000i64, 7_000, 3_000, -1];
        let samples = 2 * 20_000 + 1;
        let got = correlate(
            &elements,
            &[QueryGroup { members: (0..4).collect(), targets: vec![10_000, 17_000, 20_000, 19_999, 5] }],
            samples,
        );
        let want = [2.0, 1.0, 1.0, 1.0, 0.0];
        for (g, w) in got[0].iter().zip(want) {
            assert!((g - w).abs() < 1e-6, "{g} vs {w}");
        }
    }

    #[test]
    fn member_subsets_exclude_elements() {
        let elements = [1i64, 2, 3];
        let groups = [
            QueryGroup { members: vec![1, 2], targets: vec![3, 5, 1] },
            QueryGroup { members: vec![0], targets: vec![1, 3] },
        ];
        let got = correlate(&elements, &groups, 13);
        let rounded: Vec<Vec<i64>> =
            got.iter().map(|v| v.iter().map(|c| c.round() as i64).collect()).collect();
        assert_eq!(rounded, vec![vec![1, 1, 0], vec![1, 0]]);
    }
}
