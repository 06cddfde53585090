//! Ground-truth subset-sum solvers used to check the memcomputing solvers.

use crate::set::IntegerSet;
use crate::spectral::Spectrum;
use crate::{Error, Result};

/// Largest set the exhaustive counter accepts.
pub const BRUTE_FORCE_COUNT_LIMIT: usize = 27;
/// Largest set the exhaustive spectrum accepts.
pub const BRUTE_FORCE_SPECTRUM_LIMIT: usize = 20;
/// Default cap on the DP table width, in sums.
pub const DEFAULT_DP_BUDGET: u64 = 1 << 32;

/// Dense reachability table over the offset sum range `[-f_max, f_max]`.
///
/// Bit `i` is set iff some nonempty subset sums to `i - offset`.
#[derive(Clone, Debug)]
pub struct ReachableSums {
    offset: i64,
    len: u64,
    words: Vec<u64>,
}

impl ReachableSums {
    pub fn build(set: &IntegerSet) -> Result<Self> {
        Self::build_with_budget(set, DEFAULT_DP_BUDGET)
    }

    pub fn build_with_budget(set: &IntegerSet, budget: u64) -> Result<Self> {
        let offset = set.positive_sum().max(-set.negative_sum());
        let len = 2 * offset as u64 + 1;
        if len > budget {
            return Err(Error::BudgetExceeded { samples: len, budget });
        }
        let mut table = Self { offset, len, words: vec![0; len.div_ceil(64) as usize] };
        let mut scratch = vec![0u64; table.words.len()];
        for &a in set.elements() {
            // nonempty subsets ending in `a`: every previous sum shifted by `a`, plus {a} alone
            scratch.copy_from_slice(&table.words);
            shift_or(&mut table.words, &scratch, a);
            table.set((a + offset) as u64);
        }
        Ok(table)
    }

    fn set(&mut self, i: u64) {
        self.words[(i / 64) as usize] |= 1 << (i % 64);
    }

    pub fn contains(&self, s: i64) -> bool {
        let i = s as i128 + self.offset as i128;
        if i < 0 || i >= self.len as i128 {
            return false;
        }
        let i = i as u64;
        self.words[(i / 64) as usize] >> (i % 64) & 1 == 1
    }

    /// Number of distinct reachable sums.
    pub fn reachable_count(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }
}

/// `dst |= src << shift` over a little-endian bit vector (negative shifts move toward bit 0).
fn shift_or(dst: &mut [u64], src: &[u64], shift: i64) {
    let words = src.len() as i64;
    let word_shift = shift.div_euclid(64);
    let bit_shift = shift.rem_euclid(64) as u32;
    for i in 0..words {
        // bits of dst word i come from src words i - word_shift and i - word_shift - 1
        let j = i - word_shift;
        let mut w = 0u64;
        if (0..words).contains(&j) {
            w |= src[j as usize] << bit_shift;
        }
        if bit_shift != 0 && (0..words).contains(&(j - 1)) {
            w |= src[(j - 1) as usize] >> (64 - bit_shift);
        }
        dst[i as usize] |= w;
    }
}

/// Whether a nonempty subset sums to `s`, by `O(n p)` bitset dynamic programming.
pub fn dp_decision(set: &IntegerSet, s: i64) -> Result<bool> {
    Ok(ReachableSums::build(set)?.contains(s))
}

/// Exact number of nonempty subsets summing to `s`, by enumerating all `2^n - 1` subsets.
pub fn brute_force_count(set: &IntegerSet, s: i64) -> Result<u64> {
    if set.len() > BRUTE_FORCE_COUNT_LIMIT {
        return Err(Error::TooLarge {
            what: "brute-force count",
            n: set.len(),
            limit: BRUTE_FORCE_COUNT_LIMIT,
        });
    }
    let mut count = 0u64;
    for_each_subset_sum(set.elements(), |sum| {
        if sum == s {
            count += 1;
        }
    });
    Ok(count)
}

/// Counts of every achievable nonempty-subset sum, over `[-f_max, f_max]`.
pub fn brute_force_spectrum(set: &IntegerSet) -> Result<Spectrum> {
    if set.len() > BRUTE_FORCE_SPECTRUM_LIMIT {
        return Err(Error::TooLarge {
            what: "brute-force spectrum",
            n: set.len(),
            limit: BRUTE_FORCE_SPECTRUM_LIMIT,
        });
    }
    let f_max = set.positive_sum().max(-set.negative_sum());
    let mut counts = vec![0u64; (2 * f_max + 1) as usize];
    for_each_subset_sum(set.elements(), |sum| counts[(sum + f_max) as usize] += 1);
    Ok(Spectrum::from_counts(-f_max, f_max, counts, 0.0))
}

/// Calls `visit` with the sum of every nonempty subset, walking subsets in Gray-code order so
/// each step adds or removes a single element.
fn for_each_subset_sum(elements: &[i64], mut visit: impl FnMut(i64)) {
    let n = elements.len();
    let mut sum = 0i64;
    let mut gray = 0u64;
    for step in 1u64..(1u64 << n) {
        let bit = step.trailing_zeros() as usize;
        gray ^= 1 << bit;
        if gray >> bit & 1 == 1 {
            sum += elements[bit];
        } else {
            sum -= elements[bit];
        }
        visit(sum);
    }
}
