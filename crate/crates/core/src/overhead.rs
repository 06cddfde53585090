//! Information overhead of interacting memprocessors.
//!
//! Quadratic overhead: `k` cells in series expose, besides each stored value, the sum of every
//! contiguous run between two taps. Exponential overhead: a memprocessor whose internal state
//! is a sparse vector stores an element `a` as the components `{0: 1, a: 1}`; composing such
//! states (indices add, amplitudes multiply, coinciding indices add) yields one unit of
//! amplitude per subset at the index of its sum.

use crate::set::IntegerSet;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Shannon self-information of one message out of `space_size` equiprobable messages.
pub fn self_information(space_size: u128) -> Result<f64> {
    if space_size == 0 {
        return Err(Error::OutOfRange("message space is empty".into()));
    }
    Ok((space_size as f64).log2())
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Number of messages made of sums of 2 to `k` numbers drawn from `n`: `sum_{j=2}^k C(n, j)`.
pub fn message_space_size(n: u64, k: u64) -> Result<u128> {
    if k < 2 || k > n {
        return Err(Error::OutOfRange(format!("need 2 <= k <= n, got n = {n}, k = {k}")));
    }
    Ok((2..=k).map(|j| binomial(n, j)).sum())
}

/// Messages storable by `k` isolated cells when each message is two numbers and their sum.
pub fn independent_capacity(k: u64) -> u64 {
    k / 3
}

/// Values held by cells connected in series; taps sit before, between and after them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesChain {
    pub values: Vec<i64>,
}

impl SeriesChain {
    pub fn new(values: Vec<i64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::OutOfRange("series chain needs at least one cell".into()));
        }
        Ok(Self { values })
    }

    pub fn taps(&self) -> usize {
        self.values.len() + 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Readout {
    pub from_tap: usize,
    pub to_tap: usize,
    pub sum: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesReport {
    pub readouts: Vec<Readout>,
    /// `C(k + 1, 2)` tap pairs.
    pub readout_count: usize,
    /// `k (k - 1) / 2`, the pairwise figure quoted for `k` stored numbers; reported next to the
    /// measured count rather than reconciled with it.
    pub pairwise_figure: usize,
}

/// Every quantity measurable between two taps: the sum of the cells between them.
pub fn series_readout(chain: &SeriesChain) -> SeriesReport {
    let mut prefix = vec![0i64];
    for &v in &chain.values {
        prefix.push(prefix.last().copied().unwrap_or(0) + v);
    }
    let mut readouts = Vec::new();
    for from in 0..chain.taps() {
        for to in from + 1..chain.taps() {
            readouts.push(Readout { from_tap: from, to_tap: to, sum: prefix[to] - prefix[from] });
        }
    }
    let k = chain.values.len();
    SeriesReport { readout_count: readouts.len(), readouts, pairwise_figure: k * (k - 1) / 2 }
}

/// Internal state with finitely many nonzero components.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SparseState {
    pub support: BTreeMap<i64, f64>,
}

impl SparseState {
    /// The blank state: no components.
    pub fn blank() -> Self {
        Self::default()
    }

    /// `{0: 1}`, neutral for composition.
    pub fn unit() -> Self {
        Self { support: BTreeMap::from([(0, 1.0)]) }
    }

    pub fn mass(&self) -> f64 {
        self.support.values().sum()
    }

    pub fn amplitude(&self, h: i64) -> f64 {
        self.support.get(&h).copied().unwrap_or(0.0)
    }
}

/// The three operations used to compose sparse states: index combination, amplitude product,
/// and the sum applied to amplitudes landing on the same index.
pub trait StateAlgebra {
    fn combine_index(&self, h: i64, k: i64) -> i64;
    fn multiply(&self, x: f64, y: f64) -> f64;
    fn accumulate(&self, x: f64, y: f64) -> f64;
}

/// Index addition, real product, real sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct SumProduct;

impl StateAlgebra for SumProduct {
    fn combine_index(&self, h: i64, k: i64) -> i64 {
        h + k
    }

    fn multiply(&self, x: f64, y: f64) -> f64 {
        x * y
    }

    fn accumulate(&self, x: f64, y: f64) -> f64 {
        x + y
    }
}

pub fn encode_element(a: i64) -> Result<SparseState> {
    if a == 0 {
        return Err(Error::OutOfRange("element 0 collides with the reference component".into()));
    }
    Ok(SparseState { support: BTreeMap::from([(0, 1.0), (a, 1.0)]) })
}

/// Pairwise composition under an arbitrary algebra.
pub fn compose_with<A: StateAlgebra>(algebra: &A, x: &SparseState, y: &SparseState) -> SparseState {
    let mut support: BTreeMap<i64, f64> = BTreeMap::new();
    for (&h, &u) in &x.support {
        for (&k, &v) in &y.support {
            let idx = algebra.combine_index(h, k);
            let amp = algebra.multiply(u, v);
            support
                .entry(idx)
                .and_modify(|acc| *acc = algebra.accumulate(*acc, amp))
                .or_insert(amp);
        }
    }
    support.retain(|_, v| *v != 0.0);
    SparseState { support }
}

/// Folds [`compose_with`] over a list under [`SumProduct`]; an empty list gives the unit.
pub fn compose_states(states: &[SparseState]) -> SparseState {
    states.iter().fold(SparseState::unit(), |acc, s| compose_with(&SumProduct, &acc, s))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusReport {
    pub n: usize,
    /// Total amplitude of the composite, `2^n`: one unit per subset including the empty one.
    pub mass: f64,
    /// Distinct subset sums, the empty sum at index 0 included.
    pub support_size: usize,
    /// Messages encoded per memprocessor, `mass / n`.
    pub messages_per_cell: f64,
    pub self_information_bits: f64,
}

pub fn overhead_census(set: &IntegerSet) -> Result<(CensusReport, SparseState)> {
    let encoded: Vec<SparseState> =
        set.elements().iter().map(|&a| encode_element(a)).collect::<Result<_>>()?;
    let composite = compose_states(&encoded);
    let mass = composite.mass();
    let report = CensusReport {
        n: set.len(),
        mass,
        support_size: composite.support.len(),
        messages_per_cell: mass / set.len() as f64,
        self_information_bits: mass.log2(),
    };
    Ok((report, composite))
}
