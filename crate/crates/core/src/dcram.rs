//! A matrix of integer memprocessors with three whole-subnetwork operations, and the
//! subset-sum schedule built from them.
//!
//! * `chi` (broadcast add): on every selected row, the value in the source column is added to
//!   each destination column, all at once.
//! * `mu` (move): on every selected row, the source column's value flows to the destination
//!   column and the source becomes unassigned.
//! * `rho` (replicate): one source cell is copied into a column over every selected row.
//!
//! # Subset-sum schedule
//!
//! Row 0 is the input row `[sigma0, a_1, .., a_n]` with `sigma0 = -sum(G)`. The working block
//! at iteration `k` has one row for every `(k-1)`-combination `I` of `{1..n-1}`; the row holds
//! `sigma0 + sum_I a` in column 0 and the elements with index above `max(I)` in columns
//! `1..`. One transition is `rho` (fill the element columns from the input row), `chi` (add
//! column 0 to them) and `mu` (turn one result into the next row's base; the others are
//! replicated into fresh rows). After `chi` the block holds `sigma0 + sum_J a` for every
//! `k`-combination `J` exactly once, which is minus the sum of the complement `G \ J`; a cell
//! equal to `-s` therefore certifies that `G \ J` sums to `s`.
//!
//! The block is `C(n-1, k-1)` rows by `n + 2 - k` columns; rows with shorter tails leave
//! their last columns unassigned.

use crate::set::IntegerSet;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// Sets larger than this are refused unless the caller raises the cap.
pub const DEFAULT_MAX_N: usize = 26;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DcramGrid {
    rows: usize,
    cols: usize,
    cells: Vec<Option<i64>>,
    /// Excluded-index set carried by each row of the working block, for verification.
    row_tags: Vec<Option<Vec<usize>>>,
}

impl DcramGrid {
    pub fn new(rows: usize, cols: usize) -> Self {
        Self { rows, cols, cells: vec![None; rows * cols], row_tags: vec![None; rows] }
    }

    /// Grid whose rows are the given values (`None` is unassigned); short rows are padded.
    pub fn from_rows(rows: &[Vec<Option<i64>>]) -> Self {
        let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
        let mut grid = Self::new(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                grid.cells[r * cols + c] = v;
            }
        }
        grid
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> Result<Option<i64>> {
        self.check(row, col)?;
        Ok(self.cells[row * self.cols + col])
    }

    pub fn set(&mut self, row: usize, col: usize, value: Option<i64>) -> Result<()> {
        self.check(row, col)?;
        self.cells[row * self.cols + col] = value;
        Ok(())
    }

    pub fn row(&self, row: usize) -> &[Option<i64>] {
        &self.cells[row * self.cols..(row + 1) * self.cols]
    }

    pub fn row_tag(&self, row: usize) -> Option<&[usize]> {
        self.row_tags.get(row).and_then(|t| t.as_deref())
    }

    pub fn assigned_count(&self) -> usize {
        self.cells.iter().filter(|c| c.is_some()).count()
    }

    fn check(&self, row: usize, col: usize) -> Result<()> {
        if row >= self.rows || col >= self.cols {
            return Err(Error::OutOfBounds { row, col });
        }
        Ok(())
    }

    fn operand(&self, row: usize, col: usize) -> Result<i64> {
        self.get(row, col)?.ok_or(Error::ComputeOnBlank { row, col })
    }

    fn add_rows(&mut self, count: usize) -> usize {
        let first = self.rows;
        self.rows += count;
        self.cells.resize(self.rows * self.cols, None);
        self.row_tags.resize(self.rows, None);
        first
    }

    fn clear_row(&mut self, row: usize) {
        self.cells[row * self.cols..(row + 1) * self.cols].fill(None);
        self.row_tags[row] = None;
    }

    /// Broadcast add, in place. Validates every operand before writing anything.
    pub fn chi(&mut self, rows: &[usize], src_col: usize, dst_cols: &[usize]) -> Result<()> {
        if dst_cols.contains(&src_col) {
            return Err(Error::OutOfRange(format!("chi source column {src_col} is also a destination")));
        }
        for &r in rows {
            self.operand(r, src_col)?;
            for &c in dst_cols {
                self.operand(r, c)?;
            }
        }
        for &r in rows {
            let base = self.cells[r * self.cols + src_col].unwrap_or_default();
            for &c in dst_cols {
                if let Some(v) = self.cells[r * self.cols + c].as_mut() {
                    *v += base;
                }
            }
        }
        Ok(())
    }

    /// Column move, in place.
    pub fn mu(&mut self, src_col: usize, dst_col: usize, rows: &[usize]) -> Result<()> {
        for &r in rows {
            self.operand(r, src_col)?;
            self.check(r, dst_col)?;
        }
        if src_col == dst_col {
            return Ok(());
        }
        for &r in rows {
            let v = self.cells[r * self.cols + src_col].take();
            self.cells[r * self.cols + dst_col] = v;
        }
        Ok(())
    }

    /// Replicate one cell into a column, in place.
    pub fn rho(&mut self, src_row: usize, src_col: usize, dst_col: usize, rows: &[usize]) -> Result<()> {
        let v = self.operand(src_row, src_col)?;
        for &r in rows {
            self.check(r, dst_col)?;
        }
        for &r in rows {
            self.cells[r * self.cols + dst_col] = Some(v);
        }
        Ok(())
    }
}

/// `chi` as a grid-to-grid transform.
pub fn op_chi(grid: &DcramGrid, rows: &[usize], src_col: usize, dst_cols: &[usize]) -> Result<DcramGrid> {
    let mut out = grid.clone();
    out.chi(rows, src_col, dst_cols)?;
    Ok(out)
}

/// `mu` as a grid-to-grid transform.
pub fn op_mu(grid: &DcramGrid, src_col: usize, dst_col: usize, rows: &[usize]) -> Result<DcramGrid> {
    let mut out = grid.clone();
    out.mu(src_col, dst_col, rows)?;
    Ok(out)
}

/// `rho` as a grid-to-grid transform.
pub fn op_rho(
    grid: &DcramGrid,
    src_row: usize,
    src_col: usize,
    dst_col: usize,
    rows: &[usize],
) -> Result<DcramGrid> {
    let mut out = grid.clone();
    out.rho(src_row, src_col, dst_col, rows)?;
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DcramOutcome {
    pub found: bool,
    /// Iteration at which the first match appeared; 0 means the whole set matched.
    pub iteration: Option<usize>,
    /// Excluded-index sets `J`; each certifies that `G \ J` sums to the target.
    pub matches: Vec<Vec<usize>>,
    /// The certified subsets themselves, as element values.
    pub subsets: Vec<Vec<i64>>,
    pub iterations_run: usize,
    pub peak_cells: u128,
}

/// State of the working block right after `chi` at iteration `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IterationSnapshot {
    pub iteration: usize,
    pub block_rows: usize,
    pub block_cols: usize,
    /// Memprocessors in the working block, assigned or not.
    pub allocated_cells: u128,
    pub assigned_cells: usize,
    /// `(J, sigma0 + sum_J a)` for every live result cell.
    pub live: Vec<(Vec<usize>, i64)>,
    /// `(row, col, value)` of every assigned block cell.
    pub cells: Vec<(usize, usize, i64)>,
}

#[derive(Clone, Copy, Debug)]
pub struct DcramOptions {
    pub max_n: usize,
    /// Stop at the first iteration with a match.
    pub stop_early: bool,
    pub record_trace: bool,
}

impl Default for DcramOptions {
    fn default() -> Self {
        Self { max_n: DEFAULT_MAX_N, stop_early: true, record_trace: false }
    }
}

#[derive(Clone, Debug)]
pub struct DcramRun {
    pub outcome: DcramOutcome,
    pub trace: Vec<IterationSnapshot>,
}

impl DcramRun {
    /// Step trace as CSV rows `iteration,row,column,value`.
    pub fn trace_csv(&self) -> String {
        let mut out = String::from("iteration,row,column,value\n");
        for snap in &self.trace {
            for &(r, c, v) in &snap.cells {
                let _ = writeln!(out, "{},{r},{c},{v}", snap.iteration);
            }
        }
        out
    }
}

/// Decides subset sum with at most `n - 1` transitions.
pub fn dcram_ssp(set: &IntegerSet, s: i64) -> Result<DcramOutcome> {
    Ok(run_schedule(set, s, DcramOptions::default())?.outcome)
}

pub fn run_schedule(set: &IntegerSet, s: i64, opts: DcramOptions) -> Result<DcramRun> {
    let n = set.len();
    if n < 2 {
        return Err(Error::OutOfRange(format!("the schedule needs n >= 2, got {n}")));
    }
    if n > opts.max_n {
        return Err(Error::TooLarge { what: "dcram schedule", n, limit: opts.max_n });
    }
    let a = set.elements();
    let sigma0 = -set.total();
    let target = -s;

    let mut grid = DcramGrid::new(2, n + 1);
    grid.set(0, 0, Some(sigma0))?;
    for (j, &v) in a.iter().enumerate() {
        grid.set(0, 1 + j, Some(v))?;
    }

    let mut outcome = DcramOutcome {
        found: false,
        iteration: None,
        matches: Vec::new(),
        subsets: Vec::new(),
        iterations_run: 0,
        peak_cells: 0,
    };
    let mut trace = Vec::new();

    if sigma0 == target {
        outcome.found = true;
        outcome.iteration = Some(0);
        outcome.matches.push(Vec::new());
        if opts.stop_early {
            return finish(set, s, outcome, trace);
        }
    }

    // iteration 1: a single row with empty tag
    grid.rho(0, 0, 0, &[1])?;
    grid.row_tags[1] = Some(Vec::new());
    let mut active = vec![1usize];
    let mut free: Vec<usize> = Vec::new();

    for k in 1..n {
        outcome.iterations_run = k;
        let width = n + 2 - k;

        // rho: fill each row's tail from the input row, one call per (element, column) class
        let mut classes: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for &r in &active {
            for (c, j) in tail(grid.row_tags[r].as_deref().unwrap_or(&[]), n).enumerate() {
                classes.entry((j, c + 1)).or_default().push(r);
            }
        }
        for ((j, c), rows) in &classes {
            grid.rho(0, 1 + j, *c, rows)?;
        }

        // chi: one call per tail length
        let mut by_len: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &r in &active {
            by_len.entry(tail_len(grid.row_tags[r].as_deref().unwrap_or(&[]), n)).or_default().push(r);
        }
        for (len, rows) in &by_len {
            let dst: Vec<usize> = (1..=*len).collect();
            grid.chi(rows, 0, &dst)?;
        }

        let allocated = active.len() as u128 * width as u128;
        outcome.peak_cells = outcome.peak_cells.max(allocated);

        let mut live = Vec::new();
        for &r in &active {
            let tag = grid.row_tags[r].clone().unwrap_or_default();
            for (c, j) in tail(&tag, n).enumerate() {
                let v = grid.cells[r * grid.cols + c + 1].ok_or(Error::ComputeOnBlank { row: r, col: c + 1 })?;
                let mut combo = tag.clone();
                combo.push(j);
                if v == target {
                    outcome.matches.push(combo.clone());
                }
                live.push((combo, v));
            }
        }
        if opts.record_trace {
            let mut cells = Vec::new();
            let mut assigned = 0;
            for &r in &active {
                for c in 0..width {
                    if let Some(v) = grid.cells[r * grid.cols + c] {
                        cells.push((r, c, v));
                        assigned += 1;
                    }
                }
            }
            trace.push(IterationSnapshot {
                iteration: k,
                block_rows: active.len(),
                block_cols: width,
                allocated_cells: allocated,
                assigned_cells: assigned,
                live,
                cells,
            });
        }
        if !outcome.matches.is_empty() && outcome.iteration.is_none() {
            outcome.found = true;
            outcome.iteration = Some(k);
        }
        if (outcome.found && opts.stop_early) || k == n - 1 {
            break;
        }

        // transition to k + 1
        let mut next = Vec::with_capacity(active.len());
        let mut base_moves = Vec::new();
        for &r in &active {
            let tag = grid.row_tags[r].clone().unwrap_or_default();
            let t: Vec<usize> = tail(&tag, n).collect();
            for (c, &j) in t.iter().enumerate().skip(1) {
                if j == n - 1 {
                    continue;
                }
                let child = match free.pop() {
                    Some(row) => row,
                    None => grid.add_rows(1),
                };
                grid.rho(r, c + 1, 0, &[child])?;
                let mut child_tag = tag.clone();
                child_tag.push(j);
                grid.row_tags[child] = Some(child_tag);
                next.push(child);
            }
            if t[0] == n - 1 {
                grid.clear_row(r);
                free.push(r);
            } else {
                base_moves.push(r);
                let mut child_tag = tag;
                child_tag.push(t[0]);
                grid.row_tags[r] = Some(child_tag);
                next.push(r);
            }
        }
        grid.mu(1, 0, &base_moves)?;
        for &r in &base_moves {
            for c in 1..grid.cols {
                grid.cells[r * grid.cols + c] = None;
            }
        }
        next.sort_unstable();
        active = next;
    }

    finish(set, s, outcome, trace)
}

fn finish(set: &IntegerSet, s: i64, mut outcome: DcramOutcome, trace: Vec<IterationSnapshot>) -> Result<DcramRun> {
    let a = set.elements();
    for excluded in &outcome.matches {
        let subset: Vec<i64> =
            (0..a.len()).filter(|j| !excluded.contains(j)).map(|j| a[j]).collect();
        let sum: i64 = subset.iter().sum();
        if subset.is_empty() || sum != s {
            return Err(Error::Inconsistent(format!("dcram certificate {subset:?} sums to {sum}, not {s}")));
        }
        outcome.subsets.push(subset);
    }
    Ok(DcramRun { outcome, trace })
}

fn tail(tag: &[usize], n: usize) -> std::ops::Range<usize> {
    tag.last().map_or(0, |&m| m + 1)..n
}

fn tail_len(tag: &[usize], n: usize) -> usize {
    tail(tag, n).len()
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Memprocessors in the working block at iteration `k`: `C(n-1, k-1) (n + 2 - k)`.
pub fn memprocessor_count(n: u64, k: u64) -> Result<u128> {
    if k < 1 || n < 2 || k > n - 1 {
        return Err(Error::OutOfRange(format!("iteration {k} not in [1, {}]", n.saturating_sub(1))));
    }
    Ok(binomial(n - 1, k - 1) * (n + 2 - k) as u128)
}

/// Largest working block over all iterations.
pub fn peak_memprocessor_count(n: u64) -> Result<u128> {
    (1..n).map(|k| memprocessor_count(n, k)).try_fold(0, |m, c| c.map(|c| m.max(c)))
}

/// Stirling estimate of the peak block size, `(n / 2 pi)^{1/2} 2^{n-1}`.
pub fn peak_memprocessor_estimate(n: u64) -> Result<f64> {
    if n < 2 {
        return Err(Error::OutOfRange(format!("n = {n} < 2")));
    }
    Ok((n as f64 / (2.0 * std::f64::consts::PI)).sqrt() * (2.0f64).powi(n as i32 - 1))
}

/// Node bound of a solution tree with branching `M_1, M_2, ..`: `sum_k prod_{i<=k} M_i`.
pub fn solution_tree_bound(branching: &[u64]) -> u128 {
    let mut product = 1u128;
    let mut total = 0u128;
    for &m in branching {
        product = product.saturating_mul(m as u128);
        total = total.saturating_add(product);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[i64]) -> IntegerSet {
        IntegerSet::new(v.to_vec()).unwrap()
    }

    #[test]
    fn chi_examples() {
        let g = DcramGrid::from_rows(&[vec![Some(3), Some(5), Some(7)]]);
        let out = op_chi(&g, &[0], 0, &[1, 2]).unwrap();
        assert_eq!(out.row(0), &[Some(3), Some(8), Some(10)]);
        assert_eq!(op_chi(&g, &[0], 0, &[]).unwrap(), g);

        let g = DcramGrid::from_rows(&[
            vec![Some(1), Some(1)],
            vec![Some(2), Some(2)],
            vec![Some(3), Some(3)],
        ]);
        let out = op_chi(&g, &[0, 2], 0, &[1]).unwrap();
        assert_eq!(out.row(1), g.row(1));
        assert_eq!(out.row(2), &[Some(3), Some(6)]);
    }

    #[test]
    fn chi_rejects_blank() {
        let g = DcramGrid::from_rows(&[vec![Some(3), None]]);
        assert!(matches!(op_chi(&g, &[0], 0, &[1]), Err(Error::ComputeOnBlank { row: 0, col: 1 })));
    }

    #[test]
    fn mu_examples() {
        let g = DcramGrid::from_rows(&[vec![Some(4), None]]);
        let moved = op_mu(&g, 0, 1, &[0]).unwrap();
        assert_eq!(moved.row(0), &[None, Some(4)]);
        assert_eq!(op_mu(&g, 0, 1, &[]).unwrap(), g);
        assert_eq!(op_mu(&moved, 1, 0, &[0]).unwrap(), g);
        assert!(matches!(op_mu(&moved, 0, 1, &[0]), Err(Error::ComputeOnBlank { .. })));
    }

    #[test]
    fn rho_examples() {
        let mut rows = vec![vec![Some(7), None]];
        rows.extend((0..4).map(|_| vec![None, None]));
        let g = DcramGrid::from_rows(&rows);
        let out = op_rho(&g, 0, 0, 1, &[1, 2, 3, 4]).unwrap();
        for r in 1..5 {
            assert_eq!(out.get(r, 1).unwrap(), Some(7));
        }
        assert_eq!(out.get(0, 0).unwrap(), Some(7));
        assert_eq!(op_rho(&g, 0, 0, 0, &[0]).unwrap(), g);
        assert_eq!(op_rho(&g, 0, 0, 1, &[]).unwrap(), g);
    }

    #[test]
    fn ssp_examples() {
        let out = dcram_ssp(&set(&[1, 2, 3]), 3).unwrap();
        assert!(out.found);
        assert!(out.iteration.unwrap() <= 2);
        for subset in &out.subsets {
            assert_eq!(subset.iter().sum::<i64>(), 3);
        }

        assert!(!dcram_ssp(&set(&[1, 2]), 5).unwrap().found);
        assert!(dcram_ssp(&set(&[1]), 1).is_err());
    }

    #[test]
    fn all_matches_at_first_matching_iteration() {
        // {1,2} is certified at iteration 1, {3} at iteration 2
        let out = run_schedule(&set(&[1, 2, 3]), 3, DcramOptions { stop_early: false, ..Default::default() })
            .unwrap()
            .outcome;
        let mut subsets = out.subsets.clone();
        subsets.sort();
        assert_eq!(subsets, vec![vec![1, 2], vec![3]]);
    }

    #[test]
    fn full_set_checked_before_iterating() {
        let out = dcram_ssp(&set(&[4, -1, 6]), 9).unwrap();
        assert_eq!(out.iteration, Some(0));
        assert_eq!(out.subsets, vec![vec![4, -1, 6]]);
    }

    #[test]
    fn five_element_schedule_symbols() {
        let a = [3i64, -8, 5, 11, -2];
        let g = set(&a);
        let run = run_schedule(&g, i64::MAX, DcramOptions { record_trace: true, ..Default::default() }).unwrap();
        let s0 = -a.iter().sum::<i64>();
        let mut first: Vec<i64> = run.trace[0].live.iter().map(|(_, v)| *v).collect();
        first.sort();
        let mut want: Vec<i64> = a.iter().map(|x| s0 + x).collect();
        want.sort();
        assert_eq!(first, want);

        let mut second: Vec<i64> = run.trace[1].live.iter().map(|(_, v)| *v).collect();
        second.sort();
        let mut want = Vec::new();
        for j in 0..5 {
            for k in j + 1..5 {
                want.push(s0 + a[j] + a[k]);
            }
        }
        want.sort();
        assert_eq!(second, want);
        assert_eq!(run.trace.len(), 4);
        assert_eq!(run.trace[0].allocated_cells, 6);
        assert_eq!(run.trace[1].allocated_cells, 20);
    }

    #[test]
    fn refuses_large_n_by_default() {
        let g = set(&(1..=27).collect::<Vec<_>>());
        assert!(matches!(dcram_ssp(&g, 5), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn counts_and_bounds() {
        assert_eq!(memprocessor_count(5, 1).unwrap(), 6);
        assert_eq!(memprocessor_count(5, 2).unwrap(), 20);
        assert_eq!(memprocessor_count(2, 1).unwrap(), 3);
        assert!(memprocessor_count(5, 0).is_err());
        assert!(memprocessor_count(5, 5).is_err());

        assert!((peak_memprocessor_estimate(8).unwrap() - 144.43).abs() < 0.01);
        assert!((peak_memprocessor_estimate(2).unwrap() - 1.128).abs() < 1e-3);
        let peak = peak_memprocessor_count(16).unwrap() as f64;
        let est = peak_memprocessor_estimate(16).unwrap();
        assert!(peak / est < 2.0 && est / peak < 2.0);

        assert_eq!(solution_tree_bound(&[2, 2, 2]), 14);
        assert_eq!(solution_tree_bound(&[1, 1, 1]), 3);
        assert_eq!(solution_tree_bound(&[3, 2]), 9);
    }

    #[test]
    fn trace_csv_header() {
        let run = run_schedule(&set(&[1, 2]), 100, DcramOptions { record_trace: true, ..Default::default() }).unwrap();
        let csv = run.trace_csv();
        assert!(csv.starts_with("iteration,row,column,value\n"));
        assert_eq!(csv.lines().count(), 1 + 3);
    }
}
