//! Fast exact counting by a layered transfer recursion over rows.
//!
//! Patterns with the same current row and the same partial sum-constraint
//! accumulators are interchangeable for everything that follows, so we only
//! keep one weighted state per (row, accumulators) class instead of walking
//! every pattern like the backtracking oracle does.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::pattern::{remainder_bounds, row_intervals, sum_constraints, SumConstraint};
use crate::types::{Error, FamilySpec, Result};

/// Default cap on live DP states per layer.
pub const DEFAULT_STATE_BUDGET: usize = 10_000_000;

type State = (Vec<i64>, Vec<i64>); // (current row, constraint accumulators)

/// Accumulator update for finishing row `j`. Returns `None` when a constraint
/// is violated (either settled wrong at its last row, or provably unreachable).
fn advance(
    constraints: &[SumConstraint],
    bounds: &crate::pattern::RemainderBounds,
    partials: &[i64],
    j: usize,
    row_sum: i64,
    n: i64,
) -> Option<Vec<i64>> {
    let mut out = partials.to_vec();
    for (ci, c) in constraints.iter().enumerate() {
        if j >= c.first_row && j <= c.last_row {
            out[ci] += c.row_coeffs[j] * row_sum;
        }
        let target = c.dilation_coeff * n;
        if j == c.last_row {
            if out[ci] != target {
                return None;
            }
            // settled: reset so the key stays normalized
            out[ci] = 0;
        } else if j < c.last_row {
            let lo = out[ci] + bounds.min_rem[ci][j];
            let hi = out[ci] + bounds.max_rem[ci][j];
            if target < lo || target > hi {
                return None;
            }
        }
    }
    Some(out)
}

/// Count family members at dilation `n` exactly, via the layered recursion.
pub fn count_dp(spec: &FamilySpec, n: i64, strict: bool, state_budget: usize) -> Result<BigInt> {
    if n < 0 {
        return Err(Error::Input(format!("dilation must be non-negative, got {n}")));
    }
    let (lo, hi) = if strict { (1, n - 1) } else { (0, n) };
    if lo > hi {
        return Ok(BigInt::zero());
    }
    let constraints = sum_constraints(spec);
    let bounds = remainder_bounds(spec, &constraints, lo, hi);
    let zeros = vec![0i64; constraints.len()];

    let mut layer: HashMap<State, BigInt> = HashMap::new();
    for v in lo..=hi {
        if let Some(p) = advance(&constraints, &bounds, &zeros, 1, v, n) {
            *layer.entry((vec![v], p)).or_default() += 1;
        }
    }

    for j in 2..=spec.row_count() {
        let mut next: HashMap<State, BigInt> = HashMap::new();
        for ((prev, partials), weight) in &layer {
            let iv = row_intervals(spec, j, prev, lo, hi, strict);
            let mut row = Vec::with_capacity(iv.len());
            push_rows(&iv, &mut row, &mut |r: &[i64]| {
                let sum: i64 = r.iter().sum();
                if let Some(p) = advance(&constraints, &bounds, partials, j, sum, n) {
                    *next.entry((r.to_vec(), p)).or_default() += weight;
                }
            });
            if next.len() > state_budget {
                return Err(Error::StateBudget { states: next.len(), budget: state_budget });
            }
        }
        layer = next;
    }
    Ok(layer.into_values().sum())
}

/// Enumerate the cartesian product of per-entry intervals.
fn push_rows(iv: &[(i64, i64)], row: &mut Vec<i64>, visit: &mut impl FnMut(&[i64])) {
    let idx = row.len();
    if idx == iv.len() {
        visit(row);
        return;
    }
    let (a, b) = iv[idx];
    let mut v = a;
    while v <= b {
        row.push(v);
        push_rows(iv, row, visit);
        row.pop();
        v += 1;
    }
}

/// Counts for dilations 0..=n_max.
pub fn count_series(
    spec: &FamilySpec,
    n_max: i64,
    strict: bool,
    state_budget: usize,
) -> Result<Vec<BigInt>> {
    (0..=n_max).map(|n| count_dp(spec, n, strict, state_budget)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::{count_naive, DEFAULT_NODE_BUDGET};

    #[test]
    fn matches_frozen_count_table() {
        let spec = FamilySpec::unitary(2, 1);
        let got = count_series(&spec, 5, false, DEFAULT_STATE_BUDGET).unwrap();
        let want: Vec<BigInt> = [1, 4, 10, 20, 35, 56].map(BigInt::from).to_vec();
        assert_eq!(got, want);
    }

    #[test]
    fn matches_small_examples() {
        let b = DEFAULT_STATE_BUDGET;
        assert_eq!(count_dp(&FamilySpec::symplectic(1, 1), 1, false, b).unwrap(), 3.into());
        assert_eq!(count_dp(&FamilySpec::unitary(3, 1), 1, false, b).unwrap(), 8.into());
        assert_eq!(count_dp(&FamilySpec::symplectic(2, 1), 1, false, b).unwrap(), 10.into());
        assert_eq!(count_dp(&FamilySpec::unitary(2, 1), 4, true, b).unwrap(), 1.into());
    }

    #[test]
    fn agrees_with_backtracking_oracle() {
        for spec in [
            FamilySpec::unitary(1, 2),
            FamilySpec::unitary(2, 1),
            FamilySpec::symplectic(1, 1),
            FamilySpec::symplectic(1, 2),
            FamilySpec::symplectic(2, 1),
        ] {
            for n in 0..=5 {
                for strict in [false, true] {
                    let naive = count_naive(&spec, n, strict, DEFAULT_NODE_BUDGET).unwrap();
                    let dp = count_dp(&spec, n, strict, DEFAULT_STATE_BUDGET).unwrap();
                    assert_eq!(naive, dp, "{spec} N={n} strict={strict}");
                }
            }
        }
    }

    #[test]
    fn state_budget_is_enforced() {
        let spec = FamilySpec::unitary(2, 2);
        assert!(matches!(
            count_dp(&spec, 8, false, 10),
            Err(Error::StateBudget { .. })
        ));
    }

    #[test]
    fn strict_below_threshold_is_zero() {
        let spec = FamilySpec::symplectic(2, 1);
        for n in 0..=4 {
            assert_eq!(count_dp(&spec, n, true, DEFAULT_STATE_BUDGET).unwrap(), 0.into());
        }
    }
}
