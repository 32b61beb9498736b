//! Canonical validation and exhaustive enumeration of the constrained pattern
//! families by backtracking. This is the oracle the fast counter is checked
//! against; it is deliberately simple and only meant for small instances.

use num_bigint::BigInt;

use crate::types::{Error, FamilySpec, Group, Pattern, Result, Signature};

/// Default node budget for backtracking enumeration.
pub const DEFAULT_NODE_BUDGET: u64 = 200_000_000;

/// One linear condition on row sums: sum_j row_coeffs[j] * |p^(j)| must equal
/// `dilation_coeff * N`.
///
/// Unitary families have k-1 single-row conditions (fixed row sums); the
/// symplectic conditions couple second differences of row sums across
/// q-blocks and are stored here in telescoped form, with the phantom rows 0
/// and 4kq dropped.
#[derive(Debug, Clone)]
pub struct SumConstraint {
    /// Coefficient per row, indexed by row number (entry 0 unused).
    pub row_coeffs: Vec<i64>,
    /// Right-hand side per unit of dilation.
    pub dilation_coeff: i64,
    pub first_row: usize,
    pub last_row: usize,
}

impl SumConstraint {
    fn from_coeffs(row_coeffs: Vec<i64>, dilation_coeff: i64) -> Self {
        let first_row = row_coeffs.iter().position(|&c| c != 0).unwrap();
        let last_row = row_coeffs.iter().rposition(|&c| c != 0).unwrap();
        SumConstraint { row_coeffs, dilation_coeff, first_row, last_row }
    }
}

/// The family's sum constraints: k-1 of them for U, k for SP.
pub fn sum_constraints(spec: &FamilySpec) -> Vec<SumConstraint> {
    let k = spec.k as usize;
    let q = spec.q as usize;
    let kq = spec.kq();
    let rc = spec.row_count();
    match spec.group {
        Group::Unitary => (1..k)
            .map(|l| {
                let mut coeffs = vec![0i64; rc + 1];
                coeffs[2 * q * l] = 1;
                let len = kq as i64 - (kq as i64 - 2 * (q * l) as i64).abs();
                // min(2ql, 2(k-l)q) is even, so the target is an integer
                assert_eq!(len % 2, 0);
                SumConstraint::from_coeffs(coeffs, len / 2)
            })
            .collect(),
        Group::Symplectic => {
            let add = |coeffs: &mut Vec<i64>, row: i64, c: i64| {
                // rows 0 and 4kq are phantoms with sum zero
                if row >= 1 && row <= rc as i64 {
                    coeffs[row as usize] += c;
                }
            };
            let low_term = |coeffs: &mut Vec<i64>, j: i64, sign: i64| {
                add(coeffs, 2 * j, sign);
                add(coeffs, 2 * j - 1, -2 * sign);
                add(coeffs, 2 * j - 2, sign);
            };
            let high_term = |coeffs: &mut Vec<i64>, j: i64, sign: i64| {
                let top = 4 * kq as i64;
                add(coeffs, top - 2 * j, sign);
                add(coeffs, top - 2 * j + 1, -2 * sign);
                add(coeffs, top - 2 * j + 2, sign);
            };
            let q = q as i64;
            let mut out = Vec::with_capacity(k);
            for i in 1..=(k as i64) / 2 {
                let mut low = vec![0i64; rc + 1];
                let mut high = vec![0i64; rc + 1];
                for j in (2 * i - 2) * q + 1..=(2 * i - 1) * q {
                    low_term(&mut low, j, 1);
                    high_term(&mut high, j, 1);
                }
                for j in (2 * i - 1) * q + 1..=2 * i * q {
                    low_term(&mut low, j, -1);
                    high_term(&mut high, j, -1);
                }
                out.push(SumConstraint::from_coeffs(low, 0));
                out.push(SumConstraint::from_coeffs(high, 0));
            }
            if k % 2 == 1 {
                let mut odd = vec![0i64; rc + 1];
                for j in (k as i64 - 1) * q + 1..=k as i64 * q {
                    low_term(&mut odd, j, 1);
                    high_term(&mut odd, j, -1);
                }
                out.push(SumConstraint::from_coeffs(odd, 0));
            }
            out
        }
    }
}

/// Does `lower` interlace with `upper` (lower ≺ upper)?
///
/// Equal-length case: upper_1 >= lower_1 >= upper_2 >= ... >= upper_M >= lower_M.
/// Shorter-by-one case: upper_1 >= lower_1 >= ... >= lower_{M-1} >= upper_M.
/// The strict variant uses strict inequalities throughout.
pub fn interlaces(lower: &Signature, upper: &Signature, strict: bool) -> Result<bool> {
    let m = lower.len();
    let ok = |a: i64, b: i64| if strict { a > b } else { a >= b };
    if upper.len() == m {
        for i in 1..=m {
            if !ok(upper.entry(i), lower.entry(i)) {
                return Ok(false);
            }
            if i < m && !ok(lower.entry(i), upper.entry(i + 1)) {
                return Ok(false);
            }
        }
        Ok(true)
    } else if upper.len() == m + 1 {
        for i in 1..=m {
            if !ok(upper.entry(i), lower.entry(i)) || !ok(lower.entry(i), upper.entry(i + 1)) {
                return Ok(false);
            }
        }
        Ok(true)
    } else {
        Err(Error::Shape(format!(
            "incompatible signature lengths for interlacing: {} and {}",
            lower.len(),
            upper.len()
        )))
    }
}

/// For consecutive rows j and j+1, which one is the upper (longer) signature
/// of the interlacing relation. Rows ascend to the middle row and descend past it.
fn rows_as_lower_upper<'a>(
    spec: &FamilySpec,
    j: usize,
    row_j: &'a Signature,
    row_j1: &'a Signature,
) -> (&'a Signature, &'a Signature) {
    if j < spec.middle_row() {
        (row_j, row_j1)
    } else {
        (row_j1, row_j)
    }
}

/// Full membership check: bounds, both interlacing chains, sum constraints.
pub fn is_member(p: &Pattern, strict: bool) -> bool {
    let spec = p.spec();
    let n = p.dilation();
    let (lo, hi) = if strict { (1, n - 1) } else { (0, n) };
    for row in p.rows() {
        if row.entry(1) > hi || row.entry(row.len()) < lo {
            return false;
        }
    }
    for j in 1..spec.row_count() {
        let (lower, upper) = rows_as_lower_upper(&spec, j, p.row(j), p.row(j + 1));
        match interlaces(lower, upper, strict) {
            Ok(true) => {}
            _ => return false,
        }
    }
    for c in sum_constraints(&spec) {
        let mut acc = 0i64;
        for j in c.first_row..=c.last_row {
            acc += c.row_coeffs[j] * p.row(j).total();
        }
        if acc != c.dilation_coeff * n {
            return false;
        }
    }
    true
}

/// Per-entry value intervals for row `j_next = j+1` given row j. Intervals are
/// independent of each other, so successors are a plain cartesian product.
pub(crate) fn row_intervals(
    spec: &FamilySpec,
    j_next: usize,
    prev: &[i64],
    lo: i64,
    hi: i64,
    strict: bool,
) -> Vec<(i64, i64)> {
    let next_len = spec.row_length(j_next).unwrap();
    let prev_len = prev.len();
    let s = i64::from(strict);
    let mut iv = Vec::with_capacity(next_len);
    if j_next <= spec.middle_row() {
        // ascending: prev ≺ next
        if next_len == prev_len + 1 {
            for i in 0..next_len {
                let upper = if i == 0 { hi } else { prev[i - 1] - s };
                let lower = if i == prev_len { lo } else { prev[i] + s };
                iv.push((lower, upper));
            }
        } else {
            debug_assert_eq!(next_len, prev_len);
            for i in 0..next_len {
                let upper = if i == 0 { hi } else { prev[i - 1] - s };
                iv.push((prev[i] + s, upper));
            }
        }
    } else {
        // descending: next ≺ prev
        if next_len + 1 == prev_len {
            for i in 0..next_len {
                iv.push((prev[i + 1] + s, prev[i] - s));
            }
        } else {
            debug_assert_eq!(next_len, prev_len);
            for i in 0..next_len {
                let lower = if i + 1 == prev_len { lo } else { prev[i + 1] + s };
                iv.push((lower, prev[i] - s));
            }
        }
    }
    iv
}

/// Feasibility windows for constraint pruning: for each constraint and each
/// row index j, the min/max total contribution still achievable from rows > j.
pub(crate) struct RemainderBounds {
    pub(crate) min_rem: Vec<Vec<i64>>,
    pub(crate) max_rem: Vec<Vec<i64>>,
}

pub(crate) fn remainder_bounds(
    spec: &FamilySpec,
    constraints: &[SumConstraint],
    lo: i64,
    hi: i64,
) -> RemainderBounds {
    let rc = spec.row_count();
    let mut min_rem = Vec::with_capacity(constraints.len());
    let mut max_rem = Vec::with_capacity(constraints.len());
    for c in constraints {
        let mut mins = vec![0i64; rc + 1];
        let mut maxs = vec![0i64; rc + 1];
        for j in (0..rc).rev() {
            let (mut mn, mut mx) = (mins[j + 1], maxs[j + 1]);
            let r = j + 1;
            if r >= c.first_row && r <= c.last_row {
                let len = spec.row_length(r).unwrap() as i64;
                let a = c.row_coeffs[r] * len * lo.max(0);
                let b = c.row_coeffs[r] * len * hi.max(0);
                mn += a.min(b);
                mx += a.max(b);
            }
            mins[j] = mn;
            maxs[j] = mx;
        }
        min_rem.push(mins);
        max_rem.push(maxs);
    }
    RemainderBounds { min_rem, max_rem }
}

struct Search<'a, F> {
    spec: FamilySpec,
    n: i64,
    lo: i64,
    hi: i64,
    strict: bool,
    constraints: &'a [SumConstraint],
    bounds: RemainderBounds,
    nodes: u64,
    budget: u64,
    rows: Vec<Vec<i64>>,
    visit: F,
}

impl<F: FnMut(&Pattern)> Search<'_, F> {
    fn run(&mut self) -> Result<()> {
        if self.lo > self.hi {
            return Ok(());
        }
        let partials = vec![0i64; self.constraints.len()];
        let mut first = Vec::new();
        let mut v = self.lo;
        while v <= self.hi {
            first.clear();
            first.push(v);
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::NodeBudget { budget: self.budget });
            }
            let row = std::mem::take(&mut first);
            self.finish_row(1, row, &partials)?;
            v += 1;
        }
        Ok(())
    }

    /// Row `j` has just been filled; apply constraint bookkeeping and recurse.
    fn finish_row(&mut self, j: usize, row: Vec<i64>, partials: &[i64]) -> Result<()> {
        let mut partials = partials.to_vec();
        let row_sum: i64 = row.iter().sum();
        for (ci, c) in self.constraints.iter().enumerate() {
            if j >= c.first_row && j <= c.last_row {
                partials[ci] += c.row_coeffs[j] * row_sum;
            }
            let target = c.dilation_coeff * self.n;
            if j == c.last_row {
                if partials[ci] != target {
                    return Ok(());
                }
            } else if j < c.last_row {
                let reach_lo = partials[ci] + self.bounds.min_rem[ci][j];
                let reach_hi = partials[ci] + self.bounds.max_rem[ci][j];
                if target < reach_lo || target > reach_hi {
                    return Ok(());
                }
            }
        }
        self.rows.push(row);
        let result = if j == self.spec.row_count() {
            let rows = self
                .rows
                .iter()
                .map(|r| Signature::new(r.clone()))
                .collect::<Result<Vec<_>>>()?;
            let p = Pattern::new(self.spec, self.n, rows)?;
            (self.visit)(&p);
            Ok(())
        } else {
            let prev = self.rows.last().unwrap().clone();
            let iv = row_intervals(&self.spec, j + 1, &prev, self.lo, self.hi, self.strict);
            self.fill_entries(j + 1, &iv, &mut Vec::with_capacity(iv.len()), &partials)
        };
        self.rows.pop();
        result
    }

    fn fill_entries(
        &mut self,
        j: usize,
        iv: &[(i64, i64)],
        row: &mut Vec<i64>,
        partials: &[i64],
    ) -> Result<()> {
        let idx = row.len();
        if idx == iv.len() {
            return self.finish_row(j, row.clone(), partials);
        }
        let (a, b) = iv[idx];
        let mut v = a;
        while v <= b {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::NodeBudget { budget: self.budget });
            }
            row.push(v);
            self.fill_entries(j, iv, row, partials)?;
            row.pop();
            v += 1;
        }
        Ok(())
    }
}

/// Visit every member of the family exactly once, in lexicographic row-major
/// order (rows bottom-up, entries from i=1, values ascending).
pub fn for_each_pattern<F: FnMut(&Pattern)>(
    spec: &FamilySpec,
    n: i64,
    strict: bool,
    node_budget: u64,
    visit: F,
) -> Result<()> {
    if n < 0 {
        return Err(Error::Input(format!("dilation must be non-negative, got {n}")));
    }
    let (lo, hi) = if strict { (1, n - 1) } else { (0, n) };
    let constraints = sum_constraints(spec);
    let bounds = remainder_bounds(spec, &constraints, lo, hi);
    let mut search = Search {
        spec: *spec,
        n,
        lo,
        hi,
        strict,
        constraints: &constraints,
        bounds,
        nodes: 0,
        budget: node_budget,
        rows: Vec::with_capacity(spec.row_count()),
        visit,
    };
    search.run()
}

/// Materialize the full enumeration. Use [`for_each_pattern`] when the
/// patterns themselves are not needed.
pub fn enumerate(spec: &FamilySpec, n: i64, strict: bool, node_budget: u64) -> Result<Vec<Pattern>> {
    let mut out = Vec::new();
    for_each_pattern(spec, n, strict, node_budget, |p| out.push(p.clone()))?;
    Ok(out)
}

/// Exhaustive count by backtracking; the oracle for [`crate::transfer::count_dp`].
pub fn count_naive(spec: &FamilySpec, n: i64, strict: bool, node_budget: u64) -> Result<BigInt> {
    let mut count = BigInt::from(0);
    for_each_pattern(spec, n, strict, node_budget, |_| count += 1)?;
    Ok(count)
}
