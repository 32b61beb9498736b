//! Shared domain vocabulary: signatures, pattern shapes, family parameters.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("row index {j} out of range 1..={row_count}")]
    RowIndex { j: usize, row_count: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("pattern is not a member of the required family: {0}")]
    Domain(String),
    #[error("node budget of {budget} exceeded during enumeration")]
    NodeBudget { budget: u64 },
    #[error("state budget exceeded: {states} live states over limit {budget}")]
    StateBudget { states: usize, budget: usize },
    #[error("point budget of {budget} exceeded during lattice sweep")]
    PointBudget { budget: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;

/// Matrix group family the patterns are attached to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Group {
    Unitary,
    Symplectic,
}

impl Group {
    pub fn tag(self) -> &'static str {
        match self {
            Group::Unitary => "u",
            Group::Symplectic => "sp",
        }
    }

    pub fn from_tag(s: &str) -> Result<Self> {
        match s {
            "u" | "U" => Ok(Group::Unitary),
            "sp" | "SP" | "Sp" => Ok(Group::Symplectic),
            other => Err(Error::Input(format!("unknown group tag {other:?}"))),
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Family parameters (group, k, q) together with the derived pattern shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FamilySpec {
    pub group: Group,
    pub k: u32,
    pub q: u32,
}

impl FamilySpec {
    pub fn new(group: Group, k: u32, q: u32) -> Result<Self> {
        if k < 1 || q < 1 {
            return Err(Error::Input(format!("k and q must be >= 1, got k={k} q={q}")));
        }
        Ok(FamilySpec { group, k, q })
    }

    pub fn unitary(k: u32, q: u32) -> Self {
        FamilySpec::new(Group::Unitary, k, q).expect("positive parameters")
    }

    pub fn symplectic(k: u32, q: u32) -> Self {
        FamilySpec::new(Group::Symplectic, k, q).expect("positive parameters")
    }

    #[inline]
    pub fn kq(&self) -> usize {
        (self.k as usize) * (self.q as usize)
    }

    /// Number of rows: 2kq-1 (unitary) or 4kq-1 (symplectic).
    pub fn row_count(&self) -> usize {
        match self.group {
            Group::Unitary => 2 * self.kq() - 1,
            Group::Symplectic => 4 * self.kq() - 1,
        }
    }

    /// Index of the longest row; the interlacing chains ascend up to it from
    /// both ends.
    pub fn middle_row(&self) -> usize {
        match self.group {
            Group::Unitary => self.kq(),
            Group::Symplectic => 2 * self.kq(),
        }
    }

    /// Length of row `j` (1-based, bottom row is j=1).
    pub fn row_length(&self, j: usize) -> Result<usize> {
        let rc = self.row_count();
        if j < 1 || j > rc {
            return Err(Error::RowIndex { j, row_count: rc });
        }
        let kq = self.kq() as i64;
        let j = j as i64;
        let len = match self.group {
            Group::Unitary => kq - (kq - j).abs(),
            Group::Symplectic => kq - (2 * kq - j).abs() / 2,
        };
        Ok(len as usize)
    }

    /// Total number of cells across all rows: k^2 q^2 (U) or kq(2kq+1) (SP).
    pub fn total_cells(&self) -> usize {
        let kq = self.kq();
        match self.group {
            Group::Unitary => kq * kq,
            Group::Symplectic => kq * (2 * kq + 1),
        }
    }

    /// Number of free cells, which is also the dimension of the associated
    /// polytope and the degree of the counting polynomial:
    /// k^2 q^2 - (k-1) (U) or kq(2kq+1) - k (SP).
    pub fn dimension(&self) -> usize {
        match self.group {
            Group::Unitary => self.total_cells() - (self.k as usize - 1),
            Group::Symplectic => self.total_cells() - self.k as usize,
        }
    }

    /// The cells fixed by the sum constraints, as (i, j) pairs (i=1 is the
    /// largest entry of row j).
    pub fn fixed_index_set(&self) -> Vec<(usize, usize)> {
        let q = self.q as usize;
        let k = self.k as usize;
        let kq = self.kq();
        match self.group {
            Group::Unitary => (1..k).map(|l| (1, 2 * q * l)).collect(),
            Group::Symplectic => {
                let mut fixed = Vec::with_capacity(k);
                let half = k / 2;
                for m in 1..=half {
                    let n = 4 * m * q;
                    fixed.push((n / 2, n));
                }
                for m in (half + 1)..k {
                    let n = 4 * m * q;
                    fixed.push(((4 * kq - n) / 2, n));
                }
                fixed.push((1, 4 * kq - 1));
                fixed
            }
        }
    }

    /// The free cells, in the canonical variable order used by the polytope
    /// module: ascending column index i, then descending row index j.
    pub fn free_index_set(&self) -> Vec<(usize, usize)> {
        let fixed = self.fixed_index_set();
        let mut free = Vec::with_capacity(self.dimension());
        let max_len = self.row_length(self.middle_row()).unwrap();
        for i in 1..=max_len {
            for j in (1..=self.row_count()).rev() {
                if i <= self.row_length(j).unwrap() && !fixed.contains(&(i, j)) {
                    free.push((i, j));
                }
            }
        }
        free
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({};{})", self.group, self.k, self.q)
    }
}

/// Weakly decreasing tuple of non-negative integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature(Vec<i64>);

impl Signature {
    pub fn new(entries: Vec<i64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Shape("signature must have length >= 1".into()));
        }
        for w in entries.windows(2) {
            if w[0] < w[1] {
                return Err(Error::Shape(format!("entries not weakly decreasing: {entries:?}")));
            }
        }
        if *entries.last().unwrap() < 0 {
            return Err(Error::Shape(format!("entries must be non-negative: {entries:?}")));
        }
        Ok(Signature(entries))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    /// Entry by 1-based column index; i=1 is the largest entry.
    pub fn entry(&self, i: usize) -> i64 {
        self.0[i - 1]
    }

    /// Sum of entries.
    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (idx, e) in self.0.iter().enumerate() {
            if idx > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Triangular/diamond integer array for a family at dilation `n`.
///
/// Rows are numbered bottom-to-top, j = 1..=row_count; `entry(i, j)` follows
/// the convention that i=1 is the largest entry of row j.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pattern {
    spec: FamilySpec,
    n: i64,
    rows: Vec<Signature>,
}

impl Pattern {
    pub fn new(spec: FamilySpec, n: i64, rows: Vec<Signature>) -> Result<Self> {
        if n < 0 {
            return Err(Error::Input(format!("dilation must be non-negative, got {n}")));
        }
        if rows.len() != spec.row_count() {
            return Err(Error::Shape(format!(
                "expected {} rows for {spec}, got {}",
                spec.row_count(),
                rows.len()
            )));
        }
        for (idx, row) in rows.iter().enumerate() {
            let j = idx + 1;
            let want = spec.row_length(j)?;
            if row.len() != want {
                return Err(Error::Shape(format!(
                    "row {j} of {spec} must have length {want}, got {}",
                    row.len()
                )));
            }
            if row.entry(1) > n || row.entry(row.len()) < 0 {
                return Err(Error::Shape(format!(
                    "row {j} entries must lie in 0..={n}: {row}"
                )));
            }
        }
        Ok(Pattern { spec, n, rows })
    }

    /// Convenience constructor from raw row vectors (bottom row first).
    pub fn from_rows(spec: FamilySpec, n: i64, rows: Vec<Vec<i64>>) -> Result<Self> {
        let rows = rows.into_iter().map(Signature::new).collect::<Result<Vec<_>>>()?;
        Pattern::new(spec, n, rows)
    }

    pub fn spec(&self) -> FamilySpec {
        self.spec
    }

    pub fn dilation(&self) -> i64 {
        self.n
    }

    pub fn rows(&self) -> &[Signature] {
        &self.rows
    }

    pub fn row(&self, j: usize) -> &Signature {
        &self.rows[j - 1]
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.row(j).entry(i)
    }
}
