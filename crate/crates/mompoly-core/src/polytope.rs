//! H-representation of the pattern polytopes over the free cells, exact
//! membership tests, lattice-point counts as a cross-check on the pattern
//! engines, and verification of non-integral vertex witnesses by exact
//! rational linear algebra.
//!
//! The fixed cells are eliminated symbolically: each is an affine form in the
//! free cells (and the dilation N), obtained by solving the sum-constraint
//! equations, so the ambient space is exactly the free-cell space.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::pattern::sum_constraints;
use crate::types::{Error, FamilySpec, Group, Result};
use crate::verify::VerdictReport;

/// Default budget on DFS nodes for lattice sweeps.
pub const DEFAULT_POINT_BUDGET: u64 = 100_000_000;

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

/// One linear condition sum_m coeffs[m] * x_m + n_coeff * N >= 0 (closed
/// mode) or > 0 (interior mode) over the free-cell coordinates.
#[derive(Debug, Clone)]
pub struct Inequality {
    pub coeffs: Vec<BigRational>,
    pub n_coeff: BigRational,
    pub label: String,
}

impl Inequality {
    fn value(&self, point: &[BigRational], n: &BigRational) -> BigRational {
        let mut acc = &self.n_coeff * n;
        for (c, x) in self.coeffs.iter().zip(point) {
            acc += c * x;
        }
        acc
    }
}

/// Complete H-representation of one family's polytope, with the fixed cells
/// pre-substituted as affine forms.
#[derive(Debug, Clone)]
pub struct ConstraintSystem {
    spec: FamilySpec,
    /// Free cells, canonical order: ascending i, then descending j.
    vars: Vec<(usize, usize)>,
    /// For every cell, its value as [free coefficients.., N coefficient].
    cell_forms: Vec<((usize, usize), Vec<BigRational>)>,
    inequalities: Vec<Inequality>,
}

/// Solve the square rational system A X = B where each right-hand entry of B
/// is itself a vector (an affine form). Returns None when A is singular.
fn solve_square(
    mut a: Vec<Vec<BigRational>>,
    mut b: Vec<Vec<BigRational>>,
) -> Option<Vec<Vec<BigRational>>> {
    let n = a.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let p = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x /= &p;
        }
        for x in b[col].iter_mut() {
            *x /= &p;
        }
        let pivot_a = a[col].clone();
        let pivot_b = b[col].clone();
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for (x, p) in a[r].iter_mut().zip(&pivot_a) {
                    *x -= p * &f;
                }
                for (x, p) in b[r].iter_mut().zip(&pivot_b) {
                    *x -= p * &f;
                }
            }
        }
    }
    Some(b)
}

/// Row-reduce a rational matrix in place; returns (rank, pivot columns).
fn row_reduce(m: &mut [Vec<BigRational>]) -> (usize, Vec<usize>) {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, piv);
        let p = m[rank][col].clone();
        for x in m[rank].iter_mut() {
            *x /= &p;
        }
        let pivot_row = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x -= p * &f;
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    (rank, pivots)
}

/// A nonzero vector in the kernel of the row space, if the rank is deficient.
fn nullspace_vector(m: &[Vec<BigRational>], cols: usize) -> Option<Vec<BigRational>> {
    let mut reduced: Vec<Vec<BigRational>> = m.to_vec();
    let (rank, pivots) = row_reduce(&mut reduced);
    if rank == cols {
        return None;
    }
    let free_col = (0..cols).find(|c| !pivots.contains(c))?;
    let mut v = vec![BigRational::zero(); cols];
    v[free_col] = BigRational::one();
    for (r, &pc) in pivots.iter().enumerate() {
        v[pc] = -reduced[r][free_col].clone();
    }
    Some(v)
}

impl ConstraintSystem {
    pub fn spec(&self) -> &FamilySpec {
        &self.spec
    }

    pub fn vars(&self) -> &[(usize, usize)] {
        &self.vars
    }

    pub fn dimension(&self) -> usize {
        self.vars.len()
    }

    pub fn inequalities(&self) -> &[Inequality] {
        &self.inequalities
    }

    /// The affine form [free coefficients.., N coefficient] of a cell.
    pub fn cell_form(&self, i: usize, j: usize) -> Option<&[BigRational]> {
        self.cell_forms
            .iter()
            .find(|(cell, _)| *cell == (i, j))
            .map(|(_, f)| f.as_slice())
    }

    /// Membership of a rational point in N * V (closed) or its interior.
    pub fn member_dilated(
        &self,
        point: &[BigRational],
        n: &BigRational,
        interior: bool,
    ) -> Result<bool> {
        if point.len() != self.vars.len() {
            return Err(Error::Input(format!(
                "point has {} coordinates, expected {}",
                point.len(),
                self.vars.len()
            )));
        }
        Ok(self.inequalities.iter().all(|iq| {
            let v = iq.value(point, n);
            if interior {
                v.is_positive()
            } else {
                !v.is_negative()
            }
        }))
    }

    /// Membership in the unit polytope V.
    pub fn member(&self, point: &[BigRational], interior: bool) -> Result<bool> {
        self.member_dilated(point, &BigRational::one(), interior)
    }

    /// Indices of the inequalities that hold with equality at the point.
    pub fn active_tight_set(&self, point: &[BigRational], n: &BigRational) -> Vec<usize> {
        self.inequalities
            .iter()
            .enumerate()
            .filter(|(_, iq)| iq.value(point, n).is_zero())
            .map(|(idx, _)| idx)
            .collect()
    }

    /// Line-oriented export: cleared to integer coefficients, one inequality
    /// per line as "a_1 a_2 ... a_m >= b" with b on the right-hand side and N
    /// taken as 1 (the unit polytope).
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for iq in &self.inequalities {
            let mut scale = BigInt::one();
            for c in iq.coeffs.iter().chain(std::iter::once(&iq.n_coeff)) {
                scale = num_integer::lcm(scale, c.denom().abs());
            }
            let s = BigRational::from_integer(scale);
            let ints: Vec<String> =
                iq.coeffs.iter().map(|c| (c * &s).to_integer().to_string()).collect();
            let bound = -(&iq.n_coeff * &s).to_integer();
            out.push_str(&format!("{} >= {}  # {}\n", ints.join(" "), bound, iq.label));
        }
        out
    }
}

/// Build the H-representation for a family.
pub fn build_system(spec: &FamilySpec) -> Result<ConstraintSystem> {
    let vars = spec.free_index_set();
    let fixed = spec.fixed_index_set();
    let dim = vars.len();
    let var_index = |cell: (usize, usize)| vars.iter().position(|&c| c == cell);
    let fixed_index = |cell: (usize, usize)| fixed.iter().position(|&c| c == cell);

    // Solve the sum constraints for the fixed cells as affine forms in the
    // free cells and N.
    let constraints = sum_constraints(spec);
    if constraints.len() != fixed.len() {
        return Err(Error::Shape(format!(
            "{} constraints for {} fixed cells in {spec}",
            constraints.len(),
            fixed.len()
        )));
    }
    let mut a = vec![vec![BigRational::zero(); fixed.len()]; constraints.len()];
    let mut b = vec![vec![BigRational::zero(); dim + 1]; constraints.len()];
    for (ci, c) in constraints.iter().enumerate() {
        b[ci][dim] = rat(c.dilation_coeff);
        for j in c.first_row..=c.last_row {
            if c.row_coeffs[j] == 0 {
                continue;
            }
            let coeff = rat(c.row_coeffs[j]);
            for i in 1..=spec.row_length(j)? {
                if let Some(f) = fixed_index((i, j)) {
                    a[ci][f] += &coeff;
                } else {
                    let m = var_index((i, j)).expect("cell is free or fixed");
                    b[ci][m] -= &coeff;
                }
            }
        }
    }
    let fixed_forms = solve_square(a, b).ok_or_else(|| {
        Error::Shape(format!("singular fixed-cell system for {spec}"))
    })?;

    let mut cell_forms = Vec::with_capacity(spec.total_cells());
    for j in 1..=spec.row_count() {
        for i in 1..=spec.row_length(j)? {
            let form = if let Some(f) = fixed_index((i, j)) {
                fixed_forms[f].clone()
            } else {
                let mut form = vec![BigRational::zero(); dim + 1];
                form[var_index((i, j)).unwrap()] = BigRational::one();
                form
            };
            cell_forms.push(((i, j), form));
        }
    }
    let form_of = |i: usize, j: usize| -> &Vec<BigRational> {
        &cell_forms.iter().find(|(c, _)| *c == (i, j)).unwrap().1
    };

    let mut inequalities = Vec::new();
    let mut push = |form: Vec<BigRational>, label: String| {
        let n_coeff = form[dim].clone();
        inequalities.push(Inequality { coeffs: form[..dim].to_vec(), n_coeff, label });
    };
    let diff = |p: &[BigRational], q: &[BigRational]| -> Vec<BigRational> {
        p.iter().zip(q).map(|(x, y)| x - y).collect()
    };

    // box bounds 0 <= v <= N for every cell
    for (cell, form) in &cell_forms {
        push(form.clone(), format!("v[{},{}] >= 0", cell.0, cell.1));
        let mut ub: Vec<BigRational> = form.iter().map(|c| -c).collect();
        ub[dim] += BigRational::one();
        push(ub, format!("v[{},{}] <= N", cell.0, cell.1));
    }

    // interlacing between consecutive rows
    for j in 1..spec.row_count() {
        let (lo_row, up_row) = if j < spec.middle_row() { (j, j + 1) } else { (j + 1, j) };
        let m = spec.row_length(lo_row)?;
        let up_len = spec.row_length(up_row)?;
        for i in 1..=m {
            push(
                diff(form_of(i, up_row), form_of(i, lo_row)),
                format!("v[{i},{up_row}] >= v[{i},{lo_row}]"),
            );
            if i < m || up_len == m + 1 {
                push(
                    diff(form_of(i, lo_row), form_of(i + 1, up_row)),
                    format!("v[{i},{lo_row}] >= v[{},{up_row}]", i + 1),
                );
            }
        }
    }

    Ok(ConstraintSystem { spec: *spec, vars, cell_forms, inequalities })
}

/// Count integer points of N * V (closed) or its interior by a pruned DFS
/// over the free cells. A cross-check path for small instances only.
pub fn lattice_count_via_polytope(
    spec: &FamilySpec,
    n: i64,
    interior: bool,
    point_budget: u64,
) -> Result<BigInt> {
    if n < 0 {
        return Err(Error::Input(format!("dilation must be non-negative, got {n}")));
    }
    let system = build_system(spec)?;
    let dim = system.dimension();

    // integerize each inequality: coeffs scaled to BigInt, then to i128
    struct IntIneq {
        coeffs: Vec<i128>,
        base: i128, // n_coeff * N, scaled
    }
    let mut ineqs = Vec::with_capacity(system.inequalities().len());
    for iq in system.inequalities() {
        let mut scale = BigInt::one();
        for c in iq.coeffs.iter().chain(std::iter::once(&iq.n_coeff)) {
            scale = num_integer::lcm(scale, c.denom().abs());
        }
        let s = BigRational::from_integer(scale);
        let to_i = |c: &BigRational| -> i128 {
            let v = (c * &s).to_integer();
            i128::try_from(v).expect("small coefficients")
        };
        let coeffs: Vec<i128> = iq.coeffs.iter().map(to_i).collect();
        let base = to_i(&iq.n_coeff) * i128::from(n);
        ineqs.push(IntIneq { coeffs, base });
    }

    // max achievable remaining contribution per inequality per depth
    let mut max_rem = vec![vec![0i128; dim + 1]; ineqs.len()];
    for (ii, iq) in ineqs.iter().enumerate() {
        for d in (0..dim).rev() {
            let c = iq.coeffs[d];
            max_rem[ii][d] = max_rem[ii][d + 1] + (c * i128::from(n)).max(0);
        }
    }

    struct Dfs<'a> {
        ineqs: &'a [IntIneq],
        max_rem: &'a [Vec<i128>],
        dim: usize,
        n: i64,
        interior: bool,
        nodes: u64,
        budget: u64,
        count: BigInt,
    }
    impl Dfs<'_> {
        fn go(&mut self, depth: usize, partial: &[i128]) -> Result<()> {
            if depth == self.dim {
                self.count += 1;
                return Ok(());
            }
            for x in 0..=i128::from(self.n) {
                self.nodes += 1;
                if self.nodes > self.budget {
                    return Err(Error::PointBudget { budget: self.budget });
                }
                let mut next = Vec::with_capacity(partial.len());
                let mut ok = true;
                for (ii, iq) in self.ineqs.iter().enumerate() {
                    let p = partial[ii] + iq.coeffs[depth] * x;
                    let reach = p + self.max_rem[ii][depth + 1];
                    if reach < 0 || (self.interior && depth + 1 == self.dim && p <= 0) {
                        ok = false;
                        break;
                    }
                    // interior points need strict slack once fully assigned;
                    // partial slack of 0 may still grow, so only prune weakly
                    next.push(p);
                }
                if ok {
                    self.go(depth + 1, &next)?;
                }
            }
            Ok(())
        }
    }
    let init: Vec<i128> = ineqs.iter().map(|iq| iq.base).collect();
    let mut dfs = Dfs {
        ineqs: &ineqs,
        max_rem: &max_rem,
        dim,
        n,
        interior,
        nodes: 0,
        budget: point_budget,
        count: BigInt::zero(),
    };
    dfs.go(0, &init)?;
    Ok(dfs.count)
}

/// A claimed non-integral vertex: a rational point of the polytope dilated by
/// `dilation`, together with the indices of the inequalities tight at it.
#[derive(Debug, Clone)]
pub struct VertexWitness {
    pub point: Vec<BigRational>,
    pub dilation: BigRational,
    pub tight: Vec<usize>,
}

fn witness_from_cells(
    system: &ConstraintSystem,
    dilation: BigRational,
    value: impl Fn(usize, usize) -> BigRational,
) -> VertexWitness {
    let point: Vec<BigRational> =
        system.vars().iter().map(|&(i, j)| value(i, j)).collect();
    let tight = system.active_tight_set(&point, &dilation);
    VertexWitness { point, dilation, tight }
}

/// The all-halves vertex of the unitary polytope, k >= 2.
pub fn unitary_half_witness(spec: &FamilySpec) -> Result<VertexWitness> {
    if spec.group != Group::Unitary || spec.k < 2 {
        return Err(Error::Input("all-halves witness needs a unitary family with k >= 2".into()));
    }
    let system = build_system(spec)?;
    Ok(witness_from_cells(&system, BigRational::one(), |_, _| half()))
}

/// The symplectic half-witness, k >= 2: first coordinate 1/2 on the two
/// outermost rows, 1 on every other row, and 0 in all later columns.
pub fn symplectic_half_witness(spec: &FamilySpec) -> Result<VertexWitness> {
    if spec.group != Group::Symplectic || spec.k < 2 {
        return Err(Error::Input("half witness needs a symplectic family with k >= 2".into()));
    }
    let system = build_system(spec)?;
    let rc = spec.row_count();
    Ok(witness_from_cells(&system, BigRational::one(), |i, j| {
        if i > 1 {
            BigRational::zero()
        } else if j == 1 || j == rc {
            half()
        } else {
            BigRational::one()
        }
    }))
}

/// Smallest t in q..=2q that does not divide 4q^2, if any. (There is none for
/// q = 1; the dilated construction needs q >= 2.)
pub fn find_nondividing_t(q: u32) -> Option<i64> {
    let q = i64::from(q);
    (q..=2 * q).find(|t| (4 * q * q) % t != 0)
}

/// The dilated witness for the unitary (k=2, q) polytope scaled by 4q: on row
/// 2q±m the first t-m entries are 4q^2/t and the rest 0. Non-integral exactly
/// when t does not divide 4q^2.
pub fn dilated_unitary_witness(q: u32, t: i64) -> Result<(FamilySpec, VertexWitness)> {
    let spec = FamilySpec::unitary(2, q);
    let q = i64::from(q);
    if t < q || t > 2 * q {
        return Err(Error::Input(format!("t = {t} outside q..=2q = {q}..={}", 2 * q)));
    }
    let system = build_system(&spec)?;
    let value = BigRational::new(BigInt::from(4 * q * q), BigInt::from(t));
    let witness = witness_from_cells(&system, rat(4 * q), |i, j| {
        let m = (2 * q - j as i64).abs();
        if (i as i64) <= t - m {
            value.clone()
        } else {
            BigRational::zero()
        }
    });
    Ok((spec, witness))
}

/// Verify a vertex witness: (a) it satisfies every inequality of the dilated
/// polytope, (b) its tight inequalities pin it down uniquely (full rank over
/// the free-cell space), and (c) at least one coordinate is non-integral.
pub fn verify_vertex_witness(spec: &FamilySpec, witness: &VertexWitness) -> Result<VerdictReport> {
    let mut report = VerdictReport::new("non_integral_vertex", spec);
    let system = build_system(spec)?;
    report.note("dilation", &witness.dilation);
    if witness.point.len() != system.dimension() {
        report.fail("shape", format!("{} coordinates, expected {}", witness.point.len(), system.dimension()));
        return Ok(report);
    }
    if !system.member_dilated(&witness.point, &witness.dilation, false)? {
        report.fail("membership", "point violates a closed inequality");
    }
    let active = system.active_tight_set(&witness.point, &witness.dilation);
    report.note("tight_count", active.len());
    for &idx in &witness.tight {
        if !active.contains(&idx) {
            report.fail("tight_set", format!("claimed tight inequality {idx} is slack"));
        }
    }
    let rows: Vec<Vec<BigRational>> = active
        .iter()
        .map(|&idx| system.inequalities()[idx].coeffs.clone())
        .collect();
    let mut reduced = rows.clone();
    let (rank, _) = row_reduce(&mut reduced);
    report.note("tight_rank", rank);
    if rank < system.dimension() {
        let ns = nullspace_vector(&rows, system.dimension())
            .map(|v| format!("{v:?}"))
            .unwrap_or_else(|| "<none>".into());
        report.fail("uniqueness", format!("tight system rank {rank} < {}; nullspace direction {ns}", system.dimension()));
    }
    if witness.point.iter().all(|c| c.is_integer()) {
        report.fail("integrality", "every coordinate is an integer");
    }
    Ok(report)
}
