//! Verdict machinery: fit the counting polynomial of a family from exact
//! counts and machine-check its structural properties (polynomiality with the
//! predicted degree, reciprocity against strict counts, the integer-root
//! pattern, and the reflection symmetry of the coefficient sequence).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::poly::{interpolate, RationalPoly};
use crate::transfer::{count_dp, count_series};
use crate::types::{FamilySpec, Group, Result};

/// Machine-readable outcome of one structural check.
#[derive(Debug, Clone, Serialize)]
pub struct VerdictReport {
    pub claim: String,
    pub group: String,
    pub k: u32,
    pub q: u32,
    pub pass: bool,
    pub witnesses: Vec<Witness>,
    pub detail: BTreeMap<String, String>,
}

/// One piece of offending evidence for a failed check.
#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub label: String,
    pub value: String,
}

impl VerdictReport {
    pub fn new(claim: &str, spec: &FamilySpec) -> Self {
        VerdictReport {
            claim: claim.to_string(),
            group: spec.group.tag().to_string(),
            k: spec.k,
            q: spec.q,
            pass: true,
            witnesses: Vec::new(),
            detail: BTreeMap::new(),
        }
    }

    /// Record a failure with its evidence.
    pub fn fail(&mut self, label: impl Into<String>, value: impl ToString) {
        self.pass = false;
        self.witnesses.push(Witness { label: label.into(), value: value.to_string() });
    }

    pub fn note(&mut self, key: &str, value: impl ToString) {
        self.detail.insert(key.to_string(), value.to_string());
    }
}

/// Fit the family's counting polynomial on the minimal node set N = 0..D,
/// where D is the predicted degree. Extra nodes are for verification only and
/// never enter the fit.
pub fn fit_polynomial(spec: &FamilySpec, state_budget: usize) -> Result<RationalPoly> {
    let d = spec.dimension();
    let values = count_series(spec, d as i64, false, state_budget)?;
    interpolate(&values)
}

/// Serializable form of a fitted polynomial.
#[derive(Debug, Clone, Serialize)]
pub struct PolynomialReport {
    pub group: String,
    pub k: u32,
    pub q: u32,
    pub degree: usize,
    pub coeffs: Vec<String>,
}

pub fn polynomial_report(spec: &FamilySpec, poly: &RationalPoly) -> PolynomialReport {
    PolynomialReport {
        group: spec.group.tag().to_string(),
        k: spec.k,
        q: spec.q,
        degree: poly.degree().unwrap_or(0),
        coeffs: poly.coeff_strings(),
    }
}

/// Fit on 0..D and demand (a) the fitted degree is exactly the predicted D and
/// (b) the fit reproduces `extra` further counts at N = D+1, ..., D+extra.
pub fn verify_polynomiality(
    spec: &FamilySpec,
    extra: usize,
    state_budget: usize,
) -> Result<VerdictReport> {
    let mut report = VerdictReport::new("polynomiality", spec);
    let d = spec.dimension();
    let poly = fit_polynomial(spec, state_budget)?;
    report.note("predicted_degree", d);
    match poly.degree() {
        Some(got) if got == d => report.note("fitted_degree", got),
        got => report.fail("fitted_degree", format!("{got:?}, expected Some({d})")),
    }
    for n in (d + 1)..=(d + extra) {
        let count = count_dp(spec, n as i64, false, state_budget)?;
        let predicted = poly.eval_int(n as i64);
        if predicted != BigRational::from_integer(count.clone()) {
            report.fail(format!("N={n}"), format!("count {count} but fit gives {predicted}"));
        }
    }
    report.note("extra_nodes_checked", extra);
    Ok(report)
}

/// Ehrhart–Macdonald reciprocity: P(-N) must equal (-1)^d times the strict
/// count at dilation N, for every N in 1..=n_max. (The relation starts at
/// N = 1: at dilation 0 the closed count is 1 while the interior is empty.)
pub fn verify_reciprocity(
    spec: &FamilySpec,
    n_max: i64,
    state_budget: usize,
) -> Result<VerdictReport> {
    let mut report = VerdictReport::new("reciprocity", spec);
    let poly = fit_polynomial(spec, state_budget)?;
    let d = spec.dimension();
    let sign = if d.is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
    for n in 1..=n_max {
        let strict = count_dp(spec, n, true, state_budget)?;
        let lhs = poly.eval_int(-n);
        let rhs = BigRational::from_integer(&sign * &strict);
        if lhs != rhs {
            report.fail(format!("N={n}"), format!("P(-{n}) = {lhs} but (-1)^{d} * {strict} = {rhs}"));
        }
    }
    report.note("n_max", n_max);
    Ok(report)
}

fn expected_root_count(spec: &FamilySpec) -> usize {
    match spec.group {
        Group::Unitary => 2 * spec.kq() - 1,
        Group::Symplectic => 2 * spec.kq(),
    }
}

/// Root-pattern check on an already-fitted polynomial: zeros exactly at
/// -1..-R (R = 2kq-1 for U, 2kq for SP), no zero in a guard band just below,
/// and P(N) >= 1 on 0..=D (so no non-negative integer roots either; symmetry
/// maps the guard band onto that range).
pub fn integer_roots_verdict(spec: &FamilySpec, poly: &RationalPoly) -> VerdictReport {
    let mut report = VerdictReport::new("integer_roots", spec);
    let r = expected_root_count(spec) as i64;
    let band = 2 * spec.kq() as i64 + 2;
    report.note("expected_roots", format!("-1..=-{r}"));
    report.note("guard_band", format!("-{}..=-{}", r + 1, r + band));
    for m in 1..=r {
        if !poly.eval_int(-m).is_zero() {
            report.fail(format!("m={m}"), format!("P(-{m}) = {} != 0", poly.eval_int(-m)));
        }
    }
    for m in (r + 1)..=(r + band) {
        if poly.eval_int(-m).is_zero() {
            report.fail(format!("m={m}"), format!("unexpected integer root at -{m}"));
        }
    }
    for n in 0..=spec.dimension() as i64 {
        if poly.eval_int(n) < BigRational::one() {
            report.fail(format!("N={n}"), format!("P({n}) = {} < 1", poly.eval_int(n)));
        }
    }
    report
}

pub fn verify_integer_roots(spec: &FamilySpec, state_budget: usize) -> Result<VerdictReport> {
    let poly = fit_polynomial(spec, state_budget)?;
    Ok(integer_roots_verdict(spec, &poly))
}

/// Reflection-symmetry check: with center c = kq (U) or kq + 1/2 (SP) and
/// degree d, the recentred polynomial R(s) = P(s - c) must satisfy
/// R(s) = (-1)^d R(-s) identically.
pub fn symmetry_verdict(spec: &FamilySpec, poly: &RationalPoly) -> VerdictReport {
    let mut report = VerdictReport::new("symmetry", spec);
    let kq = BigRational::from_integer(BigInt::from(spec.kq() as i64));
    let c = match spec.group {
        Group::Unitary => kq,
        Group::Symplectic => kq + BigRational::new(BigInt::one(), BigInt::from(2)),
    };
    report.note("center", format!("-{c}"));
    let d = spec.dimension();
    let recentred = poly.taylor_shift(&(-c.clone()));
    let mut mirrored = recentred.reflect();
    if d % 2 == 1 {
        mirrored = mirrored.scale(&(-BigRational::one()));
    }
    let q = recentred.sub(&mirrored);
    if !q.is_zero() {
        report.fail("residual", format!("P(s-{c}) - (-1)^{d} P(-s-{c}) = {q}"));
    }
    report
}

pub fn verify_symmetry(spec: &FamilySpec, state_budget: usize) -> Result<VerdictReport> {
    let poly = fit_polynomial(spec, state_budget)?;
    Ok(symmetry_verdict(spec, &poly))
}

/// Sanity bound on a fitted polynomial: integer values on 0..D force every
/// coefficient denominator to divide D!.
pub fn denominators_divide_factorial(poly: &RationalPoly) -> bool {
    let d = match poly.degree() {
        Some(d) => d,
        None => return true,
    };
    let mut fact = BigInt::one();
    for i in 1..=d as u64 {
        fact *= i;
    }
    poly.coeffs().iter().all(|c| (&fact % c.denom().abs()).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference::golden;
    use crate::transfer::DEFAULT_STATE_BUDGET;

    const B: usize = DEFAULT_STATE_BUDGET;

    #[test]
    fn fit_matches_golden_u21() {
        let spec = FamilySpec::unitary(2, 1);
        let fit = fit_polynomial(&spec, B).unwrap();
        assert_eq!(fit, golden(&spec).unwrap().poly);
        assert_eq!(fit.coeff_strings(), vec!["1/1", "11/6", "1/1", "1/6"]);
    }

    #[test]
    fn fit_matches_golden_sp11() {
        let spec = FamilySpec::symplectic(1, 1);
        let fit = fit_polynomial(&spec, B).unwrap();
        assert_eq!(fit.coeff_strings(), vec!["1/1", "3/2", "1/2"]);
    }

    #[test]
    fn polynomiality_small_specs() {
        for (spec, extra) in [
            (FamilySpec::unitary(1, 1), 3),
            (FamilySpec::unitary(2, 1), 2),
            (FamilySpec::symplectic(1, 1), 2),
        ] {
            let v = verify_polynomiality(&spec, extra, B).unwrap();
            assert!(v.pass, "{spec}: {:?}", v.witnesses);
            assert_eq!(v.detail["fitted_degree"], spec.dimension().to_string());
        }
    }

    #[test]
    fn reciprocity_examples() {
        let v = verify_reciprocity(&FamilySpec::unitary(2, 1), 5, B).unwrap();
        assert!(v.pass, "{:?}", v.witnesses);
        let v = verify_reciprocity(&FamilySpec::symplectic(1, 1), 5, B).unwrap();
        assert!(v.pass, "{:?}", v.witnesses);
        // spot values behind those verdicts
        let p = fit_polynomial(&FamilySpec::unitary(2, 1), B).unwrap();
        assert_eq!(p.eval_int(-4), BigRational::from_integer(BigInt::from(-1)));
        let p = fit_polynomial(&FamilySpec::symplectic(1, 1), B).unwrap();
        assert_eq!(p.eval_int(-3), BigRational::from_integer(BigInt::one()));
    }

    #[test]
    fn integer_roots_on_goldens() {
        for spec in crate::reference::golden_specs() {
            let g = golden(&spec).unwrap();
            let v = integer_roots_verdict(&spec, &g.poly);
            assert!(v.pass, "{spec}: {:?}", v.witnesses);
        }
    }

    #[test]
    fn symmetry_on_goldens() {
        for spec in crate::reference::golden_specs() {
            let g = golden(&spec).unwrap();
            let v = symmetry_verdict(&spec, &g.poly);
            assert!(v.pass, "{spec}: {:?}", v.witnesses);
        }
    }

    #[test]
    fn symmetry_rejects_asymmetric_polynomial() {
        let spec = FamilySpec::unitary(1, 1);
        // z + 2 is not symmetric about -1
        let bad = RationalPoly::from_coeffs(vec![
            BigRational::from_integer(BigInt::from(2)),
            BigRational::one(),
        ]);
        let v = symmetry_verdict(&spec, &bad);
        assert!(!v.pass);
        assert!(!v.witnesses.is_empty());
    }

    #[test]
    fn denominator_bound_holds_for_fits() {
        for spec in [FamilySpec::unitary(2, 1), FamilySpec::symplectic(1, 1)] {
            let p = fit_polynomial(&spec, B).unwrap();
            assert!(denominators_divide_factorial(&p));
        }
    }
}
