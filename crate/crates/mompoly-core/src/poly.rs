//! Dense univariate polynomials over the rationals, plus quasi-polynomials
//! that dispatch on a residue class. All arithmetic is exact.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::types::{Error, Result};

/// Polynomial with rational coefficients, stored dense in ascending order of
/// degree with no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPoly {
    coeffs: Vec<BigRational>,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl RationalPoly {
    pub fn zero() -> Self {
        RationalPoly { coeffs: Vec::new() }
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RationalPoly { coeffs }
    }

    pub fn constant(c: BigRational) -> Self {
        RationalPoly::from_coeffs(vec![c])
    }

    /// The monic linear polynomial z + a.
    pub fn linear(a: BigRational) -> Self {
        RationalPoly::from_coeffs(vec![a, BigRational::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports None.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of z^i (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Ascending coefficients, without trailing zeros.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficients as "numer/denom" strings, constant term first.
    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| format!("{}/{}", c.numer(), c.denom())).collect()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_int(&self, x: i64) -> BigRational {
        self.eval(&rat(x))
    }

    pub fn add(&self, other: &RationalPoly) -> RationalPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) + other.coeff(i)).collect();
        RationalPoly::from_coeffs(coeffs)
    }

    pub fn sub(&self, other: &RationalPoly) -> RationalPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) - other.coeff(i)).collect();
        RationalPoly::from_coeffs(coeffs)
    }

    pub fn mul(&self, other: &RationalPoly) -> RationalPoly {
        if self.is_zero() || other.is_zero() {
            return RationalPoly::zero();
        }
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        RationalPoly::from_coeffs(coeffs)
    }

    pub fn scale(&self, c: &BigRational) -> RationalPoly {
        RationalPoly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// P(z + c), by Horner-style synthetic shifting.
    pub fn taylor_shift(&self, c: &BigRational) -> RationalPoly {
        let mut out = RationalPoly::zero();
        let shift = RationalPoly::linear(c.clone());
        for a in self.coeffs.iter().rev() {
            out = out.mul(&shift).add(&RationalPoly::constant(a.clone()));
        }
        out
    }

    /// P(-z).
    pub fn reflect(&self) -> RationalPoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
            .collect();
        RationalPoly::from_coeffs(coeffs)
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| num_integer::lcm(acc, c.denom().abs()))
    }
}

impl fmt::Display for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            let a = c.abs();
            match i {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a}*")?;
                    }
                    if i == 1 {
                        f.write_str("z")?;
                    } else {
                        write!(f, "z^{i}")?;
                    }
                }
            }
            first = false;
        }
        Ok(())
    }
}

/// Exact interpolation through arbitrary distinct nodes, via Newton divided
/// differences.
pub fn interpolate_nodes(points: &[(BigRational, BigRational)]) -> Result<RationalPoly> {
    if points.is_empty() {
        return Err(Error::Input("interpolation needs at least one point".into()));
    }
    for (a, _) in points.iter().enumerate().flat_map(|(i, p)| {
        points[..i].iter().map(move |q| (&p.0 - &q.0, q))
    }) {
        if a.is_zero() {
            return Err(Error::Input("interpolation nodes must be distinct".into()));
        }
    }
    let n = points.len();
    // divided-difference table, in place
    let mut dd: Vec<BigRational> = points.iter().map(|(_, y)| y.clone()).collect();
    for level in 1..n {
        for i in (level..n).rev() {
            let num = &dd[i] - &dd[i - 1];
            let den = &points[i].0 - &points[i - level].0;
            dd[i] = num / den;
        }
    }
    // expand the Newton form
    let mut out = RationalPoly::zero();
    let mut basis = RationalPoly::constant(BigRational::one());
    for (i, c) in dd.iter().enumerate() {
        out = out.add(&basis.scale(c));
        basis = basis.mul(&RationalPoly::linear(-points[i].0.clone()));
    }
    Ok(out)
}

/// Interpolate the unique polynomial of degree < values.len() through
/// (0, values[0]), (1, values[1]), ...
pub fn interpolate(values: &[BigInt]) -> Result<RationalPoly> {
    let points: Vec<(BigRational, BigRational)> = values
        .iter()
        .enumerate()
        .map(|(i, v)| (rat(i as i64), BigRational::from_integer(v.clone())))
        .collect();
    interpolate_nodes(&points)
}

/// Piecewise polynomial dispatching on n mod period. Period 1 is an ordinary
/// polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiPoly {
    period: usize,
    components: Vec<RationalPoly>,
}

impl QuasiPoly {
    pub fn period(&self) -> usize {
        self.period
    }

    pub fn component(&self, residue: usize) -> &RationalPoly {
        &self.components[residue % self.period]
    }

    pub fn components(&self) -> &[RationalPoly] {
        &self.components
    }

    pub fn eval_int(&self, n: i64) -> BigRational {
        let r = n.rem_euclid(self.period as i64) as usize;
        self.components[r].eval_int(n)
    }

    /// True when all components are equal, i.e. the quasi-polynomial collapses
    /// to a single honest polynomial.
    pub fn collapses(&self) -> bool {
        self.components.windows(2).all(|w| w[0] == w[1])
    }
}

/// Fit a quasi-polynomial of the given period and component degree to
/// `values[n]` for n = 0, 1, ... Every value beyond the ones consumed for
/// interpolation must agree with the fit, otherwise the data is not
/// quasi-polynomial of that shape and an error is returned.
pub fn fit_quasi(values: &[BigInt], period: usize, degree: usize) -> Result<QuasiPoly> {
    if period == 0 {
        return Err(Error::Input("period must be >= 1".into()));
    }
    let need = period * (degree + 1);
    if values.len() < need {
        return Err(Error::Input(format!(
            "need at least {need} values for period {period} and degree {degree}, got {}",
            values.len()
        )));
    }
    let mut components = Vec::with_capacity(period);
    for r in 0..period {
        let points: Vec<(BigRational, BigRational)> = (0..=degree)
            .map(|t| {
                let n = r + t * period;
                (rat(n as i64), BigRational::from_integer(values[n].clone()))
            })
            .collect();
        components.push(interpolate_nodes(&points)?);
    }
    let fit = QuasiPoly { period, components };
    for (n, v) in values.iter().enumerate() {
        if fit.eval_int(n as i64) != BigRational::from_integer(v.clone()) {
            return Err(Error::Domain(format!(
                "values are not quasi-polynomial with period {period} and degree {degree}: \
                 mismatch at n={n}"
            )));
        }
    }
    Ok(fit)
}
