//! Ground-truth closed forms: the Keating–Snaith product for the k=1 unitary
//! family and the handful of counting polynomials whose factored expansions
//! are printed in the moments-of-moments literature.
//!
//! Goldens are stored factored exactly as printed and expanded on demand, so
//! there are no hand-transcribed expanded coefficients to get wrong.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::poly::RationalPoly;
use crate::types::{FamilySpec, Group};

/// A published closed form for one family's counting polynomial.
#[derive(Debug, Clone)]
pub struct GoldenPoly {
    pub spec: FamilySpec,
    pub poly: RationalPoly,
    pub source: &'static str,
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// prod (z + a) for a in `roots`.
fn linear_product(roots: &[i64]) -> RationalPoly {
    roots.iter().fold(RationalPoly::constant(BigRational::one()), |acc, &a| {
        acc.mul(&RationalPoly::linear(rat(a, 1)))
    })
}

fn int_poly(ascending: &[i64]) -> RationalPoly {
    RationalPoly::from_coeffs(ascending.iter().map(|&c| rat(c, 1)).collect())
}

/// The Keating–Snaith leading-order moment polynomial,
/// prod_{i=1..q} prod_{j=1..q} (1 + z/(i+j-1)), expanded exactly.
pub fn keating_snaith(q: u32) -> RationalPoly {
    let mut out = RationalPoly::constant(BigRational::one());
    for i in 1..=i64::from(q) {
        for j in 1..=i64::from(q) {
            // 1 + z/(i+j-1)
            let factor = RationalPoly::from_coeffs(vec![rat(1, 1), rat(1, i + j - 1)]);
            out = out.mul(&factor);
        }
    }
    out
}

/// The printed closed form for this family, when the literature displays one.
pub fn golden(spec: &FamilySpec) -> Option<GoldenPoly> {
    let (poly, source) = match (spec.group, spec.k, spec.q) {
        (Group::Unitary, 2, 1) => (
            linear_product(&[1, 2, 3]).scale(&rat(1, 6)),
            "printed closed form (z+1)(z+2)(z+3)/6",
        ),
        (Group::Unitary, 3, 1) => (
            linear_product(&[1, 2, 3, 4, 5])
                .mul(&int_poly(&[21, 6, 1]))
                .scale(&rat(1, 2520)),
            "printed closed form (z+1)..(z+5)(z^2+6z+21)/2520",
        ),
        (Group::Symplectic, 1, 1) => (
            linear_product(&[1, 2]).scale(&rat(1, 2)),
            "printed closed form (z+1)(z+2)/2",
        ),
        (Group::Symplectic, 1, 2) => (
            linear_product(&[1, 2, 3, 4])
                .mul(&int_poly(&[5, 2]))
                .mul(&int_poly(&[1512, 1650, 905, 230, 23]))
                .scale(&rat(1, 181440)),
            "printed closed form (z+1)..(z+4)(2z+5)(23z^4+230z^3+905z^2+1650z+1512)/181440",
        ),
        (Group::Symplectic, 2, 1) => (
            linear_product(&[1, 2, 3, 4])
                .mul(&int_poly(&[420, 260, 127, 30, 3]))
                .scale(&rat(1, 10080)),
            "printed closed form (z+1)..(z+4)(3z^4+30z^3+127z^2+260z+420)/10080",
        ),
        _ => return None,
    };
    Some(GoldenPoly { spec: *spec, poly, source })
}

/// All specs with a stored golden.
pub fn golden_specs() -> Vec<FamilySpec> {
    vec![
        FamilySpec::unitary(2, 1),
        FamilySpec::unitary(3, 1),
        FamilySpec::symplectic(1, 1),
        FamilySpec::symplectic(1, 2),
        FamilySpec::symplectic(2, 1),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keating_snaith_small() {
        assert_eq!(keating_snaith(1).coeff_strings(), vec!["1/1", "1/1"]);
        // q=2: i+j-1 runs over {1,2,2,3}, so (1+z)(1+z/2)^2(1+z/3)
        let p = keating_snaith(2);
        assert_eq!(p.degree(), Some(4));
        let byhand = RationalPoly::from_coeffs(vec![rat(1, 1), rat(1, 1)])
            .mul(&RationalPoly::from_coeffs(vec![rat(1, 1), rat(1, 2)]))
            .mul(&RationalPoly::from_coeffs(vec![rat(1, 1), rat(1, 2)]))
            .mul(&RationalPoly::from_coeffs(vec![rat(1, 1), rat(1, 3)]));
        assert_eq!(p, byhand);
    }

    #[test]
    fn golden_degrees_match_theorem_degrees() {
        for spec in golden_specs() {
            let g = golden(&spec).unwrap();
            assert_eq!(g.poly.degree(), Some(spec.dimension()), "{spec}");
        }
    }

    #[test]
    fn golden_u21_expansion() {
        let g = golden(&FamilySpec::unitary(2, 1)).unwrap();
        assert_eq!(g.poly.coeff_strings(), vec!["1/1", "11/6", "1/1", "1/6"]);
    }

    #[test]
    fn golden_sp11_expansion() {
        let g = golden(&FamilySpec::symplectic(1, 1)).unwrap();
        assert_eq!(g.poly.coeff_strings(), vec!["1/1", "3/2", "1/2"]);
    }

    #[test]
    fn unprinted_specs_have_no_golden() {
        assert!(golden(&FamilySpec::unitary(2, 2)).is_none());
        assert!(golden(&FamilySpec::symplectic(2, 2)).is_none());
        assert!(golden(&FamilySpec::unitary(2, 3)).is_none());
    }

    #[test]
    fn goldens_evaluate_to_one_at_zero() {
        // every family has exactly one pattern at dilation 0
        for spec in golden_specs() {
            let g = golden(&spec).unwrap();
            assert_eq!(g.poly.eval_int(0), rat(1, 1), "{spec}");
        }
    }
}
