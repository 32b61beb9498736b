//! The explicit offset bijections between lax patterns at dilation N and
//! strict patterns at dilation N + 2kq (unitary) or N + 2kq + 1 (symplectic).
//! Each cell is shifted by a closed-form amount depending only on its column i
//! and on the row's distance from the middle row.

use std::collections::HashSet;

use crate::pattern::{enumerate, is_member};
use crate::types::{Error, FamilySpec, Group, Pattern, Result, Signature};

/// How much the bijection raises the dilation.
pub fn dilation_shift(spec: &FamilySpec) -> i64 {
    let kq = spec.kq() as i64;
    match spec.group {
        Group::Unitary => 2 * kq,
        Group::Symplectic => 2 * kq + 1,
    }
}

/// Per-cell offset: 2kq+1 - |kq-j| - 2i (unitary), 2kq+2 - 2i - |2kq-j|
/// (symplectic). Over the valid cells the unitary offsets exhaust
/// {1,...,2kq-1} and the symplectic ones {1,...,2kq}.
pub fn offset(spec: &FamilySpec, i: usize, j: usize) -> i64 {
    let kq = spec.kq() as i64;
    let (i, j) = (i as i64, j as i64);
    match spec.group {
        Group::Unitary => 2 * kq + 1 - (kq - j).abs() - 2 * i,
        Group::Symplectic => 2 * kq + 2 - 2 * i - (2 * kq - j).abs(),
    }
}

fn shift_entries(p: &Pattern, sign: i64) -> Result<Vec<Vec<i64>>> {
    let spec = p.spec();
    (1..=spec.row_count())
        .map(|j| {
            Ok((1..=p.row(j).len())
                .map(|i| p.entry(i, j) + sign * offset(&spec, i, j))
                .collect())
        })
        .collect()
}

/// Map a lax member at dilation N to its strict image at dilation N + shift.
pub fn apply_bijection(p: &Pattern) -> Result<Pattern> {
    if !is_member(p, false) {
        return Err(Error::Domain(format!(
            "input is not a lax member of {} at N={}",
            p.spec(),
            p.dilation()
        )));
    }
    let rows = shift_entries(p, 1)?;
    let rows = rows.into_iter().map(Signature::new).collect::<Result<Vec<_>>>()?;
    let image = Pattern::new(p.spec(), p.dilation() + dilation_shift(&p.spec()), rows)?;
    if !is_member(&image, true) {
        return Err(Error::Domain(format!(
            "image fails strict membership in {} at N={}",
            image.spec(),
            image.dilation()
        )));
    }
    Ok(image)
}

/// Inverse map: a strict member at dilation N + shift back to its lax
/// preimage at dilation N.
pub fn apply_inverse(u: &Pattern) -> Result<Pattern> {
    if !is_member(u, true) {
        return Err(Error::Domain(format!(
            "input is not a strict member of {} at N={}",
            u.spec(),
            u.dilation()
        )));
    }
    let shift = dilation_shift(&u.spec());
    if u.dilation() < shift {
        return Err(Error::Domain(format!(
            "dilation {} is below the bijection shift {shift}",
            u.dilation()
        )));
    }
    let rows = shift_entries(u, -1)?;
    let rows = rows.into_iter().map(Signature::new).collect::<Result<Vec<_>>>()?;
    let preimage = Pattern::new(u.spec(), u.dilation() - shift, rows)?;
    if !is_member(&preimage, false) {
        return Err(Error::Domain(format!(
            "preimage fails lax membership in {} at N={}",
            preimage.spec(),
            preimage.dilation()
        )));
    }
    Ok(preimage)
}

/// Exhaustively check, at one dilation, that the map is a bijection from the
/// lax family at N onto the strict family at N + shift. Both sides are
/// enumerated independently so a strictness off-by-one on either side is
/// caught, not masked.
pub fn verify_bijectivity(
    spec: &FamilySpec,
    n: i64,
    node_budget: u64,
) -> Result<crate::verify::VerdictReport> {
    let mut report = crate::verify::VerdictReport::new("bijectivity", spec);
    let shift = dilation_shift(spec);
    report.note("n", n);
    report.note("shift", shift);

    let lax = enumerate(spec, n, false, node_budget)?;
    let strict = enumerate(spec, n + shift, true, node_budget)?;
    report.note("lax_count", lax.len());
    report.note("strict_count", strict.len());

    let mut images = HashSet::with_capacity(lax.len());
    for p in &lax {
        match apply_bijection(p) {
            Ok(image) => {
                match apply_inverse(&image) {
                    Ok(back) if back == *p => {}
                    _ => report.fail("round_trip", format!("{p:?} not recovered")),
                }
                if !images.insert(image) {
                    report.fail("injectivity", format!("duplicate image of {p:?}"));
                }
            }
            Err(e) => report.fail("forward", format!("{p:?}: {e}")),
        }
    }
    for u in &strict {
        if !images.contains(u) {
            report.fail("surjectivity", format!("{u:?} has no preimage"));
        }
        match apply_inverse(u).and_then(|back| apply_bijection(&back)) {
            Ok(again) if again == *u => {}
            _ => report.fail("round_trip_strict", format!("{u:?} not recovered")),
        }
    }
    if lax.len() != strict.len() {
        report.fail("cardinality", format!("{} lax vs {} strict", lax.len(), strict.len()));
    }
    Ok(report)
}
