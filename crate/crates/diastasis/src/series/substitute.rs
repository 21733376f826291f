//! Monomial (Laurent) changes of variables.
//!
//! A substitution sends each variable to a Laurent monomial in the same
//! variable set, and applies to holomorphic and antiholomorphic exponents
//! symmetrically, so Hermitian symmetry survives. If any term of the result
//! retains a negative exponent the substitution does not define a power
//! series and the offending monomial is reported.
//!
//! The result window is the larger of the input window and the degrees the
//! substitution actually produced: a monomial map permutes monomials, so the
//! image of a box window is no longer a box, and callers use this on series
//! whose relevant support is finite (exact polynomials or closed forms).

use crate::error::{Error, Result};
use crate::series::hermitian::HermitianSeries;
use crate::series::index::MultiIndex;
use crate::series::mixed::MixedSeries;

/// Apply `z_i -> prod_j z_j^(rules[i][j])` (and the conjugate map on the
/// antiholomorphic side).
pub fn laurent_substitute(series: &MixedSeries, rules: &[Vec<i64>]) -> Result<MixedSeries> {
    let n = series.vars();
    if rules.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: rules.len(),
        });
    }
    for r in rules {
        if r.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: r.len(),
            });
        }
    }

    let image = |idx: &MultiIndex| -> std::result::Result<MultiIndex, String> {
        let mut exps = vec![0i64; n];
        for (i, &e) in idx.0.iter().enumerate() {
            for (j, &r) in rules[i].iter().enumerate() {
                exps[j] += i64::from(e) * r;
            }
        }
        if exps.iter().any(|&e| e < 0) {
            return Err(idx.to_string());
        }
        Ok(MultiIndex(exps.into_iter().map(|e| e as u32).collect()))
    };

    let mut mapped = Vec::new();
    let mut max_holo = series.holo_bound();
    let mut max_anti = series.anti_bound();
    for (m, k, c) in series.term_triples() {
        let m2 = image(&m).map_err(|mon| Error::ResidualNegativeExponent {
            monomial: format!("z^{mon} (from z^{m} zbar^{k})"),
        })?;
        let k2 = image(&k).map_err(|mon| Error::ResidualNegativeExponent {
            monomial: format!("zbar^{mon} (from z^{m} zbar^{k})"),
        })?;
        max_holo = max_holo.max(m2.degree());
        max_anti = max_anti.max(k2.degree());
        mapped.push((m2, k2, c));
    }
    MixedSeries::from_terms(n, max_holo, max_anti, mapped)
}

/// Hermitian wrapper around [`laurent_substitute`]; symmetry is preserved by
/// construction but re-validated anyway.
pub fn laurent_substitute_hermitian(
    series: &HermitianSeries,
    rules: &[Vec<i64>],
) -> Result<HermitianSeries> {
    let out = laurent_substitute(series.as_mixed(), rules)?;
    // square up the window: both sides see the same map
    let d = out.holo_bound().max(out.anti_bound());
    let squared = if out.holo_bound() == out.anti_bound() {
        out
    } else {
        // re-materialize with a square window; no terms are lost because the
        // window only grows
        MixedSeries::from_terms(out.vars(), d, d, out.term_triples())?
    };
    HermitianSeries::try_new(squared)
}
