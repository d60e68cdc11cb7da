//! Turning per-subset `p`-th power integrals into a root-of-sum value that
//! meets an absolute tolerance.

use crate::quadrature::Estimate;
use crate::{Error, Result, SubsetId};

/// Error bound on `S^{1/p}` when `S` is known to within `±e`.
///
/// The root is concave for `p ≥ 1`, so the downward deviation dominates.
pub(crate) fn root_error(s: f64, e: f64, p: f64) -> f64 {
    if e == 0.0 {
        return 0.0;
    }
    s.max(0.0).powf(1.0 / p) - (s - e).max(0.0).powf(1.0 / p)
}

/// One weighted subset term `γ_u^p ∫ |f_u|^p` of a root-of-sum quantity.
#[derive(Debug, Clone, Copy)]
pub(crate) struct WeightedTerm {
    pub subset: SubsetId,
    pub estimate: Estimate,
}

/// Result of [`root_of_sum`].
#[derive(Debug, Clone)]
pub(crate) struct RootOfSum {
    pub terms: Vec<WeightedTerm>,
    pub value: f64,
    pub tol: f64,
}

/// Repeatedly evaluates `compute(tol_sum)` (which must return weighted terms
/// whose summed error is at most `tol_sum`) until `(Σ terms)^{1/p}` is known
/// within `tol`.
pub(crate) fn root_of_sum(
    p: f64,
    tol: f64,
    mut compute: impl FnMut(f64) -> Result<Vec<WeightedTerm>>,
) -> Result<RootOfSum> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidInput(format!("tolerance must be positive, got {tol}")));
    }
    let mut tol_sum = tol;
    let mut last = None;
    for _ in 0..5 {
        let terms = compute(tol_sum)?;
        let s: f64 = terms.iter().map(|t| t.estimate.value).sum();
        let e: f64 = terms.iter().map(|t| t.estimate.error).sum();
        let exhausted = terms.iter().any(|t| t.estimate.exhausted);
        let value = s.max(0.0).powf(1.0 / p);
        let err = root_error(s, e, p);
        if err <= tol {
            return Ok(RootOfSum {
                terms,
                value,
                tol: err,
            });
        }
        last = Some((value, err));
        if exhausted {
            break;
        }
        // first-order: d(S^{1/p}) = dS / (p S^{1-1/p})
        let wanted = 0.5 * p * tol * s.max(f64::MIN_POSITIVE).powf(1.0 - 1.0 / p);
        tol_sum = wanted.min(0.1 * tol_sum);
    }
    let (partial, bound) = last.expect("at least one attempt");
    Err(Error::QuadratureBudget { partial, bound })
}
