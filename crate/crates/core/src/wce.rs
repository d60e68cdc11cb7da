//! Worst-case error of a QMC rule in the weighted ANOVA space.
//!
//! With `K(x,t) = t − 1[x < t]` the error is
//!
//! ```text
//! (1/n) [ Σ_{u ∈ U₊, u ≠ ∅} γ_u^{p*} ∫ |Σ_j Π_{i∈u} K(x_{j,i}, t_i)|^{p*} dt ]^{1/p*}
//! ```
//!
//! and `(1/n) max_u γ_u sup_t |Σ_j K_u|` for `p* = ∞`.

use rayon::prelude::*;

use crate::aggregate::{root_of_sum, WeightedTerm};
use crate::cells::{CellGrid, Integrand};
use crate::discrepancy::local_discrepancy;
use crate::quadrature::CompensatedSum;
use crate::types::Method;
use crate::{Error, ErrorReport, PStar, PointSet, Result, SubsetId, SubsetTerm, Weights};

/// `K(x,t) = t` if `x ≥ t`, `t − 1` otherwise.
#[inline]
pub fn kernel(x: f64, t: f64) -> f64 {
    if x < t {
        t - 1.0
    } else {
        t
    }
}

/// `κ₂(x,y) = ∫₀¹ K(x,t) K(y,t) dt = 1/3 + (x² + y²)/2 − max(x,y)`.
#[inline]
pub fn kappa2(x: f64, y: f64) -> f64 {
    1.0 / 3.0 + 0.5 * (x * x + y * y) - x.max(y)
}

fn check_subset(p: &PointSet, u: SubsetId, t_u: &[f64]) -> Result<()> {
    if u.is_empty() {
        return Err(Error::EmptySubset);
    }
    if u.mask() >> p.dim() != 0 {
        return Err(Error::InvalidInput(format!("subset {u} exceeds dimension {}", p.dim())));
    }
    if t_u.len() != u.len() {
        return Err(Error::DimensionMismatch {
            expected: u.len(),
            found: t_u.len(),
        });
    }
    if t_u.iter().any(|t| !(0.0..=1.0).contains(t)) {
        return Err(Error::InvalidInput("t must lie in [0,1]".into()));
    }
    Ok(())
}

/// `Σ_j Π_{ℓ∈u} K(x_{j,ℓ}, t_ℓ)`, with `t_u` listing the coordinates of `u`
/// in increasing order.
pub fn kernel_sum(p: &PointSet, u: SubsetId, t_u: &[f64]) -> Result<f64> {
    check_subset(p, u, t_u)?;
    let idx: Vec<usize> = u.indices().collect();
    Ok(p.points()
        .map(|x| idx.iter().zip(t_u).map(|(&i, &t)| kernel(x[i], t)).product::<f64>())
        .sum())
}

/// The same sum expanded through local discrepancies of projections:
/// `n Σ_{∅≠v⊆u} (−1)^{|v|} Δ_{P_v}(t_v) Π_{i∈u∖v} t_i`.
pub fn kernel_sum_via_discrepancy(p: &PointSet, u: SubsetId, t_u: &[f64]) -> Result<f64> {
    check_subset(p, u, t_u)?;
    let idx: Vec<usize> = u.indices().collect();
    let n = p.len() as f64;
    let mut acc = 0.0;
    for v in u.subsets().filter(|v| !v.is_empty()) {
        let mut t_v = Vec::with_capacity(v.len());
        let mut rest = 1.0;
        for (&i, &t) in idx.iter().zip(t_u) {
            if v.contains(i) {
                t_v.push(t);
            } else {
                rest *= t;
            }
        }
        let delta = local_discrepancy(&p.project(v)?, &t_v)?;
        let sign = if v.len() % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * delta * rest;
    }
    Ok(n * acc)
}

/// Worst-case error of the equal-weight rule on `p`.
///
/// `p* = 2` uses the `κ₂` double sum and `p* = ∞` the corner maximum over
/// the breakpoint grid (both exact); single-coordinate terms are integrated
/// in closed form; everything else by certified quadrature to within `tol`.
pub fn wce(p: &PointSet, w: &Weights, pstar: PStar, tol: f64) -> Result<ErrorReport> {
    w.check_matches(p.dim())?;
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidInput(format!("tolerance must be positive, got {tol}")));
    }
    match pstar {
        PStar::Infinity => Ok(wce_sup(p, w)?),
        PStar::Finite(2.0) => wce_kappa2(p, w),
        PStar::Finite(q) => wce_integral(p, w, q, tol),
    }
}

fn wce_sup(p: &PointSet, w: &Weights) -> Result<ErrorReport> {
    let n = p.len() as f64;
    let mut per_subset = Vec::new();
    for (u, g) in w.positive_subsets() {
        let sup = CellGrid::new(&p.project(u)?)?.sup_abs(Integrand::ScaledKernelSum);
        per_subset.push(SubsetTerm {
            subset: u,
            term: g * sup,
            method: Method::ExactGridSup,
            tolerance: 0.0,
        });
    }
    let total = per_subset.iter().map(|t| t.term).fold(0.0, f64::max);
    let _ = n;
    Ok(ErrorReport {
        total,
        per_subset,
        method: Method::ExactGridSup,
        tolerance: 0.0,
    })
}

/// `Σ_{j,k} Π_{ℓ∈u} κ₂(x_{j,ℓ}, x_{k,ℓ})` for every subset in `subsets`.
fn kappa2_sums(p: &PointSet, subsets: &[SubsetId]) -> Vec<f64> {
    let n = p.len();
    let d = p.dim();
    let rows: Vec<Vec<CompensatedSum>> = (0..n)
        .into_par_iter()
        .map(|j| {
            let x = p.point(j);
            let mut acc = vec![CompensatedSum::default(); subsets.len()];
            let mut kap = vec![0.0; d];
            for k in j..n {
                let y = p.point(k);
                for i in 0..d {
                    kap[i] = kappa2(x[i], y[i]);
                }
                let mult = if k == j { 1.0 } else { 2.0 };
                for (a, u) in acc.iter_mut().zip(subsets) {
                    a.add(mult * u.indices().map(|i| kap[i]).product::<f64>());
                }
            }
            acc
        })
        .collect();
    (0..subsets.len())
        .map(|s| {
            let mut total = CompensatedSum::default();
            for r in &rows {
                total.add(r[s].value());
            }
            total.value()
        })
        .collect()
}

fn wce_kappa2(p: &PointSet, w: &Weights) -> Result<ErrorReport> {
    let n = p.len() as f64;
    let active: Vec<(SubsetId, f64)> = w.positive_subsets().collect();
    // single coordinates: the interval closed form avoids the O(n² ε)
    // cancellation of the pair sum
    let multi: Vec<SubsetId> = active.iter().map(|&(u, _)| u).filter(|u| u.len() > 1).collect();
    let mut sums = kappa2_sums(p, &multi).into_iter();
    let mut per_subset = Vec::with_capacity(active.len());
    for &(u, g) in &active {
        let mean_sq = if u.len() == 1 {
            CellGrid::new(&p.project(u)?)?
                .power_integral(Integrand::ScaledKernelSum, 2.0, f64::MAX)
                .value
        } else {
            sums.next().expect("one sum per multi-coordinate subset").max(0.0) / (n * n)
        };
        per_subset.push(SubsetTerm {
            subset: u,
            term: g * g * mean_sq,
            method: Method::ExactClosedForm,
            tolerance: 0.0,
        });
    }
    let total = per_subset.iter().map(|t| t.term).sum::<f64>().sqrt();
    Ok(ErrorReport {
        total,
        per_subset,
        method: Method::ExactClosedForm,
        tolerance: 0.0,
    })
}

/// The generic path: `γ_u^q ∫ |Σ_j K_u / n|^q` per subset over the cell grid.
pub(crate) fn wce_integral(p: &PointSet, w: &Weights, q: f64, tol: f64) -> Result<ErrorReport> {
    let active: Vec<(SubsetId, f64)> = w.positive_subsets().map(|(u, g)| (u, g.powf(q))).collect();
    let total_weight: f64 = active.iter().map(|(_, g)| g).sum();
    if active.is_empty() {
        return Ok(ErrorReport {
            total: 0.0,
            per_subset: Vec::new(),
            method: Method::ExactClosedForm,
            tolerance: 0.0,
        });
    }
    let grids: Vec<CellGrid> = active
        .iter()
        .map(|&(u, _)| CellGrid::new(&p.project(u)?))
        .collect::<Result<_>>()?;
    let r = root_of_sum(q, tol, |tol_sum| {
        let share = tol_sum / total_weight;
        Ok(active
            .iter()
            .zip(&grids)
            .map(|(&(u, gq), grid)| {
                let mut e = grid.power_integral(Integrand::ScaledKernelSum, q, share);
                e.value *= gq;
                e.error *= gq;
                WeightedTerm { subset: u, estimate: e }
            })
            .collect())
    })?;
    let per_subset: Vec<SubsetTerm> = r
        .terms
        .iter()
        .map(|t| SubsetTerm {
            subset: t.subset,
            term: t.estimate.value,
            method: if t.estimate.exact {
                Method::ExactClosedForm
            } else {
                Method::Quadrature
            },
            tolerance: t.estimate.error,
        })
        .collect();
    let method = per_subset
        .iter()
        .fold(Method::ExactClosedForm, |m, t| m.combine(t.method));
    Ok(ErrorReport {
        total: r.value,
        per_subset,
        method,
        tolerance: r.tol,
    })
}
