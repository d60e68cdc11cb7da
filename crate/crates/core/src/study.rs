//! Convergence studies over families of node sets.

use std::fmt::Write as _;
use std::ops::RangeInclusive;
use std::str::FromStr;

use rayon::prelude::*;

use crate::discrepancy::lp_discrepancy;
use crate::pointsets::{balanced_sigma, hammersley_2d, midpoint_1d};
use crate::wce::wce;
use crate::{Error, PStar, PointSet, Result, Weights};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Composite midpoint rule; the range runs over `n`.
    Midpoint,
    /// Hammersley sets with zero shift; the range runs over `m`, `n = 2^m`.
    HammersleyClassical,
    /// Hammersley sets with [`balanced_sigma`]; the range runs over `m`.
    HammersleyBalanced,
}

impl Family {
    pub fn dim(self) -> usize {
        match self {
            Family::Midpoint => 1,
            _ => 2,
        }
    }

    /// Node set for one value of the range parameter.
    pub fn member(self, k: usize) -> Result<PointSet> {
        match self {
            Family::Midpoint => midpoint_1d(k),
            Family::HammersleyClassical => hammersley_2d(k, &vec![false; k]),
            Family::HammersleyBalanced => hammersley_2d(k, &balanced_sigma(k)),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "midpoint" => Ok(Family::Midpoint),
            "hammersley-classical" => Ok(Family::HammersleyClassical),
            "hammersley-balanced" => Ok(Family::HammersleyBalanced),
            _ => Err(Error::InvalidInput(format!(
                "unknown family `{s}` (midpoint, hammersley-classical, hammersley-balanced)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StudyRow {
    pub n: usize,
    pub wce: f64,
    pub n_wce: f64,
    pub n_wce_over_sqrt_ln_n: f64,
    pub n_wce_over_ln_n: f64,
    /// Unweighted `L_{p*}` discrepancy of the node set.
    pub discrepancy: f64,
}

/// One row per value in `range`, computed in parallel and returned in
/// range order.
pub fn run_study(family: Family, range: RangeInclusive<usize>, w: &Weights, pstar: PStar, tol: f64) -> Result<Vec<StudyRow>> {
    if w.dim() != family.dim() {
        return Err(Error::DimensionMismatch {
            expected: family.dim(),
            found: w.dim(),
        });
    }
    let ks: Vec<usize> = range.collect();
    ks.par_iter()
        .map(|&k| {
            let p = family.member(k)?;
            let e = wce(&p, w, pstar, tol)?.total;
            let n = p.len() as f64;
            let ln = n.ln();
            Ok(StudyRow {
                n: p.len(),
                wce: e,
                n_wce: n * e,
                n_wce_over_sqrt_ln_n: n * e / ln.sqrt(),
                n_wce_over_ln_n: n * e / ln,
                discrepancy: lp_discrepancy(&p, pstar, tol)?.value,
            })
        })
        .collect()
}

pub const CSV_HEADER: &str = "n,wce,n_wce,n_wce_over_sqrt_ln_n,n_wce_over_ln_n,discrepancy";

/// CSV with [`CSV_HEADER`]; floats use shortest round-trip formatting
/// (`n = 1` rows carry `inf` in the log-normalised columns).
pub fn to_csv(rows: &[StudyRow]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{}",
            r.n, r.wce, r.n_wce, r.n_wce_over_sqrt_ln_n, r.n_wce_over_ln_n, r.discrepancy
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn midpoint_scaled_error_is_constant() {
        let w = Weights::uniform(1, 1.0).unwrap();
        let rows = run_study(Family::Midpoint, 1..=12, &w, PStar::Finite(3.0), 1e-12).unwrap();
        let want = 1.0 / (2.0 * 4f64.powf(1.0 / 3.0));
        for r in &rows {
            assert!((r.n_wce - want).abs() < 1e-13, "n={}", r.n);
        }
        assert_eq!(rows.iter().map(|r| r.n).collect::<Vec<_>>(), (1..=12).collect::<Vec<_>>());
    }

    #[test]
    fn csv_is_stable() {
        let w = Weights::uniform(2, 1.0).unwrap();
        let a = to_csv(&run_study(Family::HammersleyBalanced, 1..=5, &w, PStar::Finite(2.0), 1e-10).unwrap());
        let b = to_csv(&run_study(Family::HammersleyBalanced, 1..=5, &w, PStar::Finite(2.0), 1e-10).unwrap());
        assert_eq!(a, b);
        assert!(a.starts_with(CSV_HEADER));
        assert_eq!(a.lines().count(), 6);
    }

    #[test]
    fn family_parsing_and_dims() {
        assert_eq!("midpoint".parse::<Family>().unwrap(), Family::Midpoint);
        assert_eq!("hammersley-balanced".parse::<Family>().unwrap().dim(), 2);
        assert!("sobol".parse::<Family>().is_err());
        let w = Weights::uniform(1, 1.0).unwrap();
        assert!(run_study(Family::HammersleyClassical, 1..=2, &w, PStar::Infinity, 1e-9).is_err());
    }
}
