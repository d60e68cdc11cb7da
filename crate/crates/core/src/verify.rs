//! Self-check batteries: identities, bounds and 1D optimality.

use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds::{sandwich_2d, t_inequality_holds, tilde_weights, tilde_weights_product, upper_bound_cor1};
use crate::discrepancy::{l2_discrepancy, lp_discrepancy};
use crate::oracle::{one_point_per_interval_check, optimality_search_1d};
use crate::pointsets::{hammersley_2d, midpoint_1d, random_pointset};
use crate::wce::{kernel_sum, kernel_sum_via_discrepancy, wce};
use crate::{Error, PStar, Result, SubsetId, Weights};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Identities,
    Bounds,
    Optimality,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identities" => Ok(Suite::Identities),
            "bounds" => Ok(Suite::Bounds),
            "optimality" => Ok(Suite::Optimality),
            "all" => Ok(Suite::All),
            _ => Err(Error::InvalidInput(format!(
                "unknown suite `{s}` (identities, bounds, optimality, all)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, f: impl FnOnce() -> Result<(bool, String)>) -> Check {
    match f() {
        Ok((passed, detail)) => Check { name, passed, detail },
        Err(e) => Check {
            name,
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

pub fn run(suite: Suite) -> Vec<Check> {
    let mut out = Vec::new();
    if matches!(suite, Suite::Identities | Suite::All) {
        out.push(check("kernel-sum-identity", kernel_sum_identity));
        out.push(check("kappa2-vs-quadrature", kappa2_vs_quadrature));
        out.push(check("one-dimensional-reduction", one_dimensional_reduction));
        out.push(check("l2-grid-vs-warnock", l2_grid_vs_warnock));
    }
    if matches!(suite, Suite::Bounds | Suite::All) {
        out.push(check("corollary-upper-bound", corollary_upper_bound));
        out.push(check("product-tilde-weights", product_tilde_weights));
        out.push(check("sandwich-2d", sandwich));
        out.push(check("t-inequality", t_inequality));
    }
    if matches!(suite, Suite::Optimality | Suite::All) {
        out.push(check("midpoint-optimal", midpoint_optimal));
    }
    out
}

fn kernel_sum_identity() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let mut worst = 0.0f64;
    for trial in 0..200 {
        let d = rng.random_range(1..=4);
        let n = rng.random_range(1..=64);
        let p = random_pointset(d, n, trial)?;
        let u = SubsetId::from_mask(rng.random_range(1..1u32 << d));
        let t: Vec<f64> = (0..u.len()).map(|_| rng.random()).collect();
        let diff = (kernel_sum(&p, u, &t)? - kernel_sum_via_discrepancy(&p, u, &t)?).abs();
        worst = worst.max(diff);
    }
    Ok((worst <= 1e-12, format!("max |diff| {worst:.3e} over 200 cases")))
}

fn kappa2_vs_quadrature() -> Result<(bool, String)> {
    let mut worst_excess = f64::NEG_INFINITY;
    for (d, n, seed) in [(2, 16, 1u64), (3, 8, 2), (2, 32, 3)] {
        let p = random_pointset(d, n, seed)?;
        let w = Weights::product(&vec![0.8; d])?;
        let exact = wce(&p, &w, PStar::Finite(2.0), 1e-12)?;
        let quad = crate::wce::wce_integral(&p, &w, 2.0, 1e-10)?;
        worst_excess = worst_excess.max((exact.total - quad.total).abs() - quad.tolerance);
    }
    Ok((worst_excess <= 1e-13, format!("max excess over tolerance {worst_excess:.3e}")))
}

fn one_dimensional_reduction() -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for seed in 0..20 {
        let p = random_pointset(1, 1 + seed as usize * 4, seed)?;
        let w = Weights::uniform(1, 0.75)?;
        for ps in [PStar::Finite(1.0), PStar::Finite(2.0), PStar::Finite(3.0), PStar::Infinity] {
            let a = wce(&p, &w, ps, 1e-12)?.total;
            let b = 0.75 * lp_discrepancy(&p, ps, 1e-12)?.value;
            worst = worst.max((a - b).abs());
        }
    }
    Ok((worst <= 1e-10, format!("max |diff| {worst:.3e}")))
}

fn l2_grid_vs_warnock() -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for seed in 0..6 {
        let p = random_pointset(2 + seed as usize % 2, 10, seed)?;
        let v = crate::discrepancy::disc_power_integral_generic(&p, 2.0, 1e-13)?.sqrt();
        worst = worst.max((v - l2_discrepancy(&p)).abs());
    }
    Ok((worst <= 1e-10, format!("max |diff| {worst:.3e}")))
}

fn corollary_upper_bound() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    let mut violations = 0;
    let mut cases = 0;
    for trial in 0..25 {
        let d = rng.random_range(1..=3);
        let n = rng.random_range(1..=12);
        let p = random_pointset(d, n, 1000 + trial)?;
        let w = Weights::from_fn(d, |_| if rng.random_bool(0.2) { 0.0 } else { rng.random_range(0.0..2.0) })?;
        for ps in [PStar::Finite(1.5), PStar::Finite(2.0), PStar::Finite(3.0), PStar::Infinity] {
            let e = wce(&p, &w, ps, 1e-8)?;
            let ub = upper_bound_cor1(&p, &w, ps, 1e-8)?;
            cases += 1;
            if e.total > ub.value + e.tolerance + ub.tol {
                violations += 1;
            }
        }
    }
    Ok((violations == 0, format!("{violations} violations in {cases} cases")))
}

fn product_tilde_weights() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let d = rng.random_range(1..=4);
        let g: Vec<f64> = (0..d).map(|_| rng.random_range(0.01..2.0)).collect();
        let ps = PStar::Finite(rng.random_range(1.0..6.0));
        let a = tilde_weights(&Weights::product(&g)?, ps)?;
        let b = tilde_weights_product(&g, ps)?;
        for u in SubsetId::all(d).filter(|u| !u.is_empty()) {
            worst = worst.max((a.get(u) - b.get(u)).abs() / a.get(u).max(1.0));
        }
    }
    Ok((worst <= 1e-12, format!("max relative diff {worst:.3e}")))
}

fn sandwich() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let w = Weights::uniform(2, 1.0)?;
    let mut violations = 0;
    let mut cases = 0;
    for m in 2..=8 {
        for _ in 0..3 {
            let sigma: Vec<bool> = (0..m).map(|_| rng.random()).collect();
            let s = sandwich_2d(&hammersley_2d(m, &sigma)?, &w, PStar::Finite(2.0), 1e-10)?;
            cases += 1;
            let t = s.wce.tolerance;
            if s.wce.total > s.upper.value + s.upper.tol + t || s.wce.total < s.lower_proxy.value - s.lower_proxy.tol - t {
                violations += 1;
            }
        }
    }
    Ok((violations == 0, format!("{violations} violations in {cases} cases")))
}

fn t_inequality() -> Result<(bool, String)> {
    let failing: Vec<u32> = (2..=20)
        .map(|d| t_inequality_holds(d).map(|ok| (d, ok)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|&(_, ok)| !ok)
        .map(|(d, _)| d)
        .collect();
    Ok((failing.is_empty(), format!("failing d: {failing:?}")))
}

fn midpoint_optimal() -> Result<(bool, String)> {
    let res = 128;
    let step = 1.0 / res as f64;
    let mut failures = Vec::new();
    for n in 1..=3 {
        for ps in [PStar::Finite(1.0), PStar::Finite(2.0), PStar::Infinity] {
            let r = optimality_search_1d(n, ps, res)?;
            let got = r.points.sorted_axis(0);
            let want = midpoint_1d(n)?.sorted_axis(0);
            let close = got.len() == want.len() && got.iter().zip(&want).all(|(a, b)| (a - b).abs() <= step);
            if !close || !one_point_per_interval_check(&r.points, n) {
                failures.push(format!("n={n} p*={ps}: {got:?}"));
            }
        }
    }
    Ok((failures.is_empty(), if failures.is_empty() { "9 searches at resolution 128".into() } else { failures.join("; ") }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_batteries_pass() {
        for c in run(Suite::All) {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }

    #[test]
    fn suite_parsing() {
        assert_eq!("all".parse::<Suite>().unwrap(), Suite::All);
        assert!("everything".parse::<Suite>().is_err());
        assert_eq!(run(Suite::Optimality).len(), 1);
    }
}
