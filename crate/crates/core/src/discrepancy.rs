//! Local discrepancy and (weighted) `L_{p*}` discrepancies.
//!
//! For `d = 1` and for `p* = ∞` the values are exact. `p* = 2` uses the
//! Warnock double sum. Other finite exponents in `d ≥ 2` integrate
//! `|Δ_P|^{p*}` box by box over the breakpoint grid (see `cells`).

use crate::aggregate::{root_of_sum, WeightedTerm};
use crate::cells::{CellGrid, Integrand};
use crate::quadrature::{CompensatedSum, Estimate};
use crate::{Certified, Error, PStar, PointSet, Result, Weights};

/// `Δ_P(t) = |{j : x_j ∈ [0,t)}| / n − Π t_i` with strict inequalities.
pub fn local_discrepancy(p: &PointSet, t: &[f64]) -> Result<f64> {
    if t.len() != p.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: t.len(),
        });
    }
    if t.iter().any(|x| !(0.0..=1.0).contains(x)) {
        return Err(Error::InvalidInput("t must lie in [0,1]^d".into()));
    }
    let count = p
        .points()
        .filter(|x| x.iter().zip(t).all(|(xi, ti)| xi < ti))
        .count();
    Ok(count as f64 / p.len() as f64 - t.iter().product::<f64>())
}

/// `‖Δ_P‖_{L_2}` from Warnock's formula
///
/// ```text
/// ∫ Δ² = 3^{-d} − (2/n) Σ_j Π_i (1 − x_{j,i}²)/2 + (1/n²) Σ_{j,k} Π_i (1 − max(x_{j,i}, x_{k,i}))
/// ```
pub fn l2_discrepancy(p: &PointSet) -> f64 {
    l2_discrepancy_squared(p).max(0.0).sqrt()
}

pub(crate) fn l2_discrepancy_squared(p: &PointSet) -> f64 {
    let n = p.len() as f64;
    let d = p.dim();
    let mut single = CompensatedSum::default();
    for x in p.points() {
        single.add(x.iter().map(|&xi| 0.5 * (1.0 - xi * xi)).product());
    }
    let mut double = CompensatedSum::default();
    for (j, x) in p.points().enumerate() {
        double.add(x.iter().map(|&xi| 1.0 - xi).product());
        for y in p.points().skip(j + 1) {
            let prod: f64 = x.iter().zip(y).map(|(&a, &b)| 1.0 - a.max(b)).product();
            double.add(2.0 * prod);
        }
    }
    3f64.powi(-(d as i32)) - 2.0 / n * single.value() + double.value() / (n * n)
}

/// `sup_{t ∈ [0,1]^d} |Δ_P(t)|`, exact: the maximum over all box corners
/// of the breakpoint grid, taking both one-sided counts into account.
pub fn linf_discrepancy(p: &PointSet) -> Result<f64> {
    Ok(CellGrid::new(p)?.sup_abs(Integrand::LocalDiscrepancy))
}

/// `∫ |Δ_P|^p` with absolute error at most `tol`.
pub(crate) fn disc_power_integral(p: &PointSet, pstar: f64, tol: f64) -> Result<Estimate> {
    if pstar == 2.0 {
        return Ok(Estimate::exact(l2_discrepancy_squared(p).max(0.0)));
    }
    Ok(CellGrid::new(p)?.power_integral(Integrand::LocalDiscrepancy, pstar, tol))
}

/// `∫ |Δ_P|^p` through the cell grid even when a closed form exists.
pub(crate) fn disc_power_integral_generic(p: &PointSet, pstar: f64, tol: f64) -> Result<f64> {
    Ok(CellGrid::new(p)?.power_integral(Integrand::LocalDiscrepancy, pstar, tol).value)
}

/// `‖Δ_P‖_{L_{p*}}` with its certified absolute error (0 when exact).
pub fn lp_discrepancy(p: &PointSet, pstar: PStar, tol: f64) -> Result<Certified> {
    let q = match pstar {
        PStar::Infinity => return Ok(Certified::exact(linf_discrepancy(p)?)),
        PStar::Finite(q) => q,
    };
    let r = root_of_sum(q, tol, |tol_sum| {
        Ok(vec![WeightedTerm {
            subset: crate::SubsetId::full(p.dim()),
            estimate: disc_power_integral(p, q, tol_sum)?,
        }])
    })?;
    Ok(Certified {
        value: r.value,
        tol: r.tol,
    })
}

/// The `γ`-weighted `L_{p*}` discrepancy over all nonempty positive-weight
/// projections.
pub fn weighted_lp_discrepancy(p: &PointSet, w: &Weights, pstar: PStar, tol: f64) -> Result<Certified> {
    w.check_matches(p.dim())?;
    match pstar {
        PStar::Infinity => {
            let mut best = 0.0f64;
            for (u, g) in w.positive_subsets() {
                best = best.max(g * linf_discrepancy(&p.project(u)?)?);
            }
            Ok(Certified::exact(best))
        }
        PStar::Finite(q) => {
            let weights: Vec<_> = w
                .positive_subsets()
                .map(|(u, g)| (u, g.powf(q)))
                .collect();
            let total_weight: f64 = weights.iter().map(|(_, g)| g).sum();
            if total_weight == 0.0 {
                return Ok(Certified::exact(0.0));
            }
            let r = root_of_sum(q, tol, |tol_sum| {
                let share = tol_sum / total_weight;
                weights
                    .iter()
                    .map(|&(u, gp)| {
                        let mut e = disc_power_integral(&p.project(u)?, q, share)?;
                        e.value *= gp;
                        e.error *= gp;
                        Ok(WeightedTerm { subset: u, estimate: e })
                    })
                    .collect()
            })?;
            Ok(Certified {
                value: r.value,
                tol: r.tol,
            })
        }
    }
}

/// Worst-case error in the anchored space (anchor 0): the weighted
/// discrepancy of the reflected set `{1 − x_j}`.
pub fn anchored_wce(p: &PointSet, w: &Weights, pstar: PStar, tol: f64) -> Result<Certified> {
    weighted_lp_discrepancy(&p.reflect(), w, pstar, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pointsets::{hammersley_2d, midpoint_1d, random_pointset};
    use crate::SubsetId;

    fn one(xs: &[f64]) -> PointSet {
        PointSet::from_1d(xs).unwrap()
    }

    /// Midpoint-rule brute force of ∫|Δ|^p over [0,1]^d with m cells per axis.
    fn brute_power(p: &PointSet, q: f64, m: usize) -> f64 {
        let d = p.dim();
        let total = m.pow(d as u32);
        let mut s = 0.0;
        let mut t = vec![0.0; d];
        for cell in 0..total {
            let mut c = cell;
            for ti in t.iter_mut() {
                *ti = ((c % m) as f64 + 0.5) / m as f64;
                c /= m;
            }
            s += local_discrepancy(p, &t).unwrap().abs().powf(q);
        }
        s / total as f64
    }

    #[test]
    fn local_discrepancy_examples() {
        assert_eq!(local_discrepancy(&one(&[0.5]), &[0.5]).unwrap(), -0.5);
        assert_eq!(local_discrepancy(&one(&[0.5]), &[0.75]).unwrap(), 0.25);
        let p = PointSet::new(2, vec![vec![0.0, 0.0]]).unwrap();
        assert_eq!(local_discrepancy(&p, &[1.0, 1.0]).unwrap(), 0.0);
        // boundary points never fall in a box with t_i = 0
        assert_eq!(local_discrepancy(&p, &[0.0, 1.0]).unwrap(), 0.0);
        assert!(local_discrepancy(&p, &[0.5]).is_err());
    }

    #[test]
    fn l2_examples() {
        for n in [1usize, 2, 3, 7, 20] {
            let v = l2_discrepancy(&midpoint_1d(n).unwrap());
            let want = 1.0 / (2.0 * 3f64.sqrt() * n as f64);
            assert!((v - want).abs() < 1e-14, "n={n}");
        }
        let v = l2_discrepancy(&one(&[0.5]));
        assert!((v - 1.0 / 12f64.sqrt()).abs() < 1e-15);
        // ∫∫ (1 − t1 t2)² over the unit square
        let p = PointSet::new(2, vec![vec![0.0, 0.0]]).unwrap();
        let exact = 1.0 - 0.5 + 1.0 / 9.0;
        assert!((l2_discrepancy(&p).powi(2) - exact).abs() < 1e-15);
        // brute-force tensor quadrature of |Δ|² (the integrand is smooth here)
        let brute = brute_power(&p, 2.0, 400);
        assert!((l2_discrepancy(&p).powi(2) - brute).abs() < 1e-5);
    }

    #[test]
    fn linf_examples() {
        for n in 1..20 {
            let v = linf_discrepancy(&midpoint_1d(n).unwrap()).unwrap();
            assert!((v - 0.5 / n as f64).abs() < 1e-15);
        }
        assert_eq!(linf_discrepancy(&one(&[0.5])).unwrap(), 0.5);
    }

    #[test]
    fn linf_hammersley_matches_dense_dyadic_grid() {
        let p = hammersley_2d(2, &[false, false]).unwrap();
        let v = linf_discrepancy(&p).unwrap();
        // 2^12 candidate t's: a 64×64 dyadic grid; both one-sided limits are
        // reached by nudging by ±1e-13.
        let mut best = 0.0f64;
        for a in 0..=64 {
            for b in 0..=64 {
                for (da, db) in [(0.0, 0.0), (1e-13, 1e-13), (-1e-13, 1e-13), (1e-13, -1e-13), (-1e-13, -1e-13)] {
                    let t = [
                        (a as f64 / 64.0 + da).clamp(0.0, 1.0),
                        (b as f64 / 64.0 + db).clamp(0.0, 1.0),
                    ];
                    best = best.max(local_discrepancy(&p, &t).unwrap().abs());
                }
            }
        }
        assert!((v - best).abs() < 1e-12, "{v} vs {best}");
    }

    #[test]
    fn lp_one_dimensional_closed_form() {
        for q in [1.0, 2.0, 3.0, 5.0] {
            for n in [1usize, 2, 5, 16] {
                let v = lp_discrepancy(&midpoint_1d(n).unwrap(), PStar::Finite(q), 1e-12).unwrap();
                let want = 1.0 / (2.0 * (q + 1.0).powf(1.0 / q) * n as f64);
                assert!((v.value - want).abs() < 1e-14 * want.max(1.0) + 1e-15, "q={q} n={n}");
                assert_eq!(v.tol, 0.0);
            }
        }
        let v = lp_discrepancy(&one(&[0.5]), PStar::Finite(1.0), 1e-12).unwrap();
        assert!((v.value - 0.25).abs() < 1e-16);
    }

    #[test]
    fn lp_two_matches_warnock_through_the_grid_engine() {
        for s in 0..8u32 {
            let sigma: Vec<bool> = (0..3).map(|k| (s >> k) & 1 == 1).collect();
            let p = hammersley_2d(3, &sigma).unwrap();
            let grid = CellGrid::new(&p).unwrap();
            let via_grid = grid.power_integral(Integrand::LocalDiscrepancy, 2.0, 1e-14).value.sqrt();
            assert!((via_grid - l2_discrepancy(&p)).abs() < 1e-10);
        }
        let p = random_pointset(3, 9, 5).unwrap();
        let grid = CellGrid::new(&p).unwrap();
        let via_grid = grid.power_integral(Integrand::LocalDiscrepancy, 2.0, 1e-14).value.sqrt();
        assert!((via_grid - l2_discrepancy(&p)).abs() < 1e-12);
    }

    #[test]
    fn lp_general_exponent_against_brute_force() {
        let p = random_pointset(2, 6, 11).unwrap();
        for q in [1.0, 1.5, 3.0] {
            let v = lp_discrepancy(&p, PStar::Finite(q), 1e-10).unwrap();
            assert!(v.tol <= 1e-10);
            let brute = brute_power(&p, q, 1500).powf(1.0 / q);
            assert!((v.value - brute).abs() < 2e-4, "q={q}: {} vs {brute}", v.value);
        }
    }

    #[test]
    fn monotone_in_exponent() {
        for seed in 0..5 {
            let p = random_pointset(2, 7, seed).unwrap();
            let vals: Vec<f64> = [1.0, 2.0, 3.0]
                .iter()
                .map(|&q| lp_discrepancy(&p, PStar::Finite(q), 1e-10).unwrap().value)
                .chain([linf_discrepancy(&p).unwrap()])
                .collect();
            for w in vals.windows(2) {
                assert!(w[0] <= w[1] + 1e-9, "{vals:?}");
            }
        }
    }

    #[test]
    fn weighted_reductions() {
        let p = random_pointset(1, 5, 3).unwrap();
        let mut w = Weights::zeros(1).unwrap();
        w.set(SubsetId::full(1), 0.7).unwrap();
        for ps in [PStar::Finite(1.5), PStar::Finite(2.0), PStar::Infinity] {
            let a = weighted_lp_discrepancy(&p, &w, ps, 1e-12).unwrap().value;
            let b = lp_discrepancy(&p, ps, 1e-12).unwrap().value;
            assert!((a - 0.7 * b).abs() < 1e-14);
        }

        let p = random_pointset(2, 5, 3).unwrap();
        let zero = Weights::zeros(2).unwrap();
        assert_eq!(weighted_lp_discrepancy(&p, &zero, PStar::Finite(2.0), 1e-9).unwrap().value, 0.0);
        assert_eq!(weighted_lp_discrepancy(&p, &zero, PStar::Infinity, 1e-9).unwrap().value, 0.0);

        let full = Weights::full_only(2).unwrap();
        let a = weighted_lp_discrepancy(&p, &full, PStar::Finite(2.0), 1e-12).unwrap().value;
        assert!((a - l2_discrepancy(&p)).abs() < 1e-15);

        assert!(weighted_lp_discrepancy(&p, &Weights::zeros(3).unwrap(), PStar::Infinity, 1e-9).is_err());
    }

    #[test]
    fn weighted_scaling_is_exact() {
        let p = random_pointset(2, 6, 8).unwrap();
        let w = Weights::product(&[0.8, 0.3]).unwrap();
        for ps in [PStar::Finite(2.0), PStar::Infinity] {
            let a = weighted_lp_discrepancy(&p, &w, ps, 1e-12).unwrap().value;
            let b = weighted_lp_discrepancy(&p, &w.scaled(4.0).unwrap(), ps, 1e-12).unwrap().value;
            assert!((b - 4.0 * a).abs() < 1e-14);
        }
    }

    #[test]
    fn anchored_uses_reflection() {
        let p = midpoint_1d(6).unwrap();
        for (a, b) in p.reflect().sorted_axis(0).iter().zip(p.sorted_axis(0)) {
            assert!((a - b).abs() < 1e-15);
        }
        let w = Weights::uniform(1, 1.0).unwrap();
        for ps in [PStar::Finite(3.0), PStar::Infinity] {
            let a = anchored_wce(&p, &w, ps, 1e-12).unwrap().value;
            let b = weighted_lp_discrepancy(&p, &w, ps, 1e-12).unwrap().value;
            assert!((a - b).abs() < 1e-14);
        }
        let v = anchored_wce(&one(&[0.25]), &w, PStar::Infinity, 1e-12).unwrap().value;
        assert_eq!(v, 0.75);

        let q = PointSet::new(2, vec![vec![0.0, 0.0]]).unwrap();
        let refl = PointSet::new(2, vec![vec![1.0, 1.0]]).unwrap();
        let w = Weights::uniform(2, 1.0).unwrap();
        let a = anchored_wce(&q, &w, PStar::Finite(2.0), 1e-12).unwrap().value;
        let b = weighted_lp_discrepancy(&refl, &w, PStar::Finite(2.0), 1e-12).unwrap().value;
        assert_eq!(a, b);
    }
}
