//! Upper bounds through modified weights, the lower-bound constants
//! `T_d(ℓ)`, two-dimensional sandwich bounds and the 1D embedding norm.

use num_rational::Ratio;

use crate::discrepancy::{lp_discrepancy, weighted_lp_discrepancy};
use crate::pointsets::is_projection_regular;
use crate::wce::wce;
use crate::{Certified, Error, ErrorReport, PStar, PointSet, Result, SubsetId, Weights};

/// Largest `d` for which `(d!)²` fits the exact integer arithmetic.
pub const MAX_T_DIM: u32 = 20;

/// Modified weights `γ̃` for which the worst-case error is bounded by the
/// `γ̃`-weighted discrepancy.
///
/// For finite `p*`,
/// `γ̃_u = ((p*+1)^{|u|} Σ_{v ⊇ u, γ_v > 0} γ_v^{p*} (2^{p*−1}/(p*+1))^{|v|})^{1/p*}`;
/// for `p* = ∞`, `γ̃_u = 2^{|u|} γ_u`. `γ̃_∅` is 0.
pub fn tilde_weights(w: &Weights, pstar: PStar) -> Result<Weights> {
    let d = w.dim();
    let full = 1usize << d;
    let mut out = match pstar {
        PStar::Infinity => Weights::from_fn(d, |u| 2f64.powi(u.len() as i32) * w.get(u)),
        PStar::Finite(q) => {
            let c = 2f64.powf(q - 1.0) / (q + 1.0);
            let mut f: Vec<f64> = (0..full)
                .map(|m| {
                    let v = SubsetId::from_mask(m as u32);
                    let g = w.get(v);
                    if v.is_empty() || g == 0.0 {
                        0.0
                    } else {
                        g.powf(q) * c.powi(v.len() as i32)
                    }
                })
                .collect();
            // superset sums, one coordinate at a time
            for i in 0..d {
                let bit = 1usize << i;
                for m in 0..full {
                    if m & bit == 0 {
                        f[m] += f[m | bit];
                    }
                }
            }
            Weights::from_fn(d, |u| ((q + 1.0).powi(u.len() as i32) * f[u.mask() as usize]).powf(1.0 / q))
        }
    }?;
    out.set(SubsetId::EMPTY, 0.0)?;
    Ok(out)
}

/// `γ̃` for product weights `γ_u = Π_{j∈u} γ_j`:
/// `(Π_{j∈u} 2γ_j / 2^{1/p*}) Π_{j∉u} (1 + 2^{p*−1} γ_j^{p*}/(p*+1))^{1/p*}`.
pub fn tilde_weights_product(coord_weights: &[f64], pstar: PStar) -> Result<Weights> {
    let d = coord_weights.len();
    let mut out = match pstar {
        PStar::Infinity => Weights::from_fn(d, |u| u.indices().map(|j| 2.0 * coord_weights[j]).product()),
        PStar::Finite(q) => {
            let inside = |g: f64| 2.0 * g / 2f64.powf(1.0 / q);
            let outside = |g: f64| (1.0 + 2f64.powf(q - 1.0) * g.powf(q) / (q + 1.0)).powf(1.0 / q);
            Weights::from_fn(d, |u| {
                (0..d)
                    .map(|j| {
                        if u.contains(j) {
                            inside(coord_weights[j])
                        } else {
                            outside(coord_weights[j])
                        }
                    })
                    .product()
            })
        }
    }?;
    out.set(SubsetId::EMPTY, 0.0)?;
    Ok(out)
}

/// The `γ̃`-weighted discrepancy of `p`, an upper bound on `wce(p, w, p*)`.
pub fn upper_bound_cor1(p: &PointSet, w: &Weights, pstar: PStar, tol: f64) -> Result<Certified> {
    w.check_matches(p.dim())?;
    weighted_lp_discrepancy(p, &tilde_weights(w, pstar)?, pstar, tol)
}

fn factorial(k: u32) -> Result<u128> {
    (1..=u128::from(k))
        .try_fold(1u128, |acc, i| acc.checked_mul(i))
        .ok_or_else(|| Error::InvalidInput(format!("{k}! overflows")))
}

fn check_t_dim(d: u32) -> Result<()> {
    if d > MAX_T_DIM {
        return Err(Error::InvalidInput(format!(
            "d = {d} exceeds the exact-arithmetic limit {MAX_T_DIM}"
        )));
    }
    Ok(())
}

/// `T_d(ℓ) = (ℓ!)² / (d!)²` as an exact fraction.
pub fn t_sequence(d: u32, ell: u32) -> Result<Ratio<u128>> {
    check_t_dim(d)?;
    if ell < 1 || ell > d {
        return Err(Error::InvalidInput(format!("need 1 <= l <= d, got l = {ell}, d = {d}")));
    }
    let (a, b) = (factorial(ell)?, factorial(d)?);
    Ok(Ratio::new(a * a, b * b))
}

/// Whether `T_d(ℓ) > Σ_{k=1}^{ℓ−1} C(ℓ,k) T_d(k)` for every `ℓ = 2..=d`.
///
/// Multiplying through by `(d!)²` this is `Σ_k C(ℓ,k) (k!)² < (ℓ!)²`, which
/// is evaluated in exact integer arithmetic.
pub fn t_inequality_holds(d: u32) -> Result<bool> {
    check_t_dim(d)?;
    if d < 2 {
        return Err(Error::InvalidInput(format!("need d >= 2, got {d}")));
    }
    let overflow = || Error::InvalidInput("overflow in exact arithmetic".into());
    for ell in 2..=d {
        let lf = factorial(ell)?;
        let rhs = lf.checked_mul(lf).ok_or_else(overflow)?;
        let mut binom = 1u128;
        let mut s = 0u128;
        for k in 1..ell {
            binom = binom * u128::from(ell - k + 1) / u128::from(k);
            let kf = factorial(k)?;
            let term = binom
                .checked_mul(kf)
                .and_then(|x| x.checked_mul(kf))
                .ok_or_else(overflow)?;
            s = s.checked_add(term).ok_or_else(overflow)?;
        }
        if s >= rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The three numbers of the 2D sandwich for a projection-regular set.
#[derive(Debug, Clone, PartialEq)]
pub struct Sandwich {
    /// `γ_{12} (L_{p*}(P) − 2^{p*+1}/((p*+1)² n))`; may be negative.
    pub lower_proxy: Certified,
    pub upper: Certified,
    pub wce: ErrorReport,
    /// `L_{p*}(P)` of the full set.
    pub discrepancy: Certified,
}

/// Explicit upper bound and constant-free lower proxy for the worst-case
/// error of a projection-regular 2D set, with the error itself.
pub fn sandwich_2d(p: &PointSet, w: &Weights, pstar: PStar, tol: f64) -> Result<Sandwich> {
    let q = pstar
        .finite()
        .ok_or_else(|| Error::InvalidInput("the 2D sandwich needs a finite p*".into()))?;
    if p.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: p.dim(),
        });
    }
    w.check_matches(2)?;
    if !is_projection_regular(p)? {
        return Err(Error::InvalidInput("point set is not projection regular".into()));
    }
    let n = p.len() as f64;
    let g1 = w.get(SubsetId::from_mask(0b01));
    let g2 = w.get(SubsetId::from_mask(0b10));
    let g12 = w.get(SubsetId::from_mask(0b11));
    let disc = lp_discrepancy(p, pstar, tol)?;
    let upper_at = |l: f64| {
        let inner = (g1.powf(q) + g2.powf(q)) / (q + 1.0)
            + 3f64.powf(q - 1.0) * g12.powf(q) * (2.0 / (q + 1.0).powi(2) + (n * l).powf(q));
        inner.powf(1.0 / q) / n
    };
    let upper = upper_at(disc.value);
    let g_bound = 2f64.powf(q + 1.0) / ((q + 1.0).powi(2) * n);
    Ok(Sandwich {
        lower_proxy: Certified {
            value: g12 * (disc.value - g_bound),
            tol: g12 * disc.tol,
        },
        upper: Certified {
            value: upper,
            tol: upper_at(disc.value + disc.tol) - upper,
        },
        wce: wce(p, w, pstar, tol)?,
        discrepancy: disc,
    })
}

/// Norm of the embedding between the 1D ANOVA and anchored spaces for
/// `p = 2`: `(1 + γ/√3 (√(1 + γ²/12) + γ/√12))^{1/2}`.
pub fn embedding_norm_1d_p2(gamma: f64) -> Result<f64> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidInput(format!("gamma must be positive, got {gamma}")));
    }
    let r12 = 12f64.sqrt();
    Ok((1.0 + gamma / 3f64.sqrt() * ((1.0 + gamma * gamma / 12.0).sqrt() + gamma / r12)).sqrt())
}
