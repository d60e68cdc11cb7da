//! The piecewise structure shared by the local discrepancy and the kernel
//! sums.
//!
//! Sorting the distinct coordinates of a point set (plus 0 and 1) on every
//! axis cuts `[0,1]^k` into boxes. Inside an open box the count
//! `|{j : x_j ∈ [0,t)}|` is constant, and so is every projected count, which
//! makes both `Δ_P(t)` and `Σ_j Π_i K(x_{j,i}, t_i)` multilinear polynomials
//! in `t` there. Suprema are then attained at box corners and `|·|^p` can be
//! integrated box by box.

use rayon::prelude::*;

use crate::quadrature::{adaptive, gl8, pow_nonneg, Estimate};
use crate::{Error, PointSet, Result};

/// Upper limit on the number of boxes of a grid.
pub(crate) const MAX_CELLS: usize = 1 << 24;

/// Which multilinear function is represented on each box.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Integrand {
    /// `Δ_P(t)`.
    LocalDiscrepancy,
    /// `(1/n) Σ_j Π_i (t_i - 1[x_{j,i} < t_i])`.
    ScaledKernelSum,
}

/// Breakpoint grid with inclusive prefix counts.
#[derive(Debug, Clone)]
pub(crate) struct CellGrid {
    axes: Vec<Vec<f64>>,
    prefix: Vec<u32>,
    strides: Vec<usize>,
    n: usize,
}

impl CellGrid {
    pub fn new(p: &PointSet) -> Result<Self> {
        let k = p.dim();
        if k > 24 {
            return Err(Error::InvalidInput(format!(
                "cell grids need dimension <= 24, got {k}"
            )));
        }
        let axes: Vec<Vec<f64>> = (0..k)
            .map(|i| {
                let mut v = p.sorted_axis(i);
                v.push(0.0);
                v.push(1.0);
                v.sort_by(f64::total_cmp);
                v.dedup();
                v
            })
            .collect();
        let cells: u128 = axes.iter().map(|a| (a.len() - 1) as u128).product();
        let nodes: u128 = axes.iter().map(|a| a.len() as u128).product();
        if cells > MAX_CELLS as u128 || nodes > 2 * MAX_CELLS as u128 {
            return Err(Error::TooManyCells {
                cells,
                limit: MAX_CELLS,
            });
        }
        let mut strides = vec![1usize; k];
        for i in 1..k {
            strides[i] = strides[i - 1] * axes[i - 1].len();
        }
        let mut prefix = vec![0u32; nodes as usize];
        for x in p.points() {
            let flat: usize = (0..k)
                .map(|i| {
                    let pos = axes[i]
                        .binary_search_by(|b| b.total_cmp(&x[i]))
                        .expect("coordinate is a breakpoint");
                    pos * strides[i]
                })
                .sum();
            prefix[flat] += 1;
        }
        // running sums along each axis in turn give inclusive prefix counts
        for i in 0..k {
            let len = axes[i].len();
            let stride = strides[i];
            for flat in 0..prefix.len() {
                let pos = (flat / stride) % len;
                if pos > 0 {
                    prefix[flat] += prefix[flat - stride];
                }
            }
        }
        Ok(CellGrid {
            axes,
            prefix,
            strides,
            n: p.len(),
        })
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    #[cfg(test)]
    pub fn axes(&self) -> &[Vec<f64>] {
        &self.axes
    }

    #[cfg(test)]
    pub fn num_cells(&self) -> usize {
        self.axes.iter().map(|a| a.len() - 1).product()
    }

    /// Number of points with `x_i ≤ axes[i][idx[i]]` for every axis `i` in
    /// the bit set `constrained`; other axes are unconstrained.
    pub fn count(&self, idx: &[usize], constrained: u32) -> u32 {
        let flat: usize = (0..self.dim())
            .map(|i| {
                let pos = if constrained & (1 << i) != 0 {
                    idx[i]
                } else {
                    self.axes[i].len() - 1
                };
                pos * self.strides[i]
            })
            .sum();
        self.prefix[flat]
    }

    /// Coefficients (monomial basis, bit `i` of the index ↔ factor `t_i`) of
    /// the integrand on the box with lower-corner indices `idx`.
    ///
    /// For `t` in the open box, `x_{j,i} < t_i` iff `x_{j,i} ≤ lo_i`, so the
    /// counts are read at the lower corner.
    pub fn cell_poly(&self, kind: Integrand, idx: &[usize], out: &mut [f64]) {
        let k = self.dim();
        let full = (1u32 << k) - 1;
        let n = self.n as f64;
        match kind {
            Integrand::LocalDiscrepancy => {
                out.iter_mut().for_each(|c| *c = 0.0);
                out[0] = f64::from(self.count(idx, full)) / n;
                out[full as usize] -= 1.0;
            }
            Integrand::ScaledKernelSum => {
                // Σ_j Π_i (t_i - b_{j,i}) = Σ_S t^S (-1)^{k-|S|} #{j : b_{j,i} = 1 ∀ i ∉ S}
                for s in 0..=full {
                    let comp = full & !s;
                    let cnt = f64::from(self.count(idx, comp));
                    let sign = if (k - s.count_ones() as usize) % 2 == 0 {
                        1.0
                    } else {
                        -1.0
                    };
                    out[s as usize] = sign * cnt / n;
                }
            }
        }
    }

    /// Runs `f` on every box of the slab with first-axis index `i0`, in
    /// odometer order over the remaining axes.
    fn for_each_in_slab(&self, i0: usize, mut f: impl FnMut(&[usize], &[f64], &[f64])) {
        let k = self.dim();
        let mut idx = vec![0usize; k];
        idx[0] = i0;
        let mut lo: Vec<f64> = (0..k).map(|i| self.axes[i][idx[i]]).collect();
        let mut hi: Vec<f64> = (0..k).map(|i| self.axes[i][idx[i] + 1]).collect();
        loop {
            f(&idx, &lo, &hi);
            let mut axis = 1;
            loop {
                if axis == k {
                    return;
                }
                idx[axis] += 1;
                if idx[axis] + 1 < self.axes[axis].len() {
                    lo[axis] = self.axes[axis][idx[axis]];
                    hi[axis] = self.axes[axis][idx[axis] + 1];
                    break;
                }
                idx[axis] = 0;
                lo[axis] = self.axes[axis][0];
                hi[axis] = self.axes[axis][1];
                axis += 1;
            }
        }
    }

    /// `sup |f|` over `[0,1]^k` including all one-sided limits at
    /// breakpoints: the maximum of `|f|` over the corners of every closed box
    /// with that box's interior counts.
    pub fn sup_abs(&self, kind: Integrand) -> f64 {
        let slabs = self.axes[0].len() - 1;
        let size = 1usize << self.dim();
        (0..slabs)
            .into_par_iter()
            .map(|i0| {
                let mut c = vec![0.0; size];
                let mut best = 0.0f64;
                self.for_each_in_slab(i0, |idx, lo, hi| {
                    self.cell_poly(kind, idx, &mut c);
                    best = best.max(corner_sup_abs(&c, lo, hi));
                });
                best
            })
            .collect::<Vec<f64>>()
            .into_iter()
            .fold(0.0, f64::max)
    }

    /// `∫_{[0,1]^k} |f|^p` with total estimated error at most `tol` (each box
    /// gets a share proportional to its volume).
    pub fn power_integral(&self, kind: Integrand, p: f64, tol: f64) -> Estimate {
        let slabs = self.axes[0].len() - 1;
        let size = 1usize << self.dim();
        let parts: Vec<Estimate> = (0..slabs)
            .into_par_iter()
            .map(|i0| {
                let mut c = vec![0.0; size];
                let mut acc = Estimate::ZERO;
                self.for_each_in_slab(i0, |idx, lo, hi| {
                    self.cell_poly(kind, idx, &mut c);
                    let vol: f64 = lo.iter().zip(hi).map(|(a, b)| b - a).product();
                    acc += integrate_abs_pow(&c, lo, hi, p, tol * vol);
                });
                acc
            })
            .collect();
        let mut total = Estimate::ZERO;
        for e in parts {
            total += e;
        }
        total
    }
}

/// Value of the multilinear polynomial `c` at `t`.
pub(crate) fn eval(c: &[f64], t: &[f64]) -> f64 {
    let mut mono = vec![1.0; c.len()];
    let mut sum = c[0];
    for s in 1..c.len() {
        let low = s.trailing_zeros() as usize;
        mono[s] = mono[s & (s - 1)] * t[low];
        sum += c[s] * mono[s];
    }
    sum
}

/// Maximum of `|c|` over the corners of the box (equal to the maximum over
/// the closed box, `c` being affine in every variable).
pub(crate) fn corner_sup_abs(c: &[f64], lo: &[f64], hi: &[f64]) -> f64 {
    let k = lo.len();
    let mut t = lo.to_vec();
    let mut best = 0.0f64;
    for corner in 0..(1usize << k) {
        for i in 0..k {
            t[i] = if corner & (1 << i) != 0 { hi[i] } else { lo[i] };
        }
        best = best.max(eval(c, &t).abs());
    }
    best
}

/// Substitutes `t_0 = s`, leaving a polynomial in the remaining variables.
fn restrict_first(c: &[f64], s: f64) -> Vec<f64> {
    (0..c.len() / 2)
        .map(|m| c[m << 1] + s * c[(m << 1) | 1])
        .collect()
}

/// `∫_lo^hi |a + b s|^p ds` in closed form.
pub(crate) fn affine_abs_pow_integral(a: f64, b: f64, lo: f64, hi: f64, p: f64) -> f64 {
    let va = a + b * lo;
    let vb = a + b * hi;
    let scale = va.abs().max(vb.abs());
    if scale == 0.0 {
        return 0.0;
    }
    if (vb - va).abs() <= 1e-3 * scale {
        // nearly constant and sign-definite: the 8-point rule is exact to
        // rounding while the closed form would cancel
        return gl8().integrate(lo, hi, |s| pow_nonneg((a + b * s).abs(), p));
    }
    let q = p + 1.0;
    let (fa, fb) = (pow_nonneg(va.abs(), q), pow_nonneg(vb.abs(), q));
    if (va < 0.0) != (vb < 0.0) && va != 0.0 && vb != 0.0 {
        (fa + fb) / (q * b.abs())
    } else {
        (fb - fa).abs() / (q * b.abs())
    }
}

/// True when `|c|^p` is a polynomial of degree ≤ 15 per variable on the
/// box, so an 8-point tensor rule is exact.
fn tensor_rule_exact(c: &[f64], lo: &[f64], hi: &[f64], p: f64) -> bool {
    if p.fract() != 0.0 || p > 15.0 || lo.len() > 4 {
        return false;
    }
    if p as u32 % 2 == 0 {
        return true;
    }
    // odd power: need a fixed sign, decided by the corners
    let k = lo.len();
    let mut t = lo.to_vec();
    let (mut pos, mut neg) = (false, false);
    for corner in 0..(1usize << k) {
        for i in 0..k {
            t[i] = if corner & (1 << i) != 0 { hi[i] } else { lo[i] };
        }
        let v = eval(c, &t);
        pos |= v > 0.0;
        neg |= v < 0.0;
    }
    !(pos && neg)
}

fn tensor_gl8(c: &[f64], lo: &[f64], hi: &[f64], p: f64) -> f64 {
    if lo.len() == 1 {
        return gl8().integrate(lo[0], hi[0], |s| pow_nonneg((c[0] + c[1] * s).abs(), p));
    }
    gl8().integrate(lo[0], hi[0], |s| tensor_gl8(&restrict_first(c, s), &lo[1..], &hi[1..], p))
}

/// Real roots in `(lo, hi)` of `a + b t`.
fn push_linear_root(a: f64, b: f64, lo: f64, hi: f64, out: &mut Vec<f64>) {
    if b != 0.0 {
        let r = -a / b;
        if r > lo && r < hi {
            out.push(r);
        }
    }
}

/// `∫_box |c(t)|^p dt` for a multilinear `c` over the box `[lo, hi]`.
///
/// The last variable is integrated in closed form (the integrand is affine
/// in it). With two variables the remaining integrand is smooth between the
/// roots of the two edge functions, which are split off exactly; with more
/// variables the first one is handled by adaptive quadrature around a
/// recursive inner integral.
pub(crate) fn integrate_abs_pow(c: &[f64], lo: &[f64], hi: &[f64], p: f64, tol: f64) -> Estimate {
    let k = lo.len();
    match k {
        0 => Estimate::exact(pow_nonneg(c[0].abs(), p)),
        1 => Estimate::exact(affine_abs_pow_integral(c[0], c[1], lo[0], hi[0], p)),
        _ if tensor_rule_exact(c, lo, hi, p) => Estimate::exact(tensor_gl8(c, lo, hi, p)),
        2 => {
            // c = (c0 + c1 t0) + (c2 + c3 t0) t1
            let (c0, c1, c2, c3) = (c[0], c[1], c[2], c[3]);
            let (l1, h1) = (lo[1], hi[1]);
            let mut cuts = vec![lo[0]];
            push_linear_root(c0 + c2 * l1, c1 + c3 * l1, lo[0], hi[0], &mut cuts);
            push_linear_root(c0 + c2 * h1, c1 + c3 * h1, lo[0], hi[0], &mut cuts);
            cuts.push(hi[0]);
            cuts.sort_by(f64::total_cmp);
            let width = hi[0] - lo[0];
            let mut acc = Estimate {
                exact: false,
                ..Estimate::ZERO
            };
            for w in cuts.windows(2) {
                let piece_tol = tol * (w[1] - w[0]) / width;
                acc += adaptive(
                    |t0| Estimate::exact(affine_abs_pow_integral(c0 + c1 * t0, c2 + c3 * t0, l1, h1, p)),
                    w[0],
                    w[1],
                    piece_tol,
                );
            }
            acc
        }
        _ => {
            let width = hi[0] - lo[0];
            let inner_tol = 0.5 * tol / width;
            adaptive(
                |t0| integrate_abs_pow(&restrict_first(c, t0), &lo[1..], &hi[1..], p, inner_tol),
                lo[0],
                hi[0],
                0.5 * tol,
            )
        }
    }
}
