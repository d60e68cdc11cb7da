//! Gauss–Legendre rules, an adaptive 8/16-point integrator and compensated
//! summation.

use std::ops::AddAssign;
use std::sync::OnceLock;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug)]
pub(crate) struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Newton iteration on `P_n` from the Chebyshev-like initial guesses.
    fn new(n: usize) -> Self {
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    /// `Σ w_i f(x_i)` mapped to `[a, b]`.
    pub fn integrate(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let h = 0.5 * (b - a);
        let c = 0.5 * (a + b);
        h * self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(c + h * x))
            .sum::<f64>()
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

pub(crate) fn gl8() -> &'static GaussLegendre {
    static R: OnceLock<GaussLegendre> = OnceLock::new();
    R.get_or_init(|| GaussLegendre::new(8))
}

pub(crate) fn gl16() -> &'static GaussLegendre {
    static R: OnceLock<GaussLegendre> = OnceLock::new();
    R.get_or_init(|| GaussLegendre::new(16))
}

/// An integral estimate with its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub(crate) struct Estimate {
    pub value: f64,
    pub error: f64,
    /// Some part hit the subdivision limit above its tolerance.
    pub exhausted: bool,
    /// Every part came from a closed form or an exact rule.
    pub exact: bool,
}

impl Estimate {
    pub const ZERO: Estimate = Estimate {
        value: 0.0,
        error: 0.0,
        exhausted: false,
        exact: true,
    };

    pub fn exact(value: f64) -> Self {
        Estimate { value, ..Self::ZERO }
    }
}

impl AddAssign for Estimate {
    fn add_assign(&mut self, rhs: Estimate) {
        self.value += rhs.value;
        self.error += rhs.error;
        self.exhausted |= rhs.exhausted;
        self.exact &= rhs.exact;
    }
}

/// Deepest bisection level of [`adaptive`].
pub(crate) const MAX_DEPTH: u32 = 40;

/// Adaptive Gauss–Legendre integration of `f` over `[a, b]`.
///
/// On each interval the 8- and 16-point rules are compared; the interval is
/// accepted when they differ by at most its share of `tol` (proportional to
/// length), otherwise it is bisected. `f` may itself return an estimate with
/// an error; those errors are integrated into the result.
pub(crate) fn adaptive(mut f: impl FnMut(f64) -> Estimate, a: f64, b: f64, tol: f64) -> Estimate {
    let mut out = Estimate {
        exact: false,
        ..Estimate::ZERO
    };
    if b <= a {
        return out;
    }
    let density = tol / (b - a);
    // explicit stack keeps the left-to-right summation order
    let mut stack = vec![(a, b, 0u32)];
    while let Some((lo, hi, depth)) = stack.pop() {
        let low = gl8().integrate(lo, hi, |x| f(x).value);
        let h = 0.5 * (hi - lo);
        let c = 0.5 * (hi + lo);
        let (mut high, mut inner_err, mut noise) = (0.0, 0.0, 0.0);
        let mut exhausted = false;
        let rule = gl16();
        for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
            let e = f(c + h * x);
            high += w * e.value;
            inner_err += w * e.error;
            noise += w * e.value.abs();
            exhausted |= e.exhausted;
        }
        high *= h;
        inner_err *= h;
        noise *= h * 64.0 * f64::EPSILON;
        let diff = (high - low).abs();
        let local_tol = density * (hi - lo);
        if diff <= local_tol.max(noise) || depth >= MAX_DEPTH {
            out.value += high;
            out.error += diff + inner_err;
            out.exhausted |= exhausted || diff > local_tol.max(noise);
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((mid, hi, depth + 1));
            stack.push((lo, mid, depth + 1));
        }
    }
    out
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// `x^p` for `x ≥ 0`, using integer powers when `p` is integral.
pub(crate) fn pow_nonneg(x: f64, p: f64) -> f64 {
    if p.fract() == 0.0 && p <= 64.0 {
        x.powi(p as i32)
    } else {
        x.powf(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rules_integrate_polynomials_exactly() {
        for (rule, deg) in [(gl8(), 15), (gl16(), 31)] {
            assert!((rule.weights.iter().sum::<f64>() - 2.0).abs() < 1e-14);
            for k in 0..=deg {
                let got = rule.integrate(0.0, 1.0, |x| x.powi(k));
                let want = 1.0 / (k as f64 + 1.0);
                assert!((got - want).abs() < 1e-14, "degree {k}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn nodes_are_sorted_and_symmetric() {
        let r = gl16();
        for w in r.nodes.windows(2) {
            assert!(w[0] < w[1]);
        }
        for i in 0..16 {
            assert!((r.nodes[i] + r.nodes[15 - i]).abs() < 1e-15);
        }
    }

    #[test]
    fn adaptive_handles_kinks() {
        // ∫_0^1 |t - 1/3|^{1.5} dt
        let want = ((1.0f64 / 3.0).powf(2.5) + (2.0f64 / 3.0).powf(2.5)) / 2.5;
        let e = adaptive(|t| Estimate::exact((t - 1.0 / 3.0).abs().powf(1.5)), 0.0, 1.0, 1e-12);
        assert!(!e.exhausted);
        assert!((e.value - want).abs() < 1e-11, "{} vs {want}", e.value);
        assert!(e.error < 1e-11);
    }

    #[test]
    fn compensated_sum_recovers_cancellation() {
        let mut s = CompensatedSum::default();
        for x in [1e16, 1.0, -1e16, 1.0] {
            s.add(x);
        }
        assert_eq!(s.value(), 2.0);
    }
}
