//! Brute-force reference computations used to check the main engine.
//!
//! Nothing here shares code with the cell-grid quadrature: integrals use
//! the composite midpoint rule on a uniform tensor grid (or plain Monte
//! Carlo for many coordinates), and the 1D search evaluates every candidate
//! node set with its own closed form.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::wce::kernel;
use crate::{Error, PStar, PointSet, Result, Weights};

/// Largest number of tensor-grid nodes per subset integral.
pub const MAX_ORACLE_NODES: u64 = 1 << 28;

/// Largest subset size integrated on a tensor grid; larger subsets use
/// Monte Carlo.
pub const MAX_TENSOR_DIM: usize = 4;

/// Samples per Monte Carlo subset integral.
pub const MC_SAMPLES: usize = 1 << 18;

/// An oracle value and the standard error of its Monte Carlo part (0 when
/// only tensor grids were used).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleEstimate {
    pub value: f64,
    pub std_error: f64,
}

#[derive(Clone, Copy)]
enum Field {
    Kernel,
    Discrepancy,
}

/// Per-axis factor tables on the midpoint nodes `(g + 1/2)/G`.
struct Tables {
    n: usize,
    grid: usize,
    nodes: Vec<f64>,
    /// `axes[ℓ][g * n + j]`
    axes: Vec<Vec<f64>>,
}

impl Tables {
    fn new(p: &PointSet, grid: usize, field: Field) -> Tables {
        let n = p.len();
        let nodes: Vec<f64> = (0..grid).map(|g| (g as f64 + 0.5) / grid as f64).collect();
        let axes = (0..p.dim())
            .map(|l| {
                let mut a = Vec::with_capacity(grid * n);
                for &t in &nodes {
                    for x in p.points() {
                        a.push(match field {
                            Field::Kernel => kernel(x[l], t),
                            Field::Discrepancy => f64::from(u8::from(x[l] < t)),
                        });
                    }
                }
                a
            })
            .collect();
        Tables { n, grid, nodes, axes }
    }

    /// Sum over all nodes of the remaining axes of `|f|^q`, given partial
    /// products `prev` and partial volume `vol`.
    fn sum_from(&self, level: usize, prev: &[f64], vol: f64, field: Field, q: f64, bufs: &mut [Vec<f64>]) -> f64 {
        let n = self.n;
        let last = level + 1 == self.axes.len();
        let (cur, rest) = bufs.split_first_mut().expect("one buffer per level");
        let mut s = 0.0;
        for g in 0..self.grid {
            let row = &self.axes[level][g * n..(g + 1) * n];
            let v = vol * self.nodes[g];
            if last {
                let dot: f64 = prev.iter().zip(row).map(|(a, b)| a * b).sum();
                s += value(dot / n as f64, v, field).abs().powf(q);
            } else {
                for j in 0..n {
                    cur[j] = prev[j] * row[j];
                }
                s += self.sum_from(level + 1, cur, v, field, q, rest);
            }
        }
        s
    }
}

fn value(mean: f64, vol: f64, field: Field) -> f64 {
    match field {
        Field::Kernel => mean,
        Field::Discrepancy => mean - vol,
    }
}

/// Midpoint-rule tensor quadrature of `∫ |f|^q` on `[0,1]^k`.
fn tensor_integral(p: &PointSet, grid: usize, field: Field, q: f64) -> f64 {
    let k = p.dim();
    let t = Tables::new(p, grid, field);
    let n = t.n;
    let parts: Vec<f64> = (0..grid)
        .into_par_iter()
        .map(|g0| {
            let row = &t.axes[0][g0 * n..(g0 + 1) * n];
            let v = t.nodes[g0];
            if k == 1 {
                let mean = row.iter().sum::<f64>() / n as f64;
                return value(mean, v, field).abs().powf(q);
            }
            let mut bufs = vec![vec![0.0; n]; k - 1];
            t.sum_from(1, row, v, field, q, &mut bufs)
        })
        .collect();
    parts.iter().sum::<f64>() / (grid as f64).powi(k as i32)
}

/// Plain Monte Carlo estimate of `∫ |f|^q` and its standard error.
fn mc_integral(p: &PointSet, field: Field, q: f64, seed: u64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = p.len() as f64;
    let (mut s, mut s2) = (0.0, 0.0);
    let mut t = vec![0.0; p.dim()];
    for _ in 0..MC_SAMPLES {
        t.iter_mut().for_each(|ti| *ti = rng.random::<f64>());
        let vol: f64 = t.iter().product();
        let mean = p
            .points()
            .map(|x| {
                x.iter()
                    .zip(&t)
                    .map(|(&xi, &ti)| match field {
                        Field::Kernel => kernel(xi, ti),
                        Field::Discrepancy => f64::from(u8::from(xi < ti)),
                    })
                    .product::<f64>()
            })
            .sum::<f64>()
            / n;
        let f = value(mean, vol, field).abs().powf(q);
        s += f;
        s2 += f * f;
    }
    let m = MC_SAMPLES as f64;
    let mean = s / m;
    let var = (s2 / m - mean * mean).max(0.0);
    (mean, (var / (m - 1.0)).sqrt())
}

fn check_grid(k: usize, grid: usize) -> Result<()> {
    if grid == 0 {
        return Err(Error::InvalidInput("grid must have at least one point per axis".into()));
    }
    let nodes = (grid as u64).checked_pow(k as u32).unwrap_or(u64::MAX);
    if nodes > MAX_ORACLE_NODES {
        return Err(Error::InvalidInput(format!(
            "{grid}^{k} grid nodes exceed the oracle limit {MAX_ORACLE_NODES}"
        )));
    }
    Ok(())
}

fn integral(p: &PointSet, grid: usize, field: Field, q: f64, seed: u64) -> Result<(f64, f64)> {
    if p.dim() > MAX_TENSOR_DIM {
        return Ok(mc_integral(p, field, q, seed));
    }
    check_grid(p.dim(), grid)?;
    Ok((tensor_integral(p, grid, field, q), 0.0))
}

fn finite_exponent(pstar: PStar) -> Result<f64> {
    pstar
        .finite()
        .ok_or_else(|| Error::InvalidInput("the oracle needs a finite p*".into()))
}

/// Reference value of the worst-case error with `grid` midpoint nodes per
/// axis for subsets of up to four coordinates.
pub fn quadrature_oracle(p: &PointSet, w: &Weights, pstar: PStar, grid: usize) -> Result<OracleEstimate> {
    let q = finite_exponent(pstar)?;
    w.check_matches(p.dim())?;
    let (mut s, mut var) = (0.0, 0.0);
    for (u, g) in w.positive_subsets() {
        let (i, se) = integral(&p.project(u)?, grid, Field::Kernel, q, u64::from(u.mask()))?;
        let gq = g.powf(q);
        s += gq * i;
        var += (gq * se).powi(2);
    }
    Ok(root(s, var.sqrt(), q))
}

/// Reference value of `‖Δ_P‖_{L_{p*}}` by the same midpoint/Monte Carlo
/// scheme.
pub fn discrepancy_oracle(p: &PointSet, pstar: PStar, grid: usize) -> Result<OracleEstimate> {
    let q = finite_exponent(pstar)?;
    let (i, se) = integral(p, grid, Field::Discrepancy, q, 0)?;
    Ok(root(i, se, q))
}

fn root(s: f64, se: f64, q: f64) -> OracleEstimate {
    let value = s.powf(1.0 / q);
    let std_error = if se == 0.0 { 0.0 } else { se / (q * s.powf(1.0 - 1.0 / q)) };
    OracleEstimate { value, std_error }
}

/// Outcome of [`optimality_search_1d`].
#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub points: PointSet,
    pub error: f64,
}

/// `L_{p*}` discrepancy of sorted 1D nodes, evaluated interval by interval.
fn error_1d(xs: &[f64], pstar: PStar) -> f64 {
    let k = xs.len();
    let edge = |l: usize| match l {
        0 => 0.0,
        l if l > k => 1.0,
        l => xs[l - 1],
    };
    match pstar {
        PStar::Infinity => {
            let mut best = 0.0f64;
            for l in 0..=k {
                let (a, b) = (edge(l), edge(l + 1));
                if b > a {
                    let c = l as f64 / k as f64;
                    best = best.max((c - a).abs()).max((c - b).abs());
                }
            }
            best
        }
        PStar::Finite(q) => {
            let mut s = 0.0;
            for l in 0..=k {
                let (a, b) = (edge(l), edge(l + 1));
                let c = l as f64 / k as f64;
                s += if c <= a {
                    (b - c).powf(q + 1.0) - (a - c).powf(q + 1.0)
                } else if c >= b {
                    (c - a).powf(q + 1.0) - (c - b).powf(q + 1.0)
                } else {
                    (c - a).powf(q + 1.0) + (b - c).powf(q + 1.0)
                };
            }
            (s / (q + 1.0)).powf(1.0 / q)
        }
    }
}

/// Best candidate among tuples extending `prefix` (non-decreasing grid
/// indices), in lexicographic order with strict improvement.
fn search_from(prefix: &mut Vec<usize>, k: usize, res: usize, pstar: PStar, xs: &mut Vec<f64>, best: &mut Option<(f64, Vec<usize>)>) {
    if prefix.len() == k {
        xs.clear();
        xs.extend(prefix.iter().map(|&i| i as f64 / res as f64));
        let e = error_1d(xs, pstar);
        if best.as_ref().is_none_or(|(b, _)| e < *b) {
            *best = Some((e, prefix.clone()));
        }
        return;
    }
    let start = *prefix.last().expect("nonempty prefix");
    for i in start..=res {
        prefix.push(i);
        search_from(prefix, k, res, pstar, xs, best);
        prefix.pop();
    }
}

/// Exhaustive search over all node sets of at most `n ≤ 3` points on the
/// grid `{0, 1/res, …, 1}` for the smallest 1D worst-case error (γ = 1).
///
/// Ties go to the smaller node count, then the lexicographically smallest
/// tuple.
pub fn optimality_search_1d(n: usize, pstar: PStar, resolution: usize) -> Result<SearchResult> {
    if !(1..=3).contains(&n) {
        return Err(Error::InvalidInput(format!("search supports 1 <= n <= 3, got {n}")));
    }
    if resolution < 64 {
        return Err(Error::InvalidInput(format!("resolution must be >= 64, got {resolution}")));
    }
    let parts: Vec<(usize, usize)> = (1..=n)
        .flat_map(|k| (0..=resolution).map(move |i| (k, i)))
        .collect();
    let bests: Vec<Option<(f64, Vec<usize>)>> = parts
        .par_iter()
        .map(|&(k, i)| {
            let mut best = None;
            let mut prefix = vec![i];
            let mut xs = Vec::with_capacity(k);
            search_from(&mut prefix, k, resolution, pstar, &mut xs, &mut best);
            best
        })
        .collect();
    let mut best: Option<(f64, Vec<usize>)> = None;
    for b in bests.into_iter().flatten() {
        if best.as_ref().is_none_or(|(e, _)| b.0 < *e) {
            best = Some(b);
        }
    }
    let (error, idx) = best.expect("at least one candidate");
    let xs: Vec<f64> = idx.iter().map(|&i| i as f64 / resolution as f64).collect();
    Ok(SearchResult {
        points: PointSet::from_1d(&xs)?,
        error,
    })
}

/// Whether each interval `[(j−1)/n, j/n)`, `j = 1..=n`, holds exactly one
/// node of the 1D set and no node lies outside them.
pub fn one_point_per_interval_check(set: &PointSet, n: usize) -> bool {
    if set.dim() != 1 || n == 0 || set.len() != n {
        return false;
    }
    let mut hits = vec![0usize; n];
    for x in set.points() {
        let x = x[0];
        match (1..=n).find(|&j| (j - 1) as f64 / n as f64 <= x && x < j as f64 / n as f64) {
            Some(j) => hits[j - 1] += 1,
            None => return false,
        }
    }
    hits.iter().all(|&h| h == 1)
}

/// The 1D worst-case error of a node set from the interval formula, exposed
/// for cross-checks.
pub fn error_1d_reference(set: &PointSet, pstar: PStar) -> Result<f64> {
    if set.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: set.dim(),
        });
    }
    Ok(error_1d(&set.sorted_axis(0), pstar))
}
