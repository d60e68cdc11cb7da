//! Node-set constructions: the composite midpoint rule, digitally shifted
//! Hammersley sets and seeded uniform random sets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, PointSet, Result};

/// Nodes `(2j - 1) / (2n)`, `j = 1..=n`, of the composite midpoint rule.
pub fn midpoint_1d(n: usize) -> Result<PointSet> {
    if n == 0 {
        return Err(Error::InvalidInput("midpoint rule needs n >= 1".into()));
    }
    let denom = 2.0 * n as f64;
    let xs: Vec<f64> = (1..=n).map(|j| (2 * j - 1) as f64 / denom).collect();
    PointSet::from_1d(&xs)
}

/// Largest `m` accepted by [`hammersley_2d`]; `2^m` points must fit in
/// memory and numerators must stay exact in an `f64` mantissa.
pub const MAX_HAMMERSLEY_M: usize = 26;

/// The digitally shifted Hammersley set `R_{m,σ}` with `2^m` points.
///
/// For digits `t_1, ..., t_m ∈ {0,1}` the point is
///
/// ```text
/// ( t_m/2 + t_{m-1}/4 + ... + t_1/2^m ,  (t_1⊕σ_1)/2 + ... + (t_m⊕σ_m)/2^m )
/// ```
///
/// Points are enumerated by the integer `i = t_1 2^{m-1} + ... + t_m`, so
/// the second coordinate is `(i XOR s) / 2^m` with `s` the shift read the
/// same way and the first is the bit reversal of `i` over `2^m`. All values
/// are dyadic and exact. `σ = 0` is the classical Hammersley set.
pub fn hammersley_2d(m: usize, sigma: &[bool]) -> Result<PointSet> {
    if sigma.len() != m {
        return Err(Error::InvalidInput(format!(
            "shift has {} bits, expected m = {m}",
            sigma.len()
        )));
    }
    if m > MAX_HAMMERSLEY_M {
        return Err(Error::InvalidInput(format!(
            "m = {m} exceeds the supported maximum {MAX_HAMMERSLEY_M}"
        )));
    }
    let n = 1u64 << m;
    let shift = sigma
        .iter()
        .fold(0u64, |acc, &b| (acc << 1) | u64::from(b));
    let scale = 1.0 / n as f64;
    let mut coords = Vec::with_capacity(2 * n as usize);
    for i in 0..n {
        let x = if m == 0 { 0 } else { i.reverse_bits() >> (64 - m) };
        let y = i ^ shift;
        coords.push(x as f64 * scale);
        coords.push(y as f64 * scale);
    }
    PointSet::from_flat(2, coords)
}

/// A shift with exactly `⌊m/2⌋` zeros: zeros first, then ones.
pub fn balanced_sigma(m: usize) -> Vec<bool> {
    let zeros = m / 2;
    (0..m).map(|k| k >= zeros).collect()
}

/// Parses a shift written as a bit string such as `"011"`.
pub fn parse_sigma(s: &str) -> Result<Vec<bool>> {
    s.trim()
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(Error::InvalidInput(format!("bad shift digit {c:?} in {s:?}"))),
        })
        .collect()
}

/// True iff `P` is two-dimensional and both coordinate projections equal
/// `{0, 1/n, ..., (n-1)/n}` as multisets. Comparison is exact.
pub fn is_projection_regular(p: &PointSet) -> Result<bool> {
    if p.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: p.dim(),
        });
    }
    let n = p.len();
    let on_grid = |axis: usize| {
        p.sorted_axis(axis)
            .iter()
            .enumerate()
            // j/n is correctly rounded, so this is exact for dyadic grids and
            // matches any input written with round-trip precision.
            .all(|(j, &x)| x == j as f64 / n as f64)
    };
    Ok(on_grid(0) && on_grid(1))
}

/// `n` pseudo-random points, uniform on `[0,1)^d`, from ChaCha8 seeded
/// with `seed`. The stream is reproducible across platforms.
pub fn random_pointset(d: usize, n: usize, seed: u64) -> Result<PointSet> {
    if d == 0 || n == 0 {
        return Err(Error::InvalidInput("random set needs d >= 1 and n >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coords = (0..d * n).map(|_| rng.random::<f64>()).collect();
    PointSet::from_flat(d, coords)
}

/// Like [`random_pointset`] but with every coordinate rounded down to the
/// dyadic grid `k / 2^bits`.
pub fn random_dyadic_pointset(d: usize, n: usize, bits: u32, seed: u64) -> Result<PointSet> {
    let p = random_pointset(d, n, seed)?;
    let scale = (1u64 << bits) as f64;
    let coords = p.as_flat().iter().map(|x| (x * scale).floor() / scale).collect();
    PointSet::from_flat(d, coords)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn midpoint_values() {
        assert_eq!(midpoint_1d(1).unwrap().as_flat(), &[0.5]);
        assert_eq!(midpoint_1d(2).unwrap().as_flat(), &[0.25, 0.75]);
        assert_eq!(midpoint_1d(4).unwrap().as_flat(), &[0.125, 0.375, 0.625, 0.875]);
        assert!(midpoint_1d(0).is_err());
    }

    #[test]
    fn midpoint_spacing() {
        for n in 1..50 {
            let p = midpoint_1d(n).unwrap();
            let xs = p.as_flat();
            assert!((xs[0] - 1.0 / (2.0 * n as f64)).abs() < 1e-15);
            for w in xs.windows(2) {
                assert!((w[1] - w[0] - 1.0 / n as f64).abs() < 1e-14);
            }
        }
    }

    /// Direct enumeration of the digit formula, used as the oracle.
    fn hammersley_by_digits(m: usize, sigma: &[bool]) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        for code in 0..(1u32 << m) {
            // t_k = bit k-1 of code
            let t: Vec<u32> = (0..m).map(|k| (code >> k) & 1).collect();
            let mut x = 0.0;
            let mut y = 0.0;
            for k in 0..m {
                // x: t_m/2 + t_{m-1}/4 + ...; digit t_{m-k} has weight 2^-(k+1)
                x += f64::from(t[m - 1 - k]) / 2f64.powi(k as i32 + 1);
                y += f64::from(t[k] ^ u32::from(sigma[k])) / 2f64.powi(k as i32 + 1);
            }
            out.push((x, y));
        }
        out.sort_by(|a, b| a.partial_cmp(b).unwrap());
        out
    }

    fn as_sorted_pairs(p: &PointSet) -> Vec<(f64, f64)> {
        let mut v: Vec<(f64, f64)> = p.points().map(|q| (q[0], q[1])).collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }

    #[test]
    fn hammersley_small_cases() {
        let p = hammersley_2d(1, &[false]).unwrap();
        assert_eq!(as_sorted_pairs(&p), vec![(0.0, 0.0), (0.5, 0.5)]);
        let p = hammersley_2d(1, &[true]).unwrap();
        assert_eq!(as_sorted_pairs(&p), vec![(0.0, 0.5), (0.5, 0.0)]);
        let p = hammersley_2d(2, &[false, false]).unwrap();
        assert_eq!(
            p.points().map(|q| (q[0], q[1])).collect::<Vec<_>>(),
            vec![(0.0, 0.0), (0.5, 0.25), (0.25, 0.5), (0.75, 0.75)]
        );
        let p = hammersley_2d(0, &[]).unwrap();
        assert_eq!(p.as_flat(), &[0.0, 0.0]);
        assert!(hammersley_2d(2, &[true]).is_err());
    }

    #[test]
    fn hammersley_matches_digit_formula() {
        for m in 0..=6 {
            for s in 0..(1u32 << m) {
                let sigma: Vec<bool> = (0..m).map(|k| (s >> k) & 1 == 1).collect();
                let p = hammersley_2d(m, &sigma).unwrap();
                assert_eq!(as_sorted_pairs(&p), hammersley_by_digits(m, &sigma));
            }
        }
    }

    #[test]
    fn hammersley_projection_regular() {
        for m in 0..=4 {
            for s in 0..(1u32 << m) {
                let sigma: Vec<bool> = (0..m).map(|k| (s >> k) & 1 == 1).collect();
                assert!(is_projection_regular(&hammersley_2d(m, &sigma).unwrap()).unwrap());
            }
        }
        for m in 5..=10 {
            for seed in 0..4u64 {
                let sigma: Vec<bool> =
                    (0..m).map(|k| (seed.wrapping_mul(0x9E37_79B9) >> k) & 1 == 1).collect();
                assert!(is_projection_regular(&hammersley_2d(m, &sigma).unwrap()).unwrap());
            }
        }
    }

    #[test]
    fn projection_regularity_examples() {
        let p = PointSet::new(2, vec![vec![0.0, 0.0], vec![0.5, 0.25]]).unwrap();
        assert!(!is_projection_regular(&p).unwrap());
        let p = PointSet::new(2, vec![vec![0.0, 0.5], vec![0.5, 0.0]]).unwrap();
        assert!(is_projection_regular(&p).unwrap());
        assert!(is_projection_regular(&midpoint_1d(2).unwrap()).is_err());
    }

    #[test]
    fn flipping_a_shift_bit_keeps_first_coordinates() {
        let m = 5;
        let base = hammersley_2d(m, &[false; 5]).unwrap();
        for k in 0..m {
            let mut sigma = vec![false; m];
            sigma[k] = true;
            let p = hammersley_2d(m, &sigma).unwrap();
            assert_eq!(p.sorted_axis(0), base.sorted_axis(0));
            let distinct: std::collections::BTreeSet<(u64, u64)> = p
                .points()
                .map(|q| (q[0].to_bits(), q[1].to_bits()))
                .collect();
            assert_eq!(distinct.len(), 1 << m);
        }
    }

    #[test]
    fn balanced_sigma_values() {
        assert_eq!(balanced_sigma(2), vec![false, true]);
        assert_eq!(balanced_sigma(5), vec![false, false, true, true, true]);
        assert!(balanced_sigma(0).is_empty());
        assert_eq!(parse_sigma("011").unwrap(), vec![false, true, true]);
        assert!(parse_sigma("012").is_err());
    }

    #[test]
    fn random_sets_are_reproducible() {
        let a = random_pointset(1, 3, 42).unwrap();
        let b = random_pointset(1, 3, 42).unwrap();
        assert_eq!(a, b);
        assert!(a.as_flat().iter().all(|x| (0.0..1.0).contains(x)));
        let c = random_pointset(2, 1, 0).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.dim(), 2);
        assert_ne!(random_pointset(2, 5, 1).unwrap(), random_pointset(2, 5, 2).unwrap());
        let d = random_dyadic_pointset(3, 10, 4, 9).unwrap();
        assert!(d.as_flat().iter().all(|x| (x * 16.0).fract() == 0.0));
    }
}
