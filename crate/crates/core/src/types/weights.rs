use super::SubsetId;
use crate::{Error, Result, MAX_DIM};

/// Coordinate weights `γ_u ≥ 0` for every subset `u ⊆ [d]`.
///
/// The weight of the empty set is stored (default 1) but never enters an
/// error or discrepancy formula.
#[derive(Debug, Clone, PartialEq)]
pub struct Weights {
    dim: usize,
    gamma: Vec<f64>,
}

impl Weights {
    /// All weights zero except `γ_∅ = 1`.
    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        let mut gamma = vec![0.0; 1 << dim];
        gamma[0] = 1.0;
        Ok(Weights { dim, gamma })
    }

    /// Every nonempty subset gets weight `value`.
    pub fn uniform(dim: usize, value: f64) -> Result<Self> {
        check_weight(value)?;
        let mut w = Self::zeros(dim)?;
        w.gamma[1..].iter_mut().for_each(|g| *g = value);
        Ok(w)
    }

    /// Only the full set `[d]` carries weight (1); the default when no
    /// weights are given.
    pub fn full_only(dim: usize) -> Result<Self> {
        let mut w = Self::zeros(dim)?;
        w.gamma[SubsetId::full(dim).mask() as usize] = 1.0;
        Ok(w)
    }

    /// Product weights `γ_u = Π_{j∈u} γ_j` (so `γ_∅ = 1`).
    pub fn product(coord_weights: &[f64]) -> Result<Self> {
        let dim = coord_weights.len();
        check_dim(dim)?;
        for &g in coord_weights {
            check_weight(g)?;
        }
        let gamma = SubsetId::all(dim)
            .map(|u| u.indices().map(|j| coord_weights[j]).product())
            .collect();
        Ok(Weights { dim, gamma })
    }

    /// Builds weights from a function of the subset, evaluated for every
    /// subset including the empty one.
    pub fn from_fn(dim: usize, mut f: impl FnMut(SubsetId) -> f64) -> Result<Self> {
        check_dim(dim)?;
        let gamma: Vec<f64> = SubsetId::all(dim).map(&mut f).collect();
        for &g in &gamma {
            check_weight(g)?;
        }
        Ok(Weights { dim, gamma })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// # Panics
    /// If `u` is not a subset of `[d]`.
    pub fn get(&self, u: SubsetId) -> f64 {
        self.gamma[u.mask() as usize]
    }

    pub fn set(&mut self, u: SubsetId, gamma: f64) -> Result<()> {
        check_weight(gamma)?;
        if u.min_dim() > self.dim {
            return Err(Error::InvalidInput(format!(
                "subset {u} is not contained in [{}]",
                self.dim
            )));
        }
        self.gamma[u.mask() as usize] = gamma;
        Ok(())
    }

    /// Nonempty subsets with positive weight, in increasing mask order.
    pub fn positive_subsets(&self) -> impl Iterator<Item = (SubsetId, f64)> + '_ {
        self.gamma
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, &g)| g > 0.0)
            .map(|(m, &g)| (SubsetId::from_mask(m as u32), g))
    }

    /// `U₊`: every subset (the empty one included) with `γ_u > 0`.
    pub fn u_plus(&self) -> Vec<SubsetId> {
        SubsetId::all(self.dim).filter(|&u| self.get(u) > 0.0).collect()
    }

    /// Multiplies every nonempty-subset weight by `c ≥ 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        check_weight(c)?;
        let mut w = self.clone();
        w.gamma[1..].iter_mut().for_each(|g| *g *= c);
        Ok(w)
    }

    /// True iff the positive-weight subsets are closed under taking
    /// nonempty subsets: `γ_u > 0` implies `γ_v > 0` for every `∅ ≠ v ⊆ u`.
    ///
    /// This is the condition under which the anchored and ANOVA spaces
    /// coincide as sets.
    pub fn is_downward_closed(&self) -> bool {
        // Checking the immediate subsets u \ {i} suffices by induction.
        self.positive_subsets().all(|(u, _)| {
            u.indices().all(|i| {
                let v = u.difference(SubsetId::from_mask(1 << i));
                v.is_empty() || self.get(v) > 0.0
            })
        })
    }

    pub(crate) fn check_matches(&self, dim: usize) -> Result<()> {
        if self.dim != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: self.dim,
            });
        }
        Ok(())
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::InvalidInput("dimension must be positive".into()));
    }
    if dim > MAX_DIM {
        return Err(Error::DimensionTooLarge(dim));
    }
    Ok(())
}

fn check_weight(g: f64) -> Result<()> {
    if g.is_finite() && g >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("weight must be finite and >= 0, got {g}")))
    }
}

/// See [`Weights::is_downward_closed`].
pub fn condition9_holds(w: &Weights) -> bool {
    w.is_downward_closed()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(c: &[usize]) -> SubsetId {
        SubsetId::from_coords(c)
    }

    #[test]
    fn downward_closure_examples() {
        let w = Weights::uniform(2, 1.0).unwrap();
        assert!(condition9_holds(&w));

        let w = Weights::full_only(2).unwrap();
        assert!(!condition9_holds(&w));

        let w = Weights::product(&[1.0, 0.5, 1.0 / 3.0]).unwrap();
        // exhaustive subset scan as an independent check
        for u in SubsetId::all(3).filter(|u| !u.is_empty()) {
            for v in u.subsets().filter(|v| !v.is_empty()) {
                assert!(w.get(v) > 0.0);
            }
        }
        assert!(condition9_holds(&w));
    }

    #[test]
    fn product_weights_exact() {
        let g = [0.5, 0.25, 2.0];
        let w = Weights::product(&g).unwrap();
        assert_eq!(w.get(SubsetId::EMPTY), 1.0);
        assert_eq!(w.get(s(&[1, 3])), 1.0);
        assert_eq!(w.get(s(&[1, 2, 3])), 0.25);
        assert_eq!(w.get(s(&[2])), 0.25);
    }

    #[test]
    fn raising_a_weight_never_breaks_closure() {
        // Monotonicity: from any downward-closed state, raising a zero weight of
        // a set whose proper subsets are positive keeps it closed.
        let mut w = Weights::zeros(3).unwrap();
        w.set(s(&[1]), 1.0).unwrap();
        w.set(s(&[2]), 1.0).unwrap();
        assert!(condition9_holds(&w));
        w.set(s(&[1, 2]), 0.3).unwrap();
        assert!(condition9_holds(&w));
        w.set(s(&[1, 2, 3]), 0.3).unwrap();
        assert!(!condition9_holds(&w));
        for u in [s(&[3]), s(&[1, 3]), s(&[2, 3])] {
            w.set(u, 1.0).unwrap();
        }
        assert!(condition9_holds(&w));
    }

    #[test]
    fn validation_and_u_plus() {
        assert!(Weights::zeros(21).is_err());
        assert!(Weights::zeros(0).is_err());
        assert!(Weights::uniform(2, -1.0).is_err());
        let w = Weights::full_only(2).unwrap();
        assert_eq!(w.u_plus(), vec![SubsetId::EMPTY, s(&[1, 2])]);
        assert_eq!(w.positive_subsets().count(), 1);
    }
}
