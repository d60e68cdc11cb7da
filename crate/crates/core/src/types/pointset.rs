use super::SubsetId;
use crate::{Error, Result};

/// An ordered list of `n ≥ 1` points in `[0,1]^d`, stored row-major.
///
/// Coordinates equal to 1 are accepted (they matter for reflected sets and
/// one-dimensional analysis inputs); the constructions in this crate only
/// produce points in `[0,1)^d`. Duplicates are allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    dim: usize,
    coords: Vec<f64>,
}

impl PointSet {
    /// Largest dimension a point set may have (subset masks are 32 bits).
    pub const MAX_DIM: usize = 32;

    pub fn new(dim: usize, points: Vec<Vec<f64>>) -> Result<Self> {
        let mut coords = Vec::with_capacity(points.len() * dim);
        for (j, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::InvalidInput(format!(
                    "point {j} has {} coordinates, expected {dim}",
                    p.len()
                )));
            }
            coords.extend_from_slice(p);
        }
        Self::from_flat(dim, coords)
    }

    /// Builds a point set from row-major coordinates.
    pub fn from_flat(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 || dim > Self::MAX_DIM {
            return Err(Error::InvalidInput(format!(
                "dimension must be in 1..={}, got {dim}",
                Self::MAX_DIM
            )));
        }
        if coords.is_empty() || coords.len() % dim != 0 {
            return Err(Error::InvalidInput(format!(
                "need a positive multiple of {dim} coordinates, got {}",
                coords.len()
            )));
        }
        if let Some(bad) = coords.iter().find(|x| !(0.0..=1.0).contains(*x)) {
            return Err(Error::InvalidInput(format!(
                "coordinate {bad} outside [0,1]"
            )));
        }
        Ok(PointSet { dim, coords })
    }

    /// One-dimensional point set from its coordinates.
    pub fn from_1d(xs: &[f64]) -> Result<Self> {
        Self::from_flat(1, xs.to_vec())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of points `n`.
    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    /// Always false: a point set holds at least one point.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn point(&self, j: usize) -> &[f64] {
        &self.coords[j * self.dim..(j + 1) * self.dim]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }

    /// Row-major coordinate storage.
    pub fn as_flat(&self) -> &[f64] {
        &self.coords
    }

    /// The projection onto the coordinates in `u`, preserving point order
    /// and multiplicity.
    pub fn project(&self, u: SubsetId) -> Result<PointSet> {
        if u.is_empty() {
            return Err(Error::EmptySubset);
        }
        if u.min_dim() > self.dim {
            return Err(Error::InvalidInput(format!(
                "subset {u} is not contained in [{}]",
                self.dim
            )));
        }
        let idx: Vec<usize> = u.indices().collect();
        let coords = self
            .points()
            .flat_map(|p| idx.iter().map(move |&i| p[i]))
            .collect();
        Ok(PointSet {
            dim: idx.len(),
            coords,
        })
    }

    /// The reflected set `{1 - x_j}` (component-wise).
    pub fn reflect(&self) -> PointSet {
        PointSet {
            dim: self.dim,
            coords: self.coords.iter().map(|x| 1.0 - x).collect(),
        }
    }

    /// Sorted copy of coordinate `i` over all points.
    pub fn sorted_axis(&self, i: usize) -> Vec<f64> {
        let mut v: Vec<f64> = self.points().map(|p| p[i]).collect();
        v.sort_by(f64::total_cmp);
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn project_extracts_coordinates() {
        let p = PointSet::new(2, vec![vec![0.25, 0.75]]).unwrap();
        let q = p.project(SubsetId::from_coords(&[2])).unwrap();
        assert_eq!(q.as_flat(), &[0.75]);

        let p = PointSet::new(2, vec![vec![0.0, 0.5], vec![0.5, 0.0]]).unwrap();
        let q = p.project(SubsetId::from_coords(&[1])).unwrap();
        assert_eq!(q.as_flat(), &[0.0, 0.5]);
    }

    #[test]
    fn project_full_is_identity_and_empty_rejected() {
        let p = PointSet::new(3, vec![vec![0.1, 0.2, 0.3], vec![0.4, 0.5, 0.6]]).unwrap();
        assert_eq!(p.project(SubsetId::full(3)).unwrap(), p);
        assert_eq!(p.project(SubsetId::EMPTY), Err(Error::EmptySubset));
        assert!(p.project(SubsetId::from_coords(&[4])).is_err());
    }

    #[test]
    fn validation() {
        assert!(PointSet::from_flat(1, vec![]).is_err());
        assert!(PointSet::from_flat(2, vec![0.1]).is_err());
        assert!(PointSet::from_flat(1, vec![1.5]).is_err());
        assert!(PointSet::from_flat(1, vec![f64::NAN]).is_err());
        assert!(PointSet::from_flat(0, vec![0.1]).is_err());
        assert!(PointSet::from_flat(1, vec![1.0]).is_ok());
    }
}
