use std::fmt;

/// A subset of the coordinate indices `{1, ..., d}`, stored as a bit mask.
///
/// Bit `i` (zero based) stands for coordinate `i + 1`. The empty mask is a
/// valid subset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct SubsetId(u32);

impl SubsetId {
    pub const EMPTY: SubsetId = SubsetId(0);

    pub const fn from_mask(mask: u32) -> Self {
        SubsetId(mask)
    }

    /// Builds a subset from one-based coordinate indices.
    ///
    /// Panics if an index is zero or larger than 32.
    pub fn from_coords(coords: &[usize]) -> Self {
        let mut mask = 0u32;
        for &c in coords {
            assert!((1..=32).contains(&c), "coordinate index {c} out of range");
            mask |= 1 << (c - 1);
        }
        SubsetId(mask)
    }

    /// The full index set `[d]`.
    pub fn full(d: usize) -> Self {
        assert!(d <= 32);
        if d == 32 {
            SubsetId(u32::MAX)
        } else {
            SubsetId((1u32 << d) - 1)
        }
    }

    pub const fn mask(self) -> u32 {
        self.0
    }

    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Whether zero-based coordinate `i` is in the subset.
    pub const fn contains(self, i: usize) -> bool {
        i < 32 && self.0 & (1 << i) != 0
    }

    pub const fn is_subset_of(self, other: SubsetId) -> bool {
        self.0 & !other.0 == 0
    }

    pub const fn is_superset_of(self, other: SubsetId) -> bool {
        other.is_subset_of(self)
    }

    pub const fn union(self, other: SubsetId) -> SubsetId {
        SubsetId(self.0 | other.0)
    }

    pub const fn difference(self, other: SubsetId) -> SubsetId {
        SubsetId(self.0 & !other.0)
    }

    /// Largest zero-based index plus one, i.e. the smallest `d` with
    /// `self ⊆ [d]`.
    pub const fn min_dim(self) -> usize {
        32 - self.0.leading_zeros() as usize
    }

    /// Zero-based member indices in increasing order.
    pub fn indices(self) -> impl Iterator<Item = usize> {
        let mask = self.0;
        (0..32).filter(move |&i| mask & (1 << i) != 0)
    }

    /// All subsets of `self` (including the empty set and `self`) in
    /// increasing mask order.
    pub fn subsets(self) -> impl Iterator<Item = SubsetId> {
        let full = self.0;
        // Ascending submask enumeration: next = ((s | !full) + 1) & full.
        let mut next = Some(0u32);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full {
                None
            } else {
                Some(((cur | !full).wrapping_add(1)) & full)
            };
            Some(SubsetId(cur))
        })
    }

    /// All subsets of `[d]` in increasing mask order.
    pub fn all(d: usize) -> impl Iterator<Item = SubsetId> {
        SubsetId::full(d).subsets()
    }
}

impl fmt::Display for SubsetId {
    /// Formats as `{1,3}` with one-based indices; the empty set is `{}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.indices().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_ascending_and_complete() {
        let u = SubsetId::from_coords(&[1, 3, 4]);
        let subs: Vec<u32> = u.subsets().map(SubsetId::mask).collect();
        assert_eq!(subs, vec![0, 1, 4, 5, 8, 9, 12, 13]);
        assert_eq!(SubsetId::all(3).count(), 8);
        assert_eq!(SubsetId::EMPTY.subsets().count(), 1);
    }

    #[test]
    fn predicates_match_bitwise_containment() {
        for a in 0u32..16 {
            for b in 0u32..16 {
                let (sa, sb) = (SubsetId(a), SubsetId(b));
                assert_eq!(sa.is_subset_of(sb), a & b == a);
                assert_eq!(sa.is_superset_of(sb), a & b == b);
            }
            assert_eq!(SubsetId(a).len(), a.count_ones() as usize);
        }
    }

    #[test]
    fn display_uses_one_based_indices() {
        assert_eq!(SubsetId::from_coords(&[2, 1]).to_string(), "{1,2}");
        assert_eq!(SubsetId::EMPTY.to_string(), "{}");
        assert_eq!(SubsetId::full(32).len(), 32);
    }
}
