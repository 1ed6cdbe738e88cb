use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A subset of a finite carrier, as a bitmask over point indices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ExplicitSet(u64);

/// Carriers index points with one bit each.
pub const MAX_CARRIER_POINTS: usize = 64;

impl ExplicitSet {
    pub const EMPTY: ExplicitSet = ExplicitSet(0);

    pub fn from_bits(bits: u64) -> Self {
        ExplicitSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// All points of an `n`-point carrier.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_CARRIER_POINTS);
        if n == MAX_CARRIER_POINTS {
            ExplicitSet(u64::MAX)
        } else {
            ExplicitSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        ExplicitSet(1u64 << i)
    }

    pub fn from_indices(indices: impl IntoIterator<Item = usize>) -> Self {
        ExplicitSet(indices.into_iter().fold(0, |acc, i| acc | (1u64 << i)))
    }

    pub fn contains(self, i: usize) -> bool {
        i < MAX_CARRIER_POINTS && self.0 & (1u64 << i) != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_subset(self, other: ExplicitSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn meets(self, other: ExplicitSet) -> bool {
        self.0 & other.0 != 0
    }

    pub fn union(self, other: ExplicitSet) -> Self {
        ExplicitSet(self.0 | other.0)
    }

    pub fn intersection(self, other: ExplicitSet) -> Self {
        ExplicitSet(self.0 & other.0)
    }

    pub fn with(self, i: usize) -> Self {
        ExplicitSet(self.0 | (1u64 << i))
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..MAX_CARRIER_POINTS).filter(move |i| bits & (1u64 << i) != 0)
    }

    /// Every subset of an `n`-point carrier, `∅` first.
    pub fn all_subsets(n: usize) -> impl Iterator<Item = ExplicitSet> {
        assert!(n < MAX_CARRIER_POINTS, "subset enumeration needs n < 64");
        (0..(1u64 << n)).map(ExplicitSet)
    }

    /// Every superset of `self` within an `n`-point carrier, `self` first.
    pub fn supersets(self, n: usize) -> impl Iterator<Item = ExplicitSet> {
        let free = ExplicitSet::full(n).0 & !self.0;
        let base = self.0;
        // Standard submask walk over the free bits.
        let mut sub = 0u64;
        let mut done = false;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let out = ExplicitSet(base | sub);
            sub = (sub.wrapping_sub(free)) & free;
            if sub == 0 {
                done = true;
            }
            Some(out)
        })
    }
}

impl fmt::Debug for ExplicitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.indices()).finish()
    }
}

impl Serialize for ExplicitSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.indices())
    }
}

impl<'de> Deserialize<'de> for ExplicitSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let indices = Vec::<usize>::deserialize(d)?;
        if let Some(bad) = indices.iter().find(|&&i| i >= MAX_CARRIER_POINTS) {
            return Err(serde::de::Error::custom(format!(
                "point index {bad} exceeds the carrier limit"
            )));
        }
        Ok(ExplicitSet::from_indices(indices))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn supersets_enumerates_each_once() {
        let s = ExplicitSet::from_indices([1]);
        let sups: Vec<_> = s.supersets(3).collect();
        assert_eq!(sups.len(), 4);
        assert!(sups.iter().all(|t| s.is_subset(*t)));
        let mut sorted = sups.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 4);
        assert_eq!(ExplicitSet::full(3).supersets(3).count(), 1);
        assert_eq!(ExplicitSet::EMPTY.supersets(4).count(), 16);
    }

    #[test]
    fn basic_algebra() {
        let a = ExplicitSet::from_indices([0, 2]);
        let b = ExplicitSet::from_indices([2, 3]);
        assert_eq!(a.intersection(b), ExplicitSet::singleton(2));
        assert_eq!(a.union(b).len(), 3);
        assert!(a.meets(b));
        assert!(!a.is_subset(b));
        assert_eq!(serde_json::to_string(&a).unwrap(), "[0,2]");
        assert_eq!(ExplicitSet::full(64).len(), 64);
    }
}
