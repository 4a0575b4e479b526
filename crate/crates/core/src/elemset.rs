use std::cmp::Ordering;
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A set of ring elements, stored as a bitset over canonical indices.
///
/// Ordering is lexicographic on the ascending element list, which is the
/// canonical order used for every enumeration in the crate.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ElemSet {
    bits: FixedBitSet,
}

impl ElemSet {
    pub fn new(universe: usize) -> Self {
        ElemSet {
            bits: FixedBitSet::with_capacity(universe),
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe);
        bits.insert_range(..);
        ElemSet { bits }
    }

    pub fn from_elems<I: IntoIterator<Item = usize>>(universe: usize, elems: I) -> Self {
        let mut s = Self::new(universe);
        for e in elems {
            s.insert(e);
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        self.bits.contains(x)
    }

    /// Inserts `x`, returning true when it was not already present.
    #[inline]
    pub fn insert(&mut self, x: usize) -> bool {
        !self.bits.put(x)
    }

    pub fn remove(&mut self, x: usize) {
        self.bits.set(x, false);
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn to_u32_vec(&self) -> Vec<u32> {
        self.iter().map(|x| x as u32).collect()
    }

    pub fn is_subset(&self, other: &ElemSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn union(&self, other: &ElemSet) -> ElemSet {
        let mut bits = self.bits.clone();
        bits.union_with(&other.bits);
        ElemSet { bits }
    }

    pub fn intersection(&self, other: &ElemSet) -> ElemSet {
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        ElemSet { bits }
    }

    pub fn difference(&self, other: &ElemSet) -> ElemSet {
        let mut bits = self.bits.clone();
        bits.difference_with(&other.bits);
        ElemSet { bits }
    }

    pub fn min(&self) -> Option<usize> {
        self.bits.minimum()
    }
}

impl Ord for ElemSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter()
            .cmp(other.iter())
            .then(self.universe().cmp(&other.universe()))
    }
}

impl PartialOrd for ElemSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[derive(Serialize, Deserialize)]
struct ElemSetRepr {
    universe: usize,
    elements: Vec<usize>,
}

impl Serialize for ElemSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ElemSetRepr {
            universe: self.universe(),
            elements: self.to_vec(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ElemSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = ElemSetRepr::deserialize(d)?;
        if let Some(&bad) = repr.elements.iter().find(|&&e| e >= repr.universe) {
            return Err(serde::de::Error::custom(format!(
                "element {bad} outside universe {}",
                repr.universe
            )));
        }
        Ok(ElemSet::from_elems(repr.universe, repr.elements))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_lexicographic_on_elements() {
        let a = ElemSet::from_elems(8, [0, 3]);
        let b = ElemSet::from_elems(8, [0, 2, 7]);
        let c = ElemSet::from_elems(8, [0, 2]);
        assert!(c < b);
        assert!(b < a);
    }

    #[test]
    fn serde_rejects_out_of_range() {
        let bad = r#"{"universe":4,"elements":[1,4]}"#;
        assert!(serde_json::from_str::<ElemSet>(bad).is_err());
        let good: ElemSet = serde_json::from_str(r#"{"universe":4,"elements":[1,3]}"#).unwrap();
        assert_eq!(good.to_vec(), vec![1, 3]);
    }
}
