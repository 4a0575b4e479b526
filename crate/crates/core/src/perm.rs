use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::elemset::ElemSet;
use crate::error::{Error, Result};

/// A permutation of `0..len`, stored as its image table.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Perm(Vec<u32>);

impl Perm {
    pub fn identity(len: usize) -> Self {
        Perm((0..len as u32).collect())
    }

    /// Builds a permutation from an image table, checking bijectivity.
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &y in &images {
            let y = y as usize;
            if y >= images.len() || seen[y] {
                return Err(Error::PreconditionViolated("image table is not a bijection".into()));
            }
            seen[y] = true;
        }
        Ok(Perm(images))
    }

    pub fn from_fn(len: usize, f: impl Fn(usize) -> usize) -> Result<Self> {
        Self::from_images((0..len).map(|x| f(x) as u32).collect())
    }

    /// Identity everywhere except on the listed `(x, y)` pairs.
    pub fn from_pairs(len: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut images: Vec<u32> = (0..len as u32).collect();
        for &(x, y) in pairs {
            if x >= len || y >= len {
                return Err(Error::PreconditionViolated(format!("pair ({x}, {y}) outside 0..{len}")));
            }
            images[x] = y as u32;
        }
        Self::from_images(images)
    }

    pub fn transposition(len: usize, a: usize, b: usize) -> Self {
        let mut images: Vec<u32> = (0..len as u32).collect();
        images.swap(a, b);
        Perm(images)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.0[x] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &y)| i == y as usize)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&y| self.0[y as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.0.len()];
        for (x, &y) in self.0.iter().enumerate() {
            inv[y as usize] = x as u32;
        }
        Perm(inv)
    }

    pub fn stabilizes(&self, set: &ElemSet) -> bool {
        set.iter().all(|x| set.contains(self.apply(x)))
    }

    pub fn image_of(&self, set: &ElemSet) -> ElemSet {
        ElemSet::from_elems(set.universe(), set.iter().map(|x| self.apply(x)))
    }

    /// Moved points as `(x, image)` pairs, the serialized form.
    pub fn moved_pairs(&self) -> Vec<(u32, u32)> {
        self.0
            .iter()
            .enumerate()
            .filter(|(i, &y)| *i != y as usize)
            .map(|(i, &y)| (i as u32, y))
            .collect()
    }
}

/// Serialized form: the domain size plus moved points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermRecord {
    pub len: usize,
    pub pairs: Vec<(u32, u32)>,
}

impl From<&Perm> for PermRecord {
    fn from(p: &Perm) -> Self {
        PermRecord {
            len: p.len(),
            pairs: p.moved_pairs(),
        }
    }
}

impl TryFrom<&PermRecord> for Perm {
    type Error = Error;
    fn try_from(r: &PermRecord) -> Result<Perm> {
        let pairs: Vec<(usize, usize)> = r.pairs.iter().map(|&(x, y)| (x as usize, y as usize)).collect();
        Perm::from_pairs(r.len, &pairs)
    }
}

/// Every element of the group generated by `gens`, sorted, identity first.
pub fn generate_group(len: usize, gens: &[Perm], cap: usize) -> Result<Vec<Perm>> {
    let id = Perm::identity(len);
    let mut seen: HashSet<Perm> = HashSet::new();
    seen.insert(id.clone());
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for s in gens {
            let h = s.compose(&g);
            if !seen.contains(&h) {
                if seen.len() >= cap {
                    return Err(Error::CapExceeded {
                        what: "permutation group order".into(),
                        cap: cap as u64,
                    });
                }
                seen.insert(h.clone());
                queue.push_back(h);
            }
        }
    }
    let mut all: Vec<Perm> = seen.into_iter().collect();
    all.sort();
    Ok(all)
}

/// Greedily picks a generating set of the subgroup `elements` (which must
/// be closed under composition): walk in order, keep anything not yet
/// generated.
pub fn greedy_generators(len: usize, elements: &[Perm]) -> Vec<Perm> {
    let mut gens: Vec<Perm> = Vec::new();
    let mut generated: HashSet<Perm> = HashSet::from([Perm::identity(len)]);
    for g in elements {
        if generated.contains(g) {
            continue;
        }
        gens.push(g.clone());
        generated = generate_group(len, &gens, usize::MAX)
            .expect("uncapped")
            .into_iter()
            .collect();
    }
    gens
}
