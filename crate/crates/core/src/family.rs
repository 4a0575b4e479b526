//! Intersection-closed set families over a universe of at most 31 points.
//!
//! A member is a bitmask with point `i` at bit `i`, so point `a` (index 0)
//! is the low bit. Through the characteristic-vector map a family with `∅`
//! and the full universe is the same thing as an extended submonoid of
//! `𝔽₂ⁿ`: intersection becomes multiplication and symmetric difference
//! becomes addition.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::elemset::ElemSet;
use crate::error::{Error, Result};

pub const MAX_UNIVERSE: u32 = 31;
/// Largest universe handled by [`enumerate_families`].
pub const DEFAULT_ENUMERATION_CAP: u32 = 5;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SetFamily {
    n: u32,
    members: Vec<u32>,
}

impl SetFamily {
    /// Sorts and deduplicates `members`; rejects masks outside the universe.
    pub fn new(n: u32, mut members: Vec<u32>) -> Result<Self> {
        if n > MAX_UNIVERSE {
            return Err(Error::CapExceeded {
                what: "universe size".into(),
                cap: MAX_UNIVERSE as u64,
            });
        }
        if let Some(&bad) = members.iter().find(|&&m| m >> n != 0) {
            return Err(Error::BadSpec(format!(
                "member mask {bad:#b} outside universe of size {n}"
            )));
        }
        members.sort_unstable();
        members.dedup();
        Ok(SetFamily { n, members })
    }

    pub fn power_set(n: u32) -> Self {
        SetFamily {
            n,
            members: (0..1u32 << n).collect(),
        }
    }

    pub fn universe_size(&self) -> u32 {
        self.n
    }

    pub fn members(&self) -> &[u32] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, mask: u32) -> bool {
        self.members.binary_search(&mask).is_ok()
    }

    pub fn full_mask(&self) -> u32 {
        full(self.n)
    }

    /// `X_S`, the union of all members.
    pub fn union_mask(&self) -> u32 {
        self.members.iter().fold(0, |acc, m| acc | m)
    }

    pub fn contains_empty(&self) -> bool {
        self.contains(0)
    }

    pub fn contains_union(&self) -> bool {
        self.contains(self.union_mask())
    }

    /// `|S_p|`.
    pub fn frequency(&self, p: u32) -> usize {
        self.members.iter().filter(|&&m| m >> p & 1 == 1).count()
    }

    /// The first pair (in member order) whose intersection is missing.
    pub fn intersection_violation(&self) -> Option<(u32, u32)> {
        for (i, &a) in self.members.iter().enumerate() {
            for &b in &self.members[i + 1..] {
                if !self.contains(a & b) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    pub fn check_intersection_closed(&self) -> Result<()> {
        match self.intersection_violation() {
            Some((a, b)) => Err(Error::NotIntersectionClosed { a, b }),
            None => Ok(()),
        }
    }

    pub fn is_intersection_closed(&self) -> bool {
        self.intersection_violation().is_none()
    }

    /// The union-closed family of complements.
    pub fn complement(&self) -> SetFamily {
        let f = self.full_mask();
        let mut members: Vec<u32> = self.members.iter().map(|m| !m & f).collect();
        members.sort_unstable();
        SetFamily { n: self.n, members }
    }

    pub fn without(&self, mask: u32) -> SetFamily {
        SetFamily {
            n: self.n,
            members: self.members.iter().copied().filter(|&m| m != mask).collect(),
        }
    }

    /// Line format: `n=<k>` then one member per line, `-` for the empty set.
    pub fn to_text(&self) -> String {
        let mut out = format!("n={}\n", self.n);
        for &m in &self.members {
            if m == 0 {
                out.push('-');
            } else {
                let idx: Vec<String> = (0..self.n).filter(|i| m >> i & 1 == 1).map(|i| i.to_string()).collect();
                out.push_str(&idx.join(","));
            }
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("empty family file".into()))?;
        let n: u32 = header
            .strip_prefix("n=")
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| Error::Parse(format!("expected `n=<k>`, found `{header}`")))?;
        if n > MAX_UNIVERSE {
            return Err(Error::Parse(format!("universe size {n} exceeds {MAX_UNIVERSE}")));
        }
        let mut members = Vec::new();
        for line in lines {
            if line == "-" {
                members.push(0);
                continue;
            }
            let mut mask = 0u32;
            for tok in line.split(',') {
                let i: u32 = tok
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad element index `{tok}`")))?;
                if i >= n {
                    return Err(Error::Parse(format!("element {i} outside universe of size {n}")));
                }
                mask |= 1 << i;
            }
            members.push(mask);
        }
        SetFamily::new(n, members)
    }

    /// SHA-256 of the text form.
    pub fn content_hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_text().as_bytes()))
    }
}

impl fmt::Display for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letters = |m: u32| -> String {
            if m == 0 {
                return "∅".into();
            }
            let inner: Vec<String> = (0..self.n).filter(|i| m >> i & 1 == 1).map(point_name).collect();
            format!("{{{}}}", inner.join(","))
        };
        let parts: Vec<String> = self.members.iter().map(|&m| letters(m)).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// `a`, `b`, ... for small indices, numeric beyond `z`.
pub fn point_name(i: u32) -> String {
    if i < 26 {
        char::from(b'a' + i as u8).to_string()
    } else {
        format!("x{i}")
    }
}

fn full(n: u32) -> u32 {
    if n == 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// `Φ`: the characteristic vectors of the members, as a subset of `𝔽₂ⁿ`.
pub fn phi(family: &SetFamily) -> Result<ElemSet> {
    family.check_intersection_closed()?;
    if !family.contains(0) || !family.contains(family.full_mask()) {
        return Err(Error::MissingTopOrBottom);
    }
    Ok(ElemSet::from_elems(
        1usize << family.n,
        family.members.iter().map(|&m| m as usize),
    ))
}

/// `Φ⁻¹` on a subset of `𝔽₂ⁿ` (elements indexed by mask).
pub fn phi_inverse(n: u32, monoid: &ElemSet) -> Result<SetFamily> {
    if monoid.universe() != 1usize << n {
        return Err(Error::BadSpec(format!(
            "set lives in a ring of order {}, expected 2^{n}",
            monoid.universe()
        )));
    }
    let family = SetFamily::new(n, monoid.iter().map(|x| x as u32).collect())?;
    if !family.contains(0) || !family.contains(family.full_mask()) {
        return Err(Error::MissingTopOrBottom);
    }
    family.check_intersection_closed()?;
    Ok(family)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyCertificate {
    pub element: u32,
    pub frequency: usize,
    pub family_size: usize,
    pub reduced_family: Option<SetFamily>,
}

impl FamilyCertificate {
    pub fn holds(&self) -> bool {
        2 * self.frequency <= self.family_size
    }
}

/// The least point of `X_S` lying in at most half of the members.
pub fn find_rare_element(family: &SetFamily) -> Result<FamilyCertificate> {
    if family.len() < 2 {
        return Err(Error::PreconditionViolated("family needs at least two members".into()));
    }
    family.check_intersection_closed()?;
    let x = family.union_mask();
    (0..family.n)
        .filter(|p| x >> p & 1 == 1)
        .map(|p| (p, family.frequency(p)))
        .find(|&(_, f)| 2 * f <= family.len())
        .map(|(element, frequency)| FamilyCertificate {
            element,
            frequency,
            family_size: family.len(),
            reduced_family: None,
        })
        .ok_or_else(|| Error::CounterexampleFound(family.to_text()))
}

/// Members that are not the intersection of two members other than
/// themselves.
pub fn basis_sets(family: &SetFamily) -> Vec<u32> {
    family
        .members
        .iter()
        .copied()
        .filter(|&a| {
            !family
                .members
                .iter()
                .any(|&b| b != a && family.members.iter().any(|&c| c != a && b & c == a))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfReduction {
    pub element: u32,
    pub reduced: SetFamily,
    /// Removed members in removal order.
    pub removed: Vec<u32>,
}

/// Removes maximal members avoiding `p` until `p` lies in exactly half.
pub fn reduce_to_half(family: &SetFamily, p: u32) -> Result<HalfReduction> {
    let pre = |msg: String| Err(Error::PreconditionViolated(msg));
    if family.len() < 2 {
        return pre("family needs at least two members".into());
    }
    if !family.is_intersection_closed() {
        return pre("family is not intersection-closed".into());
    }
    let x = family.union_mask();
    if !family.contains(0) || !family.contains(x) {
        return pre("family must contain ∅ and its union".into());
    }
    if p >= family.n || x >> p & 1 == 0 {
        return pre(format!("point {p} is not in the union"));
    }
    if 2 * family.frequency(p) > family.len() {
        return pre(format!("point {p} lies in more than half of the members"));
    }

    let freq = family.frequency(p);
    let mut members = family.members.clone();
    let mut removed = Vec::new();
    while 2 * freq < members.len() {
        let avoiding: Vec<u32> = members.iter().copied().filter(|&m| m != 0 && m >> p & 1 == 0).collect();
        let pick = avoiding
            .iter()
            .copied()
            .find(|&a| !avoiding.iter().any(|&b| b != a && a & b == a))
            .ok_or_else(|| Error::InvariantViolated("no removable member avoiding p".into()))?;
        members.retain(|&m| m != pick);
        removed.push(pick);
    }
    let out = HalfReduction {
        element: p,
        reduced: SetFamily { n: family.n, members },
        removed,
    };
    check_reduction(family, &out)?;
    Ok(out)
}

/// The four postconditions of the reduction.
pub fn check_reduction(original: &SetFamily, r: &HalfReduction) -> Result<()> {
    let fail = |m: &str| Err(Error::InvariantViolated(format!("reduction of {original}: {m}")));
    let s = &r.reduced;
    if !s.members.iter().all(|&m| original.contains(m)) {
        return fail("reduced family is not a subfamily");
    }
    if !s.is_intersection_closed() {
        return fail("reduced family is not intersection-closed");
    }
    if !s.contains(0) || !s.contains(original.union_mask()) {
        return fail("reduced family lost ∅ or the union");
    }
    if 2 * s.frequency(r.element) != s.len() {
        return fail("point does not lie in exactly half of the reduced family");
    }
    let dropped = original.members.iter().filter(|&&m| !s.contains(m));
    if dropped.clone().any(|m| m >> r.element & 1 == 1) {
        return fail("a removed member contains the point");
    }
    if dropped.count() != r.removed.len() {
        return fail("removal log disagrees with the families");
    }
    Ok(())
}

/// A family with `∅` and the full universe, packed as a bitmask over the
/// `2ⁿ` subsets (bit `m` set when mask `m` is a member). Requires `n ≤ 5`.
pub type FamilyCode = u32;

pub fn decode_family(n: u32, code: FamilyCode) -> SetFamily {
    SetFamily {
        n,
        members: (0..1u32 << n).filter(|m| code >> m & 1 == 1).collect(),
    }
}

pub fn encode_family(family: &SetFamily) -> Option<FamilyCode> {
    (family.n <= 5).then(|| family.members.iter().fold(0, |acc, &m| acc | 1 << m))
}

/// Lexicographic comparison of the member lists of two codes.
pub fn compare_codes(a: FamilyCode, b: FamilyCode) -> std::cmp::Ordering {
    let (mut a, mut b) = (a, b);
    loop {
        match (a == 0, b == 0) {
            (true, true) => return std::cmp::Ordering::Equal,
            (true, false) => return std::cmp::Ordering::Less,
            (false, true) => return std::cmp::Ordering::Greater,
            _ => {}
        }
        let (x, y) = (a.trailing_zeros(), b.trailing_zeros());
        if x != y {
            return x.cmp(&y);
        }
        a &= a - 1;
        b &= b - 1;
    }
}

fn members_of(code: FamilyCode) -> impl Iterator<Item = u32> {
    let mut c = code;
    std::iter::from_fn(move || {
        (c != 0).then(|| {
            let m = c.trailing_zeros();
            c &= c - 1;
            m
        })
    })
}

fn is_reducible(code: FamilyCode, d: u32) -> bool {
    members_of(code).any(|b| b != d && b & d == d && members_of(code).any(|c| c != d && b & c == d))
}

/// Children of `code` in the reverse-search tree: `F ∪ {c}` for each
/// non-member `c` such that the result is still closed and `c` is the
/// largest meet-irreducible member other than `∅` and the top.
fn children(n: u32, code: FamilyCode) -> Vec<FamilyCode> {
    let top = full(n);
    let mut out = Vec::new();
    for c in 1..top {
        if code >> c & 1 == 1 {
            continue;
        }
        let child = code | 1 << c;
        if !members_of(code).all(|m| child >> (m & c) & 1 == 1) {
            continue;
        }
        let canonical = members_of(code)
            .filter(|&d| d > c && d != top)
            .all(|d| is_reducible(child, d));
        if canonical {
            out.push(child);
        }
    }
    out
}

/// Every intersection-closed family on `n` points containing `∅` and the
/// full universe, in lexicographic member-list order.
pub fn enumerate_family_codes(n: u32, cap: u32) -> Result<Vec<FamilyCode>> {
    let cap = cap.min(DEFAULT_ENUMERATION_CAP);
    if n > cap {
        return Err(Error::CapExceeded {
            what: "family enumeration universe".into(),
            cap: cap as u64,
        });
    }
    if n == 0 {
        return Ok(vec![1]);
    }
    let root: FamilyCode = 1 | 1 << full(n);
    fn walk(n: u32, code: FamilyCode, out: &mut Vec<FamilyCode>) {
        out.push(code);
        for child in children(n, code) {
            walk(n, child, out);
        }
    }
    let mut all: Vec<FamilyCode> = children(n, root)
        .into_par_iter()
        .flat_map_iter(|c| {
            let mut v = Vec::new();
            walk(n, c, &mut v);
            v
        })
        .collect();
    all.push(root);
    all.par_sort_unstable_by(|&a, &b| compare_codes(a, b));
    Ok(all)
}

pub fn enumerate_families(n: u32, cap: u32) -> Result<Vec<SetFamily>> {
    Ok(enumerate_family_codes(n, cap)?
        .into_iter()
        .map(|c| decode_family(n, c))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fam(n: u32, m: &[u32]) -> SetFamily {
        SetFamily::new(n, m.to_vec()).unwrap()
    }

    /// Independent enumerator: filter every subset of the middle masks.
    fn filter_oracle(n: u32) -> Vec<SetFamily> {
        let top = (1u32 << n) - 1;
        let middle: Vec<u32> = (1..top).collect();
        let mut out = Vec::new();
        for pick in 0u64..1 << middle.len() {
            let mut members = vec![0, top];
            members.extend(
                middle
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| pick >> i & 1 == 1)
                    .map(|(_, &m)| m),
            );
            let f = SetFamily::new(n, members).unwrap();
            if f.is_intersection_closed() {
                out.push(f);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn enumeration_counts_match_filter_oracle() {
        for n in 1..=4 {
            let fast = enumerate_families(n, 5).unwrap();
            let slow = filter_oracle(n);
            assert_eq!(fast, slow, "n = {n}");
        }
        let counts: Vec<usize> = (1..=4).map(|n| enumerate_family_codes(n, 5).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 4, 45, 2271]);
    }

    #[test]
    fn five_point_count_matches_moore_family_recurrence() {
        // Moore families on k points number 1, 2, 7, 61, 2480, 1385552; those
        // containing ∅ satisfy M(n) = Σ C(n,k)·E(n−k).
        let moore = [1u64, 2, 7, 61, 2480, 1385552];
        let binom = |n: u64, k: u64| (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1));
        let mut with_empty = vec![1u64];
        for n in 1..=5u64 {
            let rest: u64 = (1..=n).map(|k| binom(n, k) * with_empty[(n - k) as usize]).sum();
            with_empty.push(moore[n as usize] - rest);
        }
        assert_eq!(with_empty, vec![1, 1, 4, 45, 2271, 1373701]);
        assert_eq!(enumerate_family_codes(5, 5).unwrap().len() as u64, with_empty[5]);
    }

    #[test]
    fn enumeration_cap() {
        assert!(matches!(enumerate_family_codes(4, 3), Err(Error::CapExceeded { .. })));
        assert!(enumerate_family_codes(6, 9).is_err());
    }

    #[test]
    fn phi_reads_characteristic_vectors() {
        let s = fam(2, &[0b00, 0b01, 0b11]);
        assert_eq!(phi(&s).unwrap().to_vec(), vec![0, 1, 3]);
        assert_eq!(phi(&SetFamily::power_set(2)).unwrap().len(), 4);
        assert!(matches!(phi(&fam(2, &[0b01, 0b11])), Err(Error::MissingTopOrBottom)));
        assert!(matches!(
            phi(&fam(2, &[0, 0b01, 0b10, 0b11]).without(0)),
            Err(Error::NotIntersectionClosed { a: 1, b: 2 })
        ));
    }

    #[test]
    fn rare_elements() {
        let chain = fam(2, &[0b00, 0b01, 0b11]);
        let c = find_rare_element(&chain).unwrap();
        assert_eq!((c.element, c.frequency), (1, 1));
        let c = find_rare_element(&SetFamily::power_set(2)).unwrap();
        assert_eq!((c.element, c.frequency), (0, 2));
    }

    #[test]
    fn basis_set_examples() {
        assert_eq!(basis_sets(&SetFamily::power_set(2)), vec![0b01, 0b10, 0b11]);
        assert_eq!(basis_sets(&fam(2, &[0b00, 0b01, 0b11])), vec![0b00, 0b01, 0b11]);
        assert_eq!(basis_sets(&fam(2, &[0])), vec![0]);
    }

    #[test]
    fn reduction_examples() {
        let chain = fam(2, &[0b00, 0b01, 0b11]);
        let r = reduce_to_half(&chain, 1).unwrap();
        assert_eq!(r.reduced.members(), &[0b00, 0b11]);
        assert_eq!(r.removed, vec![0b01]);
        let ps = SetFamily::power_set(3);
        assert!(reduce_to_half(&ps, 0).unwrap().removed.is_empty());
        assert!(matches!(reduce_to_half(&chain, 0), Err(Error::PreconditionViolated(_))));
    }

    #[test]
    fn reduction_exhaustive_small() {
        for n in 1..=4 {
            for s in enumerate_families(n, 5).unwrap() {
                for p in 0..n {
                    if s.len() >= 2 && 2 * s.frequency(p) <= s.len() {
                        reduce_to_half(&s, p).unwrap();
                    }
                }
            }
        }
    }

    #[test]
    fn text_round_trip() {
        let s = fam(3, &[0, 0b001, 0b101, 0b111]);
        let t = s.to_text();
        assert_eq!(t, "n=3\n-\n0\n0,2\n0,1,2\n");
        assert_eq!(SetFamily::parse(&t).unwrap(), s);
        assert_eq!(s.content_hash().len(), 64);
        assert!(SetFamily::parse("n=2\n0,5\n").is_err());
        assert!(SetFamily::parse("m=2\n").is_err());
    }

    fn arb_closed_family() -> impl Strategy<Value = SetFamily> {
        (1u32..=5).prop_flat_map(|n| {
            prop::collection::vec(0u32..1 << n, 0..8).prop_map(move |gens| {
                let top = (1u32 << n) - 1;
                let mut members: Vec<u32> = vec![0, top];
                members.extend(gens);
                loop {
                    let before = members.len();
                    let snapshot = members.clone();
                    for &a in &snapshot {
                        for &b in &snapshot {
                            if !members.contains(&(a & b)) {
                                members.push(a & b);
                            }
                        }
                    }
                    if members.len() == before {
                        break;
                    }
                }
                SetFamily::new(n, members).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn phi_round_trips(s in arb_closed_family()) {
            let m = phi(&s).unwrap();
            prop_assert_eq!(phi_inverse(s.universe_size(), &m).unwrap(), s);
        }

        #[test]
        fn removing_a_basis_set_keeps_closure(s in arb_closed_family()) {
            for a in basis_sets(&s) {
                if a != 0 {
                    prop_assert!(s.without(a).is_intersection_closed());
                }
            }
        }

        #[test]
        fn complement_twice_is_identity(s in arb_closed_family()) {
            prop_assert_eq!(s.complement().complement(), s);
        }
    }
}
