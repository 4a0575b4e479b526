//! Multiactions, lifts across ideals, covering-ideal search and network
//! verdicts.
//!
//! Quotient groups act on the target ring of a [`QuotientView`], so their
//! permutations are indexed by quotient elements. Top-group lifts are
//! permutations of the source ring.

use std::collections::HashSet;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::elemset::ElemSet;
use crate::error::{Error, Result};
use crate::family::{phi, phi_inverse, reduce_to_half};
use crate::perm::{generate_group, greedy_generators, Perm, PermRecord};
use crate::ring::{build_ring, IdealShape, QuotientView, Ring, RingSpec};

/// Largest group materialized for user-supplied generators.
pub const GENERATED_GROUP_CAP: usize = 1 << 16;
/// Largest number of associated-submonoid candidates tried per ideal.
pub const CANDIDATE_CAP_LOG2: usize = 16;
/// Largest monoid count produced by exhaustive enumeration.
pub const DEFAULT_MONOID_CAP: usize = 1 << 20;
/// Largest ring order for exhaustive submonoid enumeration.
pub const DEFAULT_ENUMERATION_ORDER: usize = 256;
/// Largest ring order for the definition-level symmetric lift search.
pub const BRUTE_FORCE_SYM_LIMIT: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ActionGroup {
    Symmetric,
    Automorphic,
    Generated { generators: Vec<Perm>, elements: Vec<Perm> },
}

impl ActionGroup {
    pub fn generated(len: usize, generators: Vec<Perm>) -> Result<Self> {
        let elements = generate_group(len, &generators, GENERATED_GROUP_CAP)?;
        Ok(ActionGroup::Generated { generators, elements })
    }

    fn contains(&self, ring: &Ring, g: &Perm) -> bool {
        g.len() == ring.order()
            && match self {
                ActionGroup::Symmetric => true,
                ActionGroup::Automorphic => match ring.automorphism_group() {
                    Ok(group) => group.binary_search(g).is_ok(),
                    Err(_) => ring.is_automorphism(g),
                },
                ActionGroup::Generated { elements, .. } => elements.binary_search(g).is_ok(),
            }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MultiactionKind {
    Symmetric,
    Automorphic,
    /// `Sym(R)` on top, `Aut(R/I)` on every nonzero ideal.
    SymmetricTop,
    Custom,
}

/// An action group per ideal, indexed like [`Ring::ideals`].
#[derive(Debug)]
pub struct Multiaction {
    ring: Ring,
    kind: MultiactionKind,
    groups: Vec<ActionGroup>,
    quotients: Vec<OnceLock<QuotientView>>,
}

impl Multiaction {
    fn with_groups(ring: &Ring, kind: MultiactionKind, groups: Vec<ActionGroup>) -> Self {
        let quotients = (0..groups.len()).map(|_| OnceLock::new()).collect();
        Multiaction {
            ring: ring.clone(),
            kind,
            groups,
            quotients,
        }
    }

    pub fn symmetric(ring: &Ring) -> Self {
        Self::with_groups(
            ring,
            MultiactionKind::Symmetric,
            vec![ActionGroup::Symmetric; ring.ideals().len()],
        )
    }

    pub fn automorphic(ring: &Ring) -> Self {
        Self::with_groups(
            ring,
            MultiactionKind::Automorphic,
            vec![ActionGroup::Automorphic; ring.ideals().len()],
        )
    }

    pub fn symmetric_top(ring: &Ring) -> Self {
        let mut groups = vec![ActionGroup::Automorphic; ring.ideals().len()];
        groups[0] = ActionGroup::Symmetric;
        Self::with_groups(ring, MultiactionKind::SymmetricTop, groups)
    }

    pub fn of_kind(ring: &Ring, kind: MultiactionKind) -> Result<Self> {
        match kind {
            MultiactionKind::Symmetric => Ok(Self::symmetric(ring)),
            MultiactionKind::Automorphic => Ok(Self::automorphic(ring)),
            MultiactionKind::SymmetricTop => Ok(Self::symmetric_top(ring)),
            MultiactionKind::Custom => Err(Error::BadSpec("custom multiactions need explicit generators".into())),
        }
    }

    /// User-supplied groups; `None` entries mean `Aut(R/I)`. Each group must
    /// contain the automorphisms of its quotient.
    pub fn custom(ring: &Ring, generators: Vec<Option<Vec<Perm>>>) -> Result<Self> {
        if generators.len() != ring.ideals().len() {
            return Err(Error::BadSpec(format!(
                "expected {} ideal groups, got {}",
                ring.ideals().len(),
                generators.len()
            )));
        }
        let mut groups = Vec::new();
        let whole = ring.ideals().len() - 1;
        for (idx, gens) in generators.into_iter().enumerate() {
            let gens = match gens {
                Some(g) if idx != whole => g,
                _ => {
                    groups.push(ActionGroup::Automorphic);
                    continue;
                }
            };
            let target = ring.quotient_by_index(idx)?.target;
            if gens.iter().any(|g| g.len() != target.order()) {
                return Err(Error::BadSpec(format!(
                    "generator for ideal {idx} has the wrong degree"
                )));
            }
            let group = ActionGroup::generated(target.order(), gens)?;
            if let Some(a) = target.aut_generators().iter().find(|a| !group.contains(&target, a)) {
                return Err(Error::BadSpec(format!(
                    "group on ideal {idx} does not extend the quotient's automorphisms (missing {:?})",
                    a.moved_pairs()
                )));
            }
            groups.push(group);
        }
        Ok(Self::with_groups(ring, MultiactionKind::Custom, groups))
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn kind(&self) -> MultiactionKind {
        self.kind
    }

    pub fn group(&self, ideal_index: usize) -> &ActionGroup {
        &self.groups[ideal_index]
    }

    pub fn top(&self) -> &ActionGroup {
        &self.groups[0]
    }

    pub fn quotient(&self, ideal_index: usize) -> Result<&QuotientView> {
        if let Some(q) = self.quotients[ideal_index].get() {
            return Ok(q);
        }
        let q = self.ring.quotient_by_index(ideal_index)?;
        let _ = self.quotients[ideal_index].set(q);
        Ok(self.quotients[ideal_index].get().expect("just set"))
    }

    /// Generators of the stabilizer of `image` in the group on `R/I`.
    pub fn stabilizer_generators(&self, ideal_index: usize, image: &ElemSet) -> Result<Vec<Perm>> {
        let q = self.quotient(ideal_index)?;
        let len = q.target.order();
        Ok(match &self.groups[ideal_index] {
            ActionGroup::Symmetric => {
                let pts = image.to_vec();
                pts.windows(2).map(|w| Perm::transposition(len, w[0], w[1])).collect()
            }
            ActionGroup::Automorphic => {
                let stab: Vec<Perm> = q
                    .target
                    .automorphism_group()?
                    .iter()
                    .filter(|g| g.stabilizes(image))
                    .cloned()
                    .collect();
                greedy_generators(len, &stab)
            }
            ActionGroup::Generated { elements, .. } => {
                let stab: Vec<Perm> = elements.iter().filter(|g| g.stabilizes(image)).cloned().collect();
                greedy_generators(len, &stab)
            }
        })
    }

    /// A lift of `g` in the top group that stabilizes `m_hat`, if any.
    pub fn find_lift(&self, ideal_index: usize, m_hat: &ElemSet, g: &Perm) -> Result<Option<Perm>> {
        let q = self.quotient(ideal_index)?;
        Ok(match self.top() {
            ActionGroup::Symmetric => sym_lift_exists(q, m_hat, g),
            ActionGroup::Automorphic => search_group_lift(q, m_hat, g, self.ring.automorphism_group()?),
            ActionGroup::Generated { elements, .. } => search_group_lift(q, m_hat, g, elements),
        })
    }

    /// Checks one `(I, M̂)` pair for `M`.
    pub fn check_candidate(&self, m: &ElemSet, ideal_index: usize, m_hat: &ElemSet) -> Result<Candidate> {
        let ring = &self.ring;
        let ideal = &ring.ideals()[ideal_index].elements;
        if ideal_index == 0 || ideal.len() == ring.order() {
            return Ok(Candidate::Rejected("ideal is zero or the whole ring".into()));
        }
        if !m_hat.is_subset(m) {
            return Ok(Candidate::Rejected("associated set is not inside the monoid".into()));
        }
        if !m.difference(m_hat).is_subset(ideal) {
            return Ok(Candidate::Rejected(
                "monoid minus associated set leaves the ideal".into(),
            ));
        }
        if let Err(e) = check_extended(ring, m_hat) {
            return Ok(Candidate::Rejected(e.to_string()));
        }
        let q = self.quotient(ideal_index)?;
        let image = q.project_set(m_hat);
        let generators = self.stabilizer_generators(ideal_index, &image)?;
        let mut lifts = Vec::with_capacity(generators.len());
        for g in generators {
            match self.find_lift(ideal_index, m_hat, &g)? {
                Some(w) => lifts.push(LiftPair {
                    generator: (&g).into(),
                    witness: (&w).into(),
                }),
                None => {
                    let reason = match self.top() {
                        ActionGroup::Symmetric => {
                            fiber_mismatch(q, m_hat, &g).unwrap_or(ObstructionReason::NoLiftInGroup)
                        }
                        _ => ObstructionReason::NoLiftInGroup,
                    };
                    return Ok(Candidate::Obstructed(Obstruction {
                        ideal: ideal.to_u32_vec(),
                        m_hat: m_hat.to_u32_vec(),
                        generator: (&g).into(),
                        reason,
                    }));
                }
            }
        }
        let cert = CoveringCertificate {
            ring: ring.spec_string(),
            multiaction: self.kind,
            ideal_index,
            ideal: ideal.clone(),
            monoid: m.clone(),
            m_hat: m_hat.clone(),
            lifts,
        };
        cert.verify(self)?;
        Ok(Candidate::Certified(Box::new(cert)))
    }

    /// `(M∖I) ∪ R^{Aut(R)} ∪ J` for `J ⊆ M ∩ I`, in search order, without
    /// checking closure.
    fn candidates(&self, m: &ElemSet, ideal_index: usize) -> CandidateIter {
        let ring = &self.ring;
        let ideal = &ring.ideals()[ideal_index].elements;
        let base = m.difference(ideal).union(&ring.fixed_subring().intersection(m));
        let free: Vec<usize> = m.intersection(ideal).difference(&base).to_vec();
        let mut firsts = vec![base.clone(), m.clone()];
        if let Some(h) = self.reduction_candidate(m, ideal_index) {
            firsts.push(h);
        }
        CandidateIter {
            firsts,
            base,
            free,
            next_mask: 0,
        }
    }

    /// The associated set built by the reduction route when `R = 𝔽₂ⁿ`, the
    /// top is symmetric and `I` is the maximal ideal of a point `p`.
    fn reduction_candidate(&self, m: &ElemSet, ideal_index: usize) -> Option<ElemSet> {
        let RingSpec::ProductField { p: 2, n, degree: 1, .. } = *self.ring.spec() else {
            return None;
        };
        if self.top() != &ActionGroup::Symmetric {
            return None;
        }
        let IdealShape::Coordinates(mask) = self.ring.ideals()[ideal_index].shape else {
            return None;
        };
        let missing = !mask & ((1u32 << n) - 1);
        if missing.count_ones() != 1 {
            return None;
        }
        let point = missing.trailing_zeros();
        let family = phi_inverse(n, m).ok()?;
        if family.len() < 2 || 2 * family.frequency(point) > family.len() {
            return None;
        }
        let reduced = reduce_to_half(&family, point).ok()?;
        phi(&reduced.reduced).ok()
    }

    /// Searches for a proper nonzero covering ideal of `m`.
    pub fn find_covering_ideal(&self, m: &ElemSet) -> Result<CoveringSearch> {
        self.search(m, &self.ring.proper_nonzero_ideals(), |_| true)
    }

    fn search(&self, m: &ElemSet, ideals: &[usize], accept: impl Fn(&ElemSet) -> bool) -> Result<CoveringSearch> {
        check_extended(&self.ring, m)?;
        let mut obstructions = Vec::new();
        let mut inconclusive = Vec::new();
        for &idx in ideals {
            let mut iter = self.candidates(m, idx);
            if iter.free.len() > CANDIDATE_CAP_LOG2 {
                inconclusive.push(idx);
            }
            let mut recorded = false;
            let mut tried = HashSet::new();
            while let Some(h) = iter.next_candidate() {
                if !accept(&h) || !tried.insert(h.clone()) {
                    continue;
                }
                match self.check_candidate(m, idx, &h)? {
                    Candidate::Certified(cert) => {
                        return Ok(CoveringSearch {
                            verdict: CoverVerdict::Covered(cert),
                            obstructions,
                        });
                    }
                    Candidate::Obstructed(o) if !recorded => {
                        obstructions.push(o);
                        recorded = true;
                    }
                    _ => {}
                }
            }
        }
        let verdict = if inconclusive.is_empty() {
            CoverVerdict::NotCovered
        } else {
            CoverVerdict::Inconclusive(format!(
                "more than 2^{CANDIDATE_CAP_LOG2} associated-set candidates for ideals {inconclusive:?}"
            ))
        };
        Ok(CoveringSearch { verdict, obstructions })
    }

    /// Every valid associated set of `m` for the ideal, in candidate order.
    pub fn all_associated(&self, m: &ElemSet, ideal_index: usize) -> Result<Vec<CoveringCertificate>> {
        let mut iter = self.candidates(m, ideal_index);
        if iter.free.len() > CANDIDATE_CAP_LOG2 {
            return Err(Error::CapExceeded {
                what: "associated-set candidates".into(),
                cap: 1 << CANDIDATE_CAP_LOG2,
            });
        }
        let mut out = Vec::new();
        let mut tried = HashSet::new();
        while let Some(h) = iter.next_candidate() {
            if !tried.insert(h.clone()) {
                continue;
            }
            if let Candidate::Certified(c) = self.check_candidate(m, ideal_index, &h)? {
                out.push(*c);
            }
        }
        out.sort_by(|a, b| a.m_hat.cmp(&b.m_hat));
        Ok(out)
    }

    /// A certificate for `(m, I)` whose associated set is strictly smaller
    /// than `m`.
    pub fn find_proper_associated(&self, m: &ElemSet, ideal_index: usize) -> Result<Option<CoveringCertificate>> {
        let search = self.search(m, &[ideal_index], |h| h != m)?;
        Ok(match search.verdict {
            CoverVerdict::Covered(c) => Some(*c),
            _ => None,
        })
    }

    pub fn covers(&self, m: &ElemSet, ideal_index: usize) -> Result<Option<CoveringCertificate>> {
        let search = self.search(m, &[ideal_index], |_| true)?;
        Ok(match search.verdict {
            CoverVerdict::Covered(c) => Some(*c),
            _ => None,
        })
    }
}

struct CandidateIter {
    firsts: Vec<ElemSet>,
    base: ElemSet,
    free: Vec<usize>,
    next_mask: u64,
}

impl CandidateIter {
    fn next_candidate(&mut self) -> Option<ElemSet> {
        if !self.firsts.is_empty() {
            return Some(self.firsts.remove(0));
        }
        if self.free.len() > CANDIDATE_CAP_LOG2 || self.next_mask >> self.free.len() != 0 {
            return None;
        }
        let mask = self.next_mask;
        self.next_mask += 1;
        let mut h = self.base.clone();
        for (i, &x) in self.free.iter().enumerate() {
            if mask >> i & 1 == 1 {
                h.insert(x);
            }
        }
        Some(h)
    }
}

pub enum Candidate {
    Certified(Box<CoveringCertificate>),
    Obstructed(Obstruction),
    Rejected(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum ObstructionReason {
    /// `|π⁻¹(class) ∩ M̂| ≠ |π⁻¹(image) ∩ M̂|`.
    FiberMismatch {
        class: u32,
        image: u32,
        class_size: usize,
        image_size: usize,
    },
    NoLiftInGroup,
}

/// Why a stabilizer generator failed to lift for one `(I, M̂)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Obstruction {
    pub ideal: Vec<u32>,
    pub m_hat: Vec<u32>,
    pub generator: PermRecord,
    pub reason: ObstructionReason,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftPair {
    /// Stabilizer generator, a permutation of `R/I`.
    pub generator: PermRecord,
    /// Its lift, a permutation of `R`.
    pub witness: PermRecord,
}

/// A proper nonzero covering ideal with its associated submonoid and a
/// lift of every stabilizer generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoveringCertificate {
    pub ring: String,
    pub multiaction: MultiactionKind,
    pub ideal_index: usize,
    pub ideal: ElemSet,
    pub monoid: ElemSet,
    pub m_hat: ElemSet,
    pub lifts: Vec<LiftPair>,
}

impl CoveringCertificate {
    pub fn is_maximal(&self, ring: &Ring) -> bool {
        ring.is_maximal_ideal(self.ideal_index)
    }

    /// Checks every stated property against `ma`.
    pub fn verify(&self, ma: &Multiaction) -> Result<()> {
        let bad = |m: String| Err(Error::CertificateInvalid(m));
        let ring = ma.ring();
        if self.ring != ring.spec_string() {
            return bad(format!("certificate is for {}, not {}", self.ring, ring.spec_string()));
        }
        let Some(ideal) = ring.ideals().get(self.ideal_index) else {
            return bad("ideal index out of range".into());
        };
        if ideal.elements != self.ideal {
            return bad("ideal does not match the ring's ideal list".into());
        }
        if self.ideal_index == 0 || self.ideal.len() == ring.order() {
            return bad("ideal is zero or the whole ring".into());
        }
        if let Err(e) = check_extended(ring, &self.monoid) {
            return bad(format!("monoid: {e}"));
        }
        if let Err(e) = check_extended(ring, &self.m_hat) {
            return bad(format!("associated set: {e}"));
        }
        if !self.m_hat.is_subset(&self.monoid) || !self.monoid.difference(&self.m_hat).is_subset(&self.ideal) {
            return bad("associated set is not sandwiched between M and M ∖ I".into());
        }
        let q = ma.quotient(self.ideal_index)?;
        let image = q.project_set(&self.m_hat);
        let expected = ma.stabilizer_generators(self.ideal_index, &image)?;
        let recorded: Vec<Perm> = self
            .lifts
            .iter()
            .map(|l| Perm::try_from(&l.generator))
            .collect::<Result<_>>()?;
        if recorded != expected {
            return bad("recorded generators are not the stabilizer's canonical generators".into());
        }
        for (g, l) in recorded.iter().zip(&self.lifts) {
            let w = Perm::try_from(&l.witness)?;
            if !ma.top().contains(ring, &w) {
                return bad("witness is not in the top group".into());
            }
            if !w.stabilizes(&self.m_hat) {
                return bad("witness does not stabilize the associated set".into());
            }
            if let Some(x) = self
                .m_hat
                .iter()
                .find(|&x| q.project(w.apply(x)) != g.apply(q.project(x)))
            {
                return bad(format!("commuting square fails at element {x}"));
            }
        }
        Ok(())
    }

    /// Rebuilds the ring and multiaction from the record and verifies.
    pub fn revalidate(&self) -> Result<()> {
        let ring = build_ring(&self.ring.parse()?)?;
        self.verify(&Multiaction::of_kind(&ring, self.multiaction)?)
    }

    /// The lift of the `i`-th stabilizer generator.
    pub fn witness(&self, i: usize) -> Result<Perm> {
        Perm::try_from(&self.lifts[i].witness)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "verdict")]
pub enum CoverVerdict {
    Covered(Box<CoveringCertificate>),
    NotCovered,
    Inconclusive(String),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoveringSearch {
    pub verdict: CoverVerdict,
    /// The first obstruction met for each ideal that was rejected.
    pub obstructions: Vec<Obstruction>,
}

impl CoveringSearch {
    pub fn certificate(&self) -> Option<&CoveringCertificate> {
        match &self.verdict {
            CoverVerdict::Covered(c) => Some(c),
            _ => None,
        }
    }
}

/// Multiplicatively closed, contains the fixed subring (hence 0 and 1).
pub fn check_extended(ring: &Ring, set: &ElemSet) -> Result<()> {
    if set.universe() != ring.order() {
        return Err(Error::NotExtendedSubmonoid(
            "set lives in a ring of another order".into(),
        ));
    }
    if !ring.fixed_subring().is_subset(set) {
        return Err(Error::NotExtendedSubmonoid("missing part of the fixed subring".into()));
    }
    if !set.contains(ring.one()) {
        return Err(Error::NotExtendedSubmonoid("missing the identity".into()));
    }
    for a in set.iter() {
        for b in set.iter().filter(|&b| b >= a) {
            if !set.contains(ring.mul(a, b)) {
                return Err(Error::NotExtendedSubmonoid(format!("{a}·{b} escapes")));
            }
        }
    }
    Ok(())
}

pub fn is_extended_submonoid(ring: &Ring, set: &ElemSet) -> bool {
    check_extended(ring, set).is_ok()
}

pub fn is_subring(ring: &Ring, set: &ElemSet) -> bool {
    is_extended_submonoid(ring, set)
        && set.iter().all(|a| set.iter().all(|b| set.contains(ring.add(a, b))))
        && set.iter().all(|a| set.contains(ring.neg(a)))
}

fn fibers_within(q: &QuotientView, m_hat: &ElemSet) -> Vec<Vec<usize>> {
    (0..q.target.order()).map(|a| q.fiber_within(a, m_hat)).collect()
}

fn fiber_mismatch(q: &QuotientView, m_hat: &ElemSet, g: &Perm) -> Option<ObstructionReason> {
    let fibers = fibers_within(q, m_hat);
    (0..fibers.len()).filter(|&a| !fibers[a].is_empty()).find_map(|a| {
        let b = g.apply(a);
        (fibers[a].len() != fibers[b].len()).then(|| ObstructionReason::FiberMismatch {
            class: a as u32,
            image: b as u32,
            class_size: fibers[a].len(),
            image_size: fibers[b].len(),
        })
    })
}

/// Lift of `g` into `Sym(R)` stabilizing `m_hat`: exists exactly when `g`
/// preserves fiber sizes inside `m_hat`. Fibers are matched in index order
/// and everything outside `m_hat` is fixed.
pub fn sym_lift_exists(q: &QuotientView, m_hat: &ElemSet, g: &Perm) -> Option<Perm> {
    let image = q.project_set(m_hat);
    if !g.stabilizes(&image) {
        return None;
    }
    let fibers = fibers_within(q, m_hat);
    let mut images: Vec<u32> = (0..q.source.order() as u32).collect();
    for a in image.iter() {
        let (from, to) = (&fibers[a], &fibers[g.apply(a)]);
        if from.len() != to.len() {
            return None;
        }
        for (&x, &y) in from.iter().zip(to) {
            images[x] = y as u32;
        }
    }
    Some(Perm::from_images(images).expect("fiber pairing is a bijection"))
}

fn search_group_lift(q: &QuotientView, m_hat: &ElemSet, g: &Perm, group: &[Perm]) -> Option<Perm> {
    group
        .iter()
        .find(|h| h.stabilizes(m_hat) && m_hat.iter().all(|x| q.project(h.apply(x)) == g.apply(q.project(x))))
        .cloned()
}

/// Definition-level lift search. For the symmetric top this backtracks over
/// all permutations of `R` with the two required properties; otherwise it
/// walks the whole group.
pub fn lift_exists_bruteforce(q: &QuotientView, m_hat: &ElemSet, g: &Perm, top: &ActionGroup) -> Result<Option<Perm>> {
    match top {
        ActionGroup::Automorphic => Ok(search_group_lift(q, m_hat, g, q.source.automorphism_group()?)),
        ActionGroup::Generated { elements, .. } => Ok(search_group_lift(q, m_hat, g, elements)),
        ActionGroup::Symmetric => {
            let n = q.source.order();
            if n > BRUTE_FORCE_SYM_LIMIT {
                return Err(Error::DomainTooLarge {
                    size: n,
                    limit: BRUTE_FORCE_SYM_LIMIT,
                });
            }
            fn go(
                x: usize,
                q: &QuotientView,
                m_hat: &ElemSet,
                g: &Perm,
                used: &mut Vec<bool>,
                images: &mut Vec<u32>,
            ) -> bool {
                let n = used.len();
                if x == n {
                    return true;
                }
                for y in 0..n {
                    if used[y] {
                        continue;
                    }
                    let ok = if m_hat.contains(x) {
                        m_hat.contains(y) && q.project(y) == g.apply(q.project(x))
                    } else {
                        !m_hat.contains(y)
                    };
                    if ok {
                        used[y] = true;
                        images.push(y as u32);
                        if go(x + 1, q, m_hat, g, used, images) {
                            return true;
                        }
                        images.pop();
                        used[y] = false;
                    }
                }
                false
            }
            let mut used = vec![false; n];
            let mut images = Vec::with_capacity(n);
            Ok(go(0, q, m_hat, g, &mut used, &mut images)
                .then(|| Perm::from_images(images).expect("search builds bijections")))
        }
    }
}

/// Every extended submonoid of `ring`, in canonical order.
pub fn enumerate_extended_submonoids(ring: &Ring, order_cap: usize, count_cap: usize) -> Result<Vec<ElemSet>> {
    if ring.order() > order_cap.min(DEFAULT_ENUMERATION_ORDER) {
        return Err(Error::CapExceeded {
            what: format!("exhaustive submonoid enumeration of {}", ring.spec_string()),
            cap: order_cap.min(DEFAULT_ENUMERATION_ORDER) as u64,
        });
    }
    let base = ring.multiplicative_closure(ring.fixed_subring());
    closure_enumeration(ring, base, 0..ring.order(), count_cap)
}

fn closure_enumeration(
    ring: &Ring,
    base: ElemSet,
    candidates: impl Iterator<Item = usize> + Clone,
    count_cap: usize,
) -> Result<Vec<ElemSet>> {
    let mut seen: HashSet<ElemSet> = HashSet::from([base.clone()]);
    let mut stack = vec![base];
    while let Some(m) = stack.pop() {
        for c in candidates.clone() {
            if m.contains(c) {
                continue;
            }
            let closed = ring.adjoin(&m, c);
            if !seen.contains(&closed) {
                if seen.len() >= count_cap {
                    return Err(Error::CapExceeded {
                        what: "submonoid count".into(),
                        cap: count_cap as u64,
                    });
                }
                seen.insert(closed.clone());
                stack.push(closed);
            }
        }
    }
    let mut all: Vec<ElemSet> = seen.into_iter().collect();
    all.sort();
    Ok(all)
}

/// For local rings whose only proper nonzero ideal is the maximal one and
/// whose fixed subring consists of units and zero (the dual numbers), an
/// extended submonoid `M` is covered under the automorphic multiaction iff
/// `(M ∩ R^×) ∪ {0}` is. This enumerates those reduced monoids: `G ∪ {0}`
/// for every unit subgroup `G` containing the fixed units.
pub fn unit_subgroup_monoids(ring: &Ring, count_cap: usize) -> Result<Vec<ElemSet>> {
    if !has_unit_reduction(ring) {
        return Err(Error::PreconditionViolated(format!(
            "{} does not admit the unit-subgroup reduction",
            ring.spec_string()
        )));
    }
    let units = ring.units();
    let base = ring.multiplicative_closure(ring.fixed_subring());
    let unit_list = units.to_vec();
    closure_enumeration(ring, base, unit_list.into_iter(), count_cap)
}

pub fn has_unit_reduction(ring: &Ring) -> bool {
    let ideals = ring.ideals();
    let units = ring.units();
    ideals.len() == 3 && ring.fixed_subring().iter().all(|x| x == 0 || units.contains(x))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MonoidDomain {
    /// Every extended submonoid.
    Exhaustive,
    /// Unit subgroups joined with zero; equivalent for the automorphic
    /// multiaction on dual numbers.
    UnitSubgroups,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MonoidOutcome {
    pub monoid: Vec<u32>,
    pub search: CoveringSearch,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NetworkReport {
    pub ring: String,
    pub multiaction: MultiactionKind,
    pub domain: MonoidDomain,
    pub monoid_count: usize,
    pub verdict: bool,
    pub inconclusive: usize,
    pub outcomes: Vec<MonoidOutcome>,
}

impl NetworkReport {
    pub fn failures(&self) -> impl Iterator<Item = &MonoidOutcome> {
        self.outcomes.iter().filter(|o| o.search.certificate().is_none())
    }

    pub fn certificates(&self) -> impl Iterator<Item = &CoveringCertificate> {
        self.outcomes.iter().filter_map(|o| o.search.certificate())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct NetworkOptions {
    pub order_cap: usize,
    pub monoid_cap: usize,
    /// Allow the unit-subgroup reduction when it applies.
    pub reduce: bool,
}

impl Default for NetworkOptions {
    fn default() -> Self {
        NetworkOptions {
            order_cap: DEFAULT_ENUMERATION_ORDER,
            monoid_cap: DEFAULT_MONOID_CAP,
            reduce: true,
        }
    }
}

pub fn monoid_domain(ma: &Multiaction, opts: &NetworkOptions) -> Result<(MonoidDomain, Vec<ElemSet>)> {
    let ring = ma.ring();
    if opts.reduce && ma.kind() == MultiactionKind::Automorphic && has_unit_reduction(ring) {
        return Ok((
            MonoidDomain::UnitSubgroups,
            unit_subgroup_monoids(ring, opts.monoid_cap)?,
        ));
    }
    Ok((
        MonoidDomain::Exhaustive,
        enumerate_extended_submonoids(ring, opts.order_cap, opts.monoid_cap)?,
    ))
}

pub fn is_monoidal_network(ma: &Multiaction, opts: &NetworkOptions) -> Result<NetworkReport> {
    let (domain, monoids) = monoid_domain(ma, opts)?;
    network_over(ma, domain, &monoids)
}

pub fn network_over(ma: &Multiaction, domain: MonoidDomain, monoids: &[ElemSet]) -> Result<NetworkReport> {
    let outcomes: Vec<MonoidOutcome> = monoids
        .par_iter()
        .map(|m| {
            Ok(MonoidOutcome {
                monoid: m.to_u32_vec(),
                search: ma.find_covering_ideal(m)?,
            })
        })
        .collect::<Result<_>>()?;
    let inconclusive = outcomes
        .iter()
        .filter(|o| matches!(o.search.verdict, CoverVerdict::Inconclusive(_)))
        .count();
    let verdict = outcomes.iter().all(|o| o.search.certificate().is_some());
    Ok(NetworkReport {
        ring: ma.ring().spec_string(),
        multiaction: ma.kind(),
        domain,
        monoid_count: outcomes.len(),
        verdict,
        inconclusive,
        outcomes,
    })
}

/// `(R^×) ∪ {0}`.
pub fn units_with_zero(ring: &Ring) -> ElemSet {
    let mut s = ring.units();
    s.insert(0);
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(s: &str) -> Ring {
        build_ring(&s.parse().unwrap()).unwrap()
    }

    fn count_by_filter(r: &Ring) -> usize {
        (0u32..1 << r.order())
            .filter(|mask| {
                let s = ElemSet::from_elems(r.order(), (0..r.order()).filter(|i| mask >> i & 1 == 1));
                is_extended_submonoid(r, &s)
            })
            .count()
    }

    #[test]
    fn submonoid_counts_match_subset_filter() {
        for spec in [
            "product:2^2",
            "gf:2^2",
            "mod:4",
            "mod:6",
            "product:2^3",
            "dual:2^1",
            "mod:8",
        ] {
            let r = ring(spec);
            let n = enumerate_extended_submonoids(&r, 256, 1 << 20).unwrap().len();
            assert_eq!(n, count_by_filter(&r), "{spec}");
        }
        assert_eq!(
            enumerate_extended_submonoids(&ring("product:2^2"), 256, 1 << 20)
                .unwrap()
                .len(),
            4
        );
        assert_eq!(
            enumerate_extended_submonoids(&ring("gf:2^2"), 256, 1 << 20)
                .unwrap()
                .len(),
            2
        );
        assert_eq!(
            enumerate_extended_submonoids(&ring("mod:4"), 256, 1 << 20)
                .unwrap()
                .len(),
            1
        );
    }

    #[test]
    fn sym_lift_examples() {
        let z4 = ring("mod:4");
        let q = z4.quotient_by_index(1).unwrap();
        let swap = Perm::transposition(2, 0, 1);
        let w = sym_lift_exists(&q, &ElemSet::full(4), &swap).unwrap();
        assert_eq!(w.images(), &[1, 0, 3, 2]);
        let id = Perm::identity(2);
        assert!(sym_lift_exists(&q, &ElemSet::full(4), &id).unwrap().is_identity());

        let f9 = ring("product:3^2");
        let m = units_with_zero(&f9);
        let idx = f9.maximal_ideals()[0];
        let q = f9.quotient_by_index(idx).unwrap();
        let g = Perm::transposition(3, 0, 1);
        assert!(sym_lift_exists(&q, &m, &g).is_none());
        assert!(matches!(
            fiber_mismatch(&q, &m, &g),
            Some(ObstructionReason::FiberMismatch {
                class_size: 1,
                image_size: 2,
                ..
            })
        ));
    }

    #[test]
    fn frobenius_lifts_on_dual_numbers() {
        let r = ring("dual:2^2");
        let q = r.quotient_by_index(1).unwrap();
        let frob = q.target.aut_generators()[0].clone();
        let w = lift_exists_bruteforce(&q, &ElemSet::full(16), &frob, &ActionGroup::Automorphic)
            .unwrap()
            .unwrap();
        assert!(r.is_automorphism(&w));
    }

    #[test]
    fn prime_power_symmetric_fails_on_units() {
        let r = ring("product:3^2");
        let ma = Multiaction::symmetric(&r);
        let search = ma.find_covering_ideal(&units_with_zero(&r)).unwrap();
        assert!(matches!(search.verdict, CoverVerdict::NotCovered));
        assert_eq!(search.obstructions.len(), 2);
    }

    #[test]
    fn rigid_ring_networks() {
        let r = ring("mod:12");
        let rep = is_monoidal_network(&Multiaction::symmetric(&r), &NetworkOptions::default()).unwrap();
        assert!(rep.verdict);
        assert_eq!(rep.monoid_count, 1);
        for c in rep.certificates() {
            c.revalidate().unwrap();
        }
    }

    #[test]
    fn boolean_symmetric_network_small() {
        for n in 2..=3 {
            let r = build_ring(&RingSpec::product(2, n)).unwrap();
            let ma = Multiaction::symmetric(&r);
            let rep = is_monoidal_network(&ma, &NetworkOptions::default()).unwrap();
            assert!(rep.verdict);
            assert!(rep.certificates().all(|c| c.is_maximal(&r)));
        }
    }

    #[test]
    fn unit_reduction_matches_exhaustive() {
        for spec in ["dual:2^1", "dual:3^1", "dual:2^2", "dual:5^1", "dual:3^2"] {
            let r = ring(spec);
            let ma = Multiaction::automorphic(&r);
            let full = is_monoidal_network(
                &ma,
                &NetworkOptions {
                    reduce: false,
                    ..Default::default()
                },
            )
            .unwrap();
            let reduced = is_monoidal_network(&ma, &NetworkOptions::default()).unwrap();
            // 𝔽₂[x]/(x²) is rigid, so its fixed subring contains ε
            let expected = if spec == "dual:2^1" {
                MonoidDomain::Exhaustive
            } else {
                MonoidDomain::UnitSubgroups
            };
            assert_eq!(reduced.domain, expected);
            assert_eq!(full.verdict, reduced.verdict, "{spec}");
            if expected == MonoidDomain::Exhaustive {
                continue;
            }
            // each full monoid is covered iff its unit part is
            for o in &full.outcomes {
                let m = ElemSet::from_elems(r.order(), o.monoid.iter().map(|&x| x as usize));
                let reduced_m = m.intersection(&units_with_zero(&r));
                let ro = reduced
                    .outcomes
                    .iter()
                    .find(|x| x.monoid == reduced_m.to_u32_vec())
                    .unwrap();
                assert_eq!(o.search.certificate().is_some(), ro.search.certificate().is_some());
            }
        }
    }

    #[test]
    fn custom_multiaction_validates_extension() {
        let r = ring("product:4^1");
        // Γ₀ must contain the Frobenius of 𝔽₄.
        assert!(Multiaction::custom(&r, vec![Some(vec![Perm::identity(4)]), None]).is_err());
        let frob = r.aut_generators()[0].clone();
        let ma = Multiaction::custom(&r, vec![Some(vec![frob]), None]).unwrap();
        assert_eq!(ma.kind(), MultiactionKind::Custom);
    }

    #[test]
    fn certificates_round_trip_json() {
        let r = ring("product:2^3");
        let ma = Multiaction::symmetric(&r);
        let m = ElemSet::from_elems(8, [0, 1, 3, 7]);
        let cert = ma.find_covering_ideal(&m).unwrap().certificate().unwrap().clone();
        let json = serde_json::to_string(&cert).unwrap();
        let back: CoveringCertificate = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cert);
        back.revalidate().unwrap();
        let mut broken = back.clone();
        broken.lifts[0].witness = (&Perm::identity(8)).into();
        assert!(broken.revalidate().is_err());
    }
}
