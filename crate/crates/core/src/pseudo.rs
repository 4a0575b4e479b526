//! Involutions on submonoids of `𝔽₂ⁿ`, their quadratic ideals, and the
//! constructions translating between pseudocomplements, rare elements and
//! covering ideals.

use serde::{Deserialize, Serialize};

use crate::elemset::ElemSet;
use crate::error::{Error, Result};
use crate::family::{phi_inverse, SetFamily};
use crate::network::{check_extended, sym_lift_exists, CoveringCertificate, Multiaction};
use crate::perm::Perm;
use crate::ring::{QuotientView, Ring, RingSpec};

/// Largest domain searched by [`brute_force_pseudocomplement`].
pub const BRUTE_FORCE_LIMIT: usize = 12;

/// A self-inverse map on `domain`, stored as a table over the whole ring
/// that is the identity off the domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Involution {
    domain: ElemSet,
    table: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvolutionRecord {
    pub universe: usize,
    pub domain: Vec<u32>,
    /// `(x, T(x))` with `x < T(x)`; unlisted domain points are fixed.
    pub pairs: Vec<(u32, u32)>,
}

impl Involution {
    pub fn new(domain: ElemSet, map: impl Fn(usize) -> usize) -> Result<Self> {
        let mut table: Vec<u32> = (0..domain.universe() as u32).collect();
        for x in domain.iter() {
            let y = map(x);
            if !domain.contains(y) {
                return Err(Error::NotAnInvolution);
            }
            table[x] = y as u32;
        }
        let t = Involution { domain, table };
        if t.domain.iter().any(|x| t.apply(t.apply(x)) != x) {
            return Err(Error::NotAnInvolution);
        }
        Ok(t)
    }

    pub fn identity(domain: ElemSet) -> Self {
        let table = (0..domain.universe() as u32).collect();
        Involution { domain, table }
    }

    pub fn from_pairs(domain: ElemSet, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut table: Vec<u32> = (0..domain.universe() as u32).collect();
        for &(x, y) in pairs {
            table[x] = y as u32;
            table[y] = x as u32;
        }
        Involution::new(domain, |x| table[x] as usize)
    }

    pub fn domain(&self) -> &ElemSet {
        &self.domain
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.table[x] as usize
    }

    /// Orbits `{x, T(x)}` with `x ≤ T(x)`, ascending.
    pub fn orbits(&self) -> Vec<(usize, usize)> {
        self.domain
            .iter()
            .filter(|&x| x <= self.apply(x))
            .map(|x| (x, self.apply(x)))
            .collect()
    }

    pub fn as_perm(&self) -> Perm {
        Perm::from_images(self.table.clone()).expect("involution table is a bijection")
    }

    pub fn record(&self) -> InvolutionRecord {
        InvolutionRecord {
            universe: self.domain.universe(),
            domain: self.domain.to_u32_vec(),
            pairs: self
                .orbits()
                .into_iter()
                .filter(|(x, y)| x != y)
                .map(|(x, y)| (x as u32, y as u32))
                .collect(),
        }
    }

    pub fn from_record(r: &InvolutionRecord) -> Result<Self> {
        let domain = ElemSet::from_elems(r.universe, r.domain.iter().map(|&x| x as usize));
        let pairs: Vec<(usize, usize)> = r.pairs.iter().map(|&(x, y)| (x as usize, y as usize)).collect();
        Involution::from_pairs(domain, &pairs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PseudocomplementVerdict {
    pub involution: InvolutionRecord,
    pub quadratic_ideal: Vec<u32>,
    pub proper: bool,
    /// Least element outside the quadratic ideal, when proper.
    pub witness: Option<u32>,
    /// OR of all `x ∧ T(x)` when the ring is `𝔽₂ⁿ`.
    pub or_mask: Option<u32>,
}

fn boolean_dimension(ring: &Ring) -> Option<u32> {
    match *ring.spec() {
        RingSpec::ProductField { p: 2, n, degree: 1, .. } => Some(n),
        _ => None,
    }
}

/// `Λ(T) = ⟨x·T(x)⟩` by generic closure.
pub fn quadratic_ideal_generic(ring: &Ring, t: &Involution) -> ElemSet {
    ring.ideal_generated(t.domain().iter().map(|x| ring.mul(x, t.apply(x))))
}

pub fn quadratic_ideal(ring: &Ring, t: &Involution) -> Result<PseudocomplementVerdict> {
    if t.domain().universe() != ring.order() {
        return Err(Error::NotAnInvolution);
    }
    let (ideal, or_mask) = match boolean_dimension(ring) {
        Some(_) => {
            let mask = t.domain().iter().fold(0u32, |acc, x| acc | (x & t.apply(x)) as u32);
            let ideal = ElemSet::from_elems(ring.order(), (0..ring.order()).filter(|&y| y as u32 & !mask == 0));
            (ideal, Some(mask))
        }
        None => (quadratic_ideal_generic(ring, t), None),
    };
    let proper = ideal.len() < ring.order();
    let witness = (0..ring.order()).find(|&x| !ideal.contains(x)).map(|x| x as u32);
    Ok(PseudocomplementVerdict {
        involution: t.record(),
        quadratic_ideal: ideal.to_u32_vec(),
        proper,
        witness,
        or_mask,
    })
}

pub fn is_pseudocomplement(ring: &Ring, t: &Involution) -> bool {
    match boolean_dimension(ring) {
        Some(n) => {
            let mask = t.domain().iter().fold(0u32, |acc, x| acc | (x & t.apply(x)) as u32);
            mask != (1u32 << n) - 1
        }
        None => quadratic_ideal_generic(ring, t).len() < ring.order(),
    }
}

/// A point lying in at most half of the members of `Φ⁻¹(M)`, read off a
/// pseudocomplement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementCertificate {
    pub element: u32,
    pub frequency: usize,
    pub family_size: usize,
}

/// The least point missing from the OR-mask of `Λ(T)`.
pub fn pseudocomplement_to_element(ring: &Ring, t: &Involution) -> Result<ElementCertificate> {
    let n = boolean_dimension(ring).ok_or_else(|| Error::PreconditionViolated("ring is not 𝔽₂ⁿ".into()))?;
    let verdict = quadratic_ideal(ring, t)?;
    if !verdict.proper {
        return Err(Error::NotProper);
    }
    let mask = verdict.or_mask.expect("boolean ring");
    let p = (0..n)
        .find(|i| mask >> i & 1 == 0)
        .expect("proper ideal misses a point");
    let family = phi_inverse(n, t.domain())?;
    let frequency = family.frequency(p);
    for (x, y) in t.orbits() {
        let inside = [x, y].iter().filter(|&&z| z >> p & 1 == 1).count();
        let size = if x == y { 1 } else { 2 };
        if 2 * inside > size {
            return Err(Error::InvariantViolated(format!(
                "orbit {{{x},{y}}} puts point {p} in too many sets"
            )));
        }
    }
    if 2 * frequency > family.len() {
        return Err(Error::InvariantViolated(format!(
            "point {p} lies in more than half of {family}"
        )));
    }
    Ok(ElementCertificate {
        element: p,
        frequency,
        family_size: family.len(),
    })
}

/// Restricts the lift of the transposition `(0 1)` of `𝔽₂` to `M`.
pub fn covering_to_pseudocomplement(ring: &Ring, cert: &CoveringCertificate) -> Result<Involution> {
    let invalid = |m: &str| Error::CertificateInvalid(m.into());
    if boolean_dimension(ring).is_none() {
        return Err(invalid("ring is not 𝔽₂ⁿ"));
    }
    if !cert.is_maximal(ring) {
        return Err(invalid("covering ideal is not maximal"));
    }
    cert.verify(&Multiaction::symmetric(ring))?;
    let q = ring.quotient_by_index(cert.ideal_index)?;
    if q.target.order() != 2 || cert.lifts.len() != 1 {
        return Err(invalid("residue field is not 𝔽₂"));
    }
    let w = cert.witness(0)?;
    let t =
        Involution::new(cert.monoid.clone(), |x| w.apply(x)).map_err(|_| invalid("lift is not an involution on M"))?;
    let lambda = quadratic_ideal_generic(ring, &t);
    if !lambda.is_subset(&cert.ideal) {
        return Err(Error::InvariantViolated(
            "quadratic ideal escapes the covering ideal".into(),
        ));
    }
    Ok(t)
}

#[derive(Clone, Debug)]
pub struct LiftedPseudocomplement {
    pub involution: Involution,
    /// Fixed classes on which the lift was not self-inverse, so the
    /// identity was used instead.
    pub identity_classes: Vec<usize>,
}

/// Builds an involution on `m` from a pseudocomplement `t_quot` on `π(M̂)`
/// and a lift `lift` of it, pairing each fiber with the fiber over its
/// partner class. The representative side of each pair is the fiber
/// holding the least element.
pub fn lift_pseudocomplement(
    q: &QuotientView,
    m: &ElemSet,
    m_hat: &ElemSet,
    t_quot: &Involution,
    lift: &Perm,
) -> Result<LiftedPseudocomplement> {
    let image = q.project_set(m_hat);
    if t_quot.domain() != &image {
        return Err(Error::PreconditionViolated(
            "quotient involution is not defined on π(M̂)".into(),
        ));
    }
    if !lift.stabilizes(m_hat)
        || m_hat
            .iter()
            .any(|x| q.project(lift.apply(x)) != t_quot.apply(q.project(x)))
    {
        return Err(Error::LiftMismatch);
    }
    let inverse = lift.inverse();
    let mut table: Vec<usize> = (0..q.source.order()).collect();
    let mut identity_classes = Vec::new();
    for a in image.iter() {
        let b = t_quot.apply(a);
        if b < a {
            continue;
        }
        let fa = q.fiber_within(a, m_hat);
        if a == b {
            if fa.iter().all(|&x| lift.apply(lift.apply(x)) == x) {
                for &x in &fa {
                    table[x] = lift.apply(x);
                }
            } else {
                identity_classes.push(a);
            }
            continue;
        }
        let fb = q.fiber_within(b, m_hat);
        let (rep, other) = if fa[0] < fb[0] { (fa, fb) } else { (fb, fa) };
        for &x in &rep {
            table[x] = lift.apply(x);
        }
        for &x in &other {
            table[x] = inverse.apply(x);
        }
    }
    let gamma = Involution::new(m.clone(), |x| table[x])?;

    let target_lambda = quadratic_ideal_generic(&q.target, t_quot);
    let lambda = quadratic_ideal_generic(&q.source, &gamma);
    if !q.project_set(&lambda).is_subset(&target_lambda) {
        return Err(Error::InvariantViolated("π(Λ(γ)) is not inside Λ(T)".into()));
    }
    Ok(LiftedPseudocomplement {
        involution: gamma,
        identity_classes,
    })
}

/// Recursive construction: find a covering ideal, solve on `π(M̂)` in the
/// smaller ring, lift back.
pub fn solve_recursive(ring: &Ring, m: &ElemSet) -> Result<Involution> {
    let n = boolean_dimension(ring).ok_or_else(|| Error::PreconditionViolated("ring is not 𝔽₂ⁿ".into()))?;
    check_extended(ring, m)?;
    if n == 1 {
        return Involution::from_pairs(m.clone(), &[(0, 1)]);
    }
    let ma = Multiaction::symmetric(ring);
    let search = ma.find_covering_ideal(m)?;
    let cert = search
        .certificate()
        .ok_or_else(|| Error::NoCoveringIdeal(m.to_u32_vec()))?;
    let q = ma.quotient(cert.ideal_index)?;
    let image = q.project_set(&cert.m_hat);
    let t_quot = solve_recursive(&q.target, &image)?;
    let lift = sym_lift_exists(q, &cert.m_hat, &t_quot.as_perm())
        .ok_or_else(|| Error::InvariantViolated("pseudocomplement on the quotient does not lift".into()))?;
    let gamma = lift_pseudocomplement(q, m, &cert.m_hat, &t_quot, &lift)?.involution;
    if !is_pseudocomplement(ring, &gamma) {
        return Err(Error::InvariantViolated("recursive construction is not proper".into()));
    }
    Ok(gamma)
}

/// First proper involution on `m` in canonical order: each unassigned
/// point is first tried fixed, then paired with later points ascending.
pub fn brute_force_pseudocomplement(ring: &Ring, m: &ElemSet) -> Result<Option<Involution>> {
    if m.len() > BRUTE_FORCE_LIMIT {
        return Err(Error::DomainTooLarge {
            size: m.len(),
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let pts = m.to_vec();
    let full = boolean_dimension(ring).map(|n| (1u32 << n) - 1);

    struct Search<'a> {
        ring: &'a Ring,
        m: &'a ElemSet,
        pts: Vec<usize>,
        full: Option<u32>,
        table: Vec<usize>,
        assigned: Vec<bool>,
    }

    impl Search<'_> {
        fn go(&mut self, mask: u32) -> Option<Involution> {
            if self.full == Some(mask) {
                return None;
            }
            let Some(i) = (0..self.pts.len()).find(|&i| !self.assigned[i]) else {
                let t = Involution::new(self.m.clone(), |x| self.table[x]).expect("search builds involutions");
                return is_pseudocomplement(self.ring, &t).then_some(t);
            };
            let x = self.pts[i];
            self.assigned[i] = true;
            if let Some(t) = self.go(mask | x as u32) {
                return Some(t);
            }
            for j in i + 1..self.pts.len() {
                if self.assigned[j] {
                    continue;
                }
                let y = self.pts[j];
                self.assigned[j] = true;
                self.table[x] = y;
                self.table[y] = x;
                if let Some(t) = self.go(mask | (x & y) as u32) {
                    return Some(t);
                }
                self.table[x] = x;
                self.table[y] = y;
                self.assigned[j] = false;
            }
            self.assigned[i] = false;
            None
        }
    }

    let mut s = Search {
        ring,
        m,
        assigned: vec![false; pts.len()],
        pts,
        full,
        table: (0..ring.order()).collect(),
    };
    Ok(s.go(0))
}

/// The family `Φ⁻¹(M)` together with a pseudocomplement and the element it
/// certifies.
#[derive(Clone, Debug)]
pub struct FamilySolution {
    pub family: SetFamily,
    pub involution: Involution,
    pub element: ElementCertificate,
}

pub fn solve_family(ring: &Ring, family: &SetFamily) -> Result<FamilySolution> {
    let m = crate::family::phi(family)?;
    let involution = solve_recursive(ring, &m)?;
    let element = pseudocomplement_to_element(ring, &involution)?;
    Ok(FamilySolution {
        family: family.clone(),
        involution,
        element,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::enumerate_families;
    use crate::network::enumerate_extended_submonoids;
    use crate::ring::build_ring;

    fn boolean(n: u32) -> Ring {
        build_ring(&RingSpec::product(2, n)).unwrap()
    }

    fn set(r: &Ring, xs: &[usize]) -> ElemSet {
        ElemSet::from_elems(r.order(), xs.iter().copied())
    }

    #[test]
    fn global_complement_is_proper() {
        for n in 1..=4 {
            let r = boolean(n);
            let t = Involution::new(ElemSet::full(r.order()), |x| r.add(x, r.one())).unwrap();
            let v = quadratic_ideal(&r, &t).unwrap();
            assert!(v.proper);
            assert_eq!(v.quadratic_ideal, vec![0]);
            let c = pseudocomplement_to_element(&r, &t).unwrap();
            assert_eq!(c.element, 0);
            assert_eq!(c.frequency, 1 << (n - 1));
        }
    }

    #[test]
    fn identity_is_improper() {
        let r = boolean(3);
        let v = quadratic_ideal(&r, &Involution::identity(ElemSet::full(8))).unwrap();
        assert!(!v.proper);
        assert!(matches!(
            pseudocomplement_to_element(&r, &Involution::identity(ElemSet::full(8))),
            Err(Error::NotProper)
        ));
    }

    #[test]
    fn chain_example() {
        let r = boolean(2);
        let m = set(&r, &[0, 1, 3]);
        let t = Involution::from_pairs(m.clone(), &[(0, 3)]).unwrap();
        let v = quadratic_ideal(&r, &t).unwrap();
        assert_eq!(v.or_mask, Some(0b01));
        assert_eq!(v.quadratic_ideal, vec![0, 1]);
        assert_eq!(quadratic_ideal_generic(&r, &t).to_u32_vec(), vec![0, 1]);
        let c = pseudocomplement_to_element(&r, &t).unwrap();
        assert_eq!((c.element, c.frequency, c.family_size), (1, 1, 3));
    }

    #[test]
    fn rejects_non_involutions() {
        let r = boolean(2);
        let m = ElemSet::full(4);
        assert!(matches!(
            Involution::new(m.clone(), |x| (x + 1) % 4),
            Err(Error::NotAnInvolution)
        ));
        let small = set(&r, &[0, 1, 3]);
        assert!(matches!(Involution::new(small, |x| x ^ 1), Err(Error::NotAnInvolution)));
    }

    #[test]
    fn covering_route_on_full_square() {
        let r = boolean(2);
        let ma = Multiaction::symmetric(&r);
        let m = ElemSet::full(4);
        let cert = ma.find_covering_ideal(&m).unwrap().certificate().unwrap().clone();
        let t = covering_to_pseudocomplement(&r, &cert).unwrap();
        assert!(is_pseudocomplement(&r, &t));
        let two = set(&r, &[0, 3]);
        let cert = ma.find_covering_ideal(&two).unwrap().certificate().unwrap().clone();
        let t = covering_to_pseudocomplement(&r, &cert).unwrap();
        assert_eq!(t.apply(0), 3);
        assert_eq!(quadratic_ideal(&r, &t).unwrap().quadratic_ideal, vec![0]);
    }

    #[test]
    fn lift_rejects_mismatch() {
        let r = boolean(2);
        let ma = Multiaction::symmetric(&r);
        let idx = r.maximal_ideals()[0];
        let q = ma.quotient(idx).unwrap();
        let m = ElemSet::full(4);
        let t_quot = Involution::from_pairs(ElemSet::full(2), &[(0, 1)]).unwrap();
        assert!(matches!(
            lift_pseudocomplement(q, &m, &m, &t_quot, &Perm::identity(4)),
            Err(Error::LiftMismatch)
        ));
        let lift = sym_lift_exists(q, &m, &t_quot.as_perm()).unwrap();
        let g = lift_pseudocomplement(q, &m, &m, &t_quot, &lift).unwrap();
        assert!(is_pseudocomplement(&r, &g.involution));
        assert!(quadratic_ideal_generic(&r, &g.involution).is_subset(&r.ideals()[idx].elements));
    }

    #[test]
    fn base_cases() {
        let f2 = boolean(1);
        let t = solve_recursive(&f2, &ElemSet::full(2)).unwrap();
        assert_eq!(t.apply(0), 1);
        let r = boolean(3);
        let t = solve_recursive(&r, &set(&r, &[0, 7])).unwrap();
        assert_eq!(t.apply(0), 7);
        let t = brute_force_pseudocomplement(&f2, &ElemSet::full(2)).unwrap().unwrap();
        assert_eq!(t.apply(1), 0);
    }

    #[test]
    fn brute_force_on_chain_finds_a_proper_pairing() {
        let r = boolean(2);
        let t = brute_force_pseudocomplement(&r, &set(&r, &[0, 1, 3])).unwrap().unwrap();
        assert!(is_pseudocomplement(&r, &t));
        assert!(brute_force_pseudocomplement(&boolean(4), &ElemSet::full(16)).is_err());
    }

    #[test]
    fn fast_path_matches_generic_closure() {
        let r = boolean(3);
        for m in enumerate_extended_submonoids(&r, 256, 1 << 20).unwrap() {
            let t = solve_recursive(&r, &m).unwrap();
            let v = quadratic_ideal(&r, &t).unwrap();
            assert_eq!(v.quadratic_ideal, quadratic_ideal_generic(&r, &t).to_u32_vec());
        }
    }

    #[test]
    fn recursive_and_brute_force_agree_small() {
        for n in 1..=3 {
            let r = boolean(n);
            for f in enumerate_families(n, 5).unwrap() {
                let m = crate::family::phi(&f).unwrap();
                let a = solve_recursive(&r, &m).unwrap();
                assert!(is_pseudocomplement(&r, &a));
                assert!(brute_force_pseudocomplement(&r, &m).unwrap().is_some());
                solve_family(&r, &f).unwrap();
            }
        }
    }

    #[test]
    fn involution_records_round_trip() {
        let r = boolean(2);
        let t = Involution::from_pairs(set(&r, &[0, 1, 3]), &[(0, 3)]).unwrap();
        let rec = t.record();
        assert_eq!(rec.pairs, vec![(0, 3)]);
        assert_eq!(Involution::from_record(&rec).unwrap(), t);
    }
}
