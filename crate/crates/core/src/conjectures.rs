//! Exhaustive checks of two open statements about covering ideals in
//! `𝔽₂ⁿ` under the symmetric multiaction, phrased for extended submonoids:
//!
//! * proper association: a submonoid that is not a subring has a maximal
//!   covering ideal whose associated submonoid is strictly smaller;
//! * unique maximal covering: a submonoid with exactly one maximal covering
//!   ideal has `{0, 1}` as its only covered submonoid.
//!
//! The second statement is computed under three readings, see
//! [`UniqueMaximalReport`].
//!
//! Counterexamples are results, not errors; callers report them.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::elemset::ElemSet;
use crate::error::{Error, Result};
use crate::family::{decode_family, enumerate_family_codes, phi, FamilyCode};
use crate::network::{is_subring, CoveringCertificate, Multiaction};
use crate::ring::{build_ring, Ring, RingSpec};

/// Largest universe for the conjecture sweeps.
pub const SWEEP_CAP: u32 = 4;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub ring: String,
    pub monoid: Vec<u32>,
    /// The monoid as a family file.
    pub family: String,
    pub detail: String,
}

fn boolean_ring(n: u32) -> Result<Ring> {
    if !(2..=SWEEP_CAP).contains(&n) {
        return Err(Error::CapExceeded {
            what: format!("sweep universe {n} (need 2 ≤ n)"),
            cap: SWEEP_CAP as u64,
        });
    }
    build_ring(&RingSpec::product(2, n))
}

fn monoids(n: u32) -> Result<Vec<ElemSet>> {
    boolean_ring(n)?;
    monoids_from_codes(n, &enumerate_family_codes(n, n)?)
}

/// The submonoids of `𝔽₂ⁿ` behind a list of family codes.
pub fn monoids_from_codes(n: u32, codes: &[FamilyCode]) -> Result<Vec<ElemSet>> {
    codes.iter().map(|&c| phi(&decode_family(n, c))).collect()
}

fn counterexample(ring: &Ring, n: u32, m: &ElemSet, detail: String) -> Counterexample {
    let family = crate::family::phi_inverse(n, m)
        .map(|f| f.to_text())
        .unwrap_or_default();
    Counterexample {
        ring: ring.spec_string(),
        monoid: m.to_u32_vec(),
        family,
        detail,
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProperAssociatedReport {
    pub n: u32,
    pub monoids: usize,
    pub subrings_skipped: usize,
    pub certified: usize,
    pub witnesses: Vec<CoveringCertificate>,
    pub counterexamples: Vec<Counterexample>,
}

pub fn check_proper_associated(n: u32) -> Result<ProperAssociatedReport> {
    check_proper_associated_over(n, &monoids(n)?)
}

/// Same check over a precomputed monoid list.
pub fn check_proper_associated_over(n: u32, all: &[ElemSet]) -> Result<ProperAssociatedReport> {
    let ring = boolean_ring(n)?;
    let ma = Multiaction::symmetric(&ring);
    let maximal = ring.maximal_ideals();
    let results: Vec<Option<std::result::Result<CoveringCertificate, Counterexample>>> = all
        .par_iter()
        .map(|m| {
            if is_subring(&ring, m) {
                return Ok(None);
            }
            for &idx in &maximal {
                if let Some(c) = ma.find_proper_associated(m, idx)? {
                    return Ok(Some(Ok(c)));
                }
            }
            Ok(Some(Err(counterexample(
                &ring,
                n,
                m,
                "no maximal covering ideal has a strictly smaller associated submonoid".into(),
            ))))
        })
        .collect::<Result<_>>()?;
    let subrings_skipped = results.iter().filter(|r| r.is_none()).count();
    let mut witnesses = Vec::new();
    let mut counterexamples = Vec::new();
    for r in results.into_iter().flatten() {
        match r {
            Ok(c) => witnesses.push(c),
            Err(c) => counterexamples.push(c),
        }
    }
    Ok(ProperAssociatedReport {
        n,
        monoids: all.len(),
        subrings_skipped,
        certified: witnesses.len(),
        witnesses,
        counterexamples,
    })
}

/// Covering data for one monoid.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoveringProfile {
    pub monoid: Vec<u32>,
    pub maximal_covering: Vec<usize>,
    pub covering: Vec<usize>,
    /// Distinct covered submonoids, over every proper nonzero ideal.
    pub covered: Vec<Vec<u32>>,
    /// Distinct submonoids associated to maximal covering ideals.
    pub covered_maximal: Vec<Vec<u32>>,
}

pub fn covering_profile(ma: &Multiaction, m: &ElemSet) -> Result<CoveringProfile> {
    let ring = ma.ring();
    let mut covering = Vec::new();
    let mut covered: Vec<Vec<u32>> = Vec::new();
    let mut covered_maximal: Vec<Vec<u32>> = Vec::new();
    for idx in ring.proper_nonzero_ideals() {
        let certs = ma.all_associated(m, idx)?;
        if !certs.is_empty() {
            covering.push(idx);
        }
        let hats: Vec<Vec<u32>> = certs.into_iter().map(|c| c.m_hat.to_u32_vec()).collect();
        if ring.is_maximal_ideal(idx) {
            covered_maximal.extend(hats.iter().cloned());
        }
        covered.extend(hats);
    }
    covering.sort_unstable();
    for v in [&mut covered, &mut covered_maximal] {
        v.sort();
        v.dedup();
    }
    let maximal_covering = covering.iter().copied().filter(|&i| ring.is_maximal_ideal(i)).collect();
    Ok(CoveringProfile {
        monoid: m.to_u32_vec(),
        maximal_covering,
        covering,
        covered,
        covered_maximal,
    })
}

/// The statement under three readings.
///
/// * `maximal`: exactly one maximal ideal covers `M`, and covered means
///   associated to a maximal covering ideal. Through the family dictionary
///   this is Poonen's original statement.
/// * `literal`: exactly one maximal ideal covers `M`, and covered means
///   associated to any proper nonzero covering ideal.
/// * `overall`: exactly one proper nonzero ideal covers `M` at all.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct UniqueMaximalReport {
    pub n: u32,
    pub monoids: usize,
    pub maximal: ReadingOutcome,
    pub literal: ReadingOutcome,
    pub overall: ReadingOutcome,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ReadingOutcome {
    /// Monoids satisfying the hypothesis.
    pub premise: usize,
    pub counterexamples: Vec<Counterexample>,
}

impl UniqueMaximalReport {
    /// No counterexample under the reading equivalent to the original
    /// set-family statement.
    pub fn holds(&self) -> bool {
        self.maximal.counterexamples.is_empty()
    }
}

pub fn check_unique_maximal(n: u32) -> Result<UniqueMaximalReport> {
    check_unique_maximal_over(n, &monoids(n)?)
}

pub fn check_unique_maximal_over(n: u32, all: &[ElemSet]) -> Result<UniqueMaximalReport> {
    let ring = boolean_ring(n)?;
    let ma = Multiaction::symmetric(&ring);
    let trivial = vec![vec![0u32, ring.one() as u32]];
    let profiles: Vec<CoveringProfile> = all
        .par_iter()
        .map(|m| covering_profile(&ma, m))
        .collect::<Result<_>>()?;
    let mut report = UniqueMaximalReport {
        n,
        monoids: all.len(),
        ..Default::default()
    };
    for (m, p) in all.iter().zip(&profiles) {
        let record = |out: &mut ReadingOutcome, premise: bool, covered: &Vec<Vec<u32>>| {
            if premise {
                out.premise += 1;
                if covered != &trivial {
                    let detail = format!("covered submonoids {covered:?}, covering ideals {:?}", p.covering);
                    out.counterexamples.push(counterexample(&ring, n, m, detail));
                }
            }
        };
        let unique_maximal = p.maximal_covering.len() == 1;
        record(&mut report.maximal, unique_maximal, &p.covered_maximal);
        record(&mut report.literal, unique_maximal, &p.covered);
        record(&mut report.overall, p.covering.len() == 1, &p.covered);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::phi_inverse;

    #[test]
    fn proper_association_matches_strict_rarity() {
        // M̂ ⊊ M at the ideal of p exactly when p lies in fewer than half.
        for n in 2..=3 {
            let ring = boolean_ring(n).unwrap();
            let report = check_proper_associated(n).unwrap();
            assert!(report.counterexamples.is_empty());
            let mut expected = 0;
            for m in monoids(n).unwrap() {
                if is_subring(&ring, &m) {
                    continue;
                }
                let s = phi_inverse(n, &m).unwrap();
                if (0..n).any(|p| 2 * s.frequency(p) < s.len()) {
                    expected += 1;
                }
            }
            assert_eq!(report.certified, expected);
        }
    }

    #[test]
    fn subring_detection_matches_additive_closure() {
        let ring = boolean_ring(3).unwrap();
        for m in monoids(3).unwrap() {
            let additive = m.iter().all(|a| m.iter().all(|b| m.contains(a ^ b)));
            assert_eq!(is_subring(&ring, &m), additive);
        }
    }

    #[test]
    fn maximal_covering_ideals_are_rare_points() {
        let n = 3;
        let ring = boolean_ring(n).unwrap();
        let ma = Multiaction::symmetric(&ring);
        for m in monoids(n).unwrap() {
            let s = phi_inverse(n, &m).unwrap();
            let p = covering_profile(&ma, &m).unwrap();
            let rare: Vec<u32> = (0..n).filter(|&q| 2 * s.frequency(q) <= s.len()).collect();
            assert_eq!(p.maximal_covering.len(), rare.len(), "{s}");
        }
    }

    #[test]
    fn maximal_reading_matches_family_statement() {
        // exactly one rare point α forces S_α = {X}
        for n in 2..=3 {
            let r = check_unique_maximal(n).unwrap();
            assert!(r.holds(), "{r:?}");
            assert!(r.overall.counterexamples.is_empty());
            let mut premise = 0;
            for m in monoids(n).unwrap() {
                let s = phi_inverse(n, &m).unwrap();
                let rare: Vec<u32> = (0..n).filter(|&q| 2 * s.frequency(q) <= s.len()).collect();
                if rare.len() == 1 {
                    premise += 1;
                    assert_eq!(s.frequency(rare[0]), 1);
                }
            }
            assert_eq!(r.maximal.premise, premise);
        }
    }

    #[test]
    fn literal_reading_fails_on_three_points() {
        // {∅, {a,b}, X} is covered by itself through the ideal of {a}
        let r = check_unique_maximal(3).unwrap();
        let monoids: Vec<Vec<u32>> = r.literal.counterexamples.iter().map(|c| c.monoid.clone()).collect();
        assert_eq!(monoids, vec![vec![0, 3, 7], vec![0, 5, 7], vec![0, 6, 7]]);
        assert!(check_unique_maximal(2).unwrap().literal.counterexamples.is_empty());
    }

    #[test]
    fn caps() {
        assert!(check_proper_associated(5).is_err());
        assert!(check_unique_maximal(1).is_err());
    }
}
