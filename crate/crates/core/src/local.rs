//! Finite local rings that are not fields: with `Sym(R)` on top and
//! `Aut(R/I)` below, the maximal ideal covers every extended submonoid with
//! `M̂ = M`. The lifts are built directly from unit classes, then checked
//! against the generic search.

use serde::{Deserialize, Serialize};

use crate::elemset::ElemSet;
use crate::error::{Error, Result};
use crate::network::{
    enumerate_extended_submonoids, Candidate, CoveringCertificate, LiftPair, Multiaction, DEFAULT_MONOID_CAP,
};
use crate::perm::Perm;
use crate::ring::{QuotientView, Ring};

/// Index of the unique maximal ideal of a local ring that is not a field.
pub fn local_maximal_ideal(ring: &Ring) -> Result<usize> {
    if ring.is_field() {
        return Err(Error::IsField);
    }
    match ring.maximal_ideals()[..] {
        [idx] => Ok(idx),
        _ => Err(Error::NotLocal),
    }
}

/// Lift of the residue automorphism `t` that fixes `M ∩ I` and everything
/// off `M`, and sends `x_a·u` to `x_{t(a)}·u` on unit classes, where `x_a`
/// is the least element of `M` over `a` and `u` runs over `M ∩ (1 + I)`.
pub fn unit_class_lift(ring: &Ring, q: &QuotientView, m: &ElemSet, t: &Perm) -> Result<Perm> {
    let one_class = q.project(ring.one());
    let kernel = q.fiber_within(one_class, m);
    let mut images: Vec<u32> = (0..ring.order() as u32).collect();
    for a in q.project_set(m).iter().filter(|&a| a != 0) {
        let b = t.apply(a);
        let (Some(&xa), Some(&xb)) = (q.fiber_within(a, m).first(), q.fiber_within(b, m).first()) else {
            return Err(Error::InvariantViolated(format!("class {b} is empty in the monoid")));
        };
        for &u in &kernel {
            images[ring.mul(xa, u)] = ring.mul(xb, u) as u32;
        }
    }
    Perm::from_images(images)
        .map_err(|_| Error::InvariantViolated("unit classes are not translates of M ∩ (1+I)".into()))
}

/// The certificate for one monoid, assembled from [`unit_class_lift`].
pub fn local_certificate(ma: &Multiaction, m: &ElemSet) -> Result<CoveringCertificate> {
    let ring = ma.ring();
    let idx = local_maximal_ideal(ring)?;
    let q = ma.quotient(idx)?;
    let image = q.project_set(m);
    let mut lifts = Vec::new();
    for g in ma.stabilizer_generators(idx, &image)? {
        let w = unit_class_lift(ring, q, m, &g)?;
        lifts.push(LiftPair {
            generator: (&g).into(),
            witness: (&w).into(),
        });
    }
    let cert = CoveringCertificate {
        ring: ring.spec_string(),
        multiaction: ma.kind(),
        ideal_index: idx,
        ideal: ring.ideals()[idx].elements.clone(),
        monoid: m.clone(),
        m_hat: m.clone(),
        lifts,
    };
    cert.verify(ma)?;
    Ok(cert)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LocalReport {
    pub ring: String,
    pub monoids: usize,
    pub certificates: Vec<CoveringCertificate>,
    /// Monoids where the generic search disagreed with the construction.
    pub search_disagreements: Vec<Vec<u32>>,
    /// Automorphic certificates that failed to carry over to the larger top.
    pub monotonicity_failures: Vec<Vec<u32>>,
}

impl LocalReport {
    pub fn holds(&self) -> bool {
        self.certificates.len() == self.monoids
            && self.search_disagreements.is_empty()
            && self.monotonicity_failures.is_empty()
    }
}

/// Certifies every extended submonoid and runs both cross-checks: the
/// generic search also accepts `(M, I, M)`, and every automorphic
/// certificate stays valid once the top group grows to `Sym(R)`.
pub fn local_certificates(ring: &Ring, order_cap: usize) -> Result<LocalReport> {
    local_maximal_ideal(ring)?;
    local_certificates_over(
        ring,
        &enumerate_extended_submonoids(ring, order_cap, DEFAULT_MONOID_CAP)?,
    )
}

pub fn local_certificates_over(ring: &Ring, monoids: &[ElemSet]) -> Result<LocalReport> {
    local_maximal_ideal(ring)?;
    let ma = Multiaction::symmetric_top(ring);
    let aut = Multiaction::automorphic(ring);
    let mut report = LocalReport {
        ring: ring.spec_string(),
        monoids: monoids.len(),
        certificates: Vec::new(),
        search_disagreements: Vec::new(),
        monotonicity_failures: Vec::new(),
    };
    for m in monoids {
        let cert = local_certificate(&ma, m)?;
        if !matches!(ma.check_candidate(m, cert.ideal_index, m)?, Candidate::Certified(_)) {
            report.search_disagreements.push(m.to_u32_vec());
        }
        if let Some(c) = aut.find_covering_ideal(m)?.certificate() {
            if !matches!(ma.check_candidate(m, c.ideal_index, &c.m_hat)?, Candidate::Certified(_)) {
                report.monotonicity_failures.push(m.to_u32_vec());
            }
        }
        report.certificates.push(cert);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::DEFAULT_ENUMERATION_ORDER;
    use crate::ring::build_ring;

    fn ring(s: &str) -> Ring {
        build_ring(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn local_rings_are_fully_certified() {
        for s in ["dual:2^2", "mod:9", "mod:4", "dual:3^1", "dual:2^3", "mod:8"] {
            let r = local_certificates(&ring(s), DEFAULT_ENUMERATION_ORDER).unwrap();
            assert!(r.holds(), "{s}: {r:?}");
            for c in &r.certificates {
                c.revalidate().unwrap();
            }
        }
    }

    #[test]
    fn z4_has_a_single_monoid() {
        let r = local_certificates(&ring("mod:4"), DEFAULT_ENUMERATION_ORDER).unwrap();
        assert_eq!(r.monoids, 1);
        assert_eq!(r.certificates[0].m_hat.to_u32_vec(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn rejects_fields_and_non_local_rings() {
        assert!(matches!(local_maximal_ideal(&ring("gf:2^2")), Err(Error::IsField)));
        assert!(matches!(local_maximal_ideal(&ring("mod:5")), Err(Error::IsField)));
        assert!(matches!(local_maximal_ideal(&ring("mod:12")), Err(Error::NotLocal)));
        assert!(matches!(
            local_maximal_ideal(&ring("product:2^2")),
            Err(Error::NotLocal)
        ));
    }

    #[test]
    fn frobenius_lift_moves_unit_classes() {
        let r = ring("dual:2^2");
        let ma = Multiaction::symmetric_top(&r);
        let units = crate::network::units_with_zero(&r);
        let cert = local_certificate(&ma, &units).unwrap();
        assert_eq!(cert.lifts.len(), 1);
        let w = cert.witness(0).unwrap();
        assert!(!w.is_identity());
        assert!(cert.ideal.iter().all(|x| w.apply(x) == x));
    }
}
