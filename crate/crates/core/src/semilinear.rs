//! The semilinear group `ΓL(1, pⁿ)` acting on `R_{n,p} = 𝔽_{pⁿ}[x]/(x²)`,
//! 𝔽_p-subspaces of `𝔽_{pⁿ}`, and the criterion deciding when the
//! automorphic multiaction on `R_{n,p}` is a monoidal network: every
//! subspace `V` must satisfy `φ(V) = λV` for some unit `λ`.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::elemset::ElemSet;
use crate::error::{Error, Result};
use crate::gf::{poly, GaloisField};
use crate::network::{is_monoidal_network, Multiaction, NetworkOptions};
use crate::numtheory::{is_prime, totient};
use crate::perm::Perm;
use crate::ring::{build_ring, Ring, RingSpec};

/// Largest field whose subspaces are enumerated.
pub const SUBSPACE_FIELD_CAP: u64 = 2401;

/// Largest `R_{n,p}` checked through the full-ring network route.
pub const FULL_RING_CAP: u64 = 729;

/// Largest `R_{n,p}` whose unit subgroups are enumerated directly.
pub const DIRECT_SUBGROUP_CAP: u64 = 256;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

pub fn field(p: u32, n: u32) -> Result<GaloisField> {
    if (p as u64).checked_pow(n).is_none_or(|q| q > SUBSPACE_FIELD_CAP) {
        return Err(Error::CapExceeded {
            what: format!("field 𝔽_{{{p}^{n}}}"),
            cap: SUBSPACE_FIELD_CAP,
        });
    }
    GaloisField::new(p, n, None)
}

/// Reduced echelon form over 𝔽_p: each row's pivot is its lowest nonzero
/// coordinate, scaled to 1 and cleared from every other row; rows sorted
/// by pivot, zero rows dropped.
fn rref(p: u32, mut rows: Vec<Vec<u32>>) -> Vec<Vec<u32>> {
    let n = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..n {
        let Some(pivot) = (rank..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = poly::inv_mod_p(rows[rank][col], p);
        for x in rows[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..rows.len() {
            if i != rank && rows[i][col] != 0 {
                let c = rows[i][col];
                let pivot_row = rows[rank].clone();
                for (x, &y) in rows[i].iter_mut().zip(&pivot_row) {
                    *x = (*x + (p - c) * y) % p;
                }
            }
        }
        rank += 1;
    }
    rows.truncate(rank);
    rows
}

/// An 𝔽_p-subspace of `𝔽_{pⁿ}`, held by its canonical reduced basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Subspace {
    pub p: u32,
    pub n: u32,
    /// Basis rows as field element indices, in pivot order.
    pub basis: Vec<u32>,
}

impl Subspace {
    /// The span of arbitrary field elements.
    pub fn span(f: &GaloisField, elems: &[u32]) -> Self {
        let rows = rref(f.p(), elems.iter().map(|&x| f.digits(x)).collect());
        Subspace {
            p: f.p(),
            n: f.degree(),
            basis: rows.iter().map(|r| f.from_digits(r)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Every member, as field element indices.
    pub fn elements(&self, f: &GaloisField) -> Vec<u32> {
        let mut out = vec![0u32];
        for &b in &self.basis {
            let prev = out.clone();
            for c in 1..self.p {
                let cb = f.scale(c, b);
                out.extend(prev.iter().map(|&x| f.add(x, cb)));
            }
        }
        out.sort_unstable();
        out
    }

    pub fn member_set(&self, f: &GaloisField) -> ElemSet {
        ElemSet::from_elems(f.order() as usize, self.elements(f).into_iter().map(|x| x as usize))
    }

    /// `φ(V)`, the image under Frobenius.
    pub fn frobenius_image(&self, f: &GaloisField) -> Subspace {
        let imgs: Vec<u32> = self.basis.iter().map(|&b| f.frobenius(b)).collect();
        Subspace::span(f, &imgs)
    }

    /// `λV`.
    pub fn scaled(&self, f: &GaloisField, lambda: u32) -> Subspace {
        let imgs: Vec<u32> = self.basis.iter().map(|&b| f.mul(lambda, b)).collect();
        Subspace::span(f, &imgs)
    }
}

/// Number of `k`-dimensional subspaces of `𝔽_pⁿ`.
pub fn gaussian_binomial(n: u32, k: u32, p: u32) -> u128 {
    if k > n {
        return 0;
    }
    let p = p as u128;
    let (mut num, mut den) = (1u128, 1u128);
    for i in 0..k {
        num *= p.pow(n - i) - 1;
        den *= p.pow(i + 1) - 1;
    }
    num / den
}

/// Every subspace (or every one of dimension `dim`), ordered by dimension
/// and then by basis.
pub fn enumerate_subspaces(f: &GaloisField, dim: Option<u32>) -> Vec<Subspace> {
    let (p, n) = (f.p(), f.degree());
    let mut out = Vec::new();
    let dims: Vec<u32> = match dim {
        Some(d) if d <= n => vec![d],
        Some(_) => vec![],
        None => (0..=n).collect(),
    };
    for k in dims {
        let mut found = Vec::new();
        for pivots in (0u32..1 << n).filter(|m| m.count_ones() == k) {
            let piv: Vec<usize> = (0..n as usize).filter(|&i| pivots >> i & 1 == 1).collect();
            let free: Vec<(usize, usize)> = piv
                .iter()
                .enumerate()
                .flat_map(|(r, &c)| {
                    ((c + 1)..n as usize)
                        .filter(|j| pivots >> j & 1 == 0)
                        .map(move |j| (r, j))
                })
                .collect();
            let total = (p as u64).pow(free.len() as u32);
            for code in 0..total {
                let mut rows = vec![vec![0u32; n as usize]; k as usize];
                for (r, &c) in piv.iter().enumerate() {
                    rows[r][c] = 1;
                }
                let mut rest = code;
                for &(r, j) in &free {
                    rows[r][j] = (rest % p as u64) as u32;
                    rest /= p as u64;
                }
                found.push(Subspace {
                    p,
                    n,
                    basis: rows.iter().map(|r| f.from_digits(r)).collect(),
                });
            }
        }
        found.sort();
        out.extend(found);
    }
    out
}

/// Least `λ` (by index) with `φ(V) = λV`.
pub fn frobenius_scaling_test(f: &GaloisField, v: &Subspace) -> Option<u32> {
    let target = v.frobenius_image(f);
    let members = target.member_set(f);
    let lambda = (1..f.order()).find(|&l| v.basis.iter().all(|&b| members.contains(f.mul(l, b) as usize)))?;
    assert_eq!(v.scaled(f, lambda), target, "scaling test accepted a mismatched λ");
    Some(lambda)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubspaceCriterion {
    pub p: u32,
    pub n: u32,
    pub subspaces: usize,
    pub holds: bool,
    /// First failing subspace in enumeration order.
    pub counterexample: Option<Subspace>,
}

pub fn subspace_criterion(p: u32, n: u32) -> Result<SubspaceCriterion> {
    let f = field(p, n)?;
    let all = enumerate_subspaces(&f, None);
    let counterexample = all
        .par_iter()
        .find_first(|v| frobenius_scaling_test(&f, v).is_none())
        .cloned();
    Ok(SubspaceCriterion {
        p,
        n,
        subspaces: all.len(),
        holds: counterexample.is_none(),
        counterexample,
    })
}

/// `T_λ σᵏ : a + bε ↦ a^{pᵏ} + λ b^{pᵏ} ε`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SemilinearMap {
    pub lambda: u32,
    pub k: u32,
}

impl SemilinearMap {
    pub fn new(f: &GaloisField, lambda: u32, k: u32) -> Result<Self> {
        if lambda == 0 || lambda >= f.order() {
            return Err(Error::PreconditionViolated(format!("λ = {lambda} is not a unit")));
        }
        Ok(SemilinearMap {
            lambda,
            k: k % f.degree(),
        })
    }

    /// `(λ,k)∘(μ,j) = (λ·μ^{pᵏ}, k+j)`.
    pub fn compose(&self, f: &GaloisField, other: &SemilinearMap) -> SemilinearMap {
        SemilinearMap {
            lambda: f.mul(self.lambda, f.frobenius_power(other.lambda, self.k)),
            k: (self.k + other.k) % f.degree(),
        }
    }

    pub fn apply_field(&self, f: &GaloisField, x: u32) -> u32 {
        f.mul(self.lambda, f.frobenius_power(x, self.k))
    }

    /// The map on `R_{n,p}`, whose elements are indexed `a + q·b`.
    pub fn as_perm(&self, f: &GaloisField) -> Perm {
        let q = f.order() as usize;
        Perm::from_fn(q * q, |x| {
            let (a, b) = ((x % q) as u32, (x / q) as u32);
            (f.frobenius_power(a, self.k) + f.order() * self.apply_field(f, b)) as usize
        })
        .expect("semilinear maps are bijective")
    }
}

/// The subgroup `𝔽^× × {1+αε : α ∈ V}` of `R_{n,p}^×`, of order `p^r(pⁿ-1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SrSubgroupView {
    pub r: usize,
    pub subspace: Subspace,
    pub group_order: u64,
}

impl SrSubgroupView {
    pub fn new(f: &GaloisField, subspace: Subspace) -> Self {
        let r = subspace.dim();
        let group_order = (f.p() as u64).pow(r as u32) * (f.order() as u64 - 1);
        SrSubgroupView {
            r,
            subspace,
            group_order,
        }
    }

    /// Elements `a + aαε` as indices of `R_{n,p}`.
    pub fn elements(&self, f: &GaloisField) -> ElemSet {
        let q = f.order() as usize;
        let v = self.subspace.elements(f);
        ElemSet::from_elems(
            q * q,
            (1..q as u32).flat_map(|a| v.iter().map(move |&al| a as usize + q * f.mul(a, al) as usize)),
        )
    }
}

/// Every rank-`r` subgroup is stabilized by some `T_λσ`, decided through the
/// subspaces: `T_λσ` fixes the group of `V` iff `λφ(V) = V`.
pub fn trivialization_check(p: u32, n: u32, r: u32) -> Result<bool> {
    let f = field(p, n)?;
    Ok(enumerate_subspaces(&f, Some(r)).par_iter().all(|v| {
        let phi_v = v.frobenius_image(&f);
        let members = v.member_set(&f);
        (1..f.order()).any(|l| phi_v.basis.iter().all(|&b| members.contains(f.mul(l, b) as usize)))
    }))
}

fn dual_ring(p: u32, n: u32) -> Result<Ring> {
    build_ring(&RingSpec::dual(p, n))
}

/// Unit subgroups of `R_{n,p}` that contain the copy of `𝔽^×`, found by
/// closure from `𝔽^×` with no appeal to the subspace picture.
pub fn unit_subgroups_over_field(p: u32, n: u32) -> Result<Vec<ElemSet>> {
    let q = (p as u64).pow(n);
    if q * q > DIRECT_SUBGROUP_CAP {
        return Err(Error::CapExceeded {
            what: format!("direct subgroup enumeration of R_{{{n},{p}}}"),
            cap: DIRECT_SUBGROUP_CAP,
        });
    }
    let ring = dual_ring(p, n)?;
    let units = ring.units();
    let base = ElemSet::from_elems(ring.order(), 1..q as usize);
    let mut seen: HashSet<ElemSet> = HashSet::from([base.clone()]);
    let mut stack = vec![base];
    while let Some(h) = stack.pop() {
        for c in units.iter().filter(|&c| !h.contains(c)) {
            let g = ring.adjoin(&h, c);
            if seen.insert(g.clone()) {
                stack.push(g);
            }
        }
    }
    let mut all: Vec<ElemSet> = seen.into_iter().collect();
    all.sort();
    Ok(all)
}

/// The same statement as [`trivialization_check`], decided on the ring:
/// every subgroup of order `p^r(pⁿ-1)` containing `𝔽^×` is stabilized by
/// some automorphism `T_λσ`.
pub fn trivialization_direct(p: u32, n: u32, r: u32) -> Result<bool> {
    let f = field(p, n)?;
    let order = (p as usize).pow(r) * (f.order() as usize - 1);
    let maps: Vec<Perm> = (1..f.order())
        .map(|l| SemilinearMap { lambda: l, k: 1 % n }.as_perm(&f))
        .collect();
    Ok(unit_subgroups_over_field(p, n)?
        .into_iter()
        .filter(|h| h.len() == order)
        .all(|h| maps.iter().any(|m| m.stabilizes(&h))))
}

/// Least `(a,b,c,d)` over 𝔽_p, lexicographically, with `cα+d ≠ 0` and
/// `α^p (cα+d) = aα+b`.
pub fn mobius_condition(f: &GaloisField, alpha: u32) -> Option<[u32; 4]> {
    let p = f.p();
    let ap = f.frobenius(alpha);
    for a in 0..p {
        for b in 0..p {
            let rhs = f.add(f.scale(a, alpha), b);
            for c in 0..p {
                for d in 0..p {
                    let den = f.add(f.scale(c, alpha), d);
                    if den != 0 && f.mul(ap, den) == rhs {
                        return Some([a, b, c, d]);
                    }
                }
            }
        }
    }
    None
}

pub fn satisfies_mobius(f: &GaloisField, alpha: u32, [a, b, c, d]: [u32; 4]) -> bool {
    let den = f.add(f.scale(c, alpha), d);
    den != 0 && f.mul(f.frobenius(alpha), den) == f.add(f.scale(a, alpha), b)
}

/// Coordinates of `target` in the basis `cols`, over 𝔽_p.
fn solve(f: &GaloisField, cols: &[u32], target: u32) -> Option<Vec<u32>> {
    let p = f.p();
    let n = f.degree() as usize;
    let k = cols.len();
    let cd: Vec<Vec<u32>> = cols.iter().map(|&c| f.digits(c)).collect();
    let td = f.digits(target);
    let rows: Vec<Vec<u32>> = (0..n)
        .map(|i| (0..k).map(|j| cd[j][i]).chain([td[i]]).collect())
        .collect();
    let reduced = rref(p, rows);
    let mut x = vec![0u32; k];
    for row in &reduced {
        let lead = row.iter().position(|&v| v != 0)?;
        if lead == k {
            return None;
        }
        x[lead] = row[k];
    }
    Some(x)
}

/// The explicit tuple for `β ∈ 𝔽_{p³}`: with `β^p = a'β² + b'β + c'` and
/// minimal polynomial `x³ + mx² + nx + q`, take `c = 1/a'`,
/// `d = m/a' - b'/a'²`, `a = cc' + db' - n`, `b = dc' - q`.
pub fn cubic_mobius(f: &GaloisField, beta: u32) -> Result<[u32; 4]> {
    if f.degree() != 3 {
        return Err(Error::PreconditionViolated("cubic construction needs n = 3".into()));
    }
    let p = f.p();
    if f.in_prime_field(beta) {
        return Ok([1, 0, 0, 1]);
    }
    let basis = [1, beta, f.mul(beta, beta)];
    let [c0, b0, a0] = <[u32; 3]>::try_from(solve(f, &basis, f.frobenius(beta)).expect("{1,β,β²} is a basis"))
        .expect("three coordinates");
    if a0 == 0 {
        return Ok([b0, c0, 0, 1]);
    }
    let cube = f.mul(basis[2], beta);
    let [q0, n0, m0] = <[u32; 3]>::try_from(solve(f, &basis, cube).expect("{1,β,β²} is a basis"))
        .expect("three coordinates")
        .map(|x| (p - x) % p);
    let inv = poly::inv_mod_p(a0, p);
    let c = inv;
    let d = (m0 * inv % p + p - b0 * inv % p * inv % p) % p;
    let a = (c * c0 + d * b0 + p - n0) % p;
    let b = (d * c0 + p - q0) % p;
    let t = [a, b, c, d];
    if !satisfies_mobius(f, beta, t) {
        return Err(Error::InvariantViolated(format!(
            "cubic tuple {t:?} fails for β = {beta}"
        )));
    }
    Ok(t)
}

/// The explicit endgame for `n = 4`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Endgame {
    /// `p = 2`: an element of degree 4 admits no Möbius tuple.
    Degree {
        element: u32,
        degree: u32,
        mobius_none: bool,
    },
    /// `p = 3, 5`: a root `β` of the witness quartic; `span{1, β}` fails.
    WitnessPolynomial {
        polynomial: Vec<u32>,
        irreducible: bool,
        root: u32,
        mobius_none: bool,
        scaling_none: bool,
    },
    /// Remaining primes: the totient gate rules them out.
    Totient { phi: u64, bound: u64, eliminated: bool },
}

impl Endgame {
    pub fn confirms(&self) -> bool {
        match self {
            Endgame::Degree {
                degree, mobius_none, ..
            } => *degree == 4 && *mobius_none,
            Endgame::WitnessPolynomial {
                irreducible,
                mobius_none,
                scaling_none,
                ..
            } => *irreducible && *mobius_none && *scaling_none,
            Endgame::Totient { eliminated, .. } => *eliminated,
        }
    }
}

/// `x⁴ + x² + 2`, which is `x⁴ + x² - 1` over 𝔽₃.
pub const WITNESS_QUARTIC: [u32; 5] = [2, 0, 1, 0, 1];

pub fn endgame(p: u32) -> Result<Endgame> {
    match p {
        2 => {
            let f = field(2, 4)?;
            let element = (0..f.order())
                .find(|&a| f.element_degree(a) == 4)
                .expect("𝔽₁₆ has elements of degree 4");
            Ok(Endgame::Degree {
                element,
                degree: 4,
                mobius_none: mobius_condition(&f, element).is_none(),
            })
        }
        3 | 5 => {
            let polynomial = WITNESS_QUARTIC.to_vec();
            let irreducible = poly::is_irreducible(&polynomial, p);
            let f = field(p, 4)?;
            let root = (0..f.order())
                .find(|&x| f.eval_poly(&polynomial, x) == 0)
                .ok_or_else(|| Error::InvariantViolated("witness quartic has no root".into()))?;
            let span = Subspace::span(&f, &[1, root]);
            Ok(Endgame::WitnessPolynomial {
                polynomial,
                irreducible,
                root,
                mobius_none: mobius_condition(&f, root).is_none(),
                scaling_none: frobenius_scaling_test(&f, &span).is_none(),
            })
        }
        _ => {
            let row = phi_row(p as u64);
            Ok(Endgame::Totient {
                phi: row.phi,
                bound: row.strict_bound.unwrap_or(row.bound),
                eliminated: !row.survives,
            })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualTableRow {
    pub p: u32,
    pub n: u32,
    /// Verdict of the subspace criterion.
    pub holds: bool,
    pub counterexample_basis: Option<Vec<u32>>,
    /// Verdict of the exhaustive network check on `R_{n,p}`, when small.
    pub full_ring: Option<bool>,
    pub endgame: Option<Endgame>,
}

impl DualTableRow {
    /// Matches the expected `holds ⟺ n ≤ 3`, with every route agreeing.
    pub fn as_expected(&self) -> bool {
        self.holds == (self.n <= 3)
            && self.full_ring.is_none_or(|v| v == self.holds)
            && self.endgame.as_ref().is_none_or(|e| e.confirms())
    }
}

pub fn dual_table_row(p: u32, n: u32) -> Result<DualTableRow> {
    if !is_prime(p as u64) {
        return Err(Error::NonPrimeP(p as u64));
    }
    let outcome = subspace_criterion(p, n)?;
    let q2 = (p as u64).pow(2 * n);
    let full_ring = if q2 <= FULL_RING_CAP {
        let ring = dual_ring(p, n)?;
        Some(is_monoidal_network(&Multiaction::automorphic(&ring), &NetworkOptions::default())?.verdict)
    } else {
        None
    };
    let endgame = if n == 4 { Some(endgame(p)?) } else { None };
    Ok(DualTableRow {
        p,
        n,
        holds: outcome.holds,
        counterexample_basis: outcome.counterexample.map(|v| v.basis),
        full_ring,
        endgame,
    })
}

pub fn dual_table(p: u32, nmax: u32) -> Result<Vec<DualTableRow>> {
    (1..=nmax).map(|n| dual_table_row(p, n)).collect()
}

/// `f(x) = 4(x+1)/(x²+1) · (e^γ ln ln(x²+1) + 3 / ln ln(x²+1))`.
pub fn rosser_f(x: f64) -> f64 {
    let l = ((x * x + 1.0).ln()).ln();
    4.0 * (x + 1.0) / (x * x + 1.0) * (EULER_GAMMA.exp() * l + 3.0 / l)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhiRow {
    pub p: u64,
    pub phi: u64,
    /// `4(p+1)`.
    pub bound: u64,
    /// `2(p+1)`, required when `p ≡ -1 (mod 4)`.
    pub strict_bound: Option<u64>,
    pub survives: bool,
    pub f: f64,
}

pub fn phi_row(p: u64) -> PhiRow {
    let phi = totient(p * p + 1);
    let bound = 4 * (p + 1);
    let strict_bound = (p % 4 == 3).then_some(2 * (p + 1));
    PhiRow {
        p,
        phi,
        bound,
        strict_bound,
        survives: phi <= strict_bound.unwrap_or(bound),
        f: rosser_f(p as f64),
    }
}

/// Largest prime bound accepted by [`phi_bound_scan`].
pub const PHI_SCAN_CAP: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhiScan {
    pub rows: Vec<PhiRow>,
    /// Primes `3 ≤ p < 23` passing the `4(p+1)` test.
    pub loose_survivors: Vec<u64>,
    /// Those also passing the stricter test where it applies.
    pub survivors: Vec<u64>,
    /// `f(p) < 1` for every prime `23 ≤ p ≤ p_max`.
    pub f_below_one: bool,
}

pub fn phi_bound_scan(p_max: u64) -> Result<PhiScan> {
    if p_max > PHI_SCAN_CAP {
        return Err(Error::CapExceeded {
            what: "totient scan bound".into(),
            cap: PHI_SCAN_CAP,
        });
    }
    let rows: Vec<PhiRow> = crate::numtheory::primes_up_to(p_max)
        .into_iter()
        .filter(|&p| p > 2)
        .map(phi_row)
        .collect();
    let small = rows.iter().filter(|r| r.p < 23);
    Ok(PhiScan {
        loose_survivors: small.clone().filter(|r| r.phi <= r.bound).map(|r| r.p).collect(),
        survivors: small.filter(|r| r.survives).map(|r| r.p).collect(),
        f_below_one: rows.iter().filter(|r| r.p >= 23).all(|r| r.f < 1.0),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn subspace_counts_are_gaussian_binomials() {
        for (p, n) in [(2, 1), (2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2), (7, 2)] {
            let f = field(p, n).unwrap();
            for k in 0..=n {
                let found = enumerate_subspaces(&f, Some(k));
                assert_eq!(found.len() as u128, gaussian_binomial(n, k, p), "p={p} n={n} k={k}");
                let distinct: HashSet<Vec<u32>> = found.iter().map(|v| v.elements(&f)).collect();
                assert_eq!(distinct.len(), found.len());
                assert!(found.iter().all(|v| Subspace::span(&f, &v.basis) == *v));
            }
        }
        assert_eq!(enumerate_subspaces(&field(2, 4).unwrap(), None).len(), 67);
        assert_eq!(enumerate_subspaces(&field(2, 2).unwrap(), Some(1)).len(), 3);
        assert_eq!(
            enumerate_subspaces(&field(3, 3).unwrap(), Some(0)),
            vec![Subspace {
                p: 3,
                n: 3,
                basis: vec![]
            }]
        );
        assert_eq!((0..=4).map(|k| gaussian_binomial(4, k, 7)).sum::<u128>(), 3652);
    }

    #[test]
    fn subspaces_are_closed() {
        let f = field(3, 3).unwrap();
        for v in enumerate_subspaces(&f, None) {
            let s = v.member_set(&f);
            assert_eq!(s.len(), 3usize.pow(v.dim() as u32));
            for a in s.iter() {
                for b in s.iter() {
                    assert!(s.contains(f.add(a as u32, b as u32) as usize));
                }
                assert!(s.contains(f.scale(2, a as u32) as usize));
            }
            assert_eq!(v.frobenius_image(&f).dim(), v.dim());
        }
    }

    #[test]
    fn lines_scale_by_alpha_to_the_p_minus_one() {
        for (p, n) in [(2, 2), (3, 2), (5, 2), (3, 3)] {
            let f = field(p, n).unwrap();
            for alpha in 1..f.order() {
                let v = Subspace::span(&f, &[alpha]);
                let l = f.pow(alpha, p as u64 - 1);
                assert_eq!(v.frobenius_image(&f), v.scaled(&f, l));
                assert!(frobenius_scaling_test(&f, &v).is_some());
            }
        }
        let f = field(3, 4).unwrap();
        for v in [
            Subspace::span(&f, &[]),
            Subspace::span(&f, &(0..4).map(|i| 3u32.pow(i)).collect::<Vec<_>>()),
        ] {
            assert_eq!(frobenius_scaling_test(&f, &v), Some(1));
        }
    }

    #[test]
    fn subspace_criterion_holds_exactly_up_to_three() {
        for p in [2, 3, 5, 7] {
            for n in 1..=3 {
                assert!(subspace_criterion(p, n).unwrap().holds, "p={p} n={n}");
            }
        }
        for p in [2, 3] {
            let out = subspace_criterion(p, 4).unwrap();
            assert!(!out.holds);
            let f = field(p, 4).unwrap();
            assert!(frobenius_scaling_test(&f, out.counterexample.as_ref().unwrap()).is_none());
        }
        assert_eq!(subspace_criterion(2, 4).unwrap().counterexample.unwrap().basis.len(), 2);
    }

    #[test]
    fn mobius_exhaustive_for_cubics() {
        for p in [2, 3, 5, 7] {
            let f = field(p, 3).unwrap();
            for beta in 0..f.order() {
                assert!(mobius_condition(&f, beta).is_some());
                let t = cubic_mobius(&f, beta).unwrap();
                assert!(satisfies_mobius(&f, beta, t));
            }
        }
    }

    #[test]
    fn prime_field_elements_take_the_identity_tuple() {
        let f = field(5, 2).unwrap();
        for a in 0..5 {
            assert!(satisfies_mobius(&f, a, [1, 0, 0, 1]));
            assert!(mobius_condition(&f, a).unwrap() <= [1, 0, 0, 1]);
        }
        assert_eq!(mobius_condition(&f, 0), Some([0, 0, 0, 1]));
    }

    #[test]
    fn witness_quartics() {
        for p in [3, 5] {
            let e = endgame(p).unwrap();
            assert!(e.confirms(), "{e:?}");
        }
        assert!(poly::is_irreducible(&WITNESS_QUARTIC, 3));
        assert!(poly::is_irreducible(&WITNESS_QUARTIC, 5));
        assert!(endgame(2).unwrap().confirms());
        assert!(endgame(7).unwrap().confirms());
    }

    #[test]
    fn trivialization_routes_agree() {
        for (p, n) in [(2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2)] {
            let l3 = subspace_criterion(p, n).unwrap().holds;
            let mut all = true;
            for r in 0..=n {
                let via_v = trivialization_check(p, n, r).unwrap();
                assert_eq!(via_v, trivialization_direct(p, n, r).unwrap(), "p={p} n={n} r={r}");
                all &= via_v;
            }
            assert_eq!(all, l3, "p={p} n={n}");
        }
        for (p, n) in [(3, 3), (5, 2)] {
            let all = (0..=n).all(|r| trivialization_check(p, n, r).unwrap());
            assert_eq!(all, subspace_criterion(p, n).unwrap().holds);
        }
    }

    #[test]
    fn direct_subgroups_are_the_subspace_groups() {
        for (p, n) in [(2, 2), (2, 3), (3, 2), (2, 4)] {
            let f = field(p, n).unwrap();
            let direct = unit_subgroups_over_field(p, n).unwrap();
            let mut via_v: Vec<ElemSet> = enumerate_subspaces(&f, None)
                .into_iter()
                .map(|v| SrSubgroupView::new(&f, v).elements(&f))
                .collect();
            via_v.sort();
            assert_eq!(direct, via_v);
            for v in enumerate_subspaces(&f, None) {
                let view = SrSubgroupView::new(&f, v);
                assert_eq!(view.elements(&f).len() as u64, view.group_order);
            }
        }
    }

    #[test]
    fn semilinear_maps_are_the_automorphisms() {
        for (p, n) in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (7, 1), (2, 6)] {
            let f = field(p, n).unwrap();
            let ring = dual_ring(p, n).unwrap();
            let maps: Vec<SemilinearMap> = (1..f.order())
                .flat_map(|l| (0..n).map(move |k| SemilinearMap { lambda: l, k }))
                .collect();
            let mut perms: Vec<Perm> = maps.iter().map(|m| m.as_perm(&f)).collect();
            perms.sort();
            perms.dedup();
            if (f.order() as usize) * (f.order() as usize) <= 256 {
                assert_eq!(perms, ring.automorphism_group().unwrap());
            } else {
                assert_eq!(perms.len() as u64, ring.automorphism_count());
                assert!(perms.iter().take(2).all(|g| ring.is_automorphism(g)));
            }
            let stride = if maps.len() > 100 { 37 } else { 3 };
            for a in maps.iter().step_by(stride) {
                for b in maps.iter().step_by(stride + 2) {
                    assert_eq!(a.compose(&f, b).as_perm(&f), a.as_perm(&f).compose(&b.as_perm(&f)));
                }
            }
        }
    }

    #[test]
    fn rosser_reference_values() {
        // high-precision reference values
        let reference = [
            (3.0, 8.131_927_283_302_021),
            (7.0, 2.962_435_508_776_639),
            (22.0, 0.927_900_029_763_447),
            (23.0, 0.888_316_150_485_156_2),
            (1009.0, 0.023_099_093_711_366_35),
            (10000.0, 0.002_487_771_419_425_844_5),
        ];
        for (x, want) in reference {
            let got = rosser_f(x);
            assert!(((got - want) / want).abs() < 1e-9, "f({x}) = {got}, want {want}");
        }
    }

    #[test]
    fn totient_gate() {
        let scan = phi_bound_scan(23).unwrap();
        assert_eq!(scan.loose_survivors, vec![3, 5, 7]);
        assert_eq!(scan.survivors, vec![3, 5]);
        let seven = scan.rows.iter().find(|r| r.p == 7).unwrap();
        assert_eq!((seven.phi, seven.strict_bound), (20, Some(16)));
        assert_eq!(scan.rows[0].phi, 4);
        assert!(phi_bound_scan(10_000).unwrap().f_below_one);
    }

    proptest! {
        #[test]
        fn frobenius_preserves_dimension(p in prop::sample::select(vec![2u32, 3, 5]), seed in proptest::collection::vec(0u32..10_000, 0..4)) {
            let f = field(p, 3).unwrap();
            let v = Subspace::span(&f, &seed.iter().map(|s| s % f.order()).collect::<Vec<_>>());
            prop_assert_eq!(v.frobenius_image(&f).dim(), v.dim());
            let l = frobenius_scaling_test(&f, &v);
            prop_assert!(l.is_some());
        }
    }
}
