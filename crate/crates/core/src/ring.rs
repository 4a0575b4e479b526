//! Finite commutative rings with identity, indexed canonically.
//!
//! Four families are modelled: products of copies of one Galois field,
//! Galois fields, dual numbers `𝔽_{pⁿ}[x]/(x²)` and `ℤ/m`. Index 0 is always
//! the additive zero. Galois fields, dual numbers and `ℤ/m` put the
//! multiplicative one at index 1; product rings use mixed-radix digit tuples
//! (coordinate `i` is digit `i`), so their one is the all-ones tuple and is
//! reached through [`Ring::one`].

use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::elemset::ElemSet;
use crate::error::{Error, Result};
use crate::gf::GaloisField;
use crate::numtheory::{divisors, is_prime, prime_power};
use crate::perm::{generate_group, Perm};

pub const DEFAULT_ORDER_CAP: u64 = 65536;
/// Rings up to this order get full addition/multiplication tables.
pub const TABLE_ORDER_LIMIT: usize = 256;
/// Largest automorphism group materialized, counted in permutation entries.
const AUT_ENTRY_CAP: u64 = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RingSpec {
    /// `(𝔽_{p^degree})^n`; `degree = 1` is the Boolean-like `𝔽_pⁿ`.
    ProductField {
        p: u32,
        n: u32,
        degree: u32,
        modulus: Option<Vec<u32>>,
    },
    GaloisField {
        p: u32,
        n: u32,
        modulus: Option<Vec<u32>>,
    },
    /// `𝔽_{pⁿ}[x]/(x²)`; the stored modulus is that of the residue field.
    DualNumbers {
        p: u32,
        n: u32,
        modulus: Option<Vec<u32>>,
    },
    Modular {
        m: u32,
    },
}

impl RingSpec {
    pub fn product(p: u32, n: u32) -> Self {
        RingSpec::ProductField {
            p,
            n,
            degree: 1,
            modulus: None,
        }
    }

    pub fn product_of_fields(p: u32, degree: u32, n: u32) -> Self {
        RingSpec::ProductField {
            p,
            n,
            degree,
            modulus: None,
        }
    }

    pub fn galois(p: u32, n: u32) -> Self {
        RingSpec::GaloisField { p, n, modulus: None }
    }

    pub fn galois_with_modulus(p: u32, n: u32, modulus: Vec<u32>) -> Self {
        RingSpec::GaloisField {
            p,
            n,
            modulus: Some(modulus),
        }
    }

    pub fn dual(p: u32, n: u32) -> Self {
        RingSpec::DualNumbers { p, n, modulus: None }
    }

    pub fn modular(m: u32) -> Self {
        RingSpec::Modular { m }
    }

    pub fn order(&self) -> u64 {
        let pow = |b: u32, e: u32| (b as u64).checked_pow(e).unwrap_or(u64::MAX);
        match *self {
            RingSpec::ProductField { p, n, degree, .. } => pow(p, degree.saturating_mul(n)),
            RingSpec::GaloisField { p, n, .. } => pow(p, n),
            RingSpec::DualNumbers { p, n, .. } => pow(p, 2 * n),
            RingSpec::Modular { m } => m as u64,
        }
    }

    fn with_modulus(&self, m: Vec<u32>) -> RingSpec {
        match self.clone() {
            RingSpec::ProductField { p, n, degree, .. } => RingSpec::ProductField {
                p,
                n,
                degree,
                modulus: (degree > 1).then_some(m),
            },
            RingSpec::GaloisField { p, n, .. } => RingSpec::GaloisField { p, n, modulus: Some(m) },
            RingSpec::DualNumbers { p, n, .. } => RingSpec::DualNumbers { p, n, modulus: Some(m) },
            other => other,
        }
    }
}

fn parse_pow(s: &str) -> Option<(u64, u32)> {
    let (base, exp) = s.split_once('^')?;
    Some((base.trim().parse().ok()?, exp.trim().parse().ok()?))
}

fn parse_coeffs(s: &str) -> Option<Vec<u32>> {
    s.split(',').map(|c| c.trim().parse().ok()).collect()
}

impl FromStr for RingSpec {
    type Err = Error;

    /// `product:q^n`, `gf:p^n[:c0,..,cn]`, `dual:p^n[:c0,..,cn]`, `mod:m`.
    /// For `product`, `q` may be any prime power; an optional trailing
    /// modulus fixes the factor field.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadSpec(s.to_string());
        let mut parts = s.trim().splitn(3, ':');
        let kind = parts.next().ok_or_else(bad)?;
        let body = parts.next().ok_or_else(bad)?;
        let modulus = match parts.next() {
            Some(c) => Some(parse_coeffs(c).ok_or_else(bad)?),
            None => None,
        };
        match kind {
            "mod" => {
                if modulus.is_some() {
                    return Err(bad());
                }
                let m: u32 = body.trim().parse().map_err(|_| bad())?;
                Ok(RingSpec::Modular { m })
            }
            "product" => {
                let (q, n) = parse_pow(body).ok_or_else(bad)?;
                let (p, degree) = prime_power(q).ok_or(Error::NonPrimeP(q))?;
                Ok(RingSpec::ProductField {
                    p: p as u32,
                    n,
                    degree,
                    modulus,
                })
            }
            "gf" | "dual" => {
                let (p, n) = parse_pow(body).ok_or_else(bad)?;
                let p = u32::try_from(p).map_err(|_| bad())?;
                Ok(if kind == "gf" {
                    RingSpec::GaloisField { p, n, modulus }
                } else {
                    RingSpec::DualNumbers { p, n, modulus }
                })
            }
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeffs = |m: &Option<Vec<u32>>| match m {
            Some(c) => format!(":{}", c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")),
            None => String::new(),
        };
        match self {
            RingSpec::ProductField { p, n, degree, modulus } => {
                write!(f, "product:{}^{}{}", (*p as u64).pow(*degree), n, coeffs(modulus))
            }
            RingSpec::GaloisField { p, n, modulus } => write!(f, "gf:{p}^{n}{}", coeffs(modulus)),
            RingSpec::DualNumbers { p, n, modulus } => write!(f, "dual:{p}^{n}{}", coeffs(modulus)),
            RingSpec::Modular { m } => write!(f, "mod:{m}"),
        }
    }
}

/// Structural description of an ideal, used to recognize quotients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum IdealShape {
    /// Product rings: elements supported on the coordinates in the mask.
    Coordinates(u32),
    /// `ℤ/m`: the principal ideal `(d)` for `d | m`.
    Divisor(u32),
    /// Dual numbers: `(ε)`.
    Nilradical,
    Zero,
    Whole,
}

#[derive(Clone, Debug)]
pub struct Ideal {
    pub elements: ElemSet,
    pub generators: Vec<usize>,
    pub shape: IdealShape,
}

impl Ideal {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

#[derive(Clone, Copy, Debug)]
enum Arith {
    Product { q: u32, n: u32 },
    Field,
    Dual { q: u32 },
    Modular { m: u32 },
}

struct Tables {
    add: Vec<u16>,
    mul: Vec<u16>,
}

struct RingData {
    spec: RingSpec,
    order: usize,
    one: usize,
    field: Option<GaloisField>,
    arith: Arith,
    tables: Option<Tables>,
    ideals: Vec<Ideal>,
    maximal: Vec<bool>,
    aut_generators: Vec<Perm>,
    aut_order: u64,
    aut_group: OnceLock<Vec<Perm>>,
    fixed: ElemSet,
}

/// An immutable finite ring; cloning shares the underlying tables.
#[derive(Clone)]
pub struct Ring(Arc<RingData>);

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring({})", self.0.spec)
    }
}

pub fn build_ring(spec: &RingSpec) -> Result<Ring> {
    build_ring_with_cap(spec, DEFAULT_ORDER_CAP)
}

pub fn build_ring_with_cap(spec: &RingSpec, cap: u64) -> Result<Ring> {
    let cap = cap.min(DEFAULT_ORDER_CAP);
    match *spec {
        RingSpec::Modular { m } if m < 2 => return Err(Error::BadSpec(spec.to_string())),
        RingSpec::ProductField { p, .. } | RingSpec::GaloisField { p, .. } | RingSpec::DualNumbers { p, .. }
            if !is_prime(p as u64) =>
        {
            return Err(Error::NonPrimeP(p as u64))
        }
        RingSpec::ProductField { n, degree, .. } if n == 0 || degree == 0 => {
            return Err(Error::BadSpec(spec.to_string()))
        }
        RingSpec::GaloisField { n, .. } | RingSpec::DualNumbers { n, .. } if n == 0 => {
            return Err(Error::BadSpec(spec.to_string()))
        }
        _ => {}
    }
    let order = spec.order();
    if order > cap {
        return Err(Error::OrderTooLarge { order, cap });
    }
    let order = order as usize;

    let (field, arith) = match spec {
        RingSpec::ProductField { p, n, degree, modulus } => {
            let f = GaloisField::new(*p, *degree, modulus.clone())?;
            let q = f.order();
            (Some(f), Arith::Product { q, n: *n })
        }
        RingSpec::GaloisField { p, n, modulus } => (Some(GaloisField::new(*p, *n, modulus.clone())?), Arith::Field),
        RingSpec::DualNumbers { p, n, modulus } => {
            let f = GaloisField::new(*p, *n, modulus.clone())?;
            let q = f.order();
            (Some(f), Arith::Dual { q })
        }
        RingSpec::Modular { m } => (None, Arith::Modular { m: *m }),
    };
    let resolved = match &field {
        Some(f) => spec.with_modulus(f.modulus().to_vec()),
        None => spec.clone(),
    };
    let one = match arith {
        Arith::Product { q, n } => (0..n).map(|i| (q as usize).pow(i)).sum(),
        _ => 1,
    };

    let mut data = RingData {
        spec: resolved,
        order,
        one,
        field,
        arith,
        tables: None,
        ideals: Vec::new(),
        maximal: Vec::new(),
        aut_generators: Vec::new(),
        aut_order: 1,
        aut_group: OnceLock::new(),
        fixed: ElemSet::new(order),
    };
    if order <= TABLE_ORDER_LIMIT {
        let mut add = vec![0u16; order * order];
        let mut mul = vec![0u16; order * order];
        for a in 0..order {
            for b in 0..order {
                add[a * order + b] = data.add_closed(a, b) as u16;
                mul[a * order + b] = data.mul_closed(a, b) as u16;
            }
        }
        data.tables = Some(Tables { add, mul });
    }
    data.ideals = data.structural_ideals();
    data.maximal = (0..data.ideals.len())
        .map(|i| {
            let ideal = &data.ideals[i].elements;
            ideal.len() < order
                && !data
                    .ideals
                    .iter()
                    .any(|j| j.elements.len() < order && j.elements.len() > ideal.len() && ideal.is_subset(&j.elements))
        })
        .collect();
    let (gens, aut_order) = data.structural_automorphisms();
    data.aut_generators = gens;
    data.aut_order = aut_order;
    data.fixed = ElemSet::from_elems(
        order,
        (0..order).filter(|&x| data.aut_generators.iter().all(|g| g.apply(x) == x)),
    );
    Ok(Ring(Arc::new(data)))
}

impl RingData {
    fn f(&self) -> &GaloisField {
        self.field.as_ref().expect("field-backed ring")
    }

    fn add_closed(&self, a: usize, b: usize) -> usize {
        match self.arith {
            Arith::Product { q: 2, .. } => a ^ b,
            Arith::Product { q, n } => {
                let f = self.f();
                let (mut a, mut b, mut out, mut w) = (a as u32, b as u32, 0u32, 1u32);
                for _ in 0..n {
                    out += f.add(a % q, b % q) * w;
                    a /= q;
                    b /= q;
                    w *= q;
                }
                out as usize
            }
            Arith::Field => self.f().add(a as u32, b as u32) as usize,
            Arith::Dual { q } => {
                let f = self.f();
                let (a0, a1, b0, b1) = (a as u32 % q, a as u32 / q, b as u32 % q, b as u32 / q);
                (f.add(a0, b0) + q * f.add(a1, b1)) as usize
            }
            Arith::Modular { m } => (a + b) % m as usize,
        }
    }

    fn mul_closed(&self, a: usize, b: usize) -> usize {
        match self.arith {
            Arith::Product { q: 2, .. } => a & b,
            Arith::Product { q, n } => {
                let f = self.f();
                let (mut a, mut b, mut out, mut w) = (a as u32, b as u32, 0u32, 1u32);
                for _ in 0..n {
                    out += f.mul(a % q, b % q) * w;
                    a /= q;
                    b /= q;
                    w *= q;
                }
                out as usize
            }
            Arith::Field => self.f().mul(a as u32, b as u32) as usize,
            Arith::Dual { q } => {
                let f = self.f();
                let (a0, a1, b0, b1) = (a as u32 % q, a as u32 / q, b as u32 % q, b as u32 / q);
                let lo = f.mul(a0, b0);
                let hi = f.add(f.mul(a0, b1), f.mul(a1, b0));
                (lo + q * hi) as usize
            }
            Arith::Modular { m } => (a * b) % m as usize,
        }
    }

    fn neg_closed(&self, a: usize) -> usize {
        match self.arith {
            Arith::Product { q: 2, .. } => a,
            Arith::Product { q, n } => {
                let f = self.f();
                let (mut a, mut out, mut w) = (a as u32, 0u32, 1u32);
                for _ in 0..n {
                    out += f.neg(a % q) * w;
                    a /= q;
                    w *= q;
                }
                out as usize
            }
            Arith::Field => self.f().neg(a as u32) as usize,
            Arith::Dual { q } => {
                let f = self.f();
                (f.neg(a as u32 % q) + q * f.neg(a as u32 / q)) as usize
            }
            Arith::Modular { m } => (m as usize - a) % m as usize,
        }
    }

    fn structural_ideals(&self) -> Vec<Ideal> {
        let order = self.order;
        let collect = |pred: &dyn Fn(usize) -> bool| ElemSet::from_elems(order, (0..order).filter(|&x| pred(x)));
        let mut ideals = match self.arith {
            Arith::Product { q, n } => (0..1u32 << n)
                .map(|mask| {
                    let elements =
                        collect(&|x| (0..n).all(|i| mask >> i & 1 == 1 || (x / (q as usize).pow(i)) % q as usize == 0));
                    let generator: usize = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| (q as usize).pow(i)).sum();
                    let shape = match mask {
                        0 => IdealShape::Zero,
                        m if m == (1 << n) - 1 => IdealShape::Whole,
                        m => IdealShape::Coordinates(m),
                    };
                    Ideal {
                        elements,
                        generators: vec![generator],
                        shape,
                    }
                })
                .collect(),
            Arith::Field => vec![
                Ideal {
                    elements: collect(&|x| x == 0),
                    generators: vec![0],
                    shape: IdealShape::Zero,
                },
                Ideal {
                    elements: ElemSet::full(order),
                    generators: vec![1],
                    shape: IdealShape::Whole,
                },
            ],
            Arith::Dual { q } => vec![
                Ideal {
                    elements: collect(&|x| x == 0),
                    generators: vec![0],
                    shape: IdealShape::Zero,
                },
                Ideal {
                    elements: collect(&|x| x % q as usize == 0),
                    generators: vec![q as usize],
                    shape: IdealShape::Nilradical,
                },
                Ideal {
                    elements: ElemSet::full(order),
                    generators: vec![1],
                    shape: IdealShape::Whole,
                },
            ],
            Arith::Modular { m } => divisors(m as u64)
                .into_iter()
                .map(|d| {
                    let d = d as u32;
                    let shape = if d == m {
                        IdealShape::Zero
                    } else if d == 1 {
                        IdealShape::Whole
                    } else {
                        IdealShape::Divisor(d)
                    };
                    Ideal {
                        elements: collect(&|x| x % d as usize == 0),
                        generators: vec![(d % m) as usize],
                        shape,
                    }
                })
                .collect(),
        };
        ideals.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.elements.cmp(&b.elements)));
        ideals
    }

    /// Generators of the automorphism group and its order.
    fn structural_automorphisms(&self) -> (Vec<Perm>, u64) {
        let order = self.order;
        let perm = |f: &dyn Fn(usize) -> usize| Perm::from_fn(order, f).expect("automorphism is a bijection");
        match self.arith {
            Arith::Product { q, n } => {
                let f = self.f();
                let degree = f.degree();
                let digits = |x: usize| -> Vec<u32> {
                    (0..n)
                        .map(|i| ((x / (q as usize).pow(i)) % q as usize) as u32)
                        .collect()
                };
                let pack =
                    |d: &[u32]| -> usize { d.iter().rev().fold(0usize, |acc, &c| acc * q as usize + c as usize) };
                let mut gens = Vec::new();
                for i in 0..n.saturating_sub(1) as usize {
                    gens.push(perm(&|x| {
                        let mut d = digits(x);
                        d.swap(i, i + 1);
                        pack(&d)
                    }));
                }
                if degree > 1 {
                    gens.push(perm(&|x| {
                        let mut d = digits(x);
                        d[0] = f.frobenius(d[0]);
                        pack(&d)
                    }));
                }
                let fact: u64 = (1..=n as u64).product();
                (gens, fact * (degree as u64).pow(n))
            }
            Arith::Field => {
                let f = self.f();
                let gens = if f.degree() > 1 {
                    vec![perm(&|x| f.frobenius(x as u32) as usize)]
                } else {
                    Vec::new()
                };
                (gens, f.degree() as u64)
            }
            Arith::Dual { q } => {
                let f = self.f();
                let mut gens = Vec::new();
                if q > 2 {
                    let g = f.generator();
                    gens.push(perm(&|x| {
                        let (a, b) = (x as u32 % q, x as u32 / q);
                        (a + q * f.mul(b, g)) as usize
                    }));
                }
                if f.degree() > 1 {
                    gens.push(perm(&|x| {
                        let (a, b) = (x as u32 % q, x as u32 / q);
                        (f.frobenius(a) + q * f.frobenius(b)) as usize
                    }));
                }
                (gens, f.degree() as u64 * (q as u64 - 1))
            }
            Arith::Modular { .. } => (Vec::new(), 1),
        }
    }
}

impl Ring {
    pub fn spec(&self) -> &RingSpec {
        &self.0.spec
    }

    /// Spec string including the modulus actually used.
    pub fn spec_string(&self) -> String {
        self.0.spec.to_string()
    }

    pub fn order(&self) -> usize {
        self.0.order
    }

    pub fn zero(&self) -> usize {
        0
    }

    pub fn one(&self) -> usize {
        self.0.one
    }

    /// The factor field (products), the field itself, or the residue field
    /// (dual numbers).
    pub fn field(&self) -> Option<&GaloisField> {
        self.0.field.as_ref()
    }

    pub fn characteristic(&self) -> u32 {
        match self.0.spec {
            RingSpec::Modular { m } => m,
            _ => self.0.field.as_ref().map(|f| f.p()).unwrap_or(0),
        }
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        match &self.0.tables {
            Some(t) => t.add[a * self.0.order + b] as usize,
            None => self.0.add_closed(a, b),
        }
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.0.tables {
            Some(t) => t.mul[a * self.0.order + b] as usize,
            None => self.0.mul_closed(a, b),
        }
    }

    pub fn neg(&self, a: usize) -> usize {
        self.0.neg_closed(a)
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    pub fn pow(&self, a: usize, e: u64) -> usize {
        let (mut base, mut acc, mut e) = (a, self.one(), e);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn is_unit(&self, a: usize) -> bool {
        match self.0.arith {
            Arith::Product { q, n } => (0..n).all(|i| !(a / (q as usize).pow(i)).is_multiple_of(q as usize)),
            Arith::Field => a != 0,
            Arith::Dual { q } => !a.is_multiple_of(q as usize),
            Arith::Modular { m } => gcd(a as u64, m as u64) == 1,
        }
    }

    pub fn units(&self) -> ElemSet {
        ElemSet::from_elems(self.order(), (0..self.order()).filter(|&x| self.is_unit(x)))
    }

    pub fn is_field(&self) -> bool {
        self.0.ideals.len() == 2
    }

    /// Every ideal, ordered by size then element list. Index 0 is `{0}` and
    /// the last entry is the whole ring.
    pub fn ideals(&self) -> &[Ideal] {
        &self.0.ideals
    }

    pub fn is_maximal_ideal(&self, idx: usize) -> bool {
        self.0.maximal[idx]
    }

    pub fn find_ideal(&self, elements: &ElemSet) -> Option<usize> {
        self.0.ideals.iter().position(|i| &i.elements == elements)
    }

    /// Proper nonzero ideals in covering-search order: maximal ideals
    /// first, then the rest by ascending size.
    pub fn proper_nonzero_ideals(&self) -> Vec<usize> {
        let n = self.0.ideals.len();
        let candidates: Vec<usize> = (1..n.saturating_sub(1)).collect();
        let (mut maximal, rest): (Vec<usize>, Vec<usize>) = candidates.into_iter().partition(|&i| self.0.maximal[i]);
        maximal.extend(rest);
        maximal
    }

    pub fn maximal_ideals(&self) -> Vec<usize> {
        (0..self.0.ideals.len()).filter(|&i| self.0.maximal[i]).collect()
    }

    /// The ideal generated by `gens`, by additive closure of `R·gens`.
    pub fn ideal_generated(&self, gens: impl IntoIterator<Item = usize>) -> ElemSet {
        let order = self.order();
        let mut products = ElemSet::new(order);
        for g in gens {
            for r in 0..order {
                products.insert(self.mul(r, g));
            }
        }
        self.additive_closure(&products)
    }

    /// Smallest additive subgroup containing `set`.
    pub fn additive_closure(&self, set: &ElemSet) -> ElemSet {
        let mut group = ElemSet::from_elems(self.order(), [0]);
        let mut members = vec![0usize];
        for s in set.iter() {
            if group.contains(s) {
                continue;
            }
            // adjoin the cyclic subgroup <s> coset by coset
            let base = members.clone();
            let mut shift = s;
            while !group.contains(shift) {
                for &h in &base {
                    let y = self.add(h, shift);
                    if group.insert(y) {
                        members.push(y);
                    }
                }
                shift = self.add(shift, s);
            }
        }
        group
    }

    pub fn is_ideal(&self, set: &ElemSet) -> bool {
        set.contains(0)
            && set.iter().all(|a| set.iter().all(|b| set.contains(self.add(a, b))))
            && set
                .iter()
                .all(|a| (0..self.order()).all(|r| set.contains(self.mul(r, a))))
    }

    pub fn aut_generators(&self) -> &[Perm] {
        &self.0.aut_generators
    }

    /// Order of the automorphism group, known from the ring's structure.
    pub fn automorphism_count(&self) -> u64 {
        self.0.aut_order
    }

    /// The full automorphism group as element permutations, identity first.
    pub fn automorphism_group(&self) -> Result<&[Perm]> {
        if let Some(g) = self.0.aut_group.get() {
            return Ok(g);
        }
        let entries = self.0.aut_order.saturating_mul(self.order() as u64);
        if entries > AUT_ENTRY_CAP {
            return Err(Error::CapExceeded {
                what: format!(
                    "automorphism group of {} ({} elements)",
                    self.spec_string(),
                    self.0.aut_order
                ),
                cap: AUT_ENTRY_CAP,
            });
        }
        let group = generate_group(self.order(), &self.0.aut_generators, usize::MAX)?;
        debug_assert_eq!(group.len() as u64, self.0.aut_order);
        let _ = self.0.aut_group.set(group);
        Ok(self.0.aut_group.get().expect("just set"))
    }

    pub fn fixed_subring(&self) -> &ElemSet {
        &self.0.fixed
    }

    pub fn is_rigid(&self) -> bool {
        self.0.aut_generators.iter().all(Perm::is_identity)
    }

    pub fn is_automorphism(&self, g: &Perm) -> bool {
        let n = self.order();
        g.len() == n
            && g.apply(0) == 0
            && g.apply(self.one()) == self.one()
            && (0..n).all(|a| {
                (0..n).all(|b| {
                    g.apply(self.add(a, b)) == self.add(g.apply(a), g.apply(b))
                        && g.apply(self.mul(a, b)) == self.mul(g.apply(a), g.apply(b))
                })
            })
    }

    /// Multiplicative closure of `set` (without adjoining anything else).
    pub fn multiplicative_closure(&self, set: &ElemSet) -> ElemSet {
        let mut closed = set.clone();
        let mut members: Vec<usize> = set.to_vec();
        let mut frontier = members.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &x in &frontier {
                let snapshot = members.len();
                for i in 0..snapshot {
                    let y = self.mul(x, members[i]);
                    if closed.insert(y) {
                        members.push(y);
                        next.push(y);
                    }
                }
            }
            frontier = next;
        }
        closed
    }

    /// The submonoid generated by a multiplicatively closed `closed` and
    /// `c`, which is `⋃ cᵏ·closed` since the ring is commutative.
    pub fn adjoin(&self, closed: &ElemSet, c: usize) -> ElemSet {
        let mut out = closed.clone();
        let members = closed.to_vec();
        let mut power = c;
        loop {
            let mut grew = false;
            for &m in &members {
                grew |= out.insert(self.mul(power, m));
            }
            if !grew {
                return out;
            }
            power = self.mul(power, c);
        }
    }

    pub fn is_multiplicatively_closed(&self, set: &ElemSet) -> bool {
        set.iter().all(|a| set.iter().all(|b| set.contains(self.mul(a, b))))
    }

    /// Returns the quotient by a listed proper ideal.
    pub fn quotient(&self, ideal: &ElemSet) -> Result<QuotientView> {
        let idx = self.find_ideal(ideal).ok_or(Error::NotAnIdeal)?;
        self.quotient_by_index(idx)
    }

    pub fn quotient_by_index(&self, idx: usize) -> Result<QuotientView> {
        let ideal = &self.0.ideals[idx];
        let order = self.order();
        if ideal.elements.len() == order {
            return Err(Error::ImproperIdeal);
        }
        let (target_spec, project): (RingSpec, Box<dyn Fn(usize) -> usize>) = match (&self.0.spec, ideal.shape) {
            (_, IdealShape::Zero) => (self.0.spec.clone(), Box::new(|x| x)),
            (RingSpec::ProductField { p, n, degree, modulus }, IdealShape::Coordinates(mask)) => {
                let q = (*p as usize).pow(*degree);
                let kept: Vec<u32> = (0..*n).filter(|i| mask >> i & 1 == 0).collect();
                let spec = RingSpec::ProductField {
                    p: *p,
                    n: kept.len() as u32,
                    degree: *degree,
                    modulus: modulus.clone(),
                };
                (
                    spec,
                    Box::new(move |x| kept.iter().rev().fold(0usize, |acc, &i| acc * q + (x / q.pow(i)) % q)),
                )
            }
            (RingSpec::Modular { .. }, IdealShape::Divisor(d)) => {
                (RingSpec::Modular { m: d }, Box::new(move |x| x % d as usize))
            }
            (RingSpec::DualNumbers { p, n, modulus }, IdealShape::Nilradical) => {
                let q = self.field().expect("dual numbers have a residue field").order() as usize;
                (
                    RingSpec::GaloisField {
                        p: *p,
                        n: *n,
                        modulus: modulus.clone(),
                    },
                    Box::new(move |x| x % q),
                )
            }
            _ => return Err(Error::NotAnIdeal),
        };
        let target = build_ring(&target_spec)?;
        let projection: Vec<u32> = (0..order).map(|x| project(x) as u32).collect();
        let mut fibers = vec![Vec::new(); target.order()];
        for (x, &t) in projection.iter().enumerate() {
            fibers[t as usize].push(x as u32);
        }
        Ok(QuotientView {
            source: self.clone(),
            ideal_index: idx,
            ideal: ideal.elements.clone(),
            target,
            projection,
            fibers,
        })
    }

    /// A proper nonzero ideal whose quotient is rigid, if one exists.
    pub fn exists_trivial_multiaction(&self) -> Result<Option<usize>> {
        for idx in self.proper_nonzero_ideals() {
            if self.quotient_by_index(idx)?.target.is_rigid() {
                return Ok(Some(idx));
            }
        }
        Ok(None)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// The canonical projection `R → R/I`.
#[derive(Clone, Debug)]
pub struct QuotientView {
    pub source: Ring,
    pub ideal_index: usize,
    pub ideal: ElemSet,
    pub target: Ring,
    pub projection: Vec<u32>,
    pub fibers: Vec<Vec<u32>>,
}

impl QuotientView {
    #[inline]
    pub fn project(&self, x: usize) -> usize {
        self.projection[x] as usize
    }

    pub fn project_set(&self, set: &ElemSet) -> ElemSet {
        ElemSet::from_elems(self.target.order(), set.iter().map(|x| self.project(x)))
    }

    /// `π⁻¹(a) ∩ set`, ascending.
    pub fn fiber_within(&self, a: usize, set: &ElemSet) -> Vec<usize> {
        self.fibers[a]
            .iter()
            .map(|&x| x as usize)
            .filter(|&x| set.contains(x))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(s: &str) -> Ring {
        build_ring(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn spec_strings_round_trip() {
        for s in ["product:2^3", "product:4^2", "gf:3^4:2,0,1,0,1", "dual:2^2", "mod:12"] {
            let spec: RingSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert_eq!(ring("dual:2^2").spec_string(), "dual:2^2:1,1,1");
        assert!("product:6^2".parse::<RingSpec>().is_err());
        assert!("banana:2^2".parse::<RingSpec>().is_err());
    }

    #[test]
    fn build_errors() {
        assert!(matches!(build_ring(&RingSpec::galois(4, 2)), Err(Error::NonPrimeP(4))));
        assert!(matches!(
            build_ring(&RingSpec::galois_with_modulus(2, 2, vec![1, 0, 1])),
            Err(Error::ReducibleModulus(_))
        ));
        assert!(matches!(
            build_ring(&RingSpec::product(2, 17)),
            Err(Error::OrderTooLarge { .. })
        ));
        assert!(matches!(
            build_ring_with_cap(&RingSpec::product(2, 5), 16),
            Err(Error::OrderTooLarge { order: 32, cap: 16 })
        ));
        assert!(build_ring(&RingSpec::modular(1)).is_err());
    }

    #[test]
    fn product_ideals_are_coordinate_subsets() {
        let r = ring("product:2^3");
        assert_eq!(r.order(), 8);
        assert_eq!(r.ideals().len(), 8);
        assert_eq!(r.one(), 7);
        assert_eq!(r.maximal_ideals().len(), 3);
    }

    #[test]
    fn dual_ideals() {
        let r = ring("dual:2^1");
        let sets: Vec<Vec<usize>> = r.ideals().iter().map(|i| i.elements.to_vec()).collect();
        assert_eq!(sets, vec![vec![0], vec![0, 2], vec![0, 1, 2, 3]]);
        assert_eq!(r.ideals()[1].shape, IdealShape::Nilradical);
    }

    #[test]
    fn prime_modulus_is_field() {
        let r = ring("mod:7");
        assert_eq!(r.ideals().len(), 2);
        assert!(r.is_field());
        assert!(r.exists_trivial_multiaction().unwrap().is_none());
    }

    #[test]
    fn automorphism_orders() {
        assert_eq!(ring("dual:2^2").automorphism_group().unwrap().len(), 6);
        assert_eq!(ring("mod:12").automorphism_group().unwrap().len(), 1);
        assert_eq!(ring("product:2^3").automorphism_group().unwrap().len(), 6);
        assert_eq!(ring("product:4^2").automorphism_group().unwrap().len(), 8);
    }

    #[test]
    fn fixed_subrings() {
        assert_eq!(ring("product:2^4").fixed_subring().to_vec(), vec![0, 15]);
        assert_eq!(ring("mod:9").fixed_subring().len(), 9);
        assert_eq!(ring("dual:3^2").fixed_subring().to_vec(), vec![0, 1, 2]);
    }

    #[test]
    fn quotients() {
        let r = ring("product:2^3");
        let idx = r
            .ideals()
            .iter()
            .position(|i| i.shape == IdealShape::Coordinates(0b100))
            .unwrap();
        let qv = r.quotient_by_index(idx).unwrap();
        assert_eq!(qv.target.spec(), &RingSpec::product(2, 2));
        assert!(qv.fibers.iter().all(|f| f.len() == 2));

        let z4 = ring("mod:4");
        let qv = z4.quotient(&ElemSet::from_elems(4, [0, 2])).unwrap();
        assert_eq!(qv.target.spec(), &RingSpec::modular(2));
        assert_eq!(qv.fibers, vec![vec![0, 2], vec![1, 3]]);

        let d = ring("dual:2^2");
        let qv = d.quotient_by_index(1).unwrap();
        assert!(matches!(qv.target.spec(), RingSpec::GaloisField { p: 2, n: 2, .. }));
        assert!(qv.fibers.iter().all(|f| f.len() == 4));

        assert!(matches!(
            z4.quotient(&ElemSet::from_elems(4, [0, 1])),
            Err(Error::NotAnIdeal)
        ));
        assert!(matches!(z4.quotient(&ElemSet::full(4)), Err(Error::ImproperIdeal)));
    }

    #[test]
    fn rigidity() {
        let z4 = ring("mod:4");
        assert!(z4.is_rigid());
        let idx = z4.exists_trivial_multiaction().unwrap().unwrap();
        assert_eq!(z4.ideals()[idx].elements.to_vec(), vec![0, 2]);

        let f8 = ring("product:2^3");
        let idx = f8.exists_trivial_multiaction().unwrap().unwrap();
        assert!(f8.is_maximal_ideal(idx));
        assert!(ring("gf:2^2").exists_trivial_multiaction().unwrap().is_none());
    }

    #[test]
    fn closure_helpers() {
        let r = ring("mod:12");
        assert_eq!(r.ideal_generated([8]).to_vec(), vec![0, 4, 8]);
        assert_eq!(r.ideal_generated([4, 6]).to_vec(), vec![0, 2, 4, 6, 8, 10]);
        assert!(r.is_ideal(&ElemSet::from_elems(12, [0, 3, 6, 9])));
        assert!(!r.is_ideal(&ElemSet::from_elems(12, [0, 3, 6])));
    }
}
