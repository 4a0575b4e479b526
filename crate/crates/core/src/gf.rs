//! Arithmetic in 𝔽_{pⁿ}.
//!
//! Elements are canonical indices: the coefficient vector of the residue
//! polynomial read as a little-endian base-p integer. Index `c < p` is the
//! prime-field constant `c`; in particular 0 and 1 are the field's zero and
//! one. Multiplication goes through log/antilog tables built from the least
//! primitive element.

use crate::error::{Error, Result};
use crate::numtheory::{factorize, is_prime};

/// Largest field the engine will tabulate.
pub const MAX_FIELD_ORDER: u64 = 1 << 16;

#[derive(Clone, Debug)]
pub struct GaloisField {
    p: u32,
    n: u32,
    q: u32,
    modulus: Vec<u32>,
    generator: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// Polynomials over 𝔽_p, little-endian coefficient vectors.
pub mod poly {
    pub fn trim(mut a: Vec<u32>) -> Vec<u32> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn degree(a: &[u32]) -> Option<usize> {
        a.iter().rposition(|&c| c != 0)
    }

    pub fn inv_mod_p(a: u32, p: u32) -> u32 {
        pow_mod_p(a, p - 2, p)
    }

    pub fn pow_mod_p(a: u32, mut e: u32, p: u32) -> u32 {
        let (mut base, mut acc) = (a as u64 % p as u64, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p as u64;
            }
            base = base * base % p as u64;
            e >>= 1;
        }
        acc as u32
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        trim(out.into_iter().map(|c| c as u32).collect())
    }

    /// Remainder of `a` modulo the nonzero polynomial `m`.
    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut r = trim(a.to_vec());
        let dm = degree(m).expect("nonzero modulus");
        let lead_inv = inv_mod_p(m[dm], p) as u64;
        while let Some(dr) = degree(&r) {
            if dr < dm {
                break;
            }
            let factor = r[dr] as u64 * lead_inv % p as u64;
            let shift = dr - dm;
            for (i, &c) in m.iter().enumerate() {
                let sub = factor * c as u64 % p as u64;
                r[i + shift] = ((r[i + shift] as u64 + p as u64 - sub) % p as u64) as u32;
            }
            r = trim(r);
        }
        r
    }

    /// Monic irreducibility by trial division with every monic polynomial
    /// of degree 1..=deg/2.
    pub fn is_irreducible(f: &[u32], p: u32) -> bool {
        let Some(n) = degree(f) else { return false };
        if n == 0 {
            return false;
        }
        for d in 1..=n / 2 {
            let count = (p as u64).pow(d as u32);
            for v in 0..count {
                let mut g = digits(v, p, d);
                g.push(1);
                if rem(f, &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    /// Roots of `f` in 𝔽_p by exhaustive evaluation.
    pub fn roots_mod_p(f: &[u32], p: u32) -> Vec<u32> {
        (0..p)
            .filter(|&x| {
                f.iter()
                    .rev()
                    .fold(0u64, |acc, &c| (acc * x as u64 + c as u64) % p as u64)
                    == 0
            })
            .collect()
    }

    pub fn digits(mut v: u64, p: u32, len: usize) -> Vec<u32> {
        let mut out = Vec::with_capacity(len);
        for _ in 0..len {
            out.push((v % p as u64) as u32);
            v /= p as u64;
        }
        out
    }

    /// Lexicographically least monic irreducible of degree `n`: the
    /// non-leading coefficients, read as a little-endian base-p integer,
    /// are minimized.
    pub fn least_irreducible(p: u32, n: u32) -> Vec<u32> {
        let count = (p as u64).pow(n);
        for v in 0..count {
            let mut f = digits(v, p, n as usize);
            f.push(1);
            if is_irreducible(&f, p) {
                return f;
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }
}

impl GaloisField {
    /// Builds 𝔽_{pⁿ}. `modulus`, when given, is the full little-endian
    /// coefficient list (length n+1, monic) and must be irreducible.
    pub fn new(p: u32, n: u32, modulus: Option<Vec<u32>>) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NonPrimeP(p as u64));
        }
        if n == 0 {
            return Err(Error::PreconditionViolated("field degree must be ≥ 1".into()));
        }
        let q64 = (p as u64).checked_pow(n).unwrap_or(u64::MAX);
        if q64 > MAX_FIELD_ORDER {
            return Err(Error::OrderTooLarge {
                order: q64,
                cap: MAX_FIELD_ORDER,
            });
        }
        let q = q64 as u32;
        let modulus = match modulus {
            Some(m) => {
                let ok = m.len() == n as usize + 1
                    && m.last() == Some(&1)
                    && m.iter().all(|&c| c < p)
                    && poly::is_irreducible(&m, p);
                if !ok {
                    return Err(Error::ReducibleModulus(m));
                }
                m
            }
            None => poly::least_irreducible(p, n),
        };
        let slow_mul = |a: u32, b: u32| -> u32 {
            let pa = poly::digits(a as u64, p, n as usize);
            let pb = poly::digits(b as u64, p, n as usize);
            let r = poly::rem(&poly::mul(&pa, &pb, p), &modulus, p);
            r.iter().rev().fold(0u32, |acc, &c| acc * p + c)
        };
        let slow_pow = |a: u32, mut e: u64| -> u32 {
            let (mut base, mut acc) = (a, 1u32);
            while e > 0 {
                if e & 1 == 1 {
                    acc = slow_mul(acc, base);
                }
                base = slow_mul(base, base);
                e >>= 1;
            }
            acc
        };
        let group = (q - 1) as u64;
        let prime_divisors: Vec<u64> = factorize(group).into_iter().map(|(r, _)| r).collect();
        let generator = (1..q)
            .find(|&g| prime_divisors.iter().all(|&r| slow_pow(g, group / r) != 1))
            .expect("multiplicative group of a finite field is cyclic");
        let mut exp = Vec::with_capacity(group as usize);
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for i in 0..group as u32 {
            exp.push(x);
            log[x as usize] = i;
            x = slow_mul(x, generator);
        }
        Ok(GaloisField {
            p,
            n,
            q,
            modulus,
            generator,
            exp,
            log,
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Least primitive element by index.
    pub fn generator(&self) -> u32 {
        self.generator
    }

    pub fn digits(&self, x: u32) -> Vec<u32> {
        poly::digits(x as u64, self.p, self.n as usize)
    }

    pub fn from_digits(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0u32, |acc, &c| acc * self.p + c % self.p)
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        if self.n == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b, mut out, mut w) = (a, b, 0u32, 1u32);
        while a > 0 || b > 0 {
            out += ((a % self.p + b % self.p) % self.p) * w;
            a /= self.p;
            b /= self.p;
            w *= self.p;
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if self.p == 2 {
            return a;
        }
        let (mut a, mut out, mut w) = (a, 0u32, 1u32);
        while a > 0 {
            out += ((self.p - a % self.p) % self.p) * w;
            a /= self.p;
            w *= self.p;
        }
        out
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let s = self.log[a as usize] as u64 + self.log[b as usize] as u64;
        self.exp[(s % (self.q as u64 - 1)) as usize]
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let l = self.log[a as usize];
        Some(self.exp[((self.q - 1 - l) % (self.q - 1)) as usize])
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let l = self.log[a as usize] as u64 * (e % (self.q as u64 - 1));
        self.exp[(l % (self.q as u64 - 1)) as usize]
    }

    /// Discrete log base the generator; `None` for zero.
    pub fn log(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.log[a as usize])
    }

    pub fn exp(&self, k: u64) -> u32 {
        self.exp[(k % (self.q as u64 - 1)) as usize]
    }

    /// x ↦ x^p.
    pub fn frobenius(&self, a: u32) -> u32 {
        self.pow(a, self.p as u64)
    }

    /// x ↦ x^(p^k).
    pub fn frobenius_power(&self, a: u32, k: u32) -> u32 {
        (0..k % self.n).fold(a, |x, _| self.frobenius(x))
    }

    /// Multiplication by the prime-field scalar `c`.
    pub fn scale(&self, c: u32, a: u32) -> u32 {
        self.mul(c % self.p, a)
    }

    pub fn in_prime_field(&self, a: u32) -> bool {
        a < self.p
    }

    pub fn multiplicative_order(&self, a: u32) -> Option<u64> {
        let l = self.log(a)? as u64;
        let group = self.q as u64 - 1;
        Some(group / gcd(l, group))
    }

    /// Degree of the minimal polynomial of `a` over 𝔽_p.
    pub fn element_degree(&self, a: u32) -> u32 {
        let mut x = self.frobenius(a);
        let mut d = 1;
        while x != a {
            x = self.frobenius(x);
            d += 1;
        }
        d
    }

    /// Evaluates a polynomial over 𝔽_p at a field element.
    pub fn eval_poly(&self, coeffs: &[u32], x: u32) -> u32 {
        coeffs
            .iter()
            .rev()
            .fold(0u32, |acc, &c| self.add(self.mul(acc, x), c % self.p))
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
