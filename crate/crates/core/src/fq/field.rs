//! The finite field `F_q`, `q = p^n`, as `F_p[w]/(f)`.
//!
//! Elements are stored as a single integer whose base-`p` digits are the
//! coordinates in the basis `1, w, ..., w^{n-1}` (digit `i` is the
//! coefficient of `w^i`). Numeric order of that integer is the field order
//! used for every deterministic enumeration in the crate: coordinates are
//! compared from the highest power of `w` down.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported field size.
pub const MAX_FIELD_SIZE: u32 = 1 << 16;

/// An element of `F_q`. Only meaningful together with its [`FqContext`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Fq(u32);

impl Fq {
    pub const ZERO: Fq = Fq(0);
    pub const ONE: Fq = Fq(1);

    pub fn from_raw(raw: u32) -> Fq {
        Fq(raw)
    }

    pub fn raw(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn is_one(self) -> bool {
        self.0 == 1
    }
}

/// Field description plus multiplication tables.
#[derive(Clone)]
pub struct FqContext {
    p: u32,
    n: u32,
    q: u32,
    /// Monic modulus over `F_p`, coefficients low to high, length `n + 1`.
    modulus: Vec<u32>,
    label: String,
    /// `exp[i] = g^i` for a fixed primitive element `g`, doubled to avoid a reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
    pow_p: Vec<u32>,
    /// `w` generates `F_q^*`; elements then print as powers `w^k`.
    power_style: bool,
}

impl fmt::Debug for FqContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FqContext")
            .field("p", &self.p)
            .field("n", &self.n)
            .field("modulus", &self.modulus)
            .field("label", &self.label)
            .finish()
    }
}

impl PartialEq for FqContext {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.n == other.n && self.modulus == other.modulus
    }
}

impl Eq for FqContext {}

impl FqContext {
    /// Builds `F_{p^n}`. When `modulus` is `None` the default is the least
    /// monic primitive polynomial of degree `n` in the crate's lexicographic
    /// order (for `F_4` this is `w^2 + w + 1`).
    pub fn new(p: u32, n: u32, modulus: Option<Vec<u32>>, label: &str) -> Result<FqContext> {
        if p < 2 || !is_prime_u32(p) {
            return Err(Error::InvalidInput(format!("characteristic {p} is not prime")));
        }
        if n == 0 {
            return Err(Error::InvalidInput("extension degree must be at least 1".into()));
        }
        let q = (p as u64).checked_pow(n).filter(|&q| q <= MAX_FIELD_SIZE as u64).ok_or_else(|| {
            Error::InvalidInput(format!("field size {p}^{n} exceeds {MAX_FIELD_SIZE}"))
        })? as u32;
        let modulus = match modulus {
            Some(m) => {
                let m: Vec<u32> = m.into_iter().map(|c| c % p).collect();
                if m.len() != n as usize + 1 || m[n as usize] != 1 {
                    return Err(Error::InvalidInput(format!(
                        "field modulus must be monic of degree {n}"
                    )));
                }
                if !small::is_irreducible(&m, p) {
                    return Err(Error::NotIrreducible(format!("field modulus {m:?}")));
                }
                m
            }
            None => default_modulus(p, n),
        };
        let label = if label.is_empty() { "w".to_string() } else { label.to_string() };
        let mut ctx = FqContext {
            p,
            n,
            q,
            modulus,
            label,
            exp: Vec::new(),
            log: Vec::new(),
            pow_p: Vec::new(),
            power_style: false,
        };
        ctx.build_tables();
        Ok(ctx)
    }

    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<FqContext> {
        FqContext::new(p, 1, None, "w")
    }

    fn build_tables(&mut self) {
        let q = self.q;
        let order = q - 1;
        let factors = prime_factors(order);
        let (generator, power_style) = {
            let is_primitive =
                |c: u32| factors.iter().all(|&l| self.slow_pow(c, (order / l) as u64) != 1);
            let w = if self.n == 1 { (self.p - self.modulus[0]) % self.p } else { self.p };
            if self.n > 1 && is_primitive(w) {
                (w, true)
            } else {
                let g = (1..q)
                    .find(|&c| self.slow_pow(c, order as u64) == 1 && is_primitive(c))
                    .expect("no primitive element found");
                (g, false)
            }
        };
        self.power_style = power_style;
        let mut exp = vec![0u32; 2 * order as usize];
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for i in 0..order as usize {
            exp[i] = x;
            exp[i + order as usize] = x;
            log[x as usize] = i as u32;
            x = self.slow_mul(x, generator);
        }
        self.exp = exp;
        self.log = log;
        self.pow_p = (0..self.n).map(|i| self.p.pow(i)).collect();
    }

    fn digits(&self, a: u32) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.n as usize);
        let mut a = a;
        for _ in 0..self.n {
            out.push(a % self.p);
            a /= self.p;
        }
        out
    }

    fn undigits(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let prod = small::mul(&self.digits(a), &self.digits(b), self.p);
        let r = small::rem(&prod, &self.modulus, self.p);
        let mut d = vec![0; self.n as usize];
        for (i, c) in r.into_iter().enumerate() {
            d[i] = c;
        }
        self.undigits(&d)
    }

    fn slow_pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.slow_mul(acc, base);
            }
            base = self.slow_mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    pub fn size(&self) -> u32 {
        self.q
    }

    /// Modulus coefficients over `F_p`, low to high.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn zero(&self) -> Fq {
        Fq::ZERO
    }

    pub fn one(&self) -> Fq {
        Fq::ONE
    }

    /// The generator `w` of `F_q` over `F_p`.
    pub fn generator(&self) -> Fq {
        if self.n == 1 {
            // w is the root of the linear modulus
            Fq((self.p - self.modulus[0]) % self.p)
        } else {
            Fq(self.p)
        }
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, v: i64) -> Fq {
        Fq(v.rem_euclid(self.p as i64) as u32)
    }

    pub fn from_coords(&self, coords: &[u32]) -> Fq {
        let mut d = vec![0; self.n as usize];
        for (i, &c) in coords.iter().take(self.n as usize).enumerate() {
            d[i] = c % self.p;
        }
        Fq(self.undigits(&d))
    }

    /// Coordinates in the basis `1, w, ..., w^{n-1}`.
    pub fn coords(&self, a: Fq) -> Vec<u32> {
        self.digits(a.0)
    }

    /// Every element, in increasing field order.
    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        (0..self.q).map(Fq)
    }

    #[inline]
    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        if self.n == 1 {
            let s = a.0 + b.0;
            Fq(if s >= self.p { s - self.p } else { s })
        } else if self.p == 2 {
            Fq(a.0 ^ b.0)
        } else {
            let (mut x, mut y) = (a.0, b.0);
            let mut out = 0;
            for &w in &self.pow_p {
                let s = (x % self.p + y % self.p) % self.p;
                out += s * w;
                x /= self.p;
                y /= self.p;
            }
            Fq(out)
        }
    }

    #[inline]
    pub fn neg(&self, a: Fq) -> Fq {
        if self.p == 2 {
            a
        } else if self.n == 1 {
            Fq(if a.0 == 0 { 0 } else { self.p - a.0 })
        } else {
            let mut x = a.0;
            let mut out = 0;
            for &w in &self.pow_p {
                let c = x % self.p;
                out += ((self.p - c) % self.p) * w;
                x /= self.p;
            }
            Fq(out)
        }
    }

    #[inline]
    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        if a.0 == 0 || b.0 == 0 {
            return Fq::ZERO;
        }
        if self.n == 1 {
            return Fq((a.0 as u64 * b.0 as u64 % self.p as u64) as u32);
        }
        Fq(self.exp[(self.log[a.0 as usize] + self.log[b.0 as usize]) as usize])
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Fq) -> Option<Fq> {
        if a.is_zero() {
            return None;
        }
        let order = self.q - 1;
        let l = self.log[a.0 as usize];
        Some(Fq(self.exp[((order - l) % order) as usize]))
    }

    pub fn div(&self, a: Fq, b: Fq) -> Result<Fq> {
        let inv = self.inv(b).ok_or(Error::DivisionByZero)?;
        Ok(self.mul(a, inv))
    }

    pub fn pow(&self, a: Fq, e: u64) -> Fq {
        if e == 0 {
            return Fq::ONE;
        }
        if a.is_zero() {
            return Fq::ZERO;
        }
        let order = (self.q - 1) as u64;
        let l = self.log[a.0 as usize] as u64;
        Fq(self.exp[((l * (e % order)) % order) as usize])
    }

    /// `a^(1/p)`, i.e. the inverse of the absolute Frobenius.
    pub fn pth_root(&self, a: Fq) -> Fq {
        // (a^{p^{n-1}})^p = a^q = a
        self.pow(a, (self.p as u64).pow(self.n - 1))
    }

    /// Square root in characteristic 2 (`x -> x^{2^{n-1}}`).
    pub fn sqrt_char2(&self, a: Fq) -> Fq {
        debug_assert_eq!(self.p, 2);
        self.pth_root(a)
    }

    /// Whether `a` is a nonzero square (odd characteristic).
    pub fn is_square(&self, a: Fq) -> bool {
        if a.is_zero() {
            return false;
        }
        if self.p == 2 {
            return true;
        }
        self.pow(a, ((self.q - 1) / 2) as u64).is_one()
    }

    /// Absolute trace `F_q -> F_p`.
    pub fn trace(&self, a: Fq) -> Fq {
        let mut acc = Fq::ZERO;
        let mut x = a;
        for _ in 0..self.n {
            acc = self.add(acc, x);
            x = self.pow(x, self.p as u64);
        }
        acc
    }

    /// Renders an element. Prime-field elements print as integers in `0..p`;
    /// when `w` is primitive, other elements print as powers `w^k`,
    /// otherwise as polynomials in `w`.
    pub fn format(&self, a: Fq) -> String {
        if self.n == 1 {
            return a.0.to_string();
        }
        if self.power_style {
            if a.is_zero() {
                return "0".into();
            }
            return match self.log[a.0 as usize] {
                0 => "1".into(),
                1 => self.label.clone(),
                k => format!("{}^{}", self.label, k),
            };
        }
        let d = self.digits(a.0);
        let mut terms = Vec::new();
        for i in (0..self.n as usize).rev() {
            let c = d[i];
            if c == 0 {
                continue;
            }
            let var = match i {
                0 => String::new(),
                1 => self.label.clone(),
                _ => format!("{}^{}", self.label, i),
            };
            let term = if i == 0 {
                c.to_string()
            } else if c == 1 {
                var
            } else {
                format!("{c}{var}")
            };
            terms.push(term);
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }

    /// Whether [`FqContext::format`] yields more than one term.
    pub fn is_compound(&self, a: Fq) -> bool {
        self.n > 1 && !self.power_style && self.digits(a.0).iter().filter(|&&c| c != 0).count() > 1
    }

    /// Modulus rendered in the generator label, e.g. `w^2 + w + 1`.
    pub fn modulus_string(&self) -> String {
        let mut terms = Vec::new();
        for i in (0..self.modulus.len()).rev() {
            let c = self.modulus[i];
            if c == 0 {
                continue;
            }
            let var = match i {
                0 => String::new(),
                1 => self.label.clone(),
                _ => format!("{}^{}", self.label, i),
            };
            terms.push(if i == 0 {
                c.to_string()
            } else if c == 1 {
                var
            } else {
                format!("{c}{var}")
            });
        }
        terms.join(" + ")
    }
}

fn default_modulus(p: u32, n: u32) -> Vec<u32> {
    let q = (p as u64).pow(n);
    let order = q - 1;
    let factors = prime_factors(order as u32);
    // Monic candidates in lexicographic order: the coefficient of x^{n-1} is
    // the most significant digit.
    let total = (p as u64).pow(n);
    for counter in 0..total {
        let mut m = vec![0u32; n as usize + 1];
        let mut c = counter;
        for slot in m.iter_mut().take(n as usize) {
            *slot = (c % p as u64) as u32;
            c /= p as u64;
        }
        m[n as usize] = 1;
        if m[0] == 0 && !(n == 1 && p == 2) {
            continue;
        }
        if !small::is_irreducible(&m, p) {
            continue;
        }
        // root of m has order q-1 in F_p[x]/(m)
        let x = if n == 1 { vec![(p - m[0]) % p] } else { vec![0, 1] };
        let is_primitive = small::powmod(&x, order, &m, p) == vec![1]
            && factors.iter().all(|&l| small::powmod(&x, order / l as u64, &m, p) != vec![1]);
        if is_primitive {
            return m;
        }
    }
    unreachable!("a primitive polynomial always exists")
}

pub(crate) fn is_prime_u32(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Dense polynomials over `F_p` with `u32` coefficients, only used to set up
/// the field itself.
mod small {
    pub fn trim(mut a: Vec<u32>) -> Vec<u32> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
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

    fn inv(a: u32, p: u32) -> u32 {
        let mut r = 1u64;
        let mut b = a as u64;
        let mut e = p as u64 - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p as u64;
            }
            b = b * b % p as u64;
            e >>= 1;
        }
        r as u32
    }

    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut r = trim(a.to_vec());
        let m = trim(m.to_vec());
        let dm = m.len() - 1;
        let lead_inv = inv(m[dm], p);
        while r.len() > dm {
            let k = r.len() - 1;
            let c = (r[k] as u64 * lead_inv as u64 % p as u64) as u32;
            for (i, &mc) in m.iter().enumerate() {
                let idx = k - dm + i;
                r[idx] = ((r[idx] as u64 + (p - c) as u64 * mc as u64) % p as u64) as u32;
            }
            r = trim(r);
        }
        r
    }

    pub fn powmod(base: &[u32], mut e: u64, m: &[u32], p: u32) -> Vec<u32> {
        let mut acc = vec![1u32];
        let mut b = rem(base, m, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = rem(&mul(&acc, &b, p), m, p);
            }
            b = rem(&mul(&b, &b, p), m, p);
            e >>= 1;
        }
        acc
    }

    fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let len = a.len().max(b.len());
        let out = (0..len)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(out)
    }

    fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut a = trim(a.to_vec());
        let mut b = trim(b.to_vec());
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    /// Rabin's test over the prime field.
    pub fn is_irreducible(m: &[u32], p: u32) -> bool {
        let n = m.len() - 1;
        if n == 1 {
            return true;
        }
        let x = vec![0, 1];
        let mut frob = x.clone();
        for k in 1..=n {
            frob = powmod(&frob, p as u64, m, p);
            if k < n && n % k == 0 {
                // only maximal proper divisors matter, but all divisors are cheap
                let g = gcd(m, &sub(&frob, &x, p), p);
                if g.len() > 1 {
                    return false;
                }
            }
        }
        sub(&frob, &x, p).is_empty()
    }
}
