//! The residue field `F_p = A/p` in the basis `1, theta, ..., theta^{d-1}`.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::factor::is_irreducible;
use super::field::{Fq, FqContext};
use super::poly::APoly;
use super::text::{format_apoly, format_in};
use crate::error::{Error, Result};

/// An element of `F_p`: exactly `d` coordinates over `F_q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ResidueElement(Vec<Fq>);

impl ResidueElement {
    pub fn coords(&self) -> &[Fq] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.0[0].is_one() && self.0[1..].iter().all(|c| c.is_zero())
    }

    /// The `F_q` value when the element lies in the base field.
    pub fn as_base(&self) -> Option<Fq> {
        if self.0[1..].iter().all(|c| c.is_zero()) {
            Some(self.0[0])
        } else {
            None
        }
    }
}

/// Context for arithmetic in `A/p`; immutable after construction.
pub struct ResidueContext {
    base: Arc<FqContext>,
    prime: APoly,
    d: usize,
    /// `reduce[j]` holds the coordinates of `theta^{d+j}`, `j < d - 1`.
    reduce: Vec<Vec<Fq>>,
    /// `frob[i][j]` holds the coordinates of `theta^{j q^i}`, `i < d`.
    frob: Vec<Vec<Vec<Fq>>>,
}

impl fmt::Debug for ResidueContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ResidueContext")
            .field("q", &self.base.size())
            .field("prime", &format_apoly(&self.prime, &self.base))
            .finish()
    }
}

impl PartialEq for ResidueContext {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self, other) || (*self.base == *other.base && self.prime == other.prime)
    }
}

impl ResidueContext {
    /// Builds `A/p`; `prime` must be monic irreducible of positive degree.
    pub fn new(base: Arc<FqContext>, prime: &APoly) -> Result<ResidueContext> {
        prime.degree().filter(|&d| d >= 1).ok_or_else(|| {
            Error::InvalidInput("prime must have positive degree".into())
        })?;
        if !prime.is_monic() {
            return Err(Error::InvalidInput("prime must be monic".into()));
        }
        if !is_irreducible(prime, &base) {
            return Err(Error::NotIrreducible(format_apoly(prime, &base)));
        }
        Ok(Self::new_unchecked(base, prime.clone()))
    }

    /// Like [`ResidueContext::new`] without the irreducibility test. Only
    /// for callers that enumerate primes themselves.
    pub fn new_unchecked(base: Arc<FqContext>, prime: APoly) -> ResidueContext {
        let d = prime.degree().expect("nonzero prime");
        let k = &*base;
        let mut reduce = Vec::with_capacity(d.saturating_sub(1));
        // theta^d = -(p_0 + ... + p_{d-1} theta^{d-1})
        let mut cur: Vec<Fq> = (0..d).map(|i| k.neg(prime.coeff(i))).collect();
        for _ in 0..d.saturating_sub(1) {
            reduce.push(cur.clone());
            // multiply by theta
            let top = cur[d - 1];
            let mut next = vec![Fq::ZERO; d];
            for i in (1..d).rev() {
                next[i] = cur[i - 1];
            }
            for i in 0..d {
                next[i] = k.add(next[i], k.mul(top, k.neg(prime.coeff(i))));
            }
            cur = next;
        }
        let mut ctx = ResidueContext { base, prime, d, reduce, frob: Vec::new() };
        ctx.build_frobenius();
        ctx
    }

    fn build_frobenius(&mut self) {
        let d = self.d;
        let q = self.base.size() as u64;
        let theta = self.theta();
        let mut frob = Vec::with_capacity(d);
        // theta^{q^i}
        let mut tq = theta.clone();
        for _ in 0..d {
            let mut cols = Vec::with_capacity(d);
            let mut acc = self.one();
            for _ in 0..d {
                cols.push(acc.0.clone());
                acc = self.mul(&acc, &tq);
            }
            frob.push(cols);
            tq = self.pow(&tq, q);
        }
        self.frob = frob;
    }

    pub fn base(&self) -> &FqContext {
        &self.base
    }

    pub fn base_arc(&self) -> &Arc<FqContext> {
        &self.base
    }

    pub fn prime(&self) -> &APoly {
        &self.prime
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn zero(&self) -> ResidueElement {
        ResidueElement(vec![Fq::ZERO; self.d])
    }

    pub fn one(&self) -> ResidueElement {
        self.from_base(Fq::ONE)
    }

    pub fn from_base(&self, c: Fq) -> ResidueElement {
        let mut v = vec![Fq::ZERO; self.d];
        v[0] = c;
        ResidueElement(v)
    }

    /// `theta`, the image of `T`.
    pub fn theta(&self) -> ResidueElement {
        self.residue_of(&APoly::t())
    }

    /// Element with the given coordinates (padded or rejected when too long).
    pub fn from_coords(&self, coords: &[Fq]) -> Result<ResidueElement> {
        if coords.len() > self.d {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates for a degree {} residue field",
                coords.len(),
                self.d
            )));
        }
        let mut v = coords.to_vec();
        v.resize(self.d, Fq::ZERO);
        Ok(ResidueElement(v))
    }

    /// `a mod p`.
    pub fn residue_of(&self, a: &APoly) -> ResidueElement {
        let r = a.rem(&self.prime, &self.base).expect("nonzero prime");
        let mut v = r.into_coeffs();
        v.resize(self.d, Fq::ZERO);
        ResidueElement(v)
    }

    /// The representative of degree `< d`.
    pub fn lift(&self, x: &ResidueElement) -> APoly {
        APoly::new(x.0.clone())
    }

    pub fn add(&self, a: &ResidueElement, b: &ResidueElement) -> ResidueElement {
        let k = &*self.base;
        ResidueElement(a.0.iter().zip(&b.0).map(|(&x, &y)| k.add(x, y)).collect())
    }

    pub fn sub(&self, a: &ResidueElement, b: &ResidueElement) -> ResidueElement {
        let k = &*self.base;
        ResidueElement(a.0.iter().zip(&b.0).map(|(&x, &y)| k.sub(x, y)).collect())
    }

    pub fn neg(&self, a: &ResidueElement) -> ResidueElement {
        let k = &*self.base;
        ResidueElement(a.0.iter().map(|&x| k.neg(x)).collect())
    }

    pub fn scale(&self, a: &ResidueElement, c: Fq) -> ResidueElement {
        let k = &*self.base;
        ResidueElement(a.0.iter().map(|&x| k.mul(x, c)).collect())
    }

    pub fn mul(&self, a: &ResidueElement, b: &ResidueElement) -> ResidueElement {
        let k = &*self.base;
        let d = self.d;
        let mut prod = vec![Fq::ZERO; 2 * d - 1];
        for (i, &x) in a.0.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in b.0.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] = k.add(prod[i + j], k.mul(x, y));
                }
            }
        }
        let mut out: Vec<Fq> = prod[..d].to_vec();
        for (j, &c) in prod[d..].iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, &r) in out.iter_mut().zip(&self.reduce[j]) {
                *o = k.add(*o, k.mul(c, r));
            }
        }
        ResidueElement(out)
    }

    pub fn pow(&self, a: &ResidueElement, mut e: u64) -> ResidueElement {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn inv(&self, a: &ResidueElement) -> Option<ResidueElement> {
        if a.is_zero() {
            return None;
        }
        let inv = self.lift(a).inv_mod(&self.prime, &self.base)?;
        Some(self.residue_of(&inv))
    }

    /// `a^{q^i}`; the exponent is taken mod `d`.
    pub fn frobenius(&self, a: &ResidueElement, i: usize) -> ResidueElement {
        let i = i % self.d;
        if i == 0 {
            return a.clone();
        }
        let k = &*self.base;
        let mut out = vec![Fq::ZERO; self.d];
        for (j, &x) in a.0.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (o, &c) in out.iter_mut().zip(&self.frob[i][j]) {
                *o = k.add(*o, k.mul(x, c));
            }
        }
        ResidueElement(out)
    }

    /// `N(x) = prod_{i<d} x^{q^i}`, an element of `F_q`.
    pub fn norm_to_fq(&self, x: &ResidueElement) -> Fq {
        let mut acc = x.clone();
        for i in 1..self.d {
            acc = self.mul(&acc, &self.frobenius(x, i));
        }
        acc.as_base().expect("norm lies in the base field")
    }

    /// Text in the `theta` basis, used for debug output.
    pub fn format(&self, x: &ResidueElement) -> String {
        format_in(&x.0, &self.base, "θ")
    }
}
