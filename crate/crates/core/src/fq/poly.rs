//! Dense univariate polynomials over `F_q` (the ring `A = F_q[T]`).

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::field::{Fq, FqContext};
use crate::error::{Error, Result};

/// A polynomial in `T`, coefficients indexed by degree, no trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct APoly(Vec<Fq>);

impl APoly {
    pub fn new(mut coeffs: Vec<Fq>) -> APoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        APoly(coeffs)
    }

    pub fn zero() -> APoly {
        APoly(Vec::new())
    }

    pub fn one() -> APoly {
        APoly(vec![Fq::ONE])
    }

    pub fn constant(c: Fq) -> APoly {
        APoly::new(vec![c])
    }

    /// `c * T^k`
    pub fn monomial(c: Fq, k: usize) -> APoly {
        let mut v = vec![Fq::ZERO; k + 1];
        v[k] = c;
        APoly::new(v)
    }

    /// The indeterminate `T`.
    pub fn t() -> APoly {
        APoly::monomial(Fq::ONE, 1)
    }

    /// From prime-field integers, low degree first.
    pub fn from_ints(k: &FqContext, coeffs: &[i64]) -> APoly {
        APoly::new(coeffs.iter().map(|&c| k.from_int(c)).collect())
    }

    pub fn coeffs(&self) -> &[Fq] {
        &self.0
    }

    pub fn into_coeffs(self) -> Vec<Fq> {
        self.0
    }

    pub fn coeff(&self, i: usize) -> Fq {
        self.0.get(i).copied().unwrap_or(Fq::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.len() == 1 && self.0[0].is_one()
    }

    /// Degree; `None` stands for the `-infinity` degree of zero.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    /// Degree with zero mapped to 0, for size estimates.
    pub fn deg_or_zero(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.0.len() <= 1
    }

    pub fn lead(&self) -> Fq {
        self.0.last().copied().unwrap_or(Fq::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.lead().is_one()
    }

    pub fn add(&self, other: &APoly, k: &FqContext) -> APoly {
        let len = self.0.len().max(other.0.len());
        APoly::new((0..len).map(|i| k.add(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn sub(&self, other: &APoly, k: &FqContext) -> APoly {
        let len = self.0.len().max(other.0.len());
        APoly::new((0..len).map(|i| k.sub(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn neg(&self, k: &FqContext) -> APoly {
        APoly(self.0.iter().map(|&c| k.neg(c)).collect())
    }

    pub fn scale(&self, c: Fq, k: &FqContext) -> APoly {
        if c.is_zero() {
            return APoly::zero();
        }
        APoly(self.0.iter().map(|&x| k.mul(x, c)).collect())
    }

    /// Multiplication by `T^s`.
    pub fn shift(&self, s: usize) -> APoly {
        if self.is_zero() {
            return APoly::zero();
        }
        let mut v = vec![Fq::ZERO; s];
        v.extend_from_slice(&self.0);
        APoly(v)
    }

    pub fn mul(&self, other: &APoly, k: &FqContext) -> APoly {
        if self.is_zero() || other.is_zero() {
            return APoly::zero();
        }
        let mut out = vec![Fq::ZERO; self.0.len() + other.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.0.iter().enumerate() {
                out[i + j] = k.add(out[i + j], k.mul(a, b));
            }
        }
        APoly::new(out)
    }

    pub fn pow(&self, mut e: u64, k: &FqContext) -> APoly {
        let mut acc = APoly::one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, k);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, k);
            }
        }
        acc
    }

    /// Euclidean division: `self = quot * divisor + rem`, `deg rem < deg divisor`.
    pub fn divrem(&self, divisor: &APoly, k: &FqContext) -> Result<(APoly, APoly)> {
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let Some(ds) = self.degree() else {
            return Ok((APoly::zero(), APoly::zero()));
        };
        if ds < dd {
            return Ok((APoly::zero(), self.clone()));
        }
        let lead_inv = k.inv(divisor.lead()).expect("nonzero lead");
        let mut rem = self.0.clone();
        let mut quot = vec![Fq::ZERO; ds - dd + 1];
        for i in (0..=ds - dd).rev() {
            let c = k.mul(rem[i + dd], lead_inv);
            if c.is_zero() {
                continue;
            }
            quot[i] = c;
            for (j, &dc) in divisor.0.iter().enumerate() {
                rem[i + j] = k.sub(rem[i + j], k.mul(c, dc));
            }
        }
        rem.truncate(dd);
        Ok((APoly::new(quot), APoly::new(rem)))
    }

    pub fn rem(&self, divisor: &APoly, k: &FqContext) -> Result<APoly> {
        Ok(self.divrem(divisor, k)?.1)
    }

    /// Exact quotient; errors when the division leaves a remainder.
    pub fn div_exact(&self, divisor: &APoly, k: &FqContext) -> Result<APoly> {
        let (q, r) = self.divrem(divisor, k)?;
        if !r.is_zero() {
            return Err(Error::Invariant("inexact polynomial division".into()));
        }
        Ok(q)
    }

    pub fn divides(&self, other: &APoly, k: &FqContext) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.rem(self, k).map(|r| r.is_zero()).unwrap_or(false)
    }

    /// Scales to a monic polynomial; zero stays zero.
    pub fn monic(&self, k: &FqContext) -> APoly {
        if self.is_zero() {
            return APoly::zero();
        }
        self.scale(k.inv(self.lead()).unwrap(), k)
    }

    /// Monic greatest common divisor (zero when both inputs are zero).
    pub fn gcd(&self, other: &APoly, k: &FqContext) -> APoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b, k).unwrap();
            a = b;
            b = r;
        }
        a.monic(k)
    }

    /// Extended Euclid: `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &APoly, k: &FqContext) -> (APoly, APoly, APoly) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (APoly::one(), APoly::zero());
        let (mut t0, mut t1) = (APoly::zero(), APoly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1, k).unwrap();
            r0 = r1;
            r1 = r;
            let s = s0.sub(&q.mul(&s1, k), k);
            s0 = s1;
            s1 = s;
            let t = t0.sub(&q.mul(&t1, k), k);
            t0 = t1;
            t1 = t;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let u = k.inv(r0.lead()).unwrap();
        (r0.scale(u, k), s0.scale(u, k), t0.scale(u, k))
    }

    /// Inverse of `self` modulo `m`, if they are coprime.
    pub fn inv_mod(&self, m: &APoly, k: &FqContext) -> Option<APoly> {
        let (g, s, _) = self.ext_gcd(m, k);
        if g.is_one() {
            Some(s.rem(m, k).unwrap())
        } else {
            None
        }
    }

    pub fn lcm(&self, other: &APoly, k: &FqContext) -> APoly {
        if self.is_zero() || other.is_zero() {
            return APoly::zero();
        }
        let g = self.gcd(other, k);
        self.mul(other, k).div_exact(&g, k).unwrap().monic(k)
    }

    pub fn mulmod(&self, other: &APoly, m: &APoly, k: &FqContext) -> APoly {
        self.mul(other, k).rem(m, k).unwrap()
    }

    pub fn powmod(&self, mut e: u64, m: &APoly, k: &FqContext) -> APoly {
        let mut acc = APoly::one().rem(m, k).unwrap();
        let mut base = self.rem(m, k).unwrap();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mulmod(&base, m, k);
            }
            e >>= 1;
            if e > 0 {
                base = base.mulmod(&base, m, k);
            }
        }
        acc
    }

    pub fn derivative(&self, k: &FqContext) -> APoly {
        if self.0.len() <= 1 {
            return APoly::zero();
        }
        APoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| k.mul(c, k.from_int(i as i64)))
                .collect(),
        )
    }

    pub fn eval(&self, x: Fq, k: &FqContext) -> Fq {
        self.0.iter().rev().fold(Fq::ZERO, |acc, &c| k.add(k.mul(acc, x), c))
    }

    /// Multiplicity of the irreducible `prime` in `self` (`None` for zero).
    pub fn valuation(&self, prime: &APoly, k: &FqContext) -> Option<usize> {
        if self.is_zero() {
            return None;
        }
        let mut v = 0;
        let mut cur = self.clone();
        loop {
            let (q, r) = cur.divrem(prime, k).unwrap();
            if !r.is_zero() {
                return Some(v);
            }
            v += 1;
            cur = q;
        }
    }

    /// `p`-th root of a polynomial whose exponents are all multiples of `p`.
    pub fn pth_root(&self, k: &FqContext) -> Option<APoly> {
        let p = k.characteristic() as usize;
        let mut out = Vec::with_capacity(self.0.len() / p + 1);
        for (i, &c) in self.0.iter().enumerate() {
            if i % p == 0 {
                out.push(k.pth_root(c));
            } else if !c.is_zero() {
                return None;
            }
        }
        Some(APoly::new(out))
    }

    /// Total order: by degree, then coefficients from the top down in field order.
    pub fn cmp_deglex(&self, other: &APoly) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fq::text::parse_apoly;
    use proptest::prelude::*;

    fn f3() -> FqContext {
        FqContext::prime(3).unwrap()
    }

    fn poly(k: &FqContext, s: &str) -> APoly {
        parse_apoly(s, k).unwrap()
    }

    #[test]
    fn gcd_of_divisor_pair() {
        let k = f3();
        let a = poly(&k, "T^3*(T+1)*(T-1)");
        let b = poly(&k, "T^3*(T+1)^2*(T-1)^2");
        assert_eq!(a.gcd(&b, &k), a);
    }

    #[test]
    fn exact_division() {
        let k = f3();
        let a = poly(&k, "T^2 - T - 1");
        let prod = a.mul(&poly(&k, "T+1"), &k);
        let (q, r) = prod.divrem(&a, &k).unwrap();
        assert_eq!(q, poly(&k, "T + 1"));
        assert!(r.is_zero());
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let k = f3();
        assert!(matches!(APoly::t().divrem(&APoly::zero(), &k), Err(Error::DivisionByZero)));
    }

    #[test]
    fn zero_degree_sentinel() {
        assert_eq!(APoly::zero().degree(), None);
        assert_eq!(APoly::new(vec![Fq::ZERO, Fq::ZERO]), APoly::zero());
    }

    #[test]
    fn inverse_mod_prime() {
        let k = f3();
        let p = poly(&k, "T^7 - T^2 + 1");
        let a = poly(&k, "T^3 + 2T + 1");
        let inv = a.inv_mod(&p, &k).unwrap();
        assert!(a.mulmod(&inv, &p, &k).is_one());
    }

    #[test]
    fn pth_root_and_derivative() {
        let k = f3();
        let a = poly(&k, "T^6 + 2T^3 + 1");
        assert!(a.derivative(&k).is_zero());
        assert_eq!(a.pth_root(&k).unwrap(), poly(&k, "T^2 + 2T + 1"));
        assert!(poly(&k, "T^2").pth_root(&k).is_none());
    }

    fn arb_poly(max_len: usize) -> impl Strategy<Value = Vec<i64>> {
        prop::collection::vec(0i64..5, 0..max_len)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn ring_axioms(a in arb_poly(8), b in arb_poly(8), c in arb_poly(8)) {
            let k = FqContext::prime(5).unwrap();
            let (a, b, c) = (APoly::from_ints(&k, &a), APoly::from_ints(&k, &b), APoly::from_ints(&k, &c));
            prop_assert_eq!(a.mul(&b, &k).mul(&c, &k), a.mul(&b.mul(&c, &k), &k));
            prop_assert_eq!(a.mul(&b.add(&c, &k), &k), a.mul(&b, &k).add(&a.mul(&c, &k), &k));
            prop_assert_eq!(a.mul(&b, &k), b.mul(&a, &k));
        }
    }

    proptest! {
        #[test]
        fn divrem_round_trip(a in arb_poly(12), b in arb_poly(6)) {
            let k = FqContext::new(2, 2, None, "w").unwrap();
            let a = APoly::new(a.iter().map(|&c| Fq::from_raw((c % 4) as u32)).collect());
            let b = APoly::new(b.iter().map(|&c| Fq::from_raw((c % 4) as u32)).collect());
            prop_assume!(!b.is_zero());
            let (q, r) = a.divrem(&b, &k).unwrap();
            prop_assert_eq!(q.mul(&b, &k).add(&r, &k), a);
            prop_assert!(r.degree().map_or(true, |dr| dr < b.degree().unwrap()));
        }
    }
}
