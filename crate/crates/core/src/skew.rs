//! The twisted polynomial ring `F_p{tau}` with `tau c = c^q tau`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fq::{Fq, FqMatrix, ResidueContext, ResidueElement};

/// An element `sum c_i tau^i` with coefficients in `A/p`.
#[derive(Clone)]
pub struct SkewPoly {
    ctx: Arc<ResidueContext>,
    coeffs: Vec<ResidueElement>,
}

impl PartialEq for SkewPoly {
    fn eq(&self, other: &Self) -> bool {
        *self.ctx == *other.ctx && self.coeffs == other.coeffs
    }
}

impl Eq for SkewPoly {}

impl fmt::Debug for SkewPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SkewPoly({self})")
    }
}

/// Debug text: `c_k*t^k + ... + c_0`, coefficients in the `theta` basis.
impl fmt::Display for SkewPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let s = self.ctx.format(c);
            let s = if s.contains(' ') { format!("({s})") } else { s };
            match i {
                0 => write!(f, "{s}")?,
                1 => write!(f, "{s}*t")?,
                _ => write!(f, "{s}*t^{i}")?,
            }
        }
        Ok(())
    }
}

impl SkewPoly {
    pub fn new(ctx: Arc<ResidueContext>, mut coeffs: Vec<ResidueElement>) -> SkewPoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        SkewPoly { ctx, coeffs }
    }

    pub fn zero(ctx: &Arc<ResidueContext>) -> SkewPoly {
        SkewPoly { ctx: ctx.clone(), coeffs: Vec::new() }
    }

    pub fn one(ctx: &Arc<ResidueContext>) -> SkewPoly {
        SkewPoly::constant(ctx, ctx.one())
    }

    pub fn constant(ctx: &Arc<ResidueContext>, c: ResidueElement) -> SkewPoly {
        SkewPoly::new(ctx.clone(), vec![c])
    }

    /// `c tau^k`
    pub fn monomial(ctx: &Arc<ResidueContext>, c: ResidueElement, k: usize) -> SkewPoly {
        let mut v = vec![ctx.zero(); k + 1];
        v[k] = c;
        SkewPoly::new(ctx.clone(), v)
    }

    pub fn tau(ctx: &Arc<ResidueContext>) -> SkewPoly {
        SkewPoly::tau_pow(ctx, 1)
    }

    pub fn tau_pow(ctx: &Arc<ResidueContext>, k: usize) -> SkewPoly {
        SkewPoly::monomial(ctx, ctx.one(), k)
    }

    /// The Frobenius `pi = tau^d`.
    pub fn frobenius(ctx: &Arc<ResidueContext>) -> SkewPoly {
        SkewPoly::tau_pow(ctx, ctx.degree())
    }

    pub fn ctx(&self) -> &Arc<ResidueContext> {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[ResidueElement] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> ResidueElement {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.ctx.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// `tau`-degree; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> ResidueElement {
        self.coeffs.last().cloned().unwrap_or_else(|| self.ctx.zero())
    }

    fn same_ctx(&self, other: &SkewPoly) -> Result<()> {
        if Arc::ptr_eq(&self.ctx, &other.ctx) || *self.ctx == *other.ctx {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn add(&self, other: &SkewPoly) -> SkewPoly {
        self.same_ctx(other).expect("skew polynomials over different residue fields");
        let len = self.coeffs.len().max(other.coeffs.len());
        let v = (0..len).map(|i| self.ctx.add(&self.coeff(i), &other.coeff(i))).collect();
        SkewPoly::new(self.ctx.clone(), v)
    }

    pub fn sub(&self, other: &SkewPoly) -> SkewPoly {
        self.same_ctx(other).expect("skew polynomials over different residue fields");
        let len = self.coeffs.len().max(other.coeffs.len());
        let v = (0..len).map(|i| self.ctx.sub(&self.coeff(i), &other.coeff(i))).collect();
        SkewPoly::new(self.ctx.clone(), v)
    }

    pub fn neg(&self) -> SkewPoly {
        SkewPoly { ctx: self.ctx.clone(), coeffs: self.coeffs.iter().map(|c| self.ctx.neg(c)).collect() }
    }

    /// `c * self` for `c` in `F_q` (central, so left and right agree).
    pub fn scale(&self, c: Fq) -> SkewPoly {
        let v = self.coeffs.iter().map(|x| self.ctx.scale(x, c)).collect();
        SkewPoly::new(self.ctx.clone(), v)
    }

    /// `c * self` for `c` in `F_p`.
    pub fn left_mul_scalar(&self, c: &ResidueElement) -> SkewPoly {
        let v = self.coeffs.iter().map(|x| self.ctx.mul(c, x)).collect();
        SkewPoly::new(self.ctx.clone(), v)
    }

    /// `self * tau^k`.
    pub fn mul_tau_pow(&self, k: usize) -> SkewPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![self.ctx.zero(); k];
        v.extend(self.coeffs.iter().cloned());
        SkewPoly { ctx: self.ctx.clone(), coeffs: v }
    }

    /// Product in `F_p{tau}`. Panics when the contexts differ.
    pub fn mul(&self, other: &SkewPoly) -> SkewPoly {
        self.checked_mul(other).expect("skew polynomials over different residue fields")
    }

    pub fn checked_mul(&self, other: &SkewPoly) -> Result<SkewPoly> {
        self.same_ctx(other)?;
        let ctx = &self.ctx;
        if self.is_zero() || other.is_zero() {
            return Ok(SkewPoly::zero(ctx));
        }
        let d = ctx.degree();
        let mut out = vec![ctx.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        // twisted copies of `other`, one per residue of i mod d
        let mut twisted: Vec<Option<Vec<ResidueElement>>> = vec![None; d];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let tw = twisted[i % d]
                .get_or_insert_with(|| other.coeffs.iter().map(|b| ctx.frobenius(b, i)).collect());
            for (j, b) in tw.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = ctx.add(&out[i + j], &ctx.mul(a, b));
                }
            }
        }
        Ok(SkewPoly::new(ctx.clone(), out))
    }

    pub fn pow(&self, mut e: u64) -> SkewPoly {
        let mut acc = SkewPoly::one(&self.ctx);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Right division: `self = quot * divisor + rem` with `deg rem < deg divisor`.
    pub fn right_divrem(&self, divisor: &SkewPoly) -> Result<(SkewPoly, SkewPoly)> {
        self.same_ctx(divisor)?;
        let ctx = &self.ctx;
        let dg = divisor.degree().ok_or(Error::DivisionByZero)?;
        let mut rem = self.coeffs.clone();
        let Some(df) = self.degree() else {
            return Ok((SkewPoly::zero(ctx), SkewPoly::zero(ctx)));
        };
        if df < dg {
            return Ok((SkewPoly::zero(ctx), self.clone()));
        }
        let d = ctx.degree();
        let mut quot = vec![ctx.zero(); df - dg + 1];
        let mut twisted: Vec<Option<(ResidueElement, Vec<ResidueElement>)>> = vec![None; d];
        for top in (dg..=df).rev() {
            if rem[top].is_zero() {
                continue;
            }
            let m = top - dg;
            let (lead_inv, tw) = twisted[m % d].get_or_insert_with(|| {
                let tw: Vec<_> = divisor.coeffs.iter().map(|b| ctx.frobenius(b, m)).collect();
                let li = ctx.inv(&tw[dg]).expect("nonzero leading coefficient");
                (li, tw)
            });
            let c = ctx.mul(&rem[top], lead_inv);
            for (j, b) in tw.iter().enumerate() {
                if !b.is_zero() {
                    rem[j + m] = ctx.sub(&rem[j + m], &ctx.mul(&c, b));
                }
            }
            debug_assert!(rem[top].is_zero());
            quot[m] = c;
        }
        rem.truncate(dg);
        Ok((SkewPoly::new(ctx.clone(), quot), SkewPoly::new(ctx.clone(), rem)))
    }

    /// Evaluates the additive polynomial `sum c_i x^{q^i}` in an algebra over `F_p`.
    pub fn apply_to<R: FrobeniusAlgebra>(&self, alg: &R, x: &R::Elem) -> R::Elem {
        let mut acc = alg.zero();
        let mut cur = x.clone();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                cur = alg.frobenius(&cur);
            }
            if !c.is_zero() {
                acc = alg.add(&acc, &alg.scale(c, &cur));
            }
        }
        acc
    }

    /// Coefficients of the action on `F_p` itself, where `tau^d` is the identity.
    pub fn fold_on_residue_field(&self) -> Vec<ResidueElement> {
        let ctx = &self.ctx;
        let d = ctx.degree();
        let mut out = vec![ctx.zero(); d];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i % d] = ctx.add(&out[i % d], c);
        }
        out
    }

    /// Matrix over `F_q` of `x -> self(x)` on `F_p`; column `j` is the image of `theta^j`.
    pub fn action_matrix(&self) -> FqMatrix {
        let ctx = &self.ctx;
        let d = ctx.degree();
        let folded = SkewPoly::new(ctx.clone(), self.fold_on_residue_field());
        let mut m = FqMatrix::zeros(d, d);
        let theta = ctx.theta();
        let mut basis = ctx.one();
        for j in 0..d {
            let img = folded.apply_to(&**ctx, &basis);
            for (i, &c) in img.coords().iter().enumerate() {
                m.set(i, j, c);
            }
            basis = ctx.mul(&basis, &theta);
        }
        m
    }

    /// `dim_{F_q}` of the kernel of `self` acting on `F_p`.
    pub fn kernel_dimension(&self) -> usize {
        let m = self.action_matrix();
        self.ctx.degree() - m.rank(self.ctx.base())
    }

    /// Whether every root of the additive polynomial lies in `F_p`. The
    /// remainder of `tau^d` on the right by `self` is the additive
    /// polynomial `x^{q^d} mod self(x)`, so this holds exactly when that
    /// remainder is `x` (assuming a nonzero constant term).
    pub fn roots_in_residue_field(&self) -> bool {
        let pi = SkewPoly::frobenius(&self.ctx);
        let (_, r) = pi.right_divrem(self).expect("nonzero divisor");
        r.is_one() || (self.degree() == Some(0))
    }

    pub fn commutes_with(&self, other: &SkewPoly) -> bool {
        self.mul(other) == other.mul(self)
    }

    /// Central elements commute with `tau` and with `theta`, which generate the ring
    /// over `F_q`.
    pub fn is_central(&self) -> bool {
        let ctx = &self.ctx;
        self.commutes_with(&SkewPoly::tau(ctx)) && self.commutes_with(&SkewPoly::constant(ctx, ctx.theta()))
    }
}

/// An `F_p`-algebra with a `q`-power Frobenius, the evaluation domain of
/// additive polynomials.
pub trait FrobeniusAlgebra {
    type Elem: Clone;
    fn zero(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn scale(&self, c: &ResidueElement, a: &Self::Elem) -> Self::Elem;
    /// `a -> a^q`.
    fn frobenius(&self, a: &Self::Elem) -> Self::Elem;
}

impl FrobeniusAlgebra for ResidueContext {
    type Elem = ResidueElement;

    fn zero(&self) -> ResidueElement {
        ResidueContext::zero(self)
    }

    fn add(&self, a: &ResidueElement, b: &ResidueElement) -> ResidueElement {
        ResidueContext::add(self, a, b)
    }

    fn scale(&self, c: &ResidueElement, a: &ResidueElement) -> ResidueElement {
        self.mul(c, a)
    }

    fn frobenius(&self, a: &ResidueElement) -> ResidueElement {
        ResidueContext::frobenius(self, a, 1)
    }
}
