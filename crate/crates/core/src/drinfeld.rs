//! Drinfeld `F_q[T]`-modules over `F = F_q(T)` and their reductions at primes.

use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fq::text::{format_in, parse_in};
use crate::fq::{format_apoly, parse_apoly, APoly, Fq, FqContext, ResidueContext, ResidueElement};
use crate::skew::SkewPoly;

/// A reduced fraction `num/den` in `F`, `den` monic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rational {
    num: APoly,
    den: APoly,
}

impl Rational {
    pub fn new(num: APoly, den: APoly, k: &FqContext) -> Result<Rational> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Rational::from_poly(APoly::zero()));
        }
        let g = num.gcd(&den, k);
        let u = k.inv(den.lead()).unwrap();
        let num = num.div_exact(&g, k)?.scale(u, k);
        let den = den.div_exact(&g, k)?.scale(u, k);
        Ok(Rational { num, den })
    }

    pub fn from_poly(a: APoly) -> Rational {
        Rational { num: a, den: APoly::one() }
    }

    pub fn num(&self) -> &APoly {
        &self.num
    }

    pub fn den(&self) -> &APoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &Rational, k: &FqContext) -> Rational {
        let num = self.num.mul(&other.den, k).add(&other.num.mul(&self.den, k), k);
        Rational::new(num, self.den.mul(&other.den, k), k).unwrap()
    }

    pub fn mul(&self, other: &Rational, k: &FqContext) -> Rational {
        Rational::new(self.num.mul(&other.num, k), self.den.mul(&other.den, k), k).unwrap()
    }

    /// `x -> x^q`.
    pub fn frobenius(&self, k: &FqContext) -> Rational {
        let q = k.size() as u64;
        Rational { num: self.num.pow(q, k), den: self.den.pow(q, k) }
    }

    /// `ord_p` of the fraction; `None` for zero.
    pub fn valuation(&self, prime: &APoly, k: &FqContext) -> Option<i64> {
        let vn = self.num.valuation(prime, k)? as i64;
        let vd = self.den.valuation(prime, k).unwrap() as i64;
        Some(vn - vd)
    }

    pub fn format(&self, k: &FqContext) -> String {
        if self.den.is_one() {
            format_apoly(&self.num, k)
        } else {
            format!("({})/({})", format_apoly(&self.num, k), format_apoly(&self.den, k))
        }
    }

    /// Parses `a` or `a/b` where both sides are polynomial expressions.
    pub fn parse(s: &str, k: &FqContext) -> Result<Rational> {
        let mut depth = 0i32;
        let mut split = None;
        for (i, c) in s.char_indices() {
            match c {
                '(' => depth += 1,
                ')' => depth -= 1,
                '/' if depth == 0 => {
                    if split.is_some() {
                        return Err(Error::Parse { offset: i, message: "more than one '/'".into() });
                    }
                    split = Some(i);
                }
                _ => {}
            }
        }
        match split {
            None => Ok(Rational::from_poly(parse_apoly(s, k)?)),
            Some(i) => {
                let num = parse_apoly(&s[..i], k)?;
                let den = parse_apoly(&s[i + 1..], k).map_err(|e| match e {
                    Error::Parse { offset, message } => Error::Parse { offset: offset + i + 1, message },
                    other => other,
                })?;
                Rational::new(num, den, k)
            }
        }
    }
}

/// `phi_T = T + g_1 tau + ... + g_r tau^r` over `F`.
#[derive(Clone, Debug)]
pub struct GlobalDrinfeldModule {
    base: Arc<FqContext>,
    coeffs: Vec<Rational>,
}

impl GlobalDrinfeldModule {
    /// `coeffs` are `g_1, ..., g_r`.
    pub fn new(base: Arc<FqContext>, coeffs: Vec<Rational>) -> Result<GlobalDrinfeldModule> {
        match coeffs.last() {
            None => return Err(Error::InvalidInput("rank must be at least 1".into())),
            Some(g) if g.is_zero() => {
                return Err(Error::InvalidInput("leading coefficient g_r must be nonzero".into()))
            }
            _ => {}
        }
        Ok(GlobalDrinfeldModule { base, coeffs })
    }

    /// Convenience constructor from polynomial strings `g_1, ..., g_r`.
    pub fn from_strs(base: Arc<FqContext>, coeffs: &[&str]) -> Result<GlobalDrinfeldModule> {
        let g = coeffs.iter().map(|s| Rational::parse(s, &base)).collect::<Result<Vec<_>>>()?;
        GlobalDrinfeldModule::new(base, g)
    }

    pub fn base(&self) -> &Arc<FqContext> {
        &self.base
    }

    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// `ord_p(g_i) >= 0` for all `i` and `ord_p(g_r) = 0`.
    pub fn has_good_reduction(&self, prime: &APoly) -> bool {
        let k = &*self.base;
        let r = self.rank();
        self.coeffs.iter().enumerate().all(|(i, g)| match g.valuation(prime, k) {
            None => i + 1 < r,
            Some(v) if i + 1 == r => v == 0,
            Some(v) => v >= 0,
        })
    }

    pub fn reduce(&self, ctx: &Arc<ResidueContext>) -> Result<ReducedDrinfeldModule> {
        let k = &*self.base;
        if *ctx.base() != *k {
            return Err(Error::ContextMismatch);
        }
        if !self.has_good_reduction(ctx.prime()) {
            return Err(Error::BadReduction(format_apoly(ctx.prime(), k)));
        }
        let g = self
            .coeffs
            .iter()
            .map(|c| {
                let inv = c.den.inv_mod(ctx.prime(), k).expect("integral at p");
                ctx.residue_of(&c.num.mul(&inv, k))
            })
            .collect();
        ReducedDrinfeldModule::new(ctx.clone(), g)
    }

    /// Reduces at `prime`, building the residue field first.
    pub fn reduce_at(&self, prime: &APoly) -> Result<ReducedDrinfeldModule> {
        let ctx = Arc::new(ResidueContext::new(self.base.clone(), prime)?);
        self.reduce(&ctx)
    }

    /// Coefficients of `phi_a` over `F`: entry `i` multiplies `tau^i`.
    pub fn phi_of(&self, a: &APoly) -> Vec<Rational> {
        let k = &*self.base;
        let mut phi_t = vec![Rational::from_poly(APoly::t())];
        phi_t.extend(self.coeffs.iter().cloned());
        let mut acc: Vec<Rational> = vec![Rational::from_poly(APoly::zero())];
        // Horner: acc = acc * phi_T + a_i
        for &c in a.coeffs().iter().rev() {
            let mut next = vec![Rational::from_poly(APoly::zero()); acc.len() + phi_t.len() - 1];
            for (i, x) in acc.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let mut tw = phi_t.clone();
                for _ in 0..i {
                    tw = tw.iter().map(|y| y.frobenius(k)).collect();
                }
                for (j, y) in tw.iter().enumerate() {
                    next[i + j] = next[i + j].add(&x.mul(y, k), k);
                }
            }
            next[0] = next[0].add(&Rational::from_poly(APoly::constant(c)), k);
            while next.len() > 1 && next.last().unwrap().is_zero() {
                next.pop();
            }
            acc = next;
        }
        acc
    }

    /// `phi_a(x)` over `F` as text.
    pub fn format_torsion_polynomial(&self, a: &APoly) -> String {
        let k = &*self.base;
        let terms: Vec<String> = self.phi_of(a).iter().map(|c| c.format(k)).collect();
        format_additive(&terms, k.size())
    }
}

fn format_additive(coeffs: &[String], q: u32) -> String {
    let mut terms = Vec::new();
    for (i, c) in coeffs.iter().enumerate() {
        if c == "0" {
            continue;
        }
        let x = if i == 0 { "x".to_string() } else { format!("x^{}", (q as u128).pow(i as u32)) };
        let c = if c == "1" {
            String::new()
        } else if c.contains(' ') && !c.starts_with('(') {
            format!("({c})")
        } else {
            c.clone()
        };
        terms.push(format!("{c}{x}"));
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// A Drinfeld module over `F_p = A/p`, `gamma(T) = theta`.
pub struct ReducedDrinfeldModule {
    ctx: Arc<ResidueContext>,
    phi_t: SkewPoly,
    /// `ladder[k] = phi_{T^k}`, grown on demand.
    ladder: RwLock<Vec<Arc<SkewPoly>>>,
}

impl Clone for ReducedDrinfeldModule {
    fn clone(&self) -> Self {
        let ladder = self.ladder.read().unwrap().clone();
        ReducedDrinfeldModule { ctx: self.ctx.clone(), phi_t: self.phi_t.clone(), ladder: RwLock::new(ladder) }
    }
}

impl std::fmt::Debug for ReducedDrinfeldModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ReducedDrinfeldModule({})", self.phi_t)
    }
}

impl ReducedDrinfeldModule {
    /// `g` holds `g_1, ..., g_r` in `A/p`; `g_r` must be nonzero.
    pub fn new(ctx: Arc<ResidueContext>, g: Vec<ResidueElement>) -> Result<ReducedDrinfeldModule> {
        if g.last().is_none_or(|x| x.is_zero()) {
            return Err(Error::InvalidInput("reduced module needs g_r != 0".into()));
        }
        let mut coeffs = vec![ctx.theta()];
        coeffs.extend(g);
        let phi_t = SkewPoly::new(ctx.clone(), coeffs);
        let one = Arc::new(SkewPoly::one(&ctx));
        let ladder = RwLock::new(vec![one, Arc::new(phi_t.clone())]);
        Ok(ReducedDrinfeldModule { ctx, phi_t, ladder })
    }

    pub fn ctx(&self) -> &Arc<ResidueContext> {
        &self.ctx
    }

    pub fn base(&self) -> &FqContext {
        self.ctx.base()
    }

    pub fn rank(&self) -> usize {
        self.phi_t.degree().unwrap()
    }

    /// `d = deg p`.
    pub fn d(&self) -> usize {
        self.ctx.degree()
    }

    pub fn phi_t(&self) -> &SkewPoly {
        &self.phi_t
    }

    /// `g_i` for `1 <= i <= r`.
    pub fn g(&self, i: usize) -> ResidueElement {
        self.phi_t.coeff(i)
    }

    /// `phi_{T^k}` from the memoized ladder.
    pub fn phi_t_pow(&self, k: usize) -> Arc<SkewPoly> {
        if let Some(x) = self.ladder.read().unwrap().get(k) {
            return x.clone();
        }
        let mut ladder = self.ladder.write().unwrap();
        while ladder.len() <= k {
            let next = self.phi_t.mul(ladder.last().unwrap());
            ladder.push(Arc::new(next));
        }
        ladder[k].clone()
    }

    /// `phi_a = sum a_k phi_{T^k}`.
    pub fn phi_of(&self, a: &APoly) -> SkewPoly {
        let Some(n) = a.degree() else {
            return SkewPoly::zero(&self.ctx);
        };
        self.phi_t_pow(n);
        let ladder = self.ladder.read().unwrap();
        let ctx = &self.ctx;
        let mut acc = vec![ctx.zero(); n * self.rank() + 1];
        for (kk, &c) in a.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (slot, x) in acc.iter_mut().zip(ladder[kk].coeffs()) {
                *slot = ctx.add(slot, &ctx.scale(x, c));
            }
        }
        SkewPoly::new(ctx.clone(), acc)
    }

    /// `eps = (-1)^r (-1)^{d(r+1)} N(g_r)^{-1}`.
    pub fn epsilon(&self) -> Fq {
        let k = self.base();
        let r = self.rank();
        let d = self.d();
        let norm = self.ctx.norm_to_fq(&self.g(r));
        let inv = k.inv(norm).expect("g_r is nonzero");
        if (r + d * (r + 1)) % 2 == 1 {
            k.neg(inv)
        } else {
            inv
        }
    }

    /// The additive polynomial `phi_a(x)`; its roots form `phi[a]`.
    pub fn torsion_polynomial(&self, a: &APoly) -> SkewPoly {
        self.phi_of(a)
    }

    /// `phi_a(x)` as text with coefficients lifted to `A`, e.g.
    /// `(T + 2)x + Tx^3 + x^27`.
    pub fn format_torsion_polynomial(&self, a: &APoly) -> String {
        let k = self.base();
        let terms: Vec<String> =
            self.phi_of(a).coeffs().iter().map(|c| format_in(c.coords(), k, "T")).collect();
        format_additive(&terms, k.size())
    }
}

/// JSON description of a global module.
///
/// ```json
/// {"p": 3, "n": 1, "phi_T": ["T", "T", "1"]}
/// ```
/// `phi_T` lists the coefficients of `tau^0, ..., tau^r`; the first must be
/// `T`. `fq_modulus` is a polynomial in the generator label over `F_p`
/// (default: least primitive polynomial, `w^2 + w + 1` for `F_4`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DrinfeldConfig {
    pub p: u32,
    #[serde(default = "one")]
    pub n: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fq_modulus: Option<String>,
    #[serde(default = "default_label")]
    pub generator: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(rename = "phi_T")]
    pub phi_t: Vec<String>,
}

fn one() -> u32 {
    1
}

fn default_label() -> String {
    "w".into()
}

impl DrinfeldConfig {
    pub fn field(&self) -> Result<Arc<FqContext>> {
        let modulus = match &self.fq_modulus {
            None => None,
            Some(s) => {
                let fp = FqContext::prime(self.p)?;
                let m = parse_in(s, &fp, &self.generator)?;
                Some(m.coeffs().iter().map(|c| c.raw()).collect())
            }
        };
        Ok(Arc::new(FqContext::new(self.p, self.n, modulus, &self.generator)?))
    }

    pub fn build(&self) -> Result<GlobalDrinfeldModule> {
        let k = self.field()?;
        let Some((head, rest)) = self.phi_t.split_first() else {
            return Err(Error::InvalidInput("phi_T is empty".into()));
        };
        if parse_apoly(head, &k)? != APoly::t() {
            return Err(Error::InvalidInput(format!("constant term of phi_T must be T, got '{head}'")));
        }
        if let Some(r) = self.rank {
            if r != rest.len() {
                return Err(Error::InvalidInput(format!(
                    "rank {r} does not match {} coefficients",
                    rest.len()
                )));
            }
        }
        let g = rest.iter().map(|s| Rational::parse(s, &k)).collect::<Result<Vec<_>>>()?;
        GlobalDrinfeldModule::new(k, g)
    }

    pub fn from_json(s: &str) -> Result<DrinfeldConfig> {
        Ok(serde_json::from_str(s)?)
    }
}
