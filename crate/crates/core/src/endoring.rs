//! Rank two: the endomorphism ring `E = A[x]` of a Drinfeld module over
//! `F_p`, found by dividing `phi_m + n pi` on the right by `phi_q` for
//! primes `q | c_pi` as long as the quotient stays in `F_p{tau}`.

use crate::charpoly::FrobeniusData;
use crate::drinfeld::ReducedDrinfeldModule;
use crate::error::{Error, Result};
use crate::fq::{factorize, APoly, Fq};
use crate::quadorder::MaximalOrderData;
use crate::skew::SkewPoly;

/// Order in which the primes of the remaining index are tried.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DivisorOrder {
    /// By degree, then lexicographically.
    #[default]
    Ascending,
    Descending,
}

#[derive(Clone, Debug)]
pub struct EndoRingData {
    pub c_pi: APoly,
    pub c_phi: APoly,
    /// `c_pi / c_phi`, the index of `A[pi]` in `E`.
    pub b: APoly,
    /// `x phi_b = phi_m + n tau^d`, and `E = A[x]`.
    pub generator: SkewPoly,
    /// Primes removed from `c_pi`, in order.
    pub chain: Vec<APoly>,
}

/// `phi_m + n tau^d`.
pub fn frobenius_relation(phi: &ReducedDrinfeldModule, m: &APoly, n: Fq) -> SkewPoly {
    let d = phi.d();
    let pi = SkewPoly::tau_pow(phi.ctx(), d).scale(n);
    phi.phi_of(m).add(&pi)
}

/// The unique `x` with `x phi_c = phi_m + n tau^d`, if there is one.
pub fn solve_central_equation(phi: &ReducedDrinfeldModule, c: &APoly, m: &APoly, n: Fq) -> Option<SkewPoly> {
    let rhs = frobenius_relation(phi, m, n);
    let phi_c = phi.phi_of(c);
    if rhs.degree()? < phi_c.degree()? {
        return None;
    }
    match rhs.right_divrem(&phi_c) {
        Ok((x, r)) if r.is_zero() => Some(x),
        _ => None,
    }
}

fn sorted_primes(f: &APoly, k: &crate::fq::FqContext, order: DivisorOrder) -> Result<Vec<APoly>> {
    let mut ps: Vec<APoly> = factorize(f, k)?.primes().cloned().collect();
    ps.sort_by(|a, b| a.cmp_deglex(b));
    if order == DivisorOrder::Descending {
        ps.reverse();
    }
    Ok(ps)
}

/// Computes `c_phi` and `x` with `E = A[x]`, starting from `c_pi alpha = m + n pi`.
pub fn endomorphism_index(
    phi: &ReducedDrinfeldModule,
    fd: &FrobeniusData,
    mo: &MaximalOrderData,
) -> Result<EndoRingData> {
    endomorphism_index_ordered(phi, fd, mo, DivisorOrder::Ascending)
}

pub fn endomorphism_index_ordered(
    phi: &ReducedDrinfeldModule,
    fd: &FrobeniusData,
    mo: &MaximalOrderData,
    order: DivisorOrder,
) -> Result<EndoRingData> {
    if fd.rank != 2 || phi.rank() != 2 {
        return Err(Error::Precondition("endomorphism ring needs rank 2".into()));
    }
    let k = phi.base();
    let phi_t = phi.phi_t();
    let mut x = frobenius_relation(phi, &mo.m, mo.n);
    let mut b = APoly::one();
    let mut c1 = mo.c_pi.clone();
    let mut chain = Vec::new();
    'descent: loop {
        for q in sorted_primes(&c1, k, order)? {
            let (y, r) = x.right_divrem(&phi.phi_of(&q))?;
            if !r.is_zero() {
                continue;
            }
            if !y.commutes_with(phi_t) {
                return Err(Error::Invariant("exact quotient is not an endomorphism".into()));
            }
            x = y;
            b = b.mul(&q, k);
            c1 = c1.div_exact(&q, k)?;
            chain.push(q);
            continue 'descent;
        }
        break;
    }
    if !x.commutes_with(phi_t) {
        return Err(Error::Invariant("generator does not commute with phi_T".into()));
    }
    Ok(EndoRingData { c_pi: mo.c_pi.clone(), c_phi: c1, b, generator: x, chain })
}

impl EndoRingData {
    /// `x phi_b = phi_m + n tau^d`.
    pub fn relation_holds(&self, phi: &ReducedDrinfeldModule, mo: &MaximalOrderData) -> bool {
        self.generator.mul(&phi.phi_of(&self.b)) == frobenius_relation(phi, &mo.m, mo.n)
    }
}
