//! Characteristic polynomial `P(X) = X^r + a_1 X^{r-1} + ... + a_r` of the
//! Frobenius `pi = tau^d` of a Drinfeld module over `F_p`.
//!
//! The coefficients are recovered back to front from the identity
//! `tau^{dr} + phi_{a_1} tau^{d(r-1)} + ... + phi_{a_r} = 0`: once
//! `a_i, ..., a_r` are known, the coefficient of `tau^{d(r-i+1)}` in
//! `f_i = phi_{a_i} tau^{d(r-i)} + ... + phi_{a_r}` is `-a_{i-1} mod p`, and
//! the degree bound `deg a_{i-1} <= (i-1)d/r < d` pins down the lift.

use serde::Serialize;

use crate::drinfeld::ReducedDrinfeldModule;
use crate::error::{Error, Result};
use crate::fq::{format_apoly, APoly, Fq, FqContext};
use crate::skew::SkewPoly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusData {
    pub prime: APoly,
    pub d: usize,
    pub rank: usize,
    /// `a_1, ..., a_r`, signs as in `P(X) = X^r + a_1 X^{r-1} + ...`.
    pub a: Vec<APoly>,
    pub epsilon: Fq,
}

impl FrobeniusData {
    /// `a_i` for `1 <= i <= r`.
    pub fn coeff(&self, i: usize) -> &APoly {
        &self.a[i - 1]
    }

    /// Monic generator of `P(1)A`.
    pub fn euler_characteristic(&self, k: &FqContext) -> APoly {
        self.a.iter().fold(APoly::one(), |acc, x| acc.add(x, k)).monic(k)
    }

    /// `a = -a_1`, so that `P(X) = X^2 - aX + eps p` in rank 2.
    pub fn trace(&self, k: &FqContext) -> APoly {
        self.a[0].neg(k)
    }

    /// `P(X)` as text, e.g. `X^3 + (2T + 1)X^2 + (T^3 + T + 2)X + 2T^7 + T^2 + 2`.
    pub fn format(&self, k: &FqContext) -> String {
        let r = self.rank;
        let mut terms = vec![format!("X^{r}")];
        for (i, a) in self.a.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let pow = r - i - 1;
            let c = format_apoly(a, k);
            let x = match pow {
                0 => String::new(),
                1 => "X".into(),
                _ => format!("X^{pow}"),
            };
            terms.push(if pow == 0 {
                c
            } else if a.is_one() {
                x
            } else if c.contains(' ') {
                format!("({c}){x}")
            } else {
                format!("{c}{x}")
            });
        }
        terms.join(" + ")
    }

    pub fn to_json(&self, k: &FqContext) -> CharpolyJson {
        CharpolyJson {
            prime: format_apoly(&self.prime, k),
            rank: self.rank,
            p: self.a.iter().map(|a| format_apoly(a, k)).collect(),
            epsilon: k.format(self.epsilon),
            chi: format_apoly(&self.euler_characteristic(k), k),
            charpoly: self.format(k),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CharpolyJson {
    pub prime: String,
    pub rank: usize,
    #[serde(rename = "P")]
    pub p: Vec<String>,
    pub epsilon: String,
    pub chi: String,
    pub charpoly: String,
}

/// Computes `P(X)` and checks `P(pi) = 0` exactly before returning.
pub fn frobenius_charpoly(phi: &ReducedDrinfeldModule) -> Result<FrobeniusData> {
    let k = phi.base();
    let ctx = phi.ctx();
    let r = phi.rank();
    let d = phi.d();
    let prime = ctx.prime().clone();
    let epsilon = phi.epsilon();
    let mut a = vec![APoly::zero(); r];
    a[r - 1] = prime.scale(epsilon, k);

    // f = f_i, grown one term per step
    let mut f = phi.phi_of(&a[r - 1]);
    for i in (2..=r).rev() {
        let c = f.coeff(d * (r - i + 1));
        let lifted = ctx.lift(&ctx.neg(&c));
        let bound = (i - 1) * d / r;
        if lifted.degree().is_some_and(|deg| deg > bound) {
            return Err(Error::LiftFailure { index: i - 1, degree: lifted.degree().unwrap(), bound });
        }
        a[i - 2] = lifted;
        f = f.add(&phi.phi_of(&a[i - 2]).mul_tau_pow(d * (r - i + 1)));
    }
    let fd = FrobeniusData { prime, d, rank: r, a, epsilon };
    if !frobenius_identity_holds(phi, &fd) {
        return Err(Error::Invariant("P(pi) != 0".into()));
    }
    if r == 2 && has_root_in_a(&fd, k) {
        return Err(Error::Invariant("rank-2 P(X) has a root in A".into()));
    }
    Ok(fd)
}

/// `tau^{dr} + sum phi_{a_i} tau^{d(r-i)} == 0` in `F_p{tau}`.
pub fn frobenius_identity_holds(phi: &ReducedDrinfeldModule, fd: &FrobeniusData) -> bool {
    let d = fd.d;
    let r = fd.rank;
    let mut acc = SkewPoly::tau_pow(phi.ctx(), d * r);
    for (i, ai) in fd.a.iter().enumerate() {
        acc = acc.add(&phi.phi_of(ai).mul_tau_pow(d * (r - i - 1)));
    }
    acc.is_zero()
}

/// Any root in `A` divides `a_2 = eps p`, so only `c` and `c p` need testing.
fn has_root_in_a(fd: &FrobeniusData, k: &FqContext) -> bool {
    let eval = |x: &APoly| {
        x.mul(x, k).add(&fd.a[0].mul(x, k), k).add(&fd.a[1], k).is_zero()
    };
    k.elements().skip(1).any(|c| eval(&APoly::constant(c)) || eval(&fd.prime.scale(c, k)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drinfeld::GlobalDrinfeldModule;
    use crate::fq::parse_apoly;
    use std::sync::Arc;

    fn f3() -> Arc<FqContext> {
        Arc::new(FqContext::prime(3).unwrap())
    }

    #[test]
    fn rank_three_worked_example() {
        let k = f3();
        let phi = GlobalDrinfeldModule::from_strs(k.clone(), &["T^2+1", "T", "1"]).unwrap();
        let p = parse_apoly("T^7 - T^2 + 1", &k).unwrap();
        let fd = frobenius_charpoly(&phi.reduce_at(&p).unwrap()).unwrap();
        assert_eq!(fd.a[0], parse_apoly("-T + 1", &k).unwrap());
        assert_eq!(fd.a[1], parse_apoly("T^3 + T - 1", &k).unwrap());
        assert_eq!(fd.a[2], p.neg(&k));
        assert_eq!(fd.format(&k), "X^3 + (2T + 1)X^2 + (T^3 + T + 2)X + 2T^7 + T^2 + 2");
    }

    #[test]
    fn rank_one_is_trivial() {
        let k = f3();
        let phi = GlobalDrinfeldModule::from_strs(k.clone(), &["T"]).unwrap();
        let p = parse_apoly("T^3 - T + 1", &k).unwrap();
        let fd = frobenius_charpoly(&phi.reduce_at(&p).unwrap()).unwrap();
        assert_eq!(fd.rank, 1);
        assert_eq!(fd.a[0], p.scale(fd.epsilon, &k));
    }

    #[test]
    fn chi_degree_matches_prime() {
        let k = f3();
        let phi = GlobalDrinfeldModule::from_strs(k.clone(), &["T", "1"]).unwrap();
        for p in crate::fq::enumerate_primes(&k, 4) {
            let fd = frobenius_charpoly(&phi.reduce_at(&p).unwrap()).unwrap();
            assert_eq!(fd.euler_characteristic(&k).degree(), Some(4));
        }
    }
}
