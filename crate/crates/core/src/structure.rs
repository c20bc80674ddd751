//! The `A`-module structure `F_p = A/d_1 x ... x A/d_r` of a Drinfeld module
//! over `F_p`.

use std::fmt;

use serde::Serialize;

use crate::charpoly::FrobeniusData;
use crate::drinfeld::ReducedDrinfeldModule;
use crate::error::{Error, Result};
use crate::fq::{factorize, format_apoly, solve_affine_system, APoly, Fq, FqMatrix};
use crate::skew::SkewPoly;

/// The linear system `x M_k = N_k`, `k < d`, whose solutions `x` are the
/// monic annihilators `x_0 + ... + x_{d-1} T^{d-1} + T^d`.
pub fn exponent_system(phi: &ReducedDrinfeldModule) -> (Vec<FqMatrix>, Vec<Vec<Fq>>) {
    let ctx = phi.ctx();
    let k = ctx.base();
    let d = phi.d();
    // phi_T restricted to F_p
    let act = SkewPoly::new(ctx.clone(), phi.phi_t().fold_on_residue_field());
    let theta = ctx.theta();
    let mut ms = Vec::with_capacity(d);
    let mut ns = Vec::with_capacity(d);
    let mut basis = ctx.one();
    for _ in 0..d {
        let mut m = FqMatrix::zeros(d, d);
        let mut cur = basis.clone();
        for i in 0..d {
            for (j, &c) in cur.coords().iter().enumerate() {
                m.set(i, j, c);
            }
            cur = act.apply_to(&**ctx, &cur);
        }
        ms.push(m);
        ns.push(cur.coords().iter().map(|&c| k.neg(c)).collect());
        basis = ctx.mul(&basis, &theta);
    }
    (ms, ns)
}

fn f_of(y: &[Fq]) -> APoly {
    let mut c = y.to_vec();
    c.push(Fq::ONE);
    APoly::new(c)
}

/// The exponent `d_r`: the monic generator of the annihilator of `F_p`.
pub fn exponent(phi: &ReducedDrinfeldModule) -> Result<APoly> {
    let k = phi.base();
    let (ms, ns) = exponent_system(phi);
    let sol = solve_affine_system(&ms, &ns, k)?
        .ok_or_else(|| Error::Invariant("annihilator system is inconsistent".into()))?;
    let mut g = f_of(&sol.particular);
    for b in &sol.kernel {
        let y: Vec<Fq> = sol.particular.iter().zip(b).map(|(&x, &v)| k.add(x, v)).collect();
        g = g.gcd(&f_of(&y), k);
    }
    Ok(g)
}

/// Which piece of information fixed a divisor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// `d_r` is the exponent.
    Exponent,
    /// `d_1` from the splitting of `phi_{q^e}`.
    FirstDivisor,
    /// Forced by `prod d_i = chi` together with the other constraints.
    ChiConstraint,
    /// Resolved by kernel dimensions of `phi_{q^k}` on `F_p`.
    KernelDimension,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rule::Exponent => "exponent",
            Rule::FirstDivisor => "first_divisor",
            Rule::ChiConstraint => "chi_constraint",
            Rule::KernelDimension => "kernel_dimension",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationStep {
    /// 1-based index of the divisor.
    pub index: usize,
    pub rule: Rule,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorProfile {
    /// `d_1 | d_2 | ... | d_r`, all monic.
    pub divisors: Vec<APoly>,
    pub exponent: APoly,
    pub chi: APoly,
    pub derivation: Vec<DerivationStep>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DivisorsJson {
    pub prime: String,
    pub exponent: String,
    pub chi: String,
    pub divisors: Vec<String>,
    pub derivation: Vec<String>,
}

impl DivisorProfile {
    pub fn to_json(&self, prime: &APoly, k: &crate::fq::FqContext) -> DivisorsJson {
        DivisorsJson {
            prime: format_apoly(prime, k),
            exponent: format_apoly(&self.exponent, k),
            chi: format_apoly(&self.chi, k),
            divisors: self.divisors.iter().map(|d| format_apoly(d, k)).collect(),
            derivation: self
                .derivation
                .iter()
                .map(|s| format!("d_{}: {} ({})", s.index, s.rule, s.detail))
                .collect(),
        }
    }
}

/// `d_1`: the largest monic `f` prime to `p` with `phi[f]` inside `F_p`.
/// Only primes of `chi` need testing, with `q^{e r} | chi` and `q^e | d_r`.
pub fn first_divisor(phi: &ReducedDrinfeldModule, chi: &APoly, exponent: &APoly) -> Result<APoly> {
    let k = phi.base();
    let r = phi.rank();
    let prime = phi.ctx().prime();
    let mut d1 = APoly::one();
    for (q, n) in factorize(chi, k)?.factors {
        if &q == prime {
            continue;
        }
        let emax = (n / r).min(exponent.valuation(&q, k).unwrap_or(0));
        let mut qe = APoly::one();
        for _ in 0..emax {
            let next = qe.mul(&q, k);
            if !phi.phi_of(&next).roots_in_residue_field() {
                break;
            }
            qe = next;
        }
        d1 = d1.mul(&qe, k);
    }
    Ok(d1)
}

/// `dim_{F_q}` of the kernel of `phi_f` on `F_p`.
pub fn kernel_dimension(phi: &ReducedDrinfeldModule, f: &APoly) -> usize {
    phi.phi_of(f).kernel_dimension()
}

/// Nondecreasing exponent chains `e_1 <= ... <= e_r` with fixed ends and sum.
fn chains(r: usize, first: usize, last: usize, total: usize) -> Vec<Vec<usize>> {
    fn rec(pos: usize, r: usize, lo: usize, last: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if pos == r - 1 {
            if left == last && last >= lo {
                cur.push(last);
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        for e in lo..=last {
            if e > left {
                break;
            }
            cur.push(e);
            rec(pos + 1, r, e, last, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if r == 1 {
        if first == last && last == total {
            out.push(vec![last]);
        }
        return out;
    }
    if total < first {
        return out;
    }
    let mut cur = vec![first];
    rec(1, r, first, last, total - first, &mut cur, &mut out);
    out
}

/// Computes `(d_1, ..., d_r)` from the exponent, `chi` and `d_1`, probing
/// kernel dimensions only when these leave several chains.
pub fn elementary_divisors(phi: &ReducedDrinfeldModule, fd: &FrobeniusData) -> Result<DivisorProfile> {
    let k = phi.base();
    let r = phi.rank();
    let chi = fd.euler_characteristic(k);
    let exp = exponent(phi)?;
    if !exp.divides(&chi, k) {
        return Err(Error::Invariant("exponent does not divide chi".into()));
    }
    let mut derivation = vec![DerivationStep {
        index: r,
        rule: Rule::Exponent,
        detail: format!("annihilator system gives {}", format_apoly(&exp, k)),
    }];
    if r == 1 {
        return Ok(DivisorProfile { divisors: vec![exp.clone()], exponent: exp, chi, derivation });
    }
    let d1 = first_divisor(phi, &chi, &exp)?;
    derivation.push(DerivationStep {
        index: 1,
        rule: Rule::FirstDivisor,
        detail: format!("largest split torsion {}", format_apoly(&d1, k)),
    });

    let mut divisors = vec![APoly::one(); r];
    let mut middle_rule = Rule::ChiConstraint;
    let mut notes = Vec::new();
    for (q, n) in factorize(&chi, k)?.factors {
        let e_first = d1.valuation(&q, k).unwrap();
        let e_last = exp.valuation(&q, k).unwrap();
        let mut cands = chains(r, e_first, e_last, n);
        if cands.is_empty() {
            return Err(Error::Invariant(format!(
                "no divisor chain for {} with ends {e_first}, {e_last} and total {n}",
                format_apoly(&q, k)
            )));
        }
        let deg_q = q.degree().unwrap();
        let mut probe = e_first + 1;
        while cands.len() > 1 && probe < e_last {
            let dim = kernel_dimension(phi, &q.pow(probe as u64, k));
            notes.push(format!("dim ker phi_({})^{probe} = {dim}", format_apoly(&q, k)));
            cands.retain(|c| deg_q * c.iter().map(|&e| e.min(probe)).sum::<usize>() == dim);
            middle_rule = Rule::KernelDimension;
            probe += 1;
        }
        if cands.len() != 1 {
            return Err(Error::Invariant(format!(
                "{} divisor chains remain for {}",
                cands.len(),
                format_apoly(&q, k)
            )));
        }
        for (slot, &e) in divisors.iter_mut().zip(&cands[0]) {
            *slot = slot.mul(&q.pow(e as u64, k), k);
        }
    }
    let detail = if notes.is_empty() {
        "product of the divisors equals chi".to_string()
    } else {
        notes.join("; ")
    };
    for i in 2..r {
        derivation.push(DerivationStep { index: i, rule: middle_rule, detail: detail.clone() });
    }
    derivation.sort_by_key(|s| s.index);
    Ok(DivisorProfile { divisors, exponent: exp, chi, derivation })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_enumeration() {
        assert_eq!(chains(3, 0, 3, 5), vec![vec![0, 2, 3]]);
        assert_eq!(chains(4, 0, 3, 5).len(), 2);
        assert_eq!(chains(2, 1, 1, 2), vec![vec![1, 1]]);
        assert!(chains(2, 1, 1, 3).is_empty());
        assert_eq!(chains(1, 2, 2, 2), vec![vec![2]]);
    }
}
