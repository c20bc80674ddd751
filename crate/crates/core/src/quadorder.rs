//! Rank two: the maximal order `O_K = A[alpha]` of `K = F(pi)`, the index
//! `c_pi` of `A[pi]`, and the relation `c_pi alpha = m + n pi`.

use serde::Serialize;

use crate::charpoly::FrobeniusData;
use crate::error::{Error, Result};
use crate::fq::{factorize, format_apoly, squarefree_decompose, APoly, Fq, FqContext};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Case {
    /// `q` odd.
    Odd,
    /// `q` even and `a = 0`: `K/F` inseparable.
    EvenInsep,
    /// `q` even and `a != 0`: an Artin-Schreier extension.
    EvenSep,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CaseData {
    Odd {
        delta_pi: APoly,
        delta_max: APoly,
    },
    /// `eps p = s^2 + T c^2`.
    EvenInsep { s: APoly, c: APoly },
    /// `f(X) = X^2 + unit D X + unit^2 q_1...q_s n`.
    EvenSep {
        different: APoly,
        ramified: Vec<(APoly, usize)>,
        numerator: APoly,
        unit: Fq,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaximalOrderData {
    pub data: CaseData,
    /// `f(X) = X^2 + f1 X + f0`, the minimal polynomial of `alpha`.
    pub f1: APoly,
    pub f0: APoly,
    pub c_pi: APoly,
    pub m: APoly,
    pub n: Fq,
}

impl MaximalOrderData {
    pub fn case(&self) -> Case {
        match self.data {
            CaseData::Odd { .. } => Case::Odd,
            CaseData::EvenInsep { .. } => Case::EvenInsep,
            CaseData::EvenSep { .. } => Case::EvenSep,
        }
    }

    /// The last table column: `Delta_max`, `sqrt(T)`, or the different.
    pub fn last_column(&self, k: &FqContext) -> String {
        match &self.data {
            CaseData::Odd { delta_max, .. } => format_apoly(delta_max, k),
            CaseData::EvenInsep { .. } => "sqrt(T)".into(),
            CaseData::EvenSep { different, .. } => format_apoly(different, k),
        }
    }

    /// Checks that `m + n pi` has minimal polynomial `X^2 + c_pi f1 X + c_pi^2 f0`,
    /// using `pi + pi' = a` and `pi pi' = eps p`.
    pub fn relation_holds(&self, fd: &FrobeniusData, k: &FqContext) -> bool {
        let a = fd.trace(k);
        let norm = fd.coeff(2);
        let n = APoly::constant(self.n);
        let tr = self.m.scale(k.from_int(2), k).add(&a.mul(&n, k), k);
        let nm = self
            .m
            .mul(&self.m, k)
            .add(&self.m.mul(&a, k).mul(&n, k), k)
            .add(&norm.mul(&n, k).mul(&n, k), k);
        tr.neg(k) == self.c_pi.mul(&self.f1, k) && nm == self.c_pi.mul(&self.c_pi, k).mul(&self.f0, k)
    }
}

/// Dispatches on the characteristic and on `a`.
pub fn maximal_order(fd: &FrobeniusData, k: &FqContext) -> Result<MaximalOrderData> {
    if fd.rank != 2 {
        return Err(Error::Precondition(format!("maximal order needs rank 2, got {}", fd.rank)));
    }
    let out = if k.characteristic() != 2 {
        maximal_order_odd(fd, k)?
    } else if fd.trace(k).is_zero() {
        maximal_order_even_insep(fd, k)?
    } else {
        maximal_order_even_sep(fd, k)?
    };
    if !out.relation_holds(fd, k) {
        return Err(Error::Invariant("c_pi alpha = m + n pi fails".into()));
    }
    Ok(out)
}

/// `Delta = a^2 - 4 eps p = c^2 Delta_max`, `f = X^2 - Delta_max`, `2 pi = a + c alpha`.
pub fn maximal_order_odd(fd: &FrobeniusData, k: &FqContext) -> Result<MaximalOrderData> {
    if k.characteristic() == 2 {
        return Err(Error::Precondition("odd case called with q even".into()));
    }
    let two = k.from_int(2);
    assert!(!two.is_zero());
    let a = fd.trace(k);
    let eps_p = fd.coeff(2);
    let delta = a.mul(&a, k).sub(&eps_p.scale(k.from_int(4), k), k);
    let (c, delta_max) = squarefree_decompose(&delta, k)?;
    // K/F is imaginary: Delta has odd degree or a non-square leading coefficient
    let deg = delta.degree().unwrap();
    if deg % 2 == 0 && k.is_square(delta.lead()) {
        return Err(Error::Invariant("discriminant is real".into()));
    }
    Ok(MaximalOrderData {
        f1: APoly::zero(),
        f0: delta_max.neg(k),
        c_pi: c,
        m: a.neg(k),
        n: two,
        data: CaseData::Odd { delta_pi: delta, delta_max },
    })
}

/// Coefficient-wise square root of a polynomial in even powers of `T`.
fn sqrt_even_part(g: &APoly, k: &FqContext) -> APoly {
    APoly::new(g.coeffs().iter().step_by(2).map(|&c| k.sqrt_char2(c)).collect())
}

/// `eps p = g_e + g_o = s^2 + T c^2`; `O_K = A[sqrt T]` and `pi + s = c sqrt T`.
pub fn maximal_order_even_insep(fd: &FrobeniusData, k: &FqContext) -> Result<MaximalOrderData> {
    if k.characteristic() != 2 || !fd.trace(k).is_zero() {
        return Err(Error::Precondition("inseparable case needs q even and a = 0".into()));
    }
    let g = fd.coeff(2);
    let s = sqrt_even_part(g, k);
    let odd = APoly::new(g.coeffs().iter().skip(1).copied().collect());
    let c = sqrt_even_part(&odd, k);
    if s.mul(&s, k).add(&c.mul(&c, k).shift(1), k) != *g {
        return Err(Error::Invariant("even/odd split does not recombine".into()));
    }
    let lam = c.lead();
    let lam_inv = k.inv(lam).ok_or(Error::Invariant("c = 0".into()))?;
    Ok(MaximalOrderData {
        f1: APoly::zero(),
        f0: APoly::t(),
        c_pi: c.monic(k),
        m: s.scale(lam_inv, k),
        n: lam_inv,
        data: CaseData::EvenInsep { s, c },
    })
}

/// Square root in `A/q` for `q` even: `x -> x^{2^{deg(q) log2(q) - 1}}`.
fn sqrt_mod(x: &APoly, prime: &APoly, k: &FqContext) -> APoly {
    let bits = prime.degree().unwrap() * k.degree() as usize;
    let mut y = x.rem(prime, k).unwrap();
    for _ in 1..bits {
        y = y.mulmod(&y, prime, k);
    }
    y
}

/// One Artin-Schreier reduction `X^2 + X = num/den` with `den` monic and
/// coprime to `num`, until every prime of `den` has odd multiplicity.
/// Returns `(num, den)`.
pub fn artin_schreier_reduce(num: &APoly, den: &APoly, k: &FqContext) -> Result<(APoly, APoly)> {
    let mut num = num.clone();
    let mut den = den.clone();
    loop {
        let fac = factorize(&den, k)?;
        let Some((q, mult)) = fac.factors.iter().find(|(_, e)| e % 2 == 0).cloned() else {
            return Ok((num, den));
        };
        let e = mult / 2;
        let qe = q.pow(e as u64, k);
        let m1 = den.div_exact(&qe.mul(&qe, k), k)?;
        // b^2 = num / m1 mod q
        let inv = m1.inv_mod(&q, k).ok_or_else(|| Error::Invariant("m1 not prime to q".into()))?;
        let b = sqrt_mod(&num.mulmod(&inv, &q, k), &q, k);
        let new_num = num.add(&b.mul(&b, k).mul(&m1, k), k).add(&b.mul(&qe, k).mul(&m1, k), k);
        if !q.divides(&new_num, k) {
            return Err(Error::Invariant("reduction step did not gain a factor of q".into()));
        }
        let g = new_num.gcd(&den, k);
        let before = den.degree();
        num = new_num.div_exact(&g, k)?;
        den = den.div_exact(&g, k)?;
        if den.degree() >= before {
            return Err(Error::Invariant("Artin-Schreier reduction did not terminate".into()));
        }
    }
}

/// `(a) = (D_K c_pi)`; `D_K` from the Artin-Schreier form of `X^2 + X = eps p / a^2`.
pub fn maximal_order_even_sep(fd: &FrobeniusData, k: &FqContext) -> Result<MaximalOrderData> {
    let a = fd.trace(k);
    if k.characteristic() != 2 || a.is_zero() {
        return Err(Error::Precondition("separable case needs q even and a != 0".into()));
    }
    let eps_p = fd.coeff(2).clone();
    let unit = a.lead();
    let unit_inv = k.inv(unit).unwrap();
    let a_monic = a.monic(k);
    let den0 = a_monic.mul(&a_monic, k);
    let num0 = eps_p.scale(k.mul(unit_inv, unit_inv), k);
    let g = num0.gcd(&den0, k);
    let (num, den) = artin_schreier_reduce(&num0.div_exact(&g, k)?, &den0.div_exact(&g, k)?, k)?;

    let ramified: Vec<(APoly, usize)> =
        factorize(&den, k)?.factors.into_iter().map(|(q, m)| (q, m.div_ceil(2))).collect();
    let different = ramified.iter().fold(APoly::one(), |acc, (q, e)| acc.mul(&q.pow(*e as u64, k), k));
    let rad = ramified.iter().fold(APoly::one(), |acc, (q, _)| acc.mul(q, k));
    let (c_pi, rem) = a_monic.divrem(&different, k)?;
    if !rem.is_zero() {
        return Err(Error::Invariant("different does not divide a".into()));
    }
    let f1 = different.scale(unit, k);
    let f0 = rad.mul(&num, k).scale(k.mul(unit, unit), k);
    let rhs = c_pi.mul(&c_pi, k).mul(&f0, k).add(&eps_p, k);
    let m = solve_artin_schreier_m(&a, &rhs, k)?;
    Ok(MaximalOrderData {
        f1,
        f0,
        c_pi,
        m,
        n: Fq::ONE,
        data: CaseData::EvenSep { different, ramified, numerator: num, unit },
    })
}

/// Least `z` in `F_q` with `z^2 + z = c`, if any.
fn solve_z2_plus_z(c: Fq, k: &FqContext) -> Option<Fq> {
    k.elements().find(|&z| k.add(k.mul(z, z), z) == c)
}

/// Solves `m^2 + a m = rhs` in `A` (characteristic 2) coefficient by
/// coefficient. With `v = ord_T(a)`: `m_0, ..., m_{v-1}` come from square
/// roots, `m_v` from a quadratic `m_v^2 + a_v m_v = c`, and every later
/// coefficient from a linear equation. The smaller root of the quadratic
/// is taken; the other one gives `m + a`.
pub fn solve_artin_schreier_m(a: &APoly, rhs: &APoly, k: &FqContext) -> Result<APoly> {
    let v = a.coeffs().iter().position(|c| !c.is_zero()).ok_or(Error::Precondition("a = 0".into()))?;
    let top = a.degree().unwrap().max(rhs.deg_or_zero().div_ceil(2));
    let av_inv = k.inv(a.coeff(v)).unwrap();
    let mut m = vec![Fq::ZERO; top + 1];
    // coefficient j of m^2 + a m, ignoring the unknown m_i
    let partial = |m: &[Fq], j: usize, skip: usize| -> Fq {
        let mut acc = Fq::ZERO;
        if j % 2 == 0 && j / 2 != skip && j / 2 < m.len() {
            acc = k.mul(m[j / 2], m[j / 2]);
        }
        for (l, &al) in a.coeffs().iter().enumerate() {
            if l > j || al.is_zero() || j - l == skip || j - l >= m.len() {
                continue;
            }
            acc = k.add(acc, k.mul(al, m[j - l]));
        }
        acc
    };
    for i in 0..v.min(top + 1) {
        // equation 2i: m_i^2 = rhs_{2i} + (terms in m_0..m_{i-1})
        let c = k.sub(rhs.coeff(2 * i), partial(&m, 2 * i, i));
        m[i] = k.sqrt_char2(c);
    }
    if v <= top {
        // equation 2v: m_v^2 + a_v m_v = c; put m_v = a_v z
        let c = k.sub(rhs.coeff(2 * v), partial(&m, 2 * v, v));
        let z = solve_z2_plus_z(k.mul(c, k.mul(av_inv, av_inv)), k)
            .ok_or_else(|| Error::Invariant("no root for the leading quadratic".into()))?;
        m[v] = k.mul(z, a.coeff(v));
        for i in v + 1..=top {
            // equation i + v is linear in m_i since i > (i + v)/2
            let c = k.sub(rhs.coeff(i + v), partial(&m, i + v, i));
            m[i] = k.mul(c, av_inv);
        }
    }
    let m = APoly::new(m);
    if m.mul(&m, k).add(&a.mul(&m, k), k) != *rhs {
        return Err(Error::Invariant("m^2 + a m = c_pi^2 b + eps p has no solution".into()));
    }
    Ok(m)
}
