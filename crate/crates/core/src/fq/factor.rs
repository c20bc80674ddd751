//! Square-free decomposition, factorization and irreducibility over `F_q`.

use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::field::{prime_factors, Fq, FqContext};
use super::poly::APoly;
use crate::error::{Error, Result};

/// Default seed for the equal-degree splitting.
pub const DEFAULT_SEED: u64 = 0x5eed;

static SEED: AtomicU64 = AtomicU64::new(DEFAULT_SEED);

/// Changes the seed used by [`factorize`] for the rest of the process.
/// Factorizations do not depend on it, only their running time.
pub fn set_factor_seed(seed: u64) {
    SEED.store(seed, AtomicOrdering::Relaxed);
}

/// Square-free factorization of a monic polynomial: pairs `(f_i, i)` with
/// `f = prod f_i^i`, each `f_i` square-free and pairwise coprime. The same
/// multiplicity may appear twice when a `p`-th power part is involved.
pub fn squarefree_factorization(f: &APoly, k: &FqContext) -> Vec<(APoly, usize)> {
    let mut out = Vec::new();
    sff_into(&f.monic(k), 1, k, &mut out);
    out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp_deglex(&b.0)));
    out
}

fn sff_into(f: &APoly, scale: usize, k: &FqContext, out: &mut Vec<(APoly, usize)>) {
    if f.is_constant() {
        return;
    }
    let p = k.characteristic() as usize;
    let df = f.derivative(k);
    if df.is_zero() {
        let root = f.pth_root(k).expect("zero derivative means a p-th power");
        sff_into(&root, scale * p, k, out);
        return;
    }
    let mut c = f.gcd(&df, k);
    let mut w = f.div_exact(&c, k).unwrap();
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c, k);
        let fac = w.div_exact(&y, k).unwrap();
        if !fac.is_one() {
            out.push((fac, i * scale));
        }
        i += 1;
        w = y;
        c = c.div_exact(&w, k).unwrap();
    }
    if !c.is_one() {
        let root = c.pth_root(k).expect("remaining cofactor is a p-th power");
        sff_into(&root, scale * p, k, out);
    }
}

/// Writes `h = c^2 e` with `c` monic and `e` square-free (`e` keeps the
/// leading coefficient of `h`).
pub fn squarefree_decompose(h: &APoly, k: &FqContext) -> Result<(APoly, APoly)> {
    if h.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut c = APoly::one();
    let mut e = APoly::constant(h.lead());
    for (f, m) in squarefree_factorization(h, k) {
        c = c.mul(&f.pow((m / 2) as u64, k), k);
        if m % 2 == 1 {
            e = e.mul(&f, k);
        }
    }
    Ok((c, e))
}

/// A factorization `unit * prod prime^mult`, primes monic and sorted by
/// degree, then lexicographically from the top coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Fq,
    pub factors: Vec<(APoly, usize)>,
}

impl Factorization {
    pub fn primes(&self) -> impl Iterator<Item = &APoly> {
        self.factors.iter().map(|(p, _)| p)
    }

    pub fn multiplicity(&self, prime: &APoly) -> usize {
        self.factors.iter().find(|(p, _)| p == prime).map_or(0, |(_, e)| *e)
    }

    /// Multiplies the factorization back out.
    pub fn expand(&self, k: &FqContext) -> APoly {
        self.factors
            .iter()
            .fold(APoly::constant(self.unit), |acc, (p, e)| acc.mul(&p.pow(*e as u64, k), k))
    }
}

pub fn factorize(h: &APoly, k: &FqContext) -> Result<Factorization> {
    factorize_seeded(h, k, SEED.load(AtomicOrdering::Relaxed))
}

pub fn factorize_seeded(h: &APoly, k: &FqContext, seed: u64) -> Result<Factorization> {
    if h.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut factors: Vec<(APoly, usize)> = Vec::new();
    for (part, mult) in squarefree_factorization(h, k) {
        for (g, deg) in distinct_degree(&part, k) {
            for prime in equal_degree(&g, deg, k, &mut rng) {
                match factors.iter_mut().find(|(p, _)| *p == prime) {
                    Some(entry) => entry.1 += mult,
                    None => factors.push((prime, mult)),
                }
            }
        }
    }
    factors.sort_by(|a, b| a.0.cmp_deglex(&b.0));
    Ok(Factorization { unit: h.lead(), factors })
}

/// Splits a monic square-free polynomial into products of primes of equal degree.
fn distinct_degree(f: &APoly, k: &FqContext) -> Vec<(APoly, usize)> {
    let q = k.size() as u64;
    let x = APoly::t();
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = x.clone();
    let mut i = 0;
    while let Some(dr) = rest.degree() {
        if dr == 0 {
            break;
        }
        i += 1;
        if dr < 2 * i {
            out.push((rest.clone(), dr));
            break;
        }
        h = h.powmod(q, &rest, k);
        let g = rest.gcd(&h.sub(&x, k), k);
        if !g.is_one() {
            rest = rest.div_exact(&g, k).unwrap();
            h = h.rem(&rest, k).unwrap();
            out.push((g, i));
        }
    }
    out
}

fn random_poly(deg_bound: usize, k: &FqContext, rng: &mut ChaCha8Rng) -> APoly {
    use rand::Rng;
    APoly::new((0..deg_bound).map(|_| Fq::from_raw(rng.gen_range(0..k.size()))).collect())
}

/// Cantor-Zassenhaus splitting of a product of distinct primes of degree `deg`.
fn equal_degree(f: &APoly, deg: usize, k: &FqContext, rng: &mut ChaCha8Rng) -> Vec<APoly> {
    let n = f.degree().unwrap_or(0);
    if n == deg {
        return vec![f.clone()];
    }
    let q = k.size() as u64;
    loop {
        let a = random_poly(n, k, rng);
        if a.is_constant() {
            continue;
        }
        let b = if k.characteristic() == 2 {
            // absolute trace to F_2: sum of a^{2^j}, j < deg * log2 q
            let steps = deg * k.degree() as usize;
            let mut acc = a.rem(f, k).unwrap();
            let mut cur = acc.clone();
            for _ in 1..steps {
                cur = cur.mulmod(&cur, f, k);
                acc = acc.add(&cur, k);
            }
            acc
        } else {
            // a^{(q^deg - 1)/2} = (a^{1 + q + ... + q^{deg-1}})^{(q-1)/2}
            let mut s = a.rem(f, k).unwrap();
            let mut t = s.clone();
            for _ in 1..deg {
                s = s.powmod(q, f, k);
                t = t.mulmod(&s, f, k);
            }
            t.powmod((q - 1) / 2, f, k).sub(&APoly::one(), k)
        };
        let g = f.gcd(&b, k);
        if g.is_one() || g.degree() == f.degree() {
            continue;
        }
        let h = f.div_exact(&g, k).unwrap();
        let mut out = equal_degree(&g, deg, k, rng);
        out.extend(equal_degree(&h, deg, k, rng));
        return out;
    }
}

/// Rabin's irreducibility test.
pub fn is_irreducible(f: &APoly, k: &FqContext) -> bool {
    let Some(n) = f.degree() else { return false };
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let f = f.monic(k);
    if f.coeff(0).is_zero() {
        return false;
    }
    let q = k.size() as u64;
    let x = APoly::t();
    // frob[i] = T^{q^i} mod f
    let mut frob = vec![x.clone()];
    for i in 1..=n {
        frob.push(frob[i - 1].powmod(q, &f, k));
    }
    if frob[n] != x {
        return false;
    }
    prime_factors(n as u32).into_iter().all(|l| {
        let g = f.gcd(&frob[n / l as usize].sub(&x, k), k);
        g.is_one()
    })
}

/// Number of monic primes of degree `d` over `F_q`: `(1/d) sum_{k|d} mu(k) q^{d/k}`.
pub fn prime_count(q: u64, d: u32) -> u64 {
    let mut total: i128 = 0;
    for kk in 1..=d {
        if d % kk != 0 {
            continue;
        }
        let mu = moebius(kk);
        total += mu as i128 * (q as i128).pow(d / kk);
    }
    (total / d as i128) as u64
}

fn moebius(n: u32) -> i32 {
    let mut n = n;
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Number of monic polynomials of degree `d`.
pub fn monic_count(k: &FqContext, d: usize) -> u64 {
    (k.size() as u64).checked_pow(d as u32).expect("enumeration range overflows")
}

/// The `idx`-th monic polynomial of degree `d` in the order of [`monics`].
pub fn monic_at(k: &FqContext, d: usize, idx: u64) -> APoly {
    let q = k.size() as u64;
    let mut c = Vec::with_capacity(d + 1);
    let mut v = idx;
    for _ in 0..d {
        c.push(Fq::from_raw((v % q) as u32));
        v /= q;
    }
    c.push(Fq::ONE);
    APoly::new(c)
}

/// Every monic polynomial of degree `d`, in lexicographic order with the
/// coefficient of `T^{d-1}` most significant.
pub fn monics(k: &FqContext, d: usize) -> impl Iterator<Item = APoly> + '_ {
    (0..monic_count(k, d)).map(move |idx| monic_at(k, d, idx))
}

/// Monic primes of degree exactly `d`, in the order of [`monics`].
pub fn enumerate_primes(k: &FqContext, d: usize) -> impl Iterator<Item = APoly> + '_ {
    assert!(d >= 1, "prime degree must be positive");
    monics(k, d).filter(move |f| is_irreducible(f, k))
}

/// Monic divisors of a factored polynomial, sorted by degree then lexicographically.
pub fn monic_divisors(f: &Factorization, k: &FqContext) -> Vec<APoly> {
    let mut divs = vec![APoly::one()];
    for (p, e) in &f.factors {
        let mut next = Vec::with_capacity(divs.len() * (e + 1));
        for d in &divs {
            let mut cur = d.clone();
            next.push(cur.clone());
            for _ in 0..*e {
                cur = cur.mul(p, k);
                next.push(cur.clone());
            }
        }
        divs = next;
    }
    divs.sort_by(|a, b| a.cmp_deglex(b));
    divs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fq::text::{format_apoly, parse_apoly};
    use proptest::prelude::*;

    fn f3() -> FqContext {
        FqContext::prime(3).unwrap()
    }

    #[test]
    fn decompose_constructed_square() {
        let k = f3();
        let h = parse_apoly("(T+1)^4*(T^2+1)", &k).unwrap();
        let (c, e) = squarefree_decompose(&h, &k).unwrap();
        assert_eq!(c, parse_apoly("(T+1)^2", &k).unwrap());
        assert_eq!(e, parse_apoly("T^2+1", &k).unwrap());
        let sq = parse_apoly("T^2 + 1", &k).unwrap();
        assert_eq!(squarefree_decompose(&sq, &k).unwrap(), (APoly::one(), sq));
        assert!(squarefree_decompose(&APoly::zero(), &k).is_err());
    }

    #[test]
    fn decompose_pth_powers() {
        let k = f3();
        // (T+1)^3 (T^2+1)^6 T^5
        let h = parse_apoly("(T+1)^3*(T^2+1)^6*T^5", &k).unwrap();
        let (c, e) = squarefree_decompose(&h, &k).unwrap();
        assert_eq!(c, parse_apoly("(T+1)*(T^2+1)^3*T^2", &k).unwrap());
        assert_eq!(e, parse_apoly("(T+1)*T", &k).unwrap());
    }

    #[test]
    fn factor_splitting_polynomial() {
        let k = f3();
        let f = factorize(&parse_apoly("T^3 - T", &k).unwrap(), &k).unwrap();
        let names: Vec<_> = f.primes().map(|p| format_apoly(p, &k)).collect();
        assert_eq!(names, ["T", "T + 1", "T + 2"]);
    }

    #[test]
    fn factor_irreducible_is_itself() {
        let k = f3();
        let p = parse_apoly("T^7 - T^2 + 1", &k).unwrap();
        let f = factorize(&p, &k).unwrap();
        assert_eq!(f.factors, vec![(p, 1)]);
    }

    #[test]
    fn factor_char2_extension() {
        let k = FqContext::new(2, 2, None, "w").unwrap();
        let h = parse_apoly("(T^2 + T + w)^2*(T + w)^3*(T^3 + T + 1)", &k).unwrap();
        let f = factorize(&h, &k).unwrap();
        assert_eq!(f.expand(&k), h);
        assert!(f.factors.iter().all(|(p, _)| is_irreducible(p, &k)));
    }

    #[test]
    fn small_prime_lists() {
        let k = f3();
        let d1: Vec<_> = enumerate_primes(&k, 1).map(|p| format_apoly(&p, &k)).collect();
        assert_eq!(d1, ["T", "T + 1", "T + 2"]);
        let k2 = FqContext::prime(2).unwrap();
        let d3: Vec<_> = enumerate_primes(&k2, 3).map(|p| format_apoly(&p, &k2)).collect();
        assert_eq!(d3, ["T^3 + T + 1", "T^3 + T^2 + 1"]);
    }

    #[test]
    fn prime_counts_match_necklace_formula() {
        for (p, n) in [(2, 1), (3, 1), (2, 2), (5, 1)] {
            let k = FqContext::new(p, n, None, "w").unwrap();
            let q = k.size() as u64;
            for d in 1..=8usize {
                if q.pow(d as u32) > 400_000 {
                    break;
                }
                assert_eq!(enumerate_primes(&k, d).count() as u64, prime_count(q, d as u32), "q={q} d={d}");
            }
        }
        assert_eq!(prime_count(3, 6), 116);
    }

    #[test]
    fn divisors_of_factorization() {
        let k = f3();
        let f = factorize(&parse_apoly("T^2*(T+1)", &k).unwrap(), &k).unwrap();
        let divs: Vec<_> = monic_divisors(&f, &k).iter().map(|d| format_apoly(d, &k)).collect();
        assert_eq!(divs, ["1", "T", "T + 1", "T^2", "T^2 + T", "T^3 + T^2"]);
    }

    proptest! {
        #[test]
        fn decomposition_identity(c in prop::collection::vec(0i64..3, 1..14)) {
            let k = f3();
            let h = APoly::from_ints(&k, &c);
            prop_assume!(!h.is_zero());
            let (cc, e) = squarefree_decompose(&h, &k).unwrap();
            prop_assert_eq!(cc.mul(&cc, &k).mul(&e, &k), h);
            prop_assert!(cc.is_monic());
            // e square-free: no repeated prime factor
            let fe = factorize(&e, &k).unwrap();
            prop_assert!(fe.factors.iter().all(|(_, m)| *m == 1));
        }

        #[test]
        fn factorization_round_trip(c in prop::collection::vec(0u32..4, 1..12)) {
            let k = FqContext::new(2, 2, None, "w").unwrap();
            let h = APoly::new(c.into_iter().map(Fq::from_raw).collect());
            prop_assume!(!h.is_zero());
            let f = factorize(&h, &k).unwrap();
            prop_assert_eq!(f.expand(&k), h);
            prop_assert!(f.factors.iter().all(|(p, _)| p.is_monic() && is_irreducible(p, &k)));
        }
    }
}
