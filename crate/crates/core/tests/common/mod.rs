//! Brute-force references used by the integration tests. Each one avoids
//! the shortcut taken by the library routine it checks.
#![allow(dead_code)]

use std::sync::Arc;

use drinfeld_core::drinfeld::{GlobalDrinfeldModule, ReducedDrinfeldModule};
use drinfeld_core::fq::{
    factor::monics, monic_divisors, factorize, parse_apoly, APoly, Fq, FqContext, FqMatrix, ResidueContext, ResidueElement,
};
use drinfeld_core::skew::SkewPoly;

pub fn field(p: u32, n: u32) -> Arc<FqContext> {
    Arc::new(FqContext::new(p, n, None, "w").unwrap())
}

pub fn module(k: &Arc<FqContext>, g: &[&str]) -> GlobalDrinfeldModule {
    GlobalDrinfeldModule::from_strs(k.clone(), g).unwrap()
}

pub fn poly(s: &str, k: &FqContext) -> APoly {
    parse_apoly(s, k).unwrap()
}

pub fn fixture(name: &str) -> String {
    std::fs::read_to_string(format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

/// `phi_T(x) = theta x + sum g_i x^{q^i}`, with powers taken literally.
fn phi_t_direct(red: &ReducedDrinfeldModule, x: &ResidueElement) -> ResidueElement {
    let ctx = red.ctx();
    let q = ctx.base().size() as u64;
    let mut acc = ctx.zero();
    for i in 0..=red.rank() {
        let xi = ctx.pow(x, q.pow(i as u32));
        acc = ctx.add(&acc, &ctx.mul(&red.g(i), &xi));
    }
    acc
}

/// Least-degree monic `f` (first in enumeration order) with `phi_f = 0` on
/// `F_p`, found by trying every monic polynomial of degree at most `d`.
pub fn exhaustive_annihilator(red: &ReducedDrinfeldModule) -> APoly {
    let ctx = red.ctx();
    let d = red.d();
    // orbits[b][j] = phi_T^j(theta^b)
    let orbits: Vec<Vec<ResidueElement>> = (0..d)
        .map(|b| {
            let mut v = vec![ctx.pow(&ctx.theta(), b as u64)];
            for _ in 0..d {
                let next = phi_t_direct(red, v.last().unwrap());
                v.push(next);
            }
            v
        })
        .collect();
    for deg in 0..=d {
        for f in monics(ctx.base(), deg) {
            let kills = orbits.iter().all(|orb| {
                let mut acc = ctx.zero();
                for (j, &c) in f.coeffs().iter().enumerate() {
                    acc = ctx.add(&acc, &ctx.scale(&orb[j], c));
                }
                acc.is_zero()
            });
            if kills {
                return f;
            }
        }
    }
    panic!("no annihilator of degree <= d");
}

fn unit(ctx: &ResidueContext, b: usize) -> ResidueElement {
    let mut c = vec![Fq::ZERO; ctx.degree()];
    c[b] = Fq::ONE;
    ctx.from_coords(&c).unwrap()
}

fn flatten(u: &SkewPoly, len: usize, d: usize) -> Vec<Fq> {
    let mut v = vec![Fq::ZERO; len * d];
    for (i, c) in u.coeffs().iter().enumerate() {
        v[i * d..(i + 1) * d].copy_from_slice(c.coords());
    }
    v
}

fn unflatten(ctx: &Arc<ResidueContext>, v: &[Fq]) -> SkewPoly {
    let d = ctx.degree();
    SkewPoly::new(ctx.clone(), v.chunks(d).map(|c| ctx.from_coords(c).unwrap()).collect())
}

/// Matrix of an `F_q`-linear map on `{u : deg u <= deg_in}` into skew
/// polynomials of degree `< len_out`, column by column.
fn linear_map(
    ctx: &Arc<ResidueContext>,
    deg_in: usize,
    len_out: usize,
    f: impl Fn(&SkewPoly) -> SkewPoly,
) -> FqMatrix {
    let d = ctx.degree();
    let mut m = FqMatrix::zeros(len_out * d, (deg_in + 1) * d);
    for i in 0..=deg_in {
        for b in 0..d {
            let img = flatten(&f(&SkewPoly::monomial(ctx, unit(ctx, b), i)), len_out, d);
            for (row, &c) in img.iter().enumerate() {
                m.set(row, i * d + b, c);
            }
        }
    }
    m
}

/// `F_q`-basis of `{u : deg u <= deg_max, u phi_T = phi_T u}`.
pub fn centralizer_basis(red: &ReducedDrinfeldModule, deg_max: usize) -> Vec<SkewPoly> {
    let ctx = red.ctx();
    let phi_t = red.phi_t();
    let len = deg_max + red.rank() + 1;
    let m = linear_map(ctx, deg_max, len, |u| u.mul(phi_t).sub(&phi_t.mul(u)));
    m.nullspace(ctx.base()).iter().map(|v| unflatten(ctx, v)).collect()
}

/// `u = phi_s + phi_t tau^d` for some `s, t` in `A`, by linear algebra.
/// Leading terms of `phi_s` and `phi_t pi` can cancel, so the search runs
/// over `deg s, deg t <= (deg u + d)/2 + 1`, which `|t| <= |u| / |pi - pi'|`
/// and `|s| <= max(|u|, |t pi|)` allow.
pub fn in_a_pi(red: &ReducedDrinfeldModule, u: &SkewPoly) -> bool {
    let Some(deg) = u.degree() else { return true };
    let ctx = red.ctx();
    let k = ctx.base();
    let d = red.d();
    let bound = (deg + d) / 2 + 1;
    let mut span = Vec::new();
    for i in 0..=bound {
        let phi_i = red.phi_of(&APoly::monomial(Fq::ONE, i));
        span.push(phi_i.mul_tau_pow(d));
        span.push(phi_i);
    }
    let len = 2 * bound + d + 1;
    let mut m = FqMatrix::zeros(len * d, span.len());
    for (col, s) in span.iter().enumerate() {
        for (row, c) in flatten(s, len, d).into_iter().enumerate() {
            m.set(row, col, c);
        }
    }
    m.solve(&flatten(u, len, d), k).unwrap().is_some()
}

/// `c_phi` read off the centralizer: `b` is the lcm over a basis of the
/// least `g | c_pi` with `g u` in `A[pi]`.
pub fn centralizer_c_phi(red: &ReducedDrinfeldModule, c_pi: &APoly) -> APoly {
    let k = red.base();
    let divs = monic_divisors(&factorize(c_pi, k).unwrap(), k);
    let mut b = APoly::one();
    for u in centralizer_basis(red, 2 * red.d()) {
        let g = divs
            .iter()
            .find(|g| in_a_pi(red, &red.phi_of(g).mul(&u)))
            .expect("c_pi u lies in A[pi]");
        b = b.lcm(g, k);
    }
    c_pi.div_exact(&b, k).unwrap()
}

/// Solves `x phi_c = phi_m + n tau^d` as a linear system in the coefficients of `x`.
pub fn linear_central_solve(red: &ReducedDrinfeldModule, c: &APoly, m: &APoly, n: Fq) -> Option<SkewPoly> {
    let ctx = red.ctx();
    let rhs = red.phi_of(m).add(&SkewPoly::tau_pow(ctx, red.d()).scale(n));
    let phi_c = red.phi_of(c);
    let s = rhs.degree()?.checked_sub(phi_c.degree()?)?;
    let len = rhs.degree()? + 1;
    let mat = linear_map(ctx, s, len, |x| x.mul(&phi_c));
    let sol = mat.solve(&flatten(&rhs, len, ctx.degree()), ctx.base()).unwrap()?;
    assert!(sol.kernel.is_empty(), "x phi_c has no kernel");
    Some(unflatten(ctx, &sol.particular))
}

/// Ordinary polynomials over `F_p`, for the splitting reference.
fn pmul(ctx: &ResidueContext, a: &[ResidueElement], b: &[ResidueElement]) -> Vec<ResidueElement> {
    let mut out = vec![ctx.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = ctx.add(&out[i + j], &ctx.mul(x, y));
        }
    }
    out
}

fn prem(ctx: &ResidueContext, a: &mut Vec<ResidueElement>, f: &[ResidueElement]) {
    let df = f.len() - 1;
    let inv = ctx.inv(&f[df]).unwrap();
    while a.len() > df {
        let top = ctx.mul(&a.pop().unwrap(), &inv);
        if top.is_zero() {
            continue;
        }
        let shift = a.len() - df;
        for (j, c) in f[..df].iter().enumerate() {
            a[shift + j] = ctx.sub(&a[shift + j], &ctx.mul(&top, c));
        }
    }
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
}

/// `phi_n(x)` divides `x^{q^d} - x` in `F_p[x]`: every root of the
/// separable polynomial `phi_n(x)` lies in `F_p`.
pub fn torsion_rational_by_powering(red: &ReducedDrinfeldModule, n: &APoly) -> bool {
    if n.is_constant() {
        return true;
    }
    let ctx = red.ctx();
    let q = ctx.base().size() as usize;
    let phi_n = red.phi_of(n);
    let deg = q.pow(phi_n.degree().unwrap() as u32);
    let mut f = vec![ctx.zero(); deg + 1];
    let mut qi = 1;
    for c in phi_n.coeffs() {
        f[qi] = c.clone();
        qi *= q;
    }
    let x = vec![ctx.zero(), ctx.one()];
    let mut y = x.clone();
    for _ in 0..red.d() {
        // y <- y^q mod f
        let mut acc = vec![ctx.one()];
        for _ in 0..q {
            acc = pmul(ctx, &acc, &y);
            prem(ctx, &mut acc, &f);
            if acc.is_empty() {
                acc.push(ctx.zero());
            }
        }
        y = acc;
    }
    prem(ctx, &mut y, &f);
    y == x
}

/// Absolute trace `A/l -> F_2` of `t`, as a constant polynomial.
pub fn trace_to_f2(t: &APoly, l: &APoly, k: &FqContext) -> APoly {
    let bits = l.degree().unwrap() * k.degree() as usize;
    let mut acc = APoly::zero();
    let mut y = t.rem(l, k).unwrap();
    for _ in 0..bits {
        acc = acc.add(&y, k);
        y = y.mulmod(&y, l, k);
    }
    acc
}

/// Over `A/l` in characteristic 2, `X^2 + bX + c` with `b` a unit splits
/// iff `Tr(c / b^2) = 0`.
pub fn char2_quadratic_splits(b: &APoly, c: &APoly, l: &APoly, k: &FqContext) -> bool {
    let binv = b.inv_mod(l, k).unwrap();
    let t = c.mulmod(&binv.mulmod(&binv, l, k), l, k);
    trace_to_f2(&t, l, k).is_zero()
}

/// All `m` with `deg m <= top` and `m^2 + a m = rhs`, by `F_2`-linear algebra
/// on the coordinates of the coefficients.
pub fn f2_linear_roots(a: &APoly, rhs: &APoly, top: usize, k: &FqContext) -> Vec<APoly> {
    let f2 = FqContext::prime(2).unwrap();
    let n = k.degree() as usize;
    let unknowns = (top + 1) * n;
    let out_len = (2 * top).max(top + a.deg_or_zero()).max(rhs.deg_or_zero()) + 1;
    let to_bits = |p: &APoly| -> Vec<Fq> {
        let mut v = vec![Fq::ZERO; out_len * n];
        for (j, &c) in p.coeffs().iter().enumerate() {
            for (b, &x) in k.coords(c).iter().enumerate() {
                v[j * n + b] = Fq::from_raw(x);
            }
        }
        v
    };
    let from_bits = |v: &[Fq]| -> APoly {
        APoly::new(
            v.chunks(n)
                .map(|ch| k.from_coords(&ch.iter().map(|x| x.raw()).collect::<Vec<_>>()))
                .collect(),
        )
    };
    let mut mat = FqMatrix::zeros(out_len * n, unknowns);
    for col in 0..unknowns {
        let mut e = vec![Fq::ZERO; unknowns];
        e[col] = Fq::ONE;
        let m = from_bits(&e);
        let img = to_bits(&m.mul(&m, k).add(&a.mul(&m, k), k));
        for (row, c) in img.into_iter().enumerate() {
            mat.set(row, col, c);
        }
    }
    let Some(sol) = mat.solve(&to_bits(rhs), &f2).unwrap() else { return vec![] };
    let base = from_bits(&sol.particular);
    let mut out = vec![base.clone()];
    for kv in &sol.kernel {
        let extra = from_bits(kv);
        let more: Vec<APoly> = out.iter().map(|x| x.add(&extra, k)).collect();
        out.extend(more);
    }
    out
}
