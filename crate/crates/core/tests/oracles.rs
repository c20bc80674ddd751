mod common;

use common::*;
use drinfeld_core::charpoly::frobenius_charpoly;
use drinfeld_core::endoring::solve_central_equation;
use drinfeld_core::fq::{enumerate_primes, factorize, format_apoly, monic_divisors, APoly, Fq};
use drinfeld_core::quadorder::{maximal_order, solve_artin_schreier_m, CaseData};
use drinfeld_core::reciprocity::{refined_index, splits_completely_direct, torsion_is_rational};
use drinfeld_core::scan::analyze_prime;

#[test]
fn central_equation_matches_linear_system() {
    let k = field(3, 1);
    let phi = module(&k, &["T", "1"]);
    let mut solved = 0;
    let mut refused = 0;
    for d in 1..=5 {
        for p in enumerate_primes(&k, d) {
            let red = phi.reduce_at(&p).unwrap();
            let fd = frobenius_charpoly(&red).unwrap();
            let mo = maximal_order(&fd, &k).unwrap();
            let mut cs = monic_divisors(&factorize(&mo.c_pi, &k).unwrap(), &k);
            cs.push(poly("T^2 + T + 2", &k));
            for c in cs.iter().filter(|c| !c.is_one()) {
                let fast = solve_central_equation(&red, c, &mo.m, mo.n);
                let slow = linear_central_solve(&red, c, &mo.m, mo.n);
                assert_eq!(fast, slow, "c = {} at {}", format_apoly(c, &k), format_apoly(&p, &k));
                match fast {
                    Some(_) => solved += 1,
                    None => refused += 1,
                }
            }
        }
    }
    assert!(solved > 0 && refused > 0, "{solved} solved, {refused} refused");
}

#[test]
fn central_equation_table_row() {
    let k = field(3, 1);
    let phi = module(&k, &["T", "1"]);
    let red = phi.reduce_at(&poly("T^6 + 2T^5 + 2T^4 + 2T^3 + 2T^2 + 2T + 2", &k)).unwrap();
    let fd = frobenius_charpoly(&red).unwrap();
    let mo = maximal_order(&fd, &k).unwrap();
    assert_eq!(mo.c_pi, poly("T^2 + 2", &k));
    let x = solve_central_equation(&red, &poly("T + 2", &k), &mo.m, mo.n).unwrap();
    assert!(x.commutes_with(red.phi_t()));
    assert!(solve_central_equation(&red, &poly("T + 1", &k), &mo.m, mo.n).is_none());
}

#[test]
fn centralizer_oracle_sees_proper_orders() {
    let k = field(3, 1);
    let phi = module(&k, &["T", "1"]);
    let row = poly("T^6 + 2T^4 + 2T^3 + T + 1", &k);
    let inv = analyze_prime(&phi, &row).unwrap();
    let red = phi.reduce_at(&row).unwrap();
    let c_phi = centralizer_c_phi(&red, &inv.endo.c_pi);
    assert_eq!(c_phi, poly("T + 1", &k));
    assert_ne!(c_phi, inv.endo.c_pi);
}

#[test]
fn exponent_oracle_on_other_fields() {
    for (p, n, g) in [(2, 1, ["T", "1"]), (2, 2, ["1", "T"]), (5, 1, ["T^2", "1"])] {
        let k = field(p, n);
        let phi = module(&k, &g);
        for d in 1..=3 {
            for pr in enumerate_primes(&k, d).filter(|pr| phi.has_good_reduction(pr)) {
                let red = phi.reduce_at(&pr).unwrap();
                assert_eq!(drinfeld_core::structure::exponent(&red).unwrap(), exhaustive_annihilator(&red));
            }
        }
    }
}

#[test]
fn torsion_rationality_matches_powering() {
    let k = field(3, 1);
    for g in [["T", "1"], ["1", "T"]] {
        let phi = module(&k, &g);
        for n in ["1", "T", "T + 1", "T^2 + 1", "T^2 - T - 1"] {
            let n = poly(n, &k);
            for d in 1..=5 {
                for p in enumerate_primes(&k, d) {
                    if p.divides(&n, &k) || !phi.has_good_reduction(&p) {
                        continue;
                    }
                    let red = phi.reduce_at(&p).unwrap();
                    let fast = torsion_is_rational(&red, &n);
                    assert_eq!(fast, torsion_rational_by_powering(&red, &n), "{}", format_apoly(&p, &k));
                    if fast {
                        let fd = frobenius_charpoly(&red).unwrap();
                        assert!(n.divides(&refined_index(&red, &fd).unwrap(), &k));
                    }
                }
            }
        }
    }
}

#[test]
fn rational_torsion_examples() {
    let k = field(3, 1);
    let rank3 = module(&k, &["T", "0", "1"]);
    let p14 = poly("T^14 + T^13 + T^12 + T^5 - T^2 + T + 1", &k);
    assert!(splits_completely_direct(&rank3, &p14, &APoly::t()).unwrap());

    // here T^2 - T - 1 divides c_phi, not b_1, so the torsion is not rational
    let phi = module(&k, &["1", "T"]);
    let p = poly("T^6 + T^5 + T^3 - 1", &k);
    let n = poly("T^2 - T - 1", &k);
    assert!(!splits_completely_direct(&phi, &p, &n).unwrap());
    let red = phi.reduce_at(&p).unwrap();
    assert!(!torsion_rational_by_powering(&red, &n));
    let inv = analyze_prime(&phi, &p).unwrap();
    assert!(inv.endo.b.is_one() && n.divides(&inv.endo.c_phi, &k));

    assert!(splits_completely_direct(&phi, &p, &APoly::constant(Fq::ONE)).unwrap());
}

#[test]
fn artin_schreier_m_matches_f2_linear_algebra() {
    let k = field(2, 2);
    let phi = module(&k, &["T", "1"]);
    let mut seen = 0;
    for d in 1..=6 {
        for p in enumerate_primes(&k, d) {
            let fd = frobenius_charpoly(&phi.reduce_at(&p).unwrap()).unwrap();
            let mo = maximal_order(&fd, &k).unwrap();
            if !matches!(mo.data, CaseData::EvenSep { .. }) {
                continue;
            }
            let a = fd.trace(&k);
            let rhs = mo.m.mul(&mo.m, &k).add(&a.mul(&mo.m, &k), &k);
            let mut roots = f2_linear_roots(&a, &rhs, mo.m.deg_or_zero().max(a.deg_or_zero()), &k);
            roots.sort_by(|x, y| x.cmp_deglex(y));
            let mut want = vec![mo.m.clone(), mo.m.add(&a, &k)];
            want.sort_by(|x, y| x.cmp_deglex(y));
            assert_eq!(roots, want, "at {}", format_apoly(&p, &k));
            assert_eq!(solve_artin_schreier_m(&a, &rhs, &k).unwrap(), mo.m);
            seen += 1;
        }
    }
    assert!(seen > 100, "{seen}");
}

/// The reduced Artin-Schreier equation defines the same extension: the
/// split/inert pattern at small unramified primes agrees with `P(X)`.
#[test]
fn artin_schreier_reduction_keeps_splitting() {
    let k = field(2, 2);
    let phi = module(&k, &["T", "1"]);
    let ells: Vec<APoly> = (1..=3).flat_map(|d| enumerate_primes(&k, d).collect::<Vec<_>>()).collect();
    for d in 5..=7 {
        for p in enumerate_primes(&k, d) {
            let fd = frobenius_charpoly(&phi.reduce_at(&p).unwrap()).unwrap();
            let mo = maximal_order(&fd, &k).unwrap();
            if !matches!(mo.data, CaseData::EvenSep { .. }) {
                continue;
            }
            let a = fd.trace(&k);
            let bad = a.mul(&mo.f1, &k).mul(&p, &k);
            let sample: Vec<&APoly> = ells.iter().filter(|l| !l.divides(&bad, &k)).take(20).collect();
            assert_eq!(sample.len(), 20);
            for l in sample {
                assert_eq!(
                    char2_quadratic_splits(&a, fd.coeff(2), l, &k),
                    char2_quadratic_splits(&mo.f1, &mo.f0, l, &k),
                    "p = {}, l = {}",
                    format_apoly(&p, &k),
                    format_apoly(l, &k)
                );
            }
        }
    }
}
