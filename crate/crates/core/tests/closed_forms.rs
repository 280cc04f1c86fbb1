//! Rational reconstruction of the AR and Aaron generating functions.

use num_bigint::BigInt;
use num_traits::Signed;
use patfrac::genfun::{aaron_table, ar_table, SolverConfig};
use patfrac::oracle::{f_table, g_table};
use patfrac::ratrec::{fit_with_power, reconstruct, RationalFn, DEFAULT_GUARD};
use patfrac::ZPoly;

#[test]
fn ar_closed_forms() {
    let c = SolverConfig::new(30, 8);
    let ar = ar_table(&c).unwrap();
    let f = f_table(9).unwrap();
    for (r, s) in ar.iter().enumerate().take(8) {
        let rf = reconstruct(s, DEFAULT_GUARD).unwrap();
        println!("AR({r}) = {rf}");
        assert_eq!(rf.denom_power, r as u32 + 1);
        assert_eq!(rf.expand(30), *s);
        assert!(fit_with_power(s, rf.denom_power - 1, DEFAULT_GUARD).is_none());
        for n in 0..=9 {
            assert_eq!(s.coeff(n).unwrap(), &BigInt::from(f.get(n, r)));
        }
        assert!(s.coefficients().iter().all(|c| !c.is_negative()));
    }
}

#[test]
fn aaron_closed_forms() {
    let c = SolverConfig::new(30, 7);
    let aaron = aaron_table(&c).unwrap();
    let g = g_table(9).unwrap();
    for (r, s) in aaron.iter().enumerate().take(7) {
        let rf = reconstruct(s, DEFAULT_GUARD).unwrap();
        println!("Aaron({r}) = {rf}");
        assert_eq!(rf.denom_power, r as u32 + 2);
        assert_eq!(rf.expand(30), *s);
        assert!(fit_with_power(s, rf.denom_power - 1, DEFAULT_GUARD).is_none());
        for n in 0..=9 {
            assert_eq!(s.coeff(n).unwrap(), &BigInt::from(g.get(n, r)));
        }
    }
}

#[test]
fn known_small_forms() {
    let c = SolverConfig::new(30, 2);
    let ar = ar_table(&c).unwrap();
    assert_eq!(
        reconstruct(&ar[0], DEFAULT_GUARD).unwrap(),
        RationalFn::new(ZPoly::from_i64(&[1, -1]), 1)
    );
    assert_eq!(
        reconstruct(&ar[1], DEFAULT_GUARD).unwrap(),
        RationalFn::new(ZPoly::monomial(3), 2)
    );
    assert_eq!(
        reconstruct(&ar[2], DEFAULT_GUARD).unwrap(),
        RationalFn::new(ZPoly::from_i64(&[0, 0, 0, 0, 1, -1]), 3)
    );
}
