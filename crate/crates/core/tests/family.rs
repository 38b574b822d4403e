// frozen reference values keep their full oracle digits
#![allow(clippy::excessive_precision)]

use proptest::prelude::*;
use renormlab_core::family::*;

const ADM: f64 = 0.21132486540518713; // (3 - sqrt(3)) / 6

#[test]
fn admissible_windows() {
    let (lo, hi) = Side::Left.admissible_interval();
    assert_eq!(lo, 0.0);
    assert!((hi - ADM).abs() < 1e-16);
    let (lo, hi) = Side::Right.admissible_interval();
    assert!((lo - (1.0 - ADM)).abs() < 1e-16);
    assert_eq!(hi, 1.0);

    assert!(check_admissible(Side::Left, 0.1).is_ok());
    assert!(check_admissible(Side::Left, 0.25).is_err());
    assert!(check_admissible(Side::Left, 0.0).is_err());
    assert!(check_admissible(Side::Right, 0.8).is_ok());
    assert!(check_admissible(Side::Right, 0.75).is_err());
}

#[test]
fn left_values_at_02() {
    let c = 0.2;
    assert!((branch_value(Side::Left, c, 0.5) - 0.5).abs() < 1e-15);
    assert!((branch_value(Side::Left, c, 0.8) - 1.0).abs() < 1e-15);
    assert!((branch_value(Side::Left, c, c)).abs() < 1e-15);
    assert!((branch_value(Side::Left, c, 1.0) - 0.59259259259259259).abs() < 1e-15);
    assert!((branch_derivative(Side::Left, c, 0.35) - 1.875).abs() < 1e-15);
    // critical points are the two zeros of the derivative
    assert!(branch_derivative(Side::Left, c, c).abs() < 1e-15);
    assert!(branch_derivative(Side::Left, c, 1.0 - c).abs() < 1e-15);
}

#[test]
fn left_orbit_at_02() {
    let b = critical_orbit(Side::Left, 0.2, 6);
    let expect = [
        0.40740740740740741,
        0.27586881704648305,
        0.043923730341305256,
        0.2382019330887626,
        0.01164534714441555,
        0.35751921539316203,
    ];
    for (k, (&got, &want)) in b.iter().zip(expect.iter()).enumerate() {
        // rounding accumulates through the forward iteration
        assert!((got - want).abs() < 5e-14, "orbit point {k}: {got} vs {want}");
    }
}

#[test]
fn right_values_at_08() {
    assert!((branch_value(Side::Right, 0.8, 1.0) - 0.59259259259259259).abs() < 1e-15);
    assert!((branch_value(Side::Right, 0.8, 0.65) - 0.84375).abs() < 1e-15);
    // mirror of the left identities: value 1 at the critical point c,
    // value 0 at the reflected one
    assert!((branch_value(Side::Right, 0.8, 0.8) - 1.0).abs() < 1e-14);
    assert!((branch_value(Side::Right, 0.8, 0.5) - 0.5).abs() < 1e-14);
    assert!((branch_value(Side::Right, 0.8, 0.2)).abs() < 1e-14);
}

#[test]
fn orbit_seeds() {
    assert_eq!(Side::Left.orbit_seed(), 0.0);
    assert_eq!(Side::Right.orbit_seed(), 1.0);
    assert_eq!(Side::Left.mirror(), Side::Right);
    assert_eq!(Side::Left.label(), "left");
}

proptest! {
    // normalization identities hold across the whole admissible window
    #[test]
    fn left_identities(c in 1e-4..(ADM - 1e-4)) {
        let at = |x: f64| branch_value(Side::Left, c, x);
        prop_assert!(at(c).abs() < 1e-13);
        prop_assert!((at(0.5) - 0.5).abs() < 1e-13);
        prop_assert!((at(1.0 - c) - 1.0).abs() < 1e-13);
        prop_assert!((at(0.0) + at(1.0) - 1.0).abs() < 1e-13);
    }

    #[test]
    fn mirror_conjugacy(c in 1e-4..(ADM - 1e-4), x in 0.0..1.0f64) {
        let l = branch_value(Side::Left, c, x);
        let r = branch_value(Side::Right, 1.0 - c, 1.0 - x);
        prop_assert!((r - (1.0 - l)).abs() < 1e-12, "mirror broke: {l} vs {r}");
    }

    #[test]
    fn derivative_is_consistent(c in 1e-3..(ADM - 1e-3), x in 0.05..0.95f64) {
        let h = 1e-6;
        let fd = (branch_value(Side::Left, c, x + h) - branch_value(Side::Left, c, x - h)) / (2.0 * h);
        let an = branch_derivative(Side::Left, c, x);
        prop_assert!((fd - an).abs() < 1e-6 * (1.0 + an.abs()), "{fd} vs {an}");
    }

    #[test]
    fn orbit_is_forward_iteration(c in 0.15..(ADM - 1e-3), n in 2usize..10) {
        let b = critical_orbit(Side::Left, c, n);
        prop_assert_eq!(b.len(), n);
        for k in 1..n {
            prop_assert_eq!(b[k], branch_value(Side::Left, c, b[k - 1]));
        }
    }
}
