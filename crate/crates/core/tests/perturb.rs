//! The perturbed families: one-parameter distortion of the fourth orbit
//! point, fixed points of the distorted parameter map across the window,
//! and the two honest saddle-node absences at the window's far corners.

// frozen reference values keep their full oracle digits
#![allow(clippy::excessive_precision)]

use renormlab_core::family::Side;
use renormlab_core::scaling::*;

const WINDOW: (f64, f64) = (0.98, 1.02);
const EPS: [f64; 5] = [0.98, 0.99, 1.0, 1.01, 1.02];

#[test]
fn unperturbed_factor_is_identity() {
    let c = 0.195;
    let plain = scaling_ratios(Side::Left, c);
    let eps1 = perturbed_ratios(Side::Left, c, 1.0, WINDOW).unwrap();
    // eps = 1 multiplies by exactly 1.0: bit-identical ratios
    assert_eq!(plain.s0, eps1.s0);
    assert_eq!(plain.s1, eps1.s1);
    assert_eq!(plain.s2, eps1.s2);
    let r = renorm_map(Side::Left, c).unwrap();
    let rp = perturbed_renorm_map(Side::Left, c, 1.0, WINDOW).unwrap();
    assert_eq!(r, rp);
}

#[test]
fn window_guard() {
    assert!(perturbed_ratios(Side::Left, 0.195, 0.9, WINDOW).is_err());
    assert!(perturbed_ratios(Side::Left, 0.195, 1.05, WINDOW).is_err());
    assert!(perturbed_ratios(Side::Left, 0.195, 0.98, WINDOW).is_ok());
}

#[test]
fn left_sweep_matches_expected_roots() {
    let sweep = continuum_sweep(Side::Left, &EPS, 0.004, 1e-12, WINDOW);
    assert_eq!(sweep.len(), 5);

    // eps = 0.98 is beyond the left family's saddle-node: no root
    assert!(sweep[0].point.is_none(), "unexpected root at eps = 0.98");
    assert!(sweep[0].failure.is_some());

    let expect = [
        (0.99, 0.19633340150730224, -61.64859106),
        (1.00, 0.19669300570726402, -76.19346879),
        (1.01, 0.19695719997409898, -84.54425562),
        (1.02, 0.19717360664763406, -90.34927861),
    ];
    for (rec, (eps, c, m)) in sweep[1..].iter().zip(expect.iter()) {
        assert_eq!(rec.epsilon, *eps);
        let p = rec.point.as_ref().unwrap_or_else(|| panic!("no root at eps = {eps}"));
        assert!((p.c_star - c).abs() < 1e-9, "eps {eps}: {} vs {c}", p.c_star);
        assert!((p.multiplier - m).abs() < 1e-4);
        assert_eq!(p.stability, Stability::Unstable);
    }
}

#[test]
fn right_sweep_matches_expected_roots() {
    let sweep = continuum_sweep(Side::Right, &EPS, 0.004, 1e-12, WINDOW);
    let expect = [
        (0.98, 0.80248423887102283),
        (0.99, 0.80284776991636923),
        (1.00, 0.80330699429273598),
        (1.01, 0.80413794808964759),
    ];
    for (rec, (eps, c)) in sweep[..4].iter().zip(expect.iter()) {
        assert_eq!(rec.epsilon, *eps);
        let p = rec.point.as_ref().unwrap_or_else(|| panic!("no root at eps = {eps}"));
        assert!((p.c_star - c).abs() < 1e-9);
        assert_eq!(p.stability, Stability::Unstable);
    }
    // the right family loses its root past eps ~ 1.018
    assert!(sweep[4].point.is_none(), "unexpected root at eps = 1.02");
}

#[test]
fn perturbation_is_not_rigid() {
    // the distorted fixed points carry genuinely different geometry
    let lo = find_perturbed_fixed_point(Side::Left, 0.99, 0.004, 1e-12, WINDOW).unwrap();
    let hi = find_perturbed_fixed_point(Side::Left, 1.01, 0.004, 1e-12, WINDOW).unwrap();
    let t_lo = perturbed_ratios(Side::Left, lo.c_star, 0.99, WINDOW).unwrap();
    let t_hi = perturbed_ratios(Side::Left, hi.c_star, 1.01, WINDOW).unwrap();
    assert!(t_lo.max_abs_diff(&t_hi) > 1e-6, "triples too close");
    assert!((t_lo.s0 - 0.0633057967604091).abs() < 1e-8);
    assert!((t_hi.s0 - 0.0833206465566054).abs() < 1e-8);
}

#[test]
fn sweep_is_monotone_where_found() {
    let sweep = continuum_sweep(Side::Left, &EPS, 0.004, 1e-12, WINDOW);
    let found: Vec<f64> = sweep.iter().filter_map(|r| r.point.as_ref().map(|p| p.c_star)).collect();
    assert!(found.windows(2).all(|w| w[0] < w[1]), "c*_eps not increasing: {found:?}");
    let sweep_r = continuum_sweep(Side::Right, &EPS, 0.004, 1e-12, WINDOW);
    let found_r: Vec<f64> = sweep_r.iter().filter_map(|r| r.point.as_ref().map(|p| p.c_star)).collect();
    assert!(found_r.windows(2).all(|w| w[0] < w[1]));
}
