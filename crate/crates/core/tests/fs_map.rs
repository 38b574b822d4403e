use renormlab_core::error::CoreError;
use renormlab_core::family::{branch_value, Side};
use renormlab_core::scaling::*;
use renormlab_core::tower::*;

const C_STAR_L: f64 = 0.19669300570726402;

fn left_fs(depth: usize) -> PiecewiseAffineMap {
    let data = scaling_ratios(Side::Left, C_STAR_L);
    build_fs(Side::Left, C_STAR_L, data, depth, 1e-8).unwrap()
}

#[test]
fn depth_zero_is_rejected() {
    let data = scaling_ratios(Side::Left, C_STAR_L);
    let err = build_fs(Side::Left, C_STAR_L, data, 0, 1e-8).unwrap_err();
    assert!(matches!(err, CoreError::DepthExhausted { need: 1, have: 0 }));
}

#[test]
fn improper_ratios_are_rejected() {
    // at c = 0.2 the three ratios sum past 1, so they cannot be interval
    // proportions of a partition
    let data = scaling_ratios(Side::Left, 0.2);
    let err = build_fs(Side::Left, 0.2, data, 3, 1e-3).unwrap_err();
    assert!(matches!(err, CoreError::ImproperData { .. }));
}

#[test]
fn off_fixed_point_parameter_is_rejected() {
    let c = C_STAR_L + 1e-4;
    let data = scaling_ratios(Side::Left, c);
    let err = build_fs(Side::Left, c, data, 3, 1e-8).unwrap_err();
    match err {
        CoreError::ToleranceBreach { residual, .. } => assert!(residual > 1e-4),
        other => panic!("expected a tolerance breach, got {other}"),
    }
}

#[test]
fn branch_count_scales_with_depth() {
    for depth in 1..=8 {
        let f = left_fs(depth);
        assert_eq!(f.branches.len(), 2 * depth);
        assert_eq!(f.depth, depth);
        // branches sorted, pairwise disjoint, inside the base
        for w in f.branches.windows(2) {
            assert!(w[0].domain.hi < w[1].domain.lo);
        }
        for br in &f.branches {
            assert!(f.base.contains_interval(&br.domain, 1e-12));
        }
    }
}

#[test]
fn level_one_matches_the_tower_frame() {
    let f = left_fs(6);
    let t = build_stationary_tower(Side::Left, C_STAR_L, 6).unwrap();
    let (b_i2, b_i0) = f.level_one();
    assert!(b_i2.domain.endpoint_distance(&t.level(1).i2) < 1e-12);
    assert!(b_i0.domain.endpoint_distance(&t.level(1).i0) < 1e-12);
    // the outer right branch carries the base onto the middle interval
    assert!(b_i0.image().endpoint_distance(&t.level(1).i1) < 1e-12);
}

#[test]
fn level_one_branches_interpolate_the_cubic() {
    let f = left_fs(4);
    let (b_i2, b_i0) = f.level_one();
    for br in [b_i2, b_i0] {
        for x in [br.domain.lo, br.domain.hi] {
            let affine = br.map.eval(x);
            let cubic = branch_value(Side::Left, C_STAR_L, x);
            assert!((affine - cubic).abs() < 1e-12, "deviation at {x}");
        }
    }
}

#[test]
fn renormalization_reproduces_the_shallower_assembly() {
    let f8 = left_fs(8);
    let f7 = left_fs(7);
    let rf = renormalize(&f8).unwrap();
    let d = branch_distance(&rf, &f7);
    assert!(d < 1e-9, "branch distance {d}");
}

#[test]
fn renormalization_needs_two_levels() {
    let f1 = left_fs(1);
    let err = renormalize(&f1).unwrap_err();
    assert!(matches!(err, CoreError::DepthExhausted { need: 2, have: 1 }));
}

#[test]
fn two_periodic_data_shifts_under_renormalization() {
    // alternating levels from two nearby parameters: renormalizing the
    // assembly must drop the leading level and keep the rest verbatim
    let a = stationary_level(Side::Left, C_STAR_L - 0.002).unwrap();
    let b = stationary_level(Side::Left, C_STAR_L + 0.002).unwrap();
    let base = side_base(Side::Left, C_STAR_L - 0.002);
    let levels: Vec<ScalingLevel> = [a, b, a, b, a, b].to_vec();
    let f = assemble_fs(Side::Left, base, &levels, None);
    let rf = renormalize(&f).unwrap();
    let target = assemble_fs(Side::Left, base, &levels[1..], None);
    let d = branch_distance(&rf, &target);
    assert!(d < 1e-9, "branch distance {d}");
}

#[test]
fn deep_renormalization_matches_iteration() {
    let f = left_fs(8);
    let mut iterated = f.clone();
    for n in 1..=4 {
        iterated = renormalize(&iterated).unwrap();
        let direct = deep_renormalize(&f, n).unwrap();
        let d = branch_distance(&direct, &iterated);
        assert!(d < 1e-9, "n = {n}: branch distance {d}");
    }
    assert!(matches!(
        deep_renormalize(&f, 0).map(|g| g.depth),
        Ok(8)
    ));
}

#[test]
fn deep_renormalization_guards_depth_and_budget() {
    let f = left_fs(8);
    assert!(matches!(
        deep_renormalize(&f, 8).unwrap_err(),
        CoreError::DepthExhausted { need: 9, have: 8 }
    ));
    assert!(matches!(
        deep_renormalize(&f, 9).unwrap_err(),
        CoreError::BudgetExceeded { n: 9, max: _ }
    ));
}

#[test]
fn certification_passes_to_level_four() {
    let f = left_fs(8);
    let t = build_stationary_tower(Side::Left, C_STAR_L, 8).unwrap();
    let trivial = verify_infinite_renormalizability(&f, &t, 0, 1e-9).unwrap();
    assert!(trivial.pass);
    for n in 1..=4 {
        let cert = verify_infinite_renormalizability(&f, &t, n, 1e-9).unwrap();
        assert!(cert.pass, "level {n} failed");
        assert_eq!(cert.level, n);
        assert_eq!(cert.clauses.len(), 4);
        for cl in &cert.clauses {
            assert!(cl.pass, "level {n}, clause '{}': {}", cl.name, cl.detail);
        }
    }
}

#[test]
fn certification_rejects_corrupted_ratios() {
    // one percent error on the middle ratio: the walk still stays inside
    // branch domains, but the image and interpolation clauses must notice
    let mut level = stationary_level(Side::Left, C_STAR_L).unwrap();
    level.triple.s1 *= 1.01;
    let base = side_base(Side::Left, C_STAR_L);
    let f = assemble_fs(Side::Left, base, &vec![level; 8], Some(C_STAR_L));
    let t = build_stationary_tower(Side::Left, C_STAR_L, 8).unwrap();
    let cert = verify_infinite_renormalizability(&f, &t, 4, 1e-9).unwrap();
    assert!(!cert.pass);
    assert!(cert.clauses[0].pass, "the walk itself should still close");
    assert!(!cert.clauses[1].pass);
    assert!(!cert.clauses[2].pass);
    assert!(!cert.clauses[3].pass);
    // the defect is the size of the injected error, not roundoff
    assert!(cert.clauses[3].measured > 1e-5);
}

#[test]
fn residual_vanishes_only_at_the_fixed_point() {
    assert!(renorm_residual(Side::Left, C_STAR_L).unwrap() < 1e-10);
    assert!(renorm_residual(Side::Left, 0.198).unwrap() > 1e-4);
}
