//! Command implementations. Data commands return plain tables and always
//! exit 0; verification commands return report documents whose overall
//! verdict drives the exit code.

use anyhow::{bail, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use renormlab_core::extension::{
    iterate_extension, join_bimodal, plane_scaling, seed_segments, zoom_reproduction_sup,
    ExtensionGraph,
};
use renormlab_core::family::{check_admissible, Side};
use renormlab_core::report::{CheckRecord, VerificationReport};
use renormlab_core::scaling::{
    continuum_sweep, feasible_domain, find_fixed_point, gap_ratios, scaling_ratios,
    solve_fixed_point, stationary_level, ContinuumPoint, FixedPointResult, ScalingTriple,
    Stability,
};
use renormlab_core::shift::{
    build_b_alpha, joined_sup_distance, renormalize_extended, PolicyFamily, SymbolSequence,
    DEFAULT_AMPLITUDE_STEP,
};
use renormlab_core::tower::{
    assemble_fs, branch_distance, build_fs, build_stationary_tower, deep_renormalize, renormalize,
    side_base, verify_infinite_renormalizability, Interval,
};

use crate::config::{default_eps_list, RunConfig};
use crate::output::{Cell, Document};

/// Reference values the suite pins: fixed points to six digits and the
/// feasible component endpoints (outer lo, split, outer hi).
fn expected_c_star(side: Side) -> f64 {
    match side {
        Side::Left => 0.196693,
        Side::Right => 0.803307,
    }
}

fn expected_feasible(side: Side) -> [f64; 3] {
    match side {
        Side::Left => [0.188816, 0.194271, 0.199413],
        Side::Right => [0.800587, 0.805729, 0.811184],
    }
}

fn stability_label(s: Stability) -> &'static str {
    match s {
        Stability::Stable => "stable",
        Stability::Unstable => "unstable",
        Stability::Marginal => "marginal",
    }
}

// ---------------------------------------------------------------- ratios

pub fn cmd_ratios(cfg: &RunConfig, side: Side, lo: f64, hi: f64) -> Result<Document> {
    check_admissible(side, lo)?;
    check_admissible(side, hi)?;
    if lo > hi {
        bail!("empty parameter range [{lo}, {hi}]");
    }
    let grid = cfg.grid_ratios;
    let mut doc = Document::table("ratios", vec!["c", "s0", "s1", "s2", "g0", "g1", "sum"]);
    for i in 0..grid {
        let c = if grid == 1 {
            lo
        } else {
            lo + (hi - lo) * i as f64 / (grid - 1) as f64
        };
        let t = scaling_ratios(side, c);
        let g = gap_ratios(side, c);
        doc.push(vec![
            Cell::Num(c),
            Cell::Num(t.s0),
            Cell::Num(t.s1),
            Cell::Num(t.s2),
            Cell::Num(g.g0),
            Cell::Num(g.g1),
            Cell::Num(t.s0 + t.s1 + t.s2 + g.g0 + g.g1),
        ]);
    }
    Ok(doc)
}

// -------------------------------------------------------------- feasible

/// The components are open; bracket just inside before solving.
fn component_root(side: Side, lo: f64, hi: f64, tol: f64) -> Option<f64> {
    let inset = 1e-7 * (hi - lo);
    find_fixed_point(side, (lo + inset, hi - inset), tol)
        .ok()
        .map(|fp| fp.c_star)
}

pub fn cmd_feasible(cfg: &RunConfig, side: Side) -> Result<Document> {
    let dom = feasible_domain(side, cfg.grid_feasible, cfg.root_tol);
    let mut doc = Document::table(
        "feasible",
        vec!["side", "kind", "index", "lo", "hi", "note"],
    );
    for (i, &(lo, hi)) in dom.intervals.iter().enumerate() {
        let note = match component_root(side, lo, hi, cfg.root_tol) {
            Some(_) => "unique-fixed-point",
            None => "no-fixed-point",
        };
        doc.push(vec![
            Cell::Text(side.label().into()),
            Cell::Text("component".into()),
            Cell::Int(i as i64),
            Cell::Num(lo),
            Cell::Num(hi),
            Cell::Text(note.into()),
        ]);
    }
    for (i, &p) in dom.excluded_points.iter().enumerate() {
        doc.push(vec![
            Cell::Text(side.label().into()),
            Cell::Text("excluded".into()),
            Cell::Int(i as i64),
            Cell::Num(p),
            Cell::Num(p),
            Cell::Text("constraint-touch".into()),
        ]);
    }
    Ok(doc)
}

// ---------------------------------------------------------- fixed points

pub fn cmd_fixed_points(cfg: &RunConfig) -> Result<Document> {
    let mut rep = VerificationReport::new();
    let mut stars = Vec::new();
    for side in [Side::Left, Side::Right] {
        let lbl = side.label();
        let fp = solve_fixed_point(side, cfg.root_tol)?;
        let t = scaling_ratios(side, fp.c_star);
        rep.add(CheckRecord::close(
            &format!("{lbl}.c-star"),
            "scaling::solve_fixed_point",
            fp.c_star,
            expected_c_star(side),
            1e-6,
        ));
        rep.add(CheckRecord::below(
            &format!("{lbl}.residual"),
            "scaling::renorm_map",
            fp.residual,
            cfg.residual_tol,
        ));
        rep.add(CheckRecord::above(
            &format!("{lbl}.multiplier"),
            "scaling::multiplier",
            fp.multiplier.abs(),
            1.0,
        ));
        // s2 <= s1^2 with positive slack at the fixed point
        rep.add(CheckRecord::above(
            &format!("{lbl}.remark-inequality"),
            "scaling::scaling_ratios",
            t.s1 * t.s1 - t.s2,
            0.0,
        ));
        stars.push(fp.c_star);
    }
    rep.add(CheckRecord::below(
        "mirror.c-sum",
        "family::Side::mirror",
        (stars[0] + stars[1] - 1.0).abs(),
        1e-8,
    ));
    Ok(Document::from_report("fixed-points", &rep))
}

// ------------------------------------------------------------------ tower

pub fn cmd_tower(cfg: &RunConfig, side: Side) -> Result<Document> {
    let fp = solve_fixed_point(side, cfg.root_tol)?;
    let tw = build_stationary_tower(side, fp.c_star, cfg.tower_depth)?;
    let mut doc = Document::table("tower", vec!["side", "level", "label", "value"]);
    for (n, lv) in tw.levels.iter().enumerate() {
        let level = (n + 1) as i64;
        for (label, v) in [
            ("i0.lo", lv.i0.lo),
            ("i0.hi", lv.i0.hi),
            ("i1.lo", lv.i1.lo),
            ("i1.hi", lv.i1.hi),
            ("i2.lo", lv.i2.lo),
            ("i2.hi", lv.i2.hi),
            ("x", lv.x),
            ("y", lv.y),
            ("z", lv.z),
            ("w", lv.w),
        ] {
            doc.push(vec![
                Cell::Text(side.label().into()),
                Cell::Int(level),
                Cell::Text(label.into()),
                Cell::Num(v),
            ]);
        }
    }
    Ok(doc)
}

// ----------------------------------------------------------- renorm-check

fn fixed_point_identity_distance(cfg: &RunConfig, side: Side, depth: usize) -> Result<f64> {
    let fp = solve_fixed_point(side, cfg.root_tol)?;
    let t = scaling_ratios(side, fp.c_star);
    let f = build_fs(side, fp.c_star, t, depth, cfg.residual_tol)?;
    let g = build_fs(side, fp.c_star, t, depth - 1, cfg.residual_tol)?;
    Ok(branch_distance(&renormalize(&f)?, &g))
}

/// Distances for the 2-periodic lemma: one shift step, then deep operator
/// iterates against the direct n-step construction.
fn two_periodic_distances(cfg: &RunConfig, side: Side) -> Result<(f64, Vec<(usize, f64)>)> {
    let fp = solve_fixed_point(side, cfg.root_tol)?;
    // +-1e-3 keeps the alternating frames well inside the domain where the
    // iterated operator stays conditioned through four steps; at +-2e-3 the
    // right-side composition noise already crosses 1e-9.
    let a = stationary_level(side, fp.c_star - 1e-3)?;
    let b = stationary_level(side, fp.c_star + 1e-3)?;
    let base = side_base(side, fp.c_star);
    let levels = [a, b, a, b, a, b];
    let f = assemble_fs(side, base, &levels, None);
    let target = assemble_fs(side, base, &levels[1..], None);
    let shift_dist = branch_distance(&renormalize(&f)?, &target);
    let mut deep = Vec::new();
    let mut iterated = f.clone();
    for n in 1..=4 {
        iterated = renormalize(&iterated)?;
        deep.push((n, branch_distance(&deep_renormalize(&f, n)?, &iterated)));
    }
    Ok((shift_dist, deep))
}

pub fn cmd_renorm_check(cfg: &RunConfig) -> Result<Document> {
    if cfg.fs_depth < 2 {
        bail!("renorm-check needs fs_depth at least 2, got {}", cfg.fs_depth);
    }
    let mut rep = VerificationReport::new();
    for side in [Side::Left, Side::Right] {
        let lbl = side.label();
        rep.add(CheckRecord::below(
            &format!("{lbl}.fixed-point-identity"),
            "tower::renormalize",
            fixed_point_identity_distance(cfg, side, cfg.fs_depth)?,
            1e-9,
        ));
        let (shift_dist, deep) = two_periodic_distances(cfg, side)?;
        rep.add(CheckRecord::below(
            &format!("{lbl}.period-two-shift"),
            "tower::assemble_fs",
            shift_dist,
            1e-9,
        ));
        for (n, d) in deep {
            rep.add(CheckRecord::below(
                &format!("{lbl}.deep-agreement-n{n}"),
                "tower::deep_renormalize",
                d,
                1e-9,
            ));
        }
        let fp = solve_fixed_point(side, cfg.root_tol)?;
        let t = scaling_ratios(side, fp.c_star);
        let f = build_fs(side, fp.c_star, t, cfg.fs_depth, cfg.residual_tol)?;
        let tower = build_stationary_tower(side, fp.c_star, cfg.fs_depth)?;
        // Clause tolerances inside the certificate scale with the base
        // length; the coverage clause is a plain yes/no.
        let slack = 1e-9 * f.base.len();
        for n in 1..=4.min(cfg.fs_depth - 1) {
            let cert = verify_infinite_renormalizability(&f, &tower, n, 1e-9)?;
            for cl in &cert.clauses {
                let name = format!("{lbl}.certify-l{n}.{}", cl.name);
                let anchor = "tower::verify_infinite_renormalizability";
                if cl.name.starts_with("affine continuation") {
                    rep.add(CheckRecord::flag(&name, anchor, cl.pass));
                } else {
                    rep.add(CheckRecord {
                        name,
                        anchor: anchor.into(),
                        measured: cl.measured,
                        expected: 0.0,
                        tolerance: slack,
                        pass: cl.pass,
                    });
                }
            }
        }
    }
    Ok(Document::from_report("renorm-check", &rep))
}

// ----------------------------------------------------------------- extend

fn side_extension(
    cfg: &RunConfig,
    side: Side,
    depth: usize,
) -> Result<(FixedPointResult, ScalingTriple, ExtensionGraph)> {
    let fp = solve_fixed_point(side, cfg.root_tol)?;
    let t = scaling_ratios(side, fp.c_star);
    let f1 = build_fs(side, fp.c_star, t, 1, cfg.residual_tol)?;
    let seed = seed_segments(&f1)?;
    let s = plane_scaling(&f1)?;
    Ok((fp, t, iterate_extension(side, seed, s, depth)?))
}

pub fn cmd_extend(cfg: &RunConfig, side: Side) -> Result<Document> {
    let (_, _, g) = side_extension(cfg, side, cfg.extension_depth)?;
    let lbl = side.label();
    let mut doc = Document::table(
        "extend",
        vec!["side", "kind", "index", "lo", "hi", "c0", "c1", "c2", "c3"],
    );
    // generation k contributes segments 2k and 2k+1
    for (k, seg) in g.segments.iter().enumerate() {
        let generation = (k / 2) as i64;
        for piece in &seg.pieces {
            doc.push(vec![
                Cell::Text(lbl.into()),
                Cell::Text("piece".into()),
                Cell::Int(generation),
                Cell::Num(piece.lo),
                Cell::Num(piece.hi),
                Cell::Num(piece.c[0]),
                Cell::Num(piece.c[1]),
                Cell::Num(piece.c[2]),
                Cell::Num(piece.c[3]),
            ]);
        }
    }
    // junction rows carry (x, value) in lo/hi and the two slopes in c0/c1
    for (i, j) in g.junctions.iter().enumerate() {
        doc.push(vec![
            Cell::Text(lbl.into()),
            Cell::Text("junction".into()),
            Cell::Int(i as i64),
            Cell::Num(j.x),
            Cell::Num(j.value),
            Cell::Num(j.slope_in),
            Cell::Num(j.slope_out),
            Cell::Empty,
            Cell::Empty,
        ]);
    }
    for (k, lip) in g.lipschitz_ledger.iter().enumerate() {
        doc.push(vec![
            Cell::Text(lbl.into()),
            Cell::Text("ledger".into()),
            Cell::Int(k as i64),
            Cell::Empty,
            Cell::Empty,
            Cell::Num(*lip),
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
        ]);
    }
    for (k, sl) in g.generation_max_slopes().iter().enumerate() {
        doc.push(vec![
            Cell::Text(lbl.into()),
            Cell::Text("max-slope".into()),
            Cell::Int(k as i64),
            Cell::Empty,
            Cell::Empty,
            Cell::Num(*sl),
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
        ]);
    }
    Ok(doc)
}

// ------------------------------------------------------------ shift-check

/// Conjugacy and injectivity records for seeded random symbol sequences;
/// each anchor carries the sequence so runs are reproducible from output.
fn shift_report(cfg: &RunConfig, prefix: &str) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new();
    let length = cfg.shift_length;
    let pol = PolicyFamily::new(3, DEFAULT_AMPLITUDE_STEP)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut alphas = Vec::with_capacity(cfg.shift_count);
    for _ in 0..cfg.shift_count {
        let symbols: Vec<u8> = (0..length).map(|_| rng.gen_range(0..3u8)).collect();
        alphas.push(SymbolSequence::new(symbols, 3)?);
    }
    let mut built = Vec::with_capacity(alphas.len());
    for (i, alpha) in alphas.iter().enumerate() {
        let word: String = alpha.symbols().iter().map(|s| char::from(b'0' + s)).collect();
        let b = build_b_alpha(alpha, &pol, length)?;
        let rb = renormalize_extended(&b)?;
        let target = build_b_alpha(&alpha.shift()?, &pol, length - 1)?;
        let d = joined_sup_distance(&rb, &target, 32)?;
        rep.add(CheckRecord::below(
            &format!("{prefix}alpha-{i:02}.conjugacy"),
            &format!("shift::renormalize_extended alpha={word}"),
            d,
            1e-9,
        ));
        built.push(b);
    }
    // distinct prefixes must stay separated; equal draws legitimately
    // coincide and are skipped
    let probe_n = built.len().min(10);
    let mut min_sep = f64::INFINITY;
    let mut pairs = 0usize;
    for i in 0..probe_n {
        for j in (i + 1)..probe_n {
            if alphas[i].symbols() == alphas[j].symbols() {
                continue;
            }
            min_sep = min_sep.min(joined_sup_distance(&built[i], &built[j], 32)?);
            pairs += 1;
        }
    }
    if pairs > 0 {
        rep.add(CheckRecord::above(
            &format!("{prefix}injectivity.min-pairwise"),
            &format!("shift::injectivity_probe pairs={pairs}"),
            min_sep,
            0.0,
        ));
    }
    // a wider alphabet embeds the same way
    let pol5 = PolicyFamily::new(5, DEFAULT_AMPLITUDE_STEP)?;
    let a5 = SymbolSequence::new(vec![4, 3, 0, 2, 4], 5)?;
    let b5 = build_b_alpha(&a5, &pol5, 5)?;
    let rb5 = renormalize_extended(&b5)?;
    let t5 = build_b_alpha(&a5.shift()?, &pol5, 4)?;
    rep.add(CheckRecord::below(
        &format!("{prefix}alphabet-5.conjugacy"),
        "shift::PolicyFamily alpha=43024",
        joined_sup_distance(&rb5, &t5, 32)?,
        1e-9,
    ));
    Ok(rep)
}

pub fn cmd_shift_check(cfg: &RunConfig) -> Result<Document> {
    Ok(Document::from_report("shift-check", &shift_report(cfg, "")?))
}

// ---------------------------------------------------------------- perturb

pub fn cmd_perturb(cfg: &RunConfig, sides: &[Side], eps: &[f64]) -> Result<Document> {
    let mut doc = Document::table(
        "perturb",
        vec![
            "side",
            "epsilon",
            "c_star",
            "s0",
            "s1",
            "s2",
            "multiplier",
            "stability",
            "note",
        ],
    );
    for &side in sides {
        let recs = continuum_sweep(side, eps, cfg.bracket_radius, cfg.root_tol, cfg.eps_window());
        for r in recs {
            match r.point {
                Some(p) => doc.push(vec![
                    Cell::Text(side.label().into()),
                    Cell::Num(r.epsilon),
                    Cell::Num(p.c_star),
                    Cell::Num(p.triple.s0),
                    Cell::Num(p.triple.s1),
                    Cell::Num(p.triple.s2),
                    Cell::Num(p.multiplier),
                    Cell::Text(stability_label(p.stability).into()),
                    Cell::Empty,
                ]),
                None => doc.push(vec![
                    Cell::Text(side.label().into()),
                    Cell::Num(r.epsilon),
                    Cell::Empty,
                    Cell::Empty,
                    Cell::Empty,
                    Cell::Empty,
                    Cell::Empty,
                    Cell::Text("absent".into()),
                    Cell::Text(r.failure.unwrap_or_default()),
                ]),
            }
        }
    }
    Ok(doc)
}

// -------------------------------------------------------------------- all

fn criterion_feasible(cfg: &RunConfig, rep: &mut VerificationReport) {
    let anchor = "scaling::feasible_domain";
    for side in [Side::Left, Side::Right] {
        let lbl = side.label();
        let exp = expected_feasible(side);
        let dom = feasible_domain(side, cfg.grid_feasible, cfg.root_tol);
        let two = dom.intervals.len() == 2;
        rep.add(CheckRecord::flag(
            &format!("c3.{lbl}-two-components"),
            anchor,
            two,
        ));
        if !two {
            continue;
        }
        let (a0, b0) = dom.intervals[0];
        let (a1, b1) = dom.intervals[1];
        rep.add(CheckRecord::close(&format!("c3.{lbl}-endpoint-lo"), anchor, a0, exp[0], 1e-6));
        rep.add(CheckRecord::close(&format!("c3.{lbl}-split-hi"), anchor, b0, exp[1], 1e-6));
        rep.add(CheckRecord::close(&format!("c3.{lbl}-split-lo"), anchor, a1, exp[1], 1e-6));
        rep.add(CheckRecord::close(&format!("c3.{lbl}-endpoint-hi"), anchor, b1, exp[2], 1e-6));
        // one component carries the unique fixed point, the other none;
        // which one flips with the side
        let roots = [
            component_root(side, a0, b0, cfg.root_tol),
            component_root(side, a1, b1, cfg.root_tol),
        ];
        let (none_idx, unique_idx) = match side {
            Side::Left => (0, 1),
            Side::Right => (1, 0),
        };
        rep.add(CheckRecord::flag(
            &format!("c3.{lbl}-component-{}-no-fixed-point", none_idx + 1),
            anchor,
            roots[none_idx].is_none(),
        ));
        rep.add(CheckRecord::flag(
            &format!("c3.{lbl}-component-{}-unique-fixed-point", unique_idx + 1),
            anchor,
            roots[unique_idx].is_some(),
        ));
    }
}

fn criterion_tower(cfg: &RunConfig, rep: &mut VerificationReport) -> Result<()> {
    let anchor = "tower::build_stationary_tower";
    let fp = solve_fixed_point(Side::Left, cfg.root_tol)?;
    let t = scaling_ratios(Side::Left, fp.c_star);
    let g = gap_ratios(Side::Left, fp.c_star);
    let depth = cfg.tower_depth.max(10);
    let tw = build_stationary_tower(Side::Left, fp.c_star, depth)?;

    // frame order flips with level parity (the middle branch reverses
    // orientation)
    let mut disjoint = true;
    let mut nested = true;
    for n in 1..=depth {
        let lv = tw.level(n);
        if n % 2 == 1 {
            disjoint &= lv.i2.hi < lv.i1.lo && lv.i1.hi < lv.i0.lo;
        } else {
            disjoint &= lv.i0.hi < lv.i1.lo && lv.i1.hi < lv.i2.lo;
        }
        if n > 1 {
            let hull = Interval::new(
                lv.i2.lo.min(lv.i0.lo).min(lv.i1.lo),
                lv.i2.hi.max(lv.i0.hi).max(lv.i1.hi),
            );
            nested &= tw.level(n - 1).i1.contains_interval(&hull, 1e-12);
        }
    }
    rep.add(CheckRecord::flag("c7.disjoint-levels", anchor, disjoint));
    rep.add(CheckRecord::flag("c7.nested-levels", anchor, nested));

    // ratio checks stay at the depths where dividing out s1^n keeps full
    // precision; the deep geometry is pinned by the level-10 endpoints below
    let mut worst_len = 0.0_f64;
    let mut worst_gap = 0.0_f64;
    for n in 1..=6 {
        let lv = tw.level(n);
        let scale = t.s1.powi(n as i32 - 1) * tw.base.len();
        worst_len = worst_len.max((lv.i1.len() / scale - t.s1).abs());
        let gap0 = (lv.i0.lo - lv.i1.hi).max(lv.i1.lo - lv.i0.hi);
        let gap1 = (lv.i1.lo - lv.i2.hi).max(lv.i2.lo - lv.i1.hi);
        worst_gap = worst_gap.max((gap0 / scale - g.g0).abs());
        worst_gap = worst_gap.max((gap1 / scale - g.g1).abs());
    }
    rep.add(CheckRecord::below("c7.middle-length-ratio", anchor, worst_len, 1e-10));
    rep.add(CheckRecord::below("c7.gap-ratios", anchor, worst_gap, 1e-10));

    let lv10 = tw.level(10);
    let bound = t.s1.powi(10) * tw.base.len() * (1.0 + 1e-6);
    let d = (lv10.i1.lo - fp.c_star)
        .abs()
        .max((lv10.i1.hi - fp.c_star).abs());
    rep.add(CheckRecord::below("c7.level-10-endpoints", anchor, d, bound));
    rep.add(CheckRecord::flag(
        "c7.level-10-contains-c-star",
        anchor,
        lv10.i1.contains(fp.c_star),
    ));
    Ok(())
}

fn criterion_extension(cfg: &RunConfig, rep: &mut VerificationReport) -> Result<()> {
    let depth = cfg.extension_depth.max(12);
    let mut graphs = Vec::new();
    for side in [Side::Left, Side::Right] {
        let lbl = side.label();
        let (fp, t, gph) = side_extension(cfg, side, depth)?;
        let rho = t.s2 / (t.s1 * t.s1);

        let mism = gph
            .junctions
            .iter()
            .map(|j| (j.slope_in - j.slope_out).abs())
            .fold(0.0_f64, f64::max);
        rep.add(CheckRecord::below(
            &format!("c8.{lbl}-junction-mismatch"),
            "extension::iterate_extension",
            mism,
            cfg.slope_tol,
        ));

        let ledger = &gph.lipschitz_ledger;
        let mono = ledger.windows(2).all(|w| w[1] <= w[0]);
        rep.add(CheckRecord::flag(
            &format!("c8.{lbl}-ledger-monotone"),
            "extension::ExtensionGraph",
            mono,
        ));
        // per-generation coefficients scale like s2^k / s1^(3k), so the
        // quotient drifts once k outruns the double-precision budget
        let mut early = 0.0_f64;
        let mut late = 0.0_f64;
        for k in 1..ledger.len() {
            let dev = (ledger[k] / ledger[k - 1] - rho).abs();
            if k < 8 {
                early = early.max(dev);
            } else {
                late = late.max(dev);
            }
        }
        rep.add(CheckRecord::below(
            &format!("c8.{lbl}-ledger-ratio"),
            "extension::ExtensionGraph",
            early,
            2e-9,
        ));
        rep.add(CheckRecord::below(
            &format!("c8.{lbl}-ledger-ratio-deep"),
            "extension::ExtensionGraph",
            late,
            1e-6,
        ));

        let slopes = gph.generation_max_slopes();
        let tail_mono = slopes
            .windows(2)
            .enumerate()
            .all(|(k, w)| k < 4 || w[1] < w[0]);
        rep.add(CheckRecord::flag(
            &format!("c8.{lbl}-slopes-monotone-past-4"),
            "extension::ExtensionGraph::generation_max_slopes",
            tail_mono,
        ));
        rep.add(CheckRecord::below(
            &format!("c8.{lbl}-deep-slope"),
            "extension::ExtensionGraph::generation_max_slopes",
            *slopes.last().expect("nonempty by construction"),
            1e-6,
        ));

        // the graph must reproduce the affine assembly on its branch domains
        let f8 = build_fs(side, fp.c_star, t, 8, cfg.residual_tol)?;
        let mut worst = 0.0_f64;
        for br in &f8.branches {
            for i in 0..=16 {
                let x = br.domain.lo + br.domain.len() * i as f64 / 16.0;
                worst = worst.max((gph.eval(x)? - br.map.eval(x)).abs());
            }
        }
        rep.add(CheckRecord::below(
            &format!("c8.{lbl}-matches-affine-model"),
            "extension::ExtensionGraph::eval",
            worst,
            1e-12,
        ));

        rep.add(CheckRecord::below(
            &format!("c8.{lbl}-zoom-reproduction"),
            "extension::zoom_reproduction_sup",
            zoom_reproduction_sup(&gph, cfg.grid_shape)?,
            1e-9,
        ));
        graphs.push(gph);
    }
    let gr = graphs.pop().expect("two sides pushed");
    let gl = graphs.pop().expect("two sides pushed");
    let joined = join_bimodal(gl, gr, cfg.grid_shape)?;
    let rj = renormalize_extended(&joined)?;
    rep.add(CheckRecord::below(
        "c8.joined-self-reproduction",
        "shift::renormalize_extended",
        joined_sup_distance(&rj, &joined, 64)?,
        1e-9,
    ));
    Ok(())
}

fn criterion_perturb(cfg: &RunConfig, rep: &mut VerificationReport) -> Result<()> {
    let eps = default_eps_list();
    for side in [Side::Left, Side::Right] {
        let lbl = side.label();
        let fp = solve_fixed_point(side, cfg.root_tol)?;
        let recs = continuum_sweep(side, &eps, cfg.bracket_radius, cfg.root_tol, cfg.eps_window());
        for r in &recs {
            let found_unstable = r
                .point
                .as_ref()
                .is_some_and(|p| matches!(p.stability, Stability::Unstable));
            rep.add(CheckRecord::flag(
                &format!("c10.{lbl}-root-eps-{:.2}", r.epsilon),
                "scaling::find_perturbed_fixed_point",
                found_unstable,
            ));
        }
        let point_at = |e: f64| -> Option<&ContinuumPoint> {
            recs.iter()
                .find(|r| r.epsilon == e)
                .and_then(|r| r.point.as_ref())
        };
        // The sweep brackets the root differently from solve_fixed_point,
        // so the two solves agree to root_tol, not to the last bit.
        match point_at(1.0) {
            Some(p) => rep.add(CheckRecord::below(
                &format!("c10.{lbl}-eps-1-agrees"),
                "scaling::continuum_sweep",
                (p.c_star - fp.c_star).abs(),
                cfg.root_tol,
            )),
            None => rep.add(CheckRecord::flag(
                &format!("c10.{lbl}-eps-1-agrees"),
                "scaling::continuum_sweep",
                false,
            )),
        }
        match (point_at(0.99), point_at(1.01)) {
            (Some(a), Some(b)) => {
                let d = (a.triple.s0 - b.triple.s0)
                    .abs()
                    .min((a.triple.s1 - b.triple.s1).abs())
                    .min((a.triple.s2 - b.triple.s2).abs());
                rep.add(CheckRecord::above(
                    &format!("c10.{lbl}-nonrigidity"),
                    "scaling::perturbed_ratios",
                    d,
                    1e-6,
                ));
            }
            _ => rep.add(CheckRecord::flag(
                &format!("c10.{lbl}-nonrigidity"),
                "scaling::perturbed_ratios",
                false,
            )),
        }
    }
    Ok(())
}

/// The whole verification suite. Every record is a deterministic function
/// of the configuration, so two runs with equal configs emit equal bytes.
pub fn cmd_all(cfg: &RunConfig) -> Result<Document> {
    let mut rep = VerificationReport::new();

    // c1, c2, c4: the two fixed points, instability, the simplex inequality
    let l = solve_fixed_point(Side::Left, cfg.root_tol)?;
    let r = solve_fixed_point(Side::Right, cfg.root_tol)?;
    rep.add(CheckRecord::close(
        "c1.left-c-star",
        "scaling::solve_fixed_point",
        l.c_star,
        expected_c_star(Side::Left),
        1e-6,
    ));
    rep.add(CheckRecord::below(
        "c1.left-residual",
        "scaling::renorm_map",
        l.residual,
        1e-10,
    ));
    rep.add(CheckRecord::above(
        "c1.left-multiplier",
        "scaling::multiplier",
        l.multiplier.abs(),
        1.0,
    ));
    rep.add(CheckRecord::close(
        "c2.right-c-star",
        "scaling::solve_fixed_point",
        r.c_star,
        expected_c_star(Side::Right),
        1e-6,
    ));
    rep.add(CheckRecord::below(
        "c2.mirror-sum",
        "scaling::solve_fixed_point",
        (l.c_star + r.c_star - 1.0).abs(),
        1e-8,
    ));
    let tl = scaling_ratios(Side::Left, l.c_star);
    let tr = scaling_ratios(Side::Right, r.c_star);
    rep.add(CheckRecord::above(
        "c4.left-remark-slack",
        "scaling::scaling_ratios",
        tl.s1 * tl.s1 - tl.s2,
        0.0,
    ));
    rep.add(CheckRecord::above(
        "c4.right-remark-slack",
        "scaling::scaling_ratios",
        tr.s1 * tr.s1 - tr.s2,
        0.0,
    ));

    criterion_feasible(cfg, &mut rep); // c3

    // c5: operator fixed point at depth 8; c6: 2-periodic lemma suite
    rep.add(CheckRecord::below(
        "c5.fixed-point-identity",
        "tower::renormalize",
        fixed_point_identity_distance(cfg, Side::Left, 8)?,
        1e-9,
    ));
    let (shift_dist, deep) = two_periodic_distances(cfg, Side::Left)?;
    rep.add(CheckRecord::below(
        "c6.period-two-shift",
        "tower::assemble_fs",
        shift_dist,
        1e-9,
    ));
    for (n, d) in deep {
        rep.add(CheckRecord::below(
            &format!("c6.deep-agreement-n{n}"),
            "tower::deep_renormalize",
            d,
            1e-9,
        ));
    }

    criterion_tower(cfg, &mut rep)?; // c7
    criterion_extension(cfg, &mut rep)?; // c8
    rep.merge(shift_report(cfg, "c9.")?); // c9
    criterion_perturb(cfg, &mut rep)?; // c10

    // byte-determinism cannot be observed from inside one run; it is
    // verified externally by diffing two invocations
    rep.add(CheckRecord::flag(
        "c11.suite-completed",
        "cli::cmd_all",
        true,
    ));

    Ok(Document::from_report("all", &rep))
}
