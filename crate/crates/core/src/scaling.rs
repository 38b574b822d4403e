//! Scaling ratios, gap ratios, the induced parameter map R(c), feasible
//! domains, fixed points, and the one-parameter perturbation of the deepest
//! orbit point.

use crate::error::{CoreError, Result};
use crate::family::{branch_value, check_admissible, critical_orbit, Side};

/// Finite-difference step for the multiplier R'(c*).
pub const MULTIPLIER_STEP: f64 = 1e-6;

/// Default half-width of the solver bracket around the unperturbed fixed
/// point.
pub const DEFAULT_BRACKET_RADIUS: f64 = 0.004;

/// Default window of admissible perturbation factors.
pub const DEFAULT_EPS_WINDOW: (f64, f64) = (0.98, 1.02);

/// Default properness margin: required distance of a triple to the boundary
/// of the open simplex.
pub const DEFAULT_PROPER_MARGIN: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingTriple {
    pub s0: f64,
    pub s1: f64,
    pub s2: f64,
}

impl ScalingTriple {
    pub fn sum(&self) -> f64 {
        self.s0 + self.s1 + self.s2
    }

    pub fn in_simplex(&self) -> bool {
        self.s0 > 0.0 && self.s1 > 0.0 && self.s2 > 0.0 && self.sum() < 1.0
    }

    /// Distance to the simplex boundary: min of the coordinates and the
    /// defect 1 - sum.
    pub fn simplex_margin(&self) -> f64 {
        self.s0.min(self.s1).min(self.s2).min(1.0 - self.sum())
    }

    pub fn is_proper(&self, margin: f64) -> bool {
        self.simplex_margin() >= margin
    }

    pub fn max_abs_diff(&self, other: &ScalingTriple) -> f64 {
        (self.s0 - other.s0)
            .abs()
            .max((self.s1 - other.s1).abs())
            .max((self.s2 - other.s2).abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapPair {
    pub g0: f64,
    pub g1: f64,
}

/// Triple and gaps of one tower level; the five ratios of a proper level
/// partition the unit length: s0 + g0 + s1 + g1 + s2 = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingLevel {
    pub triple: ScalingTriple,
    pub gaps: GapPair,
}

fn orbit_ratios(side: Side, c: f64) -> (ScalingTriple, GapPair) {
    let b = critical_orbit(side, c, 5);
    match side {
        Side::Left => {
            let b1 = b[0];
            assert!(b1 != 0.0, "b_c(0) = 0 off the admissible domain");
            (
                ScalingTriple {
                    s0: (b1 - b[3]) / b1,
                    s1: (b[1] - b[4]) / b1,
                    s2: b[2] / b1,
                },
                GapPair {
                    g0: (b[3] - b[1]) / b1,
                    g1: (b[4] - b[2]) / b1,
                },
            )
        }
        Side::Right => {
            let d = 1.0 - b[0];
            assert!(d != 0.0, "1 - b~_c(1) = 0 off the admissible domain");
            (
                ScalingTriple {
                    s0: (b[3] - b[0]) / d,
                    s1: (b[4] - b[1]) / d,
                    s2: (1.0 - b[2]) / d,
                },
                GapPair {
                    g0: (b[1] - b[3]) / d,
                    g1: (b[2] - b[4]) / d,
                },
            )
        }
    }
}

/// Raw scaling triple at `c`. No simplex membership is enforced here: the
/// feasible-domain scan needs to observe the sign changes.
pub fn scaling_ratios(side: Side, c: f64) -> ScalingTriple {
    orbit_ratios(side, c).0
}

/// Raw gap pair at `c`; signs not enforced (see `scaling_ratios`).
pub fn gap_ratios(side: Side, c: f64) -> GapPair {
    orbit_ratios(side, c).1
}

pub fn scaling_level(side: Side, c: f64) -> ScalingLevel {
    let (triple, gaps) = orbit_ratios(side, c);
    ScalingLevel { triple, gaps }
}

/// The induced parameter map R(c).
pub fn renorm_map(side: Side, c: f64) -> Result<f64> {
    let b = critical_orbit(side, c, 5);
    match side {
        Side::Left => {
            let b1 = b[0];
            let s1 = (b[1] - b[4]) / b1;
            if s1 == 0.0 || !s1.is_finite() {
                return Err(CoreError::DegenerateRatio { c, s1 });
            }
            Ok((b[1] - c) / s1)
        }
        Side::Right => {
            let d = 1.0 - b[0];
            let s1 = (b[4] - b[1]) / d;
            if s1 == 0.0 || !s1.is_finite() {
                return Err(CoreError::DegenerateRatio { c, s1 });
            }
            Ok(1.0 - (c - b[1]) / s1)
        }
    }
}

pub const CONSTRAINT_NAMES: [&str; 5] = ["s0", "s1", "s2", "g0", "g1"];

/// The five sign constraints defining the feasible domain, in the order of
/// `CONSTRAINT_NAMES`.
pub fn constraint_values(side: Side, c: f64) -> [f64; 5] {
    let (t, g) = orbit_ratios(side, c);
    [t.s0, t.s1, t.s2, g.g0, g.g1]
}

/// Names of the constraints vanishing at `c` to within `atol`.
pub fn active_constraints_at(side: Side, c: f64, atol: f64) -> Vec<&'static str> {
    constraint_values(side, c)
        .iter()
        .zip(CONSTRAINT_NAMES.iter())
        .filter(|(v, _)| v.abs() <= atol)
        .map(|(_, n)| *n)
        .collect()
}

#[derive(Debug, Clone)]
pub struct FeasibleDomain {
    pub side: Side,
    /// Maximal open intervals on which all five constraints are positive.
    pub intervals: Vec<(f64, f64)>,
    /// Interior parameters where a constraint touches zero without changing
    /// sign; these split what would otherwise be one component.
    pub excluded_points: Vec<f64>,
}

fn min_constraint(side: Side, c: f64) -> f64 {
    constraint_values(side, c)
        .into_iter()
        .fold(f64::INFINITY, f64::min)
}

/// Bisect `f` for a sign change between lo and hi (either orientation);
/// f(lo) and f(hi) must have opposite (non-zero) signs.
fn bisect(mut f: impl FnMut(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..200 {
        if (hi - lo).abs() <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Ternary search for the minimizer of `f` on [lo, hi] (f unimodal there).
fn ternary_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    while hi - lo > tol {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if f(m1) <= f(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let c = 0.5 * (lo + hi);
    (c, f(c))
}

/// Scan the admissible interval for the feasible domain.
///
/// Outer boundaries are sign changes of some constraint and are refined by
/// bisection on the pointwise minimum of the five constraints. A constraint
/// can also touch zero at an interior point with no sign change; such points
/// are found by local-minimum detection on the grid, refined by ternary
/// search, and reported in `excluded_points`.
pub fn feasible_domain(side: Side, grid: usize, refine_tol: f64) -> FeasibleDomain {
    assert!(grid >= 1000, "grid too coarse for boundary detection");
    let (wlo, whi) = side.admissible_interval();
    let step = (whi - wlo) / (grid as f64 + 1.0);
    let cs: Vec<f64> = (1..=grid).map(|i| wlo + step * i as f64).collect();
    let vals: Vec<[f64; 5]> = cs.iter().map(|&c| constraint_values(side, c)).collect();
    let feas: Vec<bool> = vals.iter().map(|v| v.iter().all(|&q| q > 0.0)).collect();

    // Maximal feasible runs, refined at their edges.
    let mut intervals: Vec<(f64, f64)> = Vec::new();
    let mut i = 0;
    while i < grid {
        if !feas[i] {
            i += 1;
            continue;
        }
        let start = i;
        while i < grid && feas[i] {
            i += 1;
        }
        let end = i - 1; // inclusive
        let m = |c: f64| min_constraint(side, c);
        let lo = if start == 0 {
            cs[0]
        } else {
            bisect(m, cs[start - 1], cs[start], refine_tol)
        };
        let hi = if end == grid - 1 {
            cs[grid - 1]
        } else {
            bisect(m, cs[end + 1], cs[end], refine_tol)
        };
        intervals.push((lo, hi));
    }

    // Interior tangencies: strict local minima of a single constraint that
    // dip below the detection threshold inside a feasible run.
    const DETECT: f64 = 1e-3;
    const TOUCH_TOL: f64 = 1e-7;
    let mut excluded: Vec<f64> = Vec::new();
    #[allow(clippy::needless_range_loop)]
    for k in 0..5 {
        for j in 1..grid - 1 {
            if !(feas[j - 1] && feas[j] && feas[j + 1]) {
                continue;
            }
            let (a, b, c) = (vals[j - 1][k], vals[j][k], vals[j + 1][k]);
            if b < a && b < c && b < DETECT {
                let f = |x: f64| constraint_values(side, x)[k];
                let (cmin, vmin) = ternary_min(f, cs[j - 1], cs[j + 1], 1e-13);
                if vmin.abs() <= TOUCH_TOL && !excluded.iter().any(|&e| (e - cmin).abs() < 1e-9) {
                    excluded.push(cmin);
                }
            }
        }
    }
    excluded.sort_by(|a, b| a.partial_cmp(b).unwrap());

    // Split the intervals at the excluded points.
    let mut split: Vec<(f64, f64)> = Vec::new();
    for (lo, hi) in intervals {
        let mut cur = lo;
        for &e in excluded.iter().filter(|&&e| e > lo && e < hi) {
            split.push((cur, e));
            cur = e;
        }
        split.push((cur, hi));
    }

    FeasibleDomain {
        side,
        intervals: split,
        excluded_points: excluded,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stability {
    Unstable,
    Stable,
    Marginal,
}

#[derive(Debug, Clone, Copy)]
pub struct FixedPointResult {
    pub c_star: f64,
    pub residual: f64,
    pub multiplier: f64,
    pub stability: Stability,
}

fn classify(multiplier: f64) -> Stability {
    if multiplier.abs() > 1.0 + 1e-6 {
        Stability::Unstable
    } else if multiplier.abs() < 1.0 - 1e-6 {
        Stability::Stable
    } else {
        Stability::Marginal
    }
}

/// Central-difference derivative of R at `c`.
pub fn multiplier(side: Side, c: f64) -> Result<f64> {
    let h = MULTIPLIER_STEP;
    Ok((renorm_map(side, c + h)? - renorm_map(side, c - h)?) / (2.0 * h))
}

fn polish_and_report(
    side: Side,
    phi: impl Fn(f64) -> Result<f64>,
    mult: impl Fn(f64) -> Result<f64>,
    seed: f64,
    step: f64,
) -> Result<FixedPointResult> {
    // Secant polish from the bisection output; R is smooth near the root.
    let mut x0 = seed - step;
    let mut x1 = seed;
    let mut f0 = phi(x0)?;
    let mut f1 = phi(x1)?;
    for _ in 0..12 {
        if f1 == 0.0 || (f1 - f0).abs() < 1e-300 {
            break;
        }
        let x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        if !x2.is_finite() {
            break;
        }
        let f2 = phi(x2)?;
        if f2.abs() >= f1.abs() {
            break;
        }
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f2;
    }
    let m = mult(x1)?;
    let _ = side;
    Ok(FixedPointResult {
        c_star: x1,
        residual: f1.abs(),
        multiplier: m,
        stability: classify(m),
    })
}

/// Bracketed solve of R(c) = c by bisection with a secant polish.
///
/// Returns `NoSignChange` when R(c) - c has constant sign on the bracket;
/// this is the expected outcome on the component of the feasible domain that
/// carries no fixed point.
pub fn find_fixed_point(side: Side, bracket: (f64, f64), tol: f64) -> Result<FixedPointResult> {
    let (lo, hi) = bracket;
    if lo.is_nan() || hi.is_nan() || lo >= hi {
        return Err(CoreError::BadRange(format!("bracket [{lo}, {hi}]")));
    }
    // A component endpoint can sit exactly on a constraint touch, where s1
    // degenerates and the sign of R - c is noise; probe just inside.
    let nudge = (hi - lo) * 1e-6;
    let (plo, phi_end) = (lo + nudge, hi - nudge);
    let phi = |c: f64| renorm_map(side, c).map(|r| r - c);
    let flo = phi(plo)?;
    let fhi = phi(phi_end)?;
    if (flo > 0.0) == (fhi > 0.0) {
        return Err(CoreError::NoSignChange { lo, hi });
    }
    let root = bisect(|c| phi(c).unwrap_or(f64::NAN), plo, phi_end, tol.max(1e-15));
    polish_and_report(
        side,
        phi,
        |c| multiplier(side, c),
        root,
        (hi - lo) * 1e-6,
    )
}

/// Perturbed scaling triple: the factor `eps` multiplies the fourth orbit
/// point before the fifth is computed, so only s0 and s1 feel it.
pub fn perturbed_ratios(
    side: Side,
    c: f64,
    eps: f64,
    window: (f64, f64),
) -> Result<ScalingTriple> {
    if eps < window.0 || eps > window.1 {
        return Err(CoreError::EpsilonOutsideWindow {
            eps,
            lo: window.0,
            hi: window.1,
        });
    }
    let b = critical_orbit(side, c, 4);
    match side {
        Side::Left => {
            let b1 = b[0];
            let b4e = eps * b[3];
            let b5e = branch_value(side, c, b4e);
            Ok(ScalingTriple {
                s0: (b1 - b4e) / b1,
                s1: (b[1] - b5e) / b1,
                s2: b[2] / b1,
            })
        }
        Side::Right => {
            let d = 1.0 - b[0];
            let b4e = eps * b[3];
            let b5e = branch_value(side, c, b4e);
            Ok(ScalingTriple {
                s0: (b4e - b[0]) / d,
                s1: (b5e - b[1]) / d,
                s2: (1.0 - b[2]) / d,
            })
        }
    }
}

/// Perturbed parameter map R(c, eps).
pub fn perturbed_renorm_map(side: Side, c: f64, eps: f64, window: (f64, f64)) -> Result<f64> {
    let t = perturbed_ratios(side, c, eps, window)?;
    if t.s1 == 0.0 || !t.s1.is_finite() {
        return Err(CoreError::DegenerateRatio { c, s1: t.s1 });
    }
    let b = critical_orbit(side, c, 2);
    match side {
        Side::Left => Ok((b[1] - c) / t.s1),
        Side::Right => Ok(1.0 - (c - b[1]) / t.s1),
    }
}

/// Grid-scan roots of `phi` on [lo, hi]. Each sign-change cell is bisected;
/// candidates are accepted only if the residual is small, which rejects the
/// pseudo-roots produced by a pole crossing inside a cell (the map R has a
/// simple pole where s1 has a double zero).
fn scan_roots(phi: &dyn Fn(f64) -> Option<f64>, lo: f64, hi: f64, cells: usize) -> Vec<f64> {
    const RESIDUAL_ACCEPT: f64 = 1e-6;
    let mut roots = Vec::new();
    let step = (hi - lo) / cells as f64;
    let mut prev: Option<(f64, f64)> = None;
    for i in 0..=cells {
        let c = lo + step * i as f64;
        let v = phi(c).filter(|v| v.is_finite());
        if let (Some((pc, pv)), Some(v)) = (prev, v) {
            if (pv > 0.0) != (v > 0.0) {
                let r = bisect(|x| phi(x).unwrap_or(f64::NAN), pc, c, 1e-14);
                if let Some(res) = phi(r) {
                    if res.abs() <= RESIDUAL_ACCEPT {
                        roots.push(r);
                    }
                }
            }
        }
        prev = v.map(|v| (c, v));
    }
    roots
}

/// Unperturbed fixed point found without a caller-supplied bracket: scan the
/// whole admissible interval and keep the genuine root (pole-rejected).
/// R(c) = c has parasitic solutions outside the feasible domain; the fixed
/// point of interest is the one whose ratios form a proper level, so roots
/// with any nonpositive constraint are discarded.
pub fn solve_fixed_point(side: Side, tol: f64) -> Result<FixedPointResult> {
    let (wlo, whi) = side.admissible_interval();
    let margin = (whi - wlo) * 1e-4;
    let phi = |c: f64| renorm_map(side, c).ok().map(|r| r - c);
    let roots = scan_roots(&phi, wlo + margin, whi - margin, 4096);
    let root = roots
        .into_iter()
        .find(|&r| constraint_values(side, r).iter().all(|&v| v > 0.0))
        .ok_or(CoreError::NoSignChange { lo: wlo, hi: whi })?;
    find_fixed_point(side, (root - tol.max(1e-9) - 1e-7, root + tol.max(1e-9) + 1e-7), tol)
}

/// Fixed point of the perturbed map, bracketed around the unperturbed c*
/// with the given radius. Pole pseudo-roots are rejected; among genuine
/// roots the one closest to the unperturbed c* is returned.
pub fn find_perturbed_fixed_point(
    side: Side,
    eps: f64,
    radius: f64,
    tol: f64,
    window: (f64, f64),
) -> Result<FixedPointResult> {
    let center = solve_fixed_point(side, tol)?.c_star;
    let (wlo, whi) = side.admissible_interval();
    let lo = (center - radius).max(wlo + (whi - wlo) * 1e-6);
    let hi = (center + radius).min(whi - (whi - wlo) * 1e-6);
    let phi = |c: f64| perturbed_renorm_map(side, c, eps, window).ok().map(|r| r - c);
    let roots = scan_roots(&phi, lo, hi, 512);
    let root = roots
        .into_iter()
        .min_by(|a, b| {
            (a - center)
                .abs()
                .partial_cmp(&(b - center).abs())
                .unwrap()
        })
        .ok_or(CoreError::NoSignChange { lo, hi })?;
    let phi_res = |c: f64| perturbed_renorm_map(side, c, eps, window).map(|r| r - c);
    let h = MULTIPLIER_STEP;
    let mult = |c: f64| -> Result<f64> {
        Ok((perturbed_renorm_map(side, c + h, eps, window)?
            - perturbed_renorm_map(side, c - h, eps, window)?)
            / (2.0 * h))
    };
    polish_and_report(side, phi_res, mult, root, radius * 1e-6)
}

#[derive(Debug, Clone, Copy)]
pub struct ContinuumPoint {
    pub epsilon: f64,
    pub c_star: f64,
    pub triple: ScalingTriple,
    pub multiplier: f64,
    pub stability: Stability,
}

/// One sweep entry; `point` is None when the solver found no root for this
/// epsilon, with the failure recorded as text.
#[derive(Debug, Clone)]
pub struct SweepRecord {
    pub epsilon: f64,
    pub point: Option<ContinuumPoint>,
    pub failure: Option<String>,
}

/// Solve the perturbed fixed-point problem for each epsilon. Per-epsilon
/// failures are collected, not fatal.
pub fn continuum_sweep(
    side: Side,
    epsilons: &[f64],
    radius: f64,
    tol: f64,
    window: (f64, f64),
) -> Vec<SweepRecord> {
    epsilons
        .iter()
        .map(|&eps| match find_perturbed_fixed_point(side, eps, radius, tol, window) {
            Ok(fp) => {
                let triple = perturbed_ratios(side, fp.c_star, eps, window)
                    .expect("epsilon validated above");
                SweepRecord {
                    epsilon: eps,
                    point: Some(ContinuumPoint {
                        epsilon: eps,
                        c_star: fp.c_star,
                        triple,
                        multiplier: fp.multiplier,
                        stability: fp.stability,
                    }),
                    failure: None,
                }
            }
            Err(e) => SweepRecord {
                epsilon: eps,
                point: None,
                failure: Some(e.to_string()),
            },
        })
        .collect()
}

/// Stationary scaling data at a fixed point `c_star`, checked against the
/// admissible interval.
pub fn stationary_level(side: Side, c_star: f64) -> Result<ScalingLevel> {
    check_admissible(side, c_star)?;
    Ok(scaling_level(side, c_star))
}
