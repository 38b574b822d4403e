//! Nested interval towers driven by scaling data, the piecewise-affine map
//! assembled over them, and the zoom renormalization operator.
//!
//! Geometry convention, per side:
//!   Left  base [0, B]: I2 = [0, s2 B], I1 = [(g1+s2)B, (s1+g1+s2)B],
//!         I0 = [(1-s0)B, B]; the zoom h maps the base onto I1 reversing.
//!   Right base [A, 1] with d = 1 - A: mirrored layout, I2 adjacent to 1.
//! All intervals descend by exact affine composition, so length ratios are
//! exact and no per-level endpoint drift accumulates.

use crate::error::{CoreError, Result};
use crate::family::{branch_value, Side};
use crate::scaling::{gap_ratios, renorm_map, scaling_level, ScalingLevel, ScalingTriple};
use crate::family::critical_orbit;

pub const ITERATION_BUDGET: usize = 8; // 3^8 branch compositions max

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Interval {
        if a <= b {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval, slack: f64) -> bool {
        other.lo >= self.lo - slack && other.hi <= self.hi + slack
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn endpoint_distance(&self, other: &Interval) -> f64 {
        (self.lo - other.lo).abs().max((self.hi - other.hi).abs())
    }
}

/// t -> intercept + slope * t
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineMap1D {
    pub intercept: f64,
    pub slope: f64,
}

impl AffineMap1D {
    pub fn identity() -> AffineMap1D {
        AffineMap1D {
            intercept: 0.0,
            slope: 1.0,
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.intercept + self.slope * t
    }

    /// self after other: (self ∘ other)(t)
    pub fn compose(&self, other: &AffineMap1D) -> AffineMap1D {
        AffineMap1D {
            intercept: self.intercept + self.slope * other.intercept,
            slope: self.slope * other.slope,
        }
    }

    pub fn inverse(&self) -> AffineMap1D {
        assert!(self.slope != 0.0, "affine branch maps have nonzero slope");
        AffineMap1D {
            intercept: -self.intercept / self.slope,
            slope: 1.0 / self.slope,
        }
    }

    pub fn image(&self, iv: &Interval) -> Interval {
        Interval::new(self.eval(iv.lo), self.eval(iv.hi))
    }
}

/// The three interval maps induced by one level of scaling data on a base
/// interval. F1 is the zoom onto the middle interval and needs the gap data:
/// the middle interval's position inside the base is s1+g1+s2 from the
/// orientation-reversing end, which no triple alone determines.
pub fn induced_affine_maps(
    side: Side,
    level: &ScalingLevel,
    base: &Interval,
) -> (AffineMap1D, AffineMap1D, AffineMap1D) {
    let t = &level.triple;
    assert!(t.in_simplex(), "scaling triple outside the open simplex");
    match side {
        Side::Left => {
            let b = base.hi; // base = [0, B]
            let y_hi = (t.s1 + level.gaps.g1 + t.s2) * b;
            (
                AffineMap1D {
                    intercept: b,
                    slope: -t.s0,
                },
                AffineMap1D {
                    intercept: y_hi,
                    slope: -t.s1,
                },
                AffineMap1D {
                    intercept: 0.0,
                    slope: t.s2,
                },
            )
        }
        Side::Right => {
            let a = base.lo; // base = [A, 1]
            let d = 1.0 - a;
            let y_lo = a + (t.s0 + level.gaps.g0) * d;
            (
                // forms in (1 - t): F(t) = v + r (1 - t) = (v + r) - r t
                AffineMap1D {
                    intercept: a + t.s0,
                    slope: -t.s0,
                },
                AffineMap1D {
                    intercept: y_lo + t.s1,
                    slope: -t.s1,
                },
                AffineMap1D {
                    intercept: 1.0 - t.s2,
                    slope: t.s2,
                },
            )
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct TowerLevel {
    pub i0: Interval,
    pub i1: Interval,
    pub i2: Interval,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub w: f64,
}

#[derive(Debug, Clone)]
pub struct IntervalTower {
    pub side: Side,
    pub depth: usize,
    pub base: Interval,
    pub levels: Vec<TowerLevel>,
    /// conjugators[n-1] maps base coordinates onto the ambient frame of
    /// level n (composition of the first n-1 zooms; identity at level 1).
    pub conjugators: Vec<AffineMap1D>,
    pub data: Vec<ScalingLevel>,
}

impl IntervalTower {
    /// 1-based level accessor.
    pub fn level(&self, n: usize) -> &TowerLevel {
        &self.levels[n - 1]
    }
}

/// Inner boundary labels (x, y, z, w) of one level in normalized (base)
/// coordinates. Left order on the line is w < z < y < x at level 1; the
/// parity of deeper levels alternates with the orientation of the
/// accumulated zoom.
pub fn normalized_labels(side: Side, level: &ScalingLevel, base: &Interval) -> (f64, f64, f64, f64) {
    let t = &level.triple;
    match side {
        Side::Left => {
            let b = base.hi;
            (
                (1.0 - t.s0) * b,
                (t.s1 + level.gaps.g1 + t.s2) * b,
                (level.gaps.g1 + t.s2) * b,
                t.s2 * b,
            )
        }
        Side::Right => {
            let a = base.lo;
            let d = 1.0 - a;
            (
                a + t.s0 * d,
                a + (t.s0 + level.gaps.g0) * d,
                a + (t.s0 + level.gaps.g0 + t.s1) * d,
                1.0 - t.s2 * d,
            )
        }
    }
}

/// Build a tower from a sequence of per-level scaling data.
pub fn build_tower(side: Side, data: &[ScalingLevel], base: Interval) -> Result<IntervalTower> {
    if data.is_empty() {
        return Err(CoreError::DepthExhausted { need: 1, have: 0 });
    }
    for lvl in data {
        let margin = lvl.triple.simplex_margin();
        if margin < crate::scaling::DEFAULT_PROPER_MARGIN {
            return Err(CoreError::ImproperData {
                margin,
                required: crate::scaling::DEFAULT_PROPER_MARGIN,
            });
        }
    }
    let mut levels = Vec::with_capacity(data.len());
    let mut conjugators = Vec::with_capacity(data.len());
    let mut h_acc = AffineMap1D::identity();
    for lvl in data {
        let (f0, f1, f2) = induced_affine_maps(side, lvl, &base);
        let (x, y, z, w) = normalized_labels(side, lvl, &base);
        levels.push(TowerLevel {
            i0: h_acc.image(&f0.image(&base)),
            i1: h_acc.image(&f1.image(&base)),
            i2: h_acc.image(&f2.image(&base)),
            x: h_acc.eval(x),
            y: h_acc.eval(y),
            z: h_acc.eval(z),
            w: h_acc.eval(w),
        });
        conjugators.push(h_acc);
        h_acc = h_acc.compose(&f1);
    }
    Ok(IntervalTower {
        side,
        depth: data.len(),
        base,
        levels,
        conjugators,
        data: data.to_vec(),
    })
}

pub fn side_base(side: Side, c: f64) -> Interval {
    let b1 = critical_orbit(side, c, 1)[0];
    match side {
        Side::Left => Interval::new(0.0, b1),
        Side::Right => Interval::new(b1, 1.0),
    }
}

/// Tower with stationary data taken from the orbit at `c_star`.
pub fn build_stationary_tower(side: Side, c_star: f64, depth: usize) -> Result<IntervalTower> {
    let lvl = scaling_level(side, c_star);
    build_tower(side, &vec![lvl; depth], side_base(side, c_star))
}

#[derive(Debug, Clone, Copy)]
pub struct Branch {
    pub domain: Interval,
    pub map: AffineMap1D,
}

impl Branch {
    pub fn image(&self) -> Interval {
        self.map.image(&self.domain)
    }
}

/// Piecewise-affine map: one affine branch over each tower interval I0^n,
/// I2^n up to the truncation depth. The domain set is the disjoint union of
/// the branch domains.
#[derive(Debug, Clone)]
pub struct PiecewiseAffineMap {
    pub side: Side,
    pub base: Interval,
    pub depth: usize,
    /// sorted by domain.lo; domains pairwise disjoint
    pub branches: Vec<Branch>,
    pub levels: Vec<ScalingLevel>,
    /// ambient parameter the level-1 branches interpolate, when built from
    /// orbit data
    pub anchor_c: Option<f64>,
}

impl PiecewiseAffineMap {
    pub fn covering_branch(&self, x: f64) -> Option<&Branch> {
        // branches sorted and disjoint
        let idx = self
            .branches
            .partition_point(|b| b.domain.hi < x);
        self.branches.get(idx).filter(|b| b.domain.contains(x))
    }

    pub fn covering_branch_for_interval(&self, iv: &Interval, slack: f64) -> Result<&Branch> {
        let idx = self.branches.partition_point(|b| b.domain.hi < iv.lo - slack);
        self.branches
            .get(idx)
            .filter(|b| b.domain.contains_interval(iv, slack))
            .ok_or_else(|| {
                CoreError::BranchStructure(format!(
                    "[{:.17}, {:.17}] not inside a single branch domain",
                    iv.lo, iv.hi
                ))
            })
    }

    pub fn eval(&self, x: f64) -> Option<f64> {
        self.covering_branch(x).map(|b| b.map.eval(x))
    }

    pub fn domain_set(&self) -> Vec<Interval> {
        self.branches.iter().map(|b| b.domain).collect()
    }

    /// The two depth-1 branches: (branch over I2, branch over I0).
    pub fn level_one(&self) -> (&Branch, &Branch) {
        let first = self.branches.first().expect("nonempty branch list");
        let last = self.branches.last().expect("nonempty branch list");
        match self.side {
            Side::Left => (first, last),
            Side::Right => (last, first),
        }
    }

    /// The zoom h onto the middle interval, recovered from branch geometry.
    pub fn zoom(&self) -> AffineMap1D {
        let (_, b_i0) = self.level_one();
        let i1 = b_i0.image();
        match self.side {
            Side::Left => {
                let b = self.base.hi;
                AffineMap1D {
                    intercept: i1.hi,
                    slope: -i1.len() / b,
                }
            }
            Side::Right => {
                let d = 1.0 - self.base.lo;
                let slope = -i1.len() / d;
                AffineMap1D {
                    intercept: i1.lo + i1.len() / d,
                    slope,
                }
            }
        }
    }

    /// The zoom onto the deepest-interval side (the F2 direction).
    pub fn hat_zoom(&self) -> AffineMap1D {
        let (b_i2, _) = self.level_one();
        let i2 = b_i2.domain;
        match self.side {
            Side::Left => AffineMap1D {
                intercept: 0.0,
                slope: i2.len() / self.base.len(),
            },
            Side::Right => {
                let s2 = i2.len() / self.base.len();
                AffineMap1D {
                    intercept: 1.0 - s2,
                    slope: s2,
                }
            }
        }
    }
}

/// Assemble the piecewise-affine map for a (possibly non-stationary)
/// sequence of scaling levels: two branches at depth 1, then the conjugate
/// of the assembly of the shifted sequence under the depth-1 zoom pair.
pub fn assemble_fs(
    side: Side,
    base: Interval,
    data: &[ScalingLevel],
    anchor_c: Option<f64>,
) -> PiecewiseAffineMap {
    let mut branches = Vec::with_capacity(2 * data.len());
    assemble_into(side, &base, data, &mut branches);
    branches.sort_by(|a, b| a.domain.lo.partial_cmp(&b.domain.lo).unwrap());
    PiecewiseAffineMap {
        side,
        base,
        depth: data.len(),
        branches,
        levels: data.to_vec(),
        anchor_c,
    }
}

fn assemble_into(side: Side, base: &Interval, data: &[ScalingLevel], out: &mut Vec<Branch>) {
    let Some(first) = data.first() else {
        return;
    };
    let t = &first.triple;
    let (f0, f1, f2) = induced_affine_maps(side, first, base);
    let i0 = f0.image(base);
    let i1 = f1.image(base);
    let i2 = f2.image(base);
    // Depth-1 branches carry the return route: the branch over I2 maps onto
    // I0 reversing with the seed endpoint fixed to the base's far end, the
    // branch over I0 onto I1 preserving orientation.
    match side {
        Side::Left => {
            out.push(Branch {
                domain: i2,
                map: AffineMap1D {
                    intercept: base.hi,
                    slope: -t.s0 / t.s2,
                },
            });
            out.push(Branch {
                domain: i0,
                map: AffineMap1D {
                    // t -> i1.lo + (s1/s0)(t - i0.lo)
                    intercept: i1.lo - (t.s1 / t.s0) * i0.lo,
                    slope: t.s1 / t.s0,
                },
            });
        }
        Side::Right => {
            let r = t.s0 / t.s2;
            out.push(Branch {
                domain: i2,
                map: AffineMap1D {
                    intercept: base.lo + r,
                    slope: -r,
                },
            });
            out.push(Branch {
                domain: i0,
                map: AffineMap1D {
                    intercept: i1.lo - (t.s1 / t.s0) * i0.lo,
                    slope: t.s1 / t.s0,
                },
            });
        }
    }
    // Deeper branches: assemble the shifted data on the same base, then
    // conjugate by (h, h-hat). Iterative unshift keeps this allocation-flat.
    let mut sub = Vec::new();
    assemble_into(side, base, &data[1..], &mut sub);
    let h_inv = f1.inverse();
    for b in sub {
        out.push(Branch {
            domain: f1.image(&b.domain),
            map: f2.compose(&b.map).compose(&h_inv),
        });
    }
}

/// Stationary constructor gated on `c_star` actually being a fixed point of
/// the parameter map for this data.
pub fn build_fs(
    side: Side,
    c_star: f64,
    data: ScalingTriple,
    depth: usize,
    tol: f64,
) -> Result<PiecewiseAffineMap> {
    if depth == 0 {
        return Err(CoreError::DepthExhausted { need: 1, have: 0 });
    }
    let margin = data.simplex_margin();
    if margin < crate::scaling::DEFAULT_PROPER_MARGIN {
        return Err(CoreError::ImproperData {
            margin,
            required: crate::scaling::DEFAULT_PROPER_MARGIN,
        });
    }
    // Residual of the parameter map with s1 taken from the supplied data.
    let b = critical_orbit(side, c_star, 2);
    let r = match side {
        Side::Left => (b[1] - c_star) / data.s1,
        Side::Right => 1.0 - (c_star - b[1]) / data.s1,
    };
    let residual = (r - c_star).abs();
    if residual > tol {
        return Err(CoreError::ToleranceBreach {
            c: c_star,
            residual,
            tol,
        });
    }
    let gaps = gap_ratios(side, c_star);
    let level = ScalingLevel { triple: data, gaps };
    Ok(assemble_fs(
        side,
        side_base(side, c_star),
        &vec![level; depth],
        Some(c_star),
    ))
}

/// Zoom renormalization: conjugate the third iterate by the depth-1 zoom.
/// Operates on the branch list alone; each deep branch is routed through the
/// two depth-1 branches and the composition collapses to a single affine map.
pub fn renormalize(f: &PiecewiseAffineMap) -> Result<PiecewiseAffineMap> {
    if f.depth < 2 {
        return Err(CoreError::DepthExhausted {
            need: 2,
            have: f.depth,
        });
    }
    let (b_i2, b_i0) = f.level_one();
    let i1 = b_i0.image();
    // Take the zoom from the carried level data when we have it: the
    // geometric recovery drifts under iteration (each pass rescales by a
    // zoom rebuilt from the previous pass's rounded branch endpoints).
    let h = if f.levels.is_empty() {
        f.zoom()
    } else {
        induced_affine_maps(f.side, &f.levels[0], &f.base).1
    };
    let h_inv = h.inverse();
    let slack = 1e-9 * f.base.len();

    let mut branches = Vec::with_capacity(f.branches.len() - 2);
    for b in &f.branches {
        if std::ptr::eq(b, b_i2) || std::ptr::eq(b, b_i0) {
            continue;
        }
        if !i1.contains_interval(&b.domain, slack) {
            return Err(CoreError::BranchStructure(format!(
                "branch domain [{:.17}, {:.17}] escapes the middle interval",
                b.domain.lo, b.domain.hi
            )));
        }
        // route: deep branch -> I2 branch -> I0 branch
        let img1 = b.image();
        if !b_i2.domain.contains_interval(&img1, slack) {
            return Err(CoreError::BranchStructure(format!(
                "first-iterate image [{:.17}, {:.17}] misses the deepest branch domain",
                img1.lo, img1.hi
            )));
        }
        let m2 = b_i2.map.compose(&b.map);
        let img2 = m2.image(&b.domain);
        if !b_i0.domain.contains_interval(&img2, slack) {
            return Err(CoreError::BranchStructure(format!(
                "second-iterate image [{:.17}, {:.17}] misses the outer branch domain",
                img2.lo, img2.hi
            )));
        }
        let m3 = b_i0.map.compose(&m2);
        branches.push(Branch {
            domain: h_inv.image(&b.domain),
            map: h_inv.compose(&m3).compose(&h),
        });
    }
    branches.sort_by(|a, b| a.domain.lo.partial_cmp(&b.domain.lo).unwrap());
    Ok(PiecewiseAffineMap {
        side: f.side,
        base: f.base,
        depth: f.depth - 1,
        branches,
        levels: f.levels[1..].to_vec(),
        anchor_c: None,
    })
}

/// n-fold renormalization in one step: conjugate the 3^n-th iterate by the
/// n-level zoom, composing f's branches along the walk instead of nesting
/// `renormalize`. Cross-checks the iterated operator.
pub fn deep_renormalize(f: &PiecewiseAffineMap, n: usize) -> Result<PiecewiseAffineMap> {
    if n == 0 {
        return Ok(f.clone());
    }
    if n > ITERATION_BUDGET {
        return Err(CoreError::BudgetExceeded {
            n,
            max: ITERATION_BUDGET,
        });
    }
    if f.depth < n + 1 {
        return Err(CoreError::DepthExhausted {
            need: n + 1,
            have: f.depth,
        });
    }
    let mut h_acc = AffineMap1D::identity();
    for lvl in &f.levels[..n] {
        let (_, f1, _) = induced_affine_maps(f.side, lvl, &f.base);
        h_acc = h_acc.compose(&f1);
    }
    let h_inv = h_acc.inverse();
    let i1n = h_acc.image(&f.base);
    let slack = 1e-9 * f.base.len();
    let steps = 3usize.pow(n as u32);

    let mut branches = Vec::new();
    for b in &f.branches {
        if !i1n.contains_interval(&b.domain, slack) {
            continue; // branch at level <= n
        }
        let mut m = b.map;
        let mut cur = b.image();
        for _ in 1..steps {
            let covering = f.covering_branch_for_interval(&cur, slack)?;
            m = covering.map.compose(&m);
            cur = covering.map.image(&cur);
        }
        branches.push(Branch {
            domain: h_inv.image(&b.domain),
            map: h_inv.compose(&m).compose(&h_acc),
        });
    }
    branches.sort_by(|a, b| a.domain.lo.partial_cmp(&b.domain.lo).unwrap());
    Ok(PiecewiseAffineMap {
        side: f.side,
        base: f.base,
        depth: f.depth - n,
        branches,
        levels: f.levels[n..].to_vec(),
        anchor_c: None,
    })
}

/// Max deviation between two branch lists over domain endpoints, slopes and
/// intercepts; infinite when the branch counts differ.
pub fn branch_distance(f: &PiecewiseAffineMap, g: &PiecewiseAffineMap) -> f64 {
    if f.branches.len() != g.branches.len() {
        return f64::INFINITY;
    }
    f.branches
        .iter()
        .zip(g.branches.iter())
        .map(|(a, b)| {
            a.domain
                .endpoint_distance(&b.domain)
                .max((a.map.intercept - b.map.intercept).abs())
                .max((a.map.slope - b.map.slope).abs())
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone)]
pub struct ClauseRecord {
    pub name: String,
    pub pass: bool,
    pub measured: f64,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct RenormCertificate {
    pub level: usize,
    pub pass: bool,
    pub clauses: Vec<ClauseRecord>,
}

struct WalkOutcome {
    covered: bool,
    hit_full_domain: bool,
    final_interval: Interval,
    failure: Option<String>,
}

fn walk(f: &PiecewiseAffineMap, start: Interval, steps: usize, slack: f64) -> WalkOutcome {
    let mut cur = start;
    let mut hit_full = false;
    for _ in 0..steps {
        match f.covering_branch_for_interval(&cur, slack) {
            Ok(br) => {
                if cur.endpoint_distance(&br.domain) <= slack {
                    hit_full = true;
                }
                cur = br.map.image(&cur);
            }
            Err(e) => {
                return WalkOutcome {
                    covered: false,
                    hit_full_domain: hit_full,
                    final_interval: cur,
                    failure: Some(e.to_string()),
                };
            }
        }
    }
    WalkOutcome {
        covered: true,
        hit_full_domain: hit_full,
        final_interval: cur,
        failure: None,
    }
}

/// Certify level n of the renormalizability definition by branch
/// bookkeeping: walk the maximal affine neighborhood of the critical end
/// through 3^n - 1 iterates and compare the image with the tower's middle
/// interval; same for its one-step image; anchor the depth-1 branches to the
/// cubic family when an ambient parameter is attached.
pub fn verify_infinite_renormalizability(
    f: &PiecewiseAffineMap,
    tower: &IntervalTower,
    n: usize,
    tol: f64,
) -> Result<RenormCertificate> {
    if n == 0 {
        return Ok(RenormCertificate {
            level: 0,
            pass: true,
            clauses: vec![ClauseRecord {
                name: "degenerate level".into(),
                pass: true,
                measured: 0.0,
                detail: "level 0 holds by the identity convention".into(),
            }],
        });
    }
    if n > ITERATION_BUDGET {
        return Err(CoreError::BudgetExceeded {
            n,
            max: ITERATION_BUDGET,
        });
    }
    if n > f.depth {
        return Err(CoreError::DepthExhausted {
            need: n,
            have: f.depth,
        });
    }
    let scale = f.base.len();
    let slack = tol * scale;
    let steps = 3usize.pow(n as u32);
    let mut clauses = Vec::new();

    // Maximal affine interval at the critical end: the nested image of the
    // base under n deepest-interval zooms has length (prod s2) * |base|.
    let prod_s2: f64 = f.levels[..n].iter().map(|l| l.triple.s2).product();
    let i_hat = match f.side {
        Side::Left => Interval::new(f.base.lo, f.base.lo + prod_s2 * scale),
        Side::Right => Interval::new(f.base.hi - prod_s2 * scale, f.base.hi),
    };

    let out1 = walk(f, i_hat, steps - 1, slack);
    let i1n = tower.level(n).i1;
    let d1 = out1.final_interval.endpoint_distance(&i1n);
    clauses.push(ClauseRecord {
        name: format!("affine continuation over {} iterates", steps - 1),
        pass: out1.covered && out1.hit_full_domain,
        measured: if out1.covered { 1.0 } else { 0.0 },
        detail: match &out1.failure {
            Some(e) => e.clone(),
            None => format!(
                "domain [{:.12e}, {:.12e}] stayed within single branches; maximality certificate {}",
                i_hat.lo,
                i_hat.hi,
                if out1.hit_full_domain { "found" } else { "missing" }
            ),
        },
    });
    clauses.push(ClauseRecord {
        name: "image equals the middle interval".into(),
        pass: out1.covered && d1 <= slack,
        measured: d1,
        detail: format!(
            "final [{:.12e}, {:.12e}] vs I1^{} [{:.12e}, {:.12e}]",
            out1.final_interval.lo, out1.final_interval.hi, n, i1n.lo, i1n.hi
        ),
    });

    // Second maximal interval: the one-step image of the first.
    let clause3 = match f.covering_branch_for_interval(&i_hat, slack) {
        Ok(br) => {
            let i_tilde = br.map.image(&i_hat);
            let out2 = walk(f, i_tilde, steps - 2, slack);
            let d2 = out2.final_interval.endpoint_distance(&i1n);
            ClauseRecord {
                name: format!("companion interval over {} iterates", steps - 2),
                pass: out2.covered && out2.hit_full_domain && d2 <= slack,
                measured: d2,
                detail: match &out2.failure {
                    Some(e) => e.clone(),
                    None => format!(
                        "domain [{:.12e}, {:.12e}] -> [{:.12e}, {:.12e}]; maximality {}",
                        i_tilde.lo,
                        i_tilde.hi,
                        out2.final_interval.lo,
                        out2.final_interval.hi,
                        if out2.hit_full_domain { "found" } else { "missing" }
                    ),
                },
            }
        }
        Err(e) => ClauseRecord {
            name: "companion interval".into(),
            pass: false,
            measured: f64::NAN,
            detail: e.to_string(),
        },
    };
    clauses.push(clause3);

    // Depth-1 branches must interpolate the cubic family at their interval
    // endpoints when the map was built from orbit data.
    if let Some(c) = f.anchor_c {
        let (b_i2, b_i0) = f.level_one();
        let mut worst = 0.0_f64;
        for br in [b_i2, b_i0] {
            for e in [br.domain.lo, br.domain.hi] {
                worst = worst.max((br.map.eval(e) - branch_value(f.side, c, e)).abs());
            }
        }
        clauses.push(ClauseRecord {
            name: "depth-1 branches interpolate the cubic".into(),
            pass: worst <= tol,
            measured: worst,
            detail: format!("max endpoint deviation {worst:.3e} at c = {c:.12}"),
        });
    }

    let pass = clauses.iter().all(|c| c.pass);
    Ok(RenormCertificate {
        level: n,
        pass,
        clauses,
    })
}

/// Residual of the parameter map at `c` (used by gates and reports).
pub fn renorm_residual(side: Side, c: f64) -> Result<f64> {
    Ok((renorm_map(side, c)? - c).abs())
}
