//! C^{1+Lip} extension of the piecewise-affine fixed-point map: seed graph
//! segments over the first-generation gaps, iterated plane scalings, and the
//! bimodal join of the two sides.
//!
//! A graph segment is stored as a table of cubic pieces in local
//! coordinates. Affine branches are degree-1 pieces, gap fillers are cubic
//! Hermite curves; the whole representation is closed under the plane
//! scaling, so iteration is exact coefficient arithmetic.

use crate::error::{CoreError, Result};
use crate::family::Side;
use crate::tower::{AffineMap1D, Interval, PiecewiseAffineMap};

/// value(x) = c0 + c1 t + c2 t^2 + c3 t^3 with t = x - lo.
#[derive(Debug, Clone, Copy)]
pub struct CubicPiece {
    pub lo: f64,
    pub hi: f64,
    pub c: [f64; 4],
}

fn taylor_shift(c: &[f64; 4], t0: f64) -> [f64; 4] {
    [
        ((c[3] * t0 + c[2]) * t0 + c[1]) * t0 + c[0],
        (3.0 * c[3] * t0 + 2.0 * c[2]) * t0 + c[1],
        3.0 * c[3] * t0 + c[2],
        c[3],
    ]
}

impl CubicPiece {
    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn eval(&self, x: f64) -> f64 {
        let t = x - self.lo;
        ((self.c[3] * t + self.c[2]) * t + self.c[1]) * t + self.c[0]
    }

    pub fn deriv(&self, x: f64) -> f64 {
        let t = x - self.lo;
        (3.0 * self.c[3] * t + 2.0 * self.c[2]) * t + self.c[1]
    }

    /// p'' is linear in t, so its extrema sit at the piece ends.
    pub fn max_abs_second_deriv(&self) -> f64 {
        let a = 2.0 * self.c[2];
        let b = 2.0 * self.c[2] + 6.0 * self.c[3] * self.len();
        a.abs().max(b.abs())
    }

    /// Max |p'| over the piece: quadratic, so ends plus the interior vertex.
    pub fn max_abs_slope(&self) -> f64 {
        let l = self.len();
        let mut m = self.deriv(self.lo).abs().max(self.deriv(self.hi).abs());
        if self.c[3] != 0.0 {
            let t_star = -self.c[2] / (3.0 * self.c[3]);
            if t_star > 0.0 && t_star < l {
                m = m.max(self.deriv(self.lo + t_star).abs());
            }
        }
        m
    }
}

#[derive(Debug, Clone)]
pub struct GraphSegment {
    pub domain: Interval,
    /// sorted, contiguous pieces covering the domain
    pub pieces: Vec<CubicPiece>,
    pub end_slopes: (f64, f64),
}

impl GraphSegment {
    fn from_pieces(pieces: Vec<CubicPiece>) -> GraphSegment {
        debug_assert!(!pieces.is_empty());
        let domain = Interval::new(pieces[0].lo, pieces[pieces.len() - 1].hi);
        let end_slopes = (
            pieces[0].deriv(pieces[0].lo),
            pieces[pieces.len() - 1].deriv(domain.hi),
        );
        GraphSegment {
            domain,
            pieces,
            end_slopes,
        }
    }

    fn piece_covering(&self, x: f64) -> &CubicPiece {
        let idx = self.pieces.partition_point(|p| p.hi < x);
        self.pieces.get(idx).unwrap_or(&self.pieces[self.pieces.len() - 1])
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.piece_covering(x).eval(x)
    }

    pub fn deriv(&self, x: f64) -> f64 {
        self.piece_covering(x).deriv(x)
    }

    /// Lipschitz constant of the derivative over the segment.
    pub fn derivative_lipschitz(&self) -> f64 {
        self.pieces
            .iter()
            .map(CubicPiece::max_abs_second_deriv)
            .fold(0.0, f64::max)
    }

    pub fn max_abs_slope(&self) -> f64 {
        self.pieces
            .iter()
            .map(CubicPiece::max_abs_slope)
            .fold(0.0, f64::max)
    }

    /// Internal C1 defect: worst value/slope jump at interior piece joints.
    pub fn internal_c1_defect(&self) -> f64 {
        let mut worst = 0.0_f64;
        for w in self.pieces.windows(2) {
            worst = worst.max((w[0].eval(w[0].hi) - w[1].eval(w[1].lo)).abs());
            worst = worst.max((w[0].deriv(w[0].hi) - w[1].deriv(w[1].lo)).abs());
        }
        worst
    }

    /// Image under a componentwise plane affine map: the new segment is the
    /// graph of  y-part ∘ self ∘ (x-part)^{-1}, again piecewise cubic.
    pub fn transform(&self, s: &PlaneAffineMap) -> GraphSegment {
        let ax = s.x.slope;
        let r = 1.0 / ax;
        let mut pieces: Vec<CubicPiece> = self
            .pieces
            .iter()
            .map(|p| {
                let (a, b) = (s.x.eval(p.lo), s.x.eval(p.hi));
                let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
                let t0 = (lo - s.x.intercept) * r - p.lo;
                let d = taylor_shift(&p.c, t0);
                CubicPiece {
                    lo,
                    hi,
                    c: [
                        s.y.intercept + s.y.slope * d[0],
                        s.y.slope * d[1] * r,
                        s.y.slope * d[2] * r * r,
                        s.y.slope * d[3] * r * r * r,
                    ],
                }
            })
            .collect();
        pieces.sort_by(|a, b| a.lo.partial_cmp(&b.lo).unwrap());
        GraphSegment::from_pieces(pieces)
    }
}

/// Mirror conjugation (x, y) -> (1 - x, 1 - y), exact on coefficients.
pub fn mirror_segment(seg: &GraphSegment) -> GraphSegment {
    let mut pieces: Vec<CubicPiece> = seg
        .pieces
        .iter()
        .map(|p| {
            let d = taylor_shift(&p.c, p.len());
            CubicPiece {
                lo: 1.0 - p.hi,
                hi: 1.0 - p.lo,
                c: [1.0 - d[0], d[1], -d[2], d[3]],
            }
        })
        .collect();
    pieces.sort_by(|a, b| a.lo.partial_cmp(&b.lo).unwrap());
    GraphSegment::from_pieces(pieces)
}

/// Componentwise plane affine map (x, y) -> (x-part(x), y-part(y)).
/// Construction checks the contraction order required by the graph
/// iteration: the vertical factor must be strictly smaller than the
/// horizontal one, both below 1 in magnitude.
#[derive(Debug, Clone, Copy)]
pub struct PlaneAffineMap {
    pub x: AffineMap1D,
    pub y: AffineMap1D,
}

impl PlaneAffineMap {
    pub fn new(x: AffineMap1D, y: AffineMap1D) -> Result<PlaneAffineMap> {
        if !(y.slope.abs() < x.slope.abs() && x.slope.abs() < 1.0) {
            return Err(CoreError::ContractionOrder {
                x: x.slope,
                y: y.slope,
            });
        }
        Ok(PlaneAffineMap { x, y })
    }

    /// Unchecked constructor for inverses (used when unzooming).
    fn raw(x: AffineMap1D, y: AffineMap1D) -> PlaneAffineMap {
        PlaneAffineMap { x, y }
    }

    pub fn inverse(&self) -> PlaneAffineMap {
        PlaneAffineMap::raw(self.x.inverse(), self.y.inverse())
    }

    pub fn identity() -> PlaneAffineMap {
        PlaneAffineMap::raw(AffineMap1D::identity(), AffineMap1D::identity())
    }

    /// self ∘ other, componentwise.
    pub fn compose(&self, other: &PlaneAffineMap) -> PlaneAffineMap {
        PlaneAffineMap::raw(self.x.compose(&other.x), self.y.compose(&other.y))
    }

    pub fn apply(&self, p: (f64, f64)) -> (f64, f64) {
        (self.x.eval(p.0), self.y.eval(p.1))
    }
}

/// The plane scaling attached to the depth-1 zooms of `f`.
pub fn plane_scaling(f: &PiecewiseAffineMap) -> Result<PlaneAffineMap> {
    PlaneAffineMap::new(f.zoom(), f.hat_zoom())
}

/// Unique cubic through (values, one-sided slopes) at both ends.
fn hermite(x_lo: f64, x_hi: f64, va: f64, vb: f64, da: f64, db: f64) -> CubicPiece {
    let l = x_hi - x_lo;
    let d = vb - va;
    CubicPiece {
        lo: x_lo,
        hi: x_hi,
        c: [
            va,
            da,
            3.0 * d / (l * l) - (2.0 * da + db) / l,
            (da + db) / (l * l) - 2.0 * d / (l * l * l),
        ],
    }
}

/// Hermite filler with an optional C1 bump of the given amplitude: the bump
/// is 12u^2 - 16u^3 on the first half (u = t/L), mirrored on the second, so
/// it vanishes with zero slope at both ends and peaks at `amplitude`.
fn filler_pieces(
    x_lo: f64,
    x_hi: f64,
    va: f64,
    vb: f64,
    da: f64,
    db: f64,
    amplitude: f64,
) -> Vec<CubicPiece> {
    let base = hermite(x_lo, x_hi, va, vb, da, db);
    if amplitude == 0.0 {
        return vec![base];
    }
    let l = x_hi - x_lo;
    let mid = x_lo + 0.5 * l;
    let d = taylor_shift(&base.c, 0.5 * l);
    let a2 = 12.0 * amplitude / (l * l);
    let a3 = 16.0 * amplitude / (l * l * l);
    vec![
        CubicPiece {
            lo: x_lo,
            hi: mid,
            c: [base.c[0], base.c[1], base.c[2] + a2, base.c[3] - a3],
        },
        CubicPiece {
            lo: mid,
            hi: x_hi,
            c: [d[0] + amplitude, d[1], d[2] - a2, d[3] + a3],
        },
    ]
}

/// Seed segments with a filler-policy bump (0 for the plain extension).
///
/// The two segments cover the base interval minus the open middle interval:
/// one carries the outer affine branch, the other the deepest branch; the
/// gap fillers take their junction values and slopes from the scaled copies
/// that the graph iteration will attach there, which forces C1 joins.
pub fn seed_segments_with_bump(
    f: &PiecewiseAffineMap,
    amplitude: f64,
) -> Result<(GraphSegment, GraphSegment)> {
    let s = plane_scaling(f)?;
    let (b_i2, b_i0) = f.level_one();
    let i1 = b_i0.image();
    let hx_inv = s.x.inverse();
    let ry = s.y.slope / s.x.slope;

    // Junction data at the two middle-interval endpoints: the value and
    // slope of the scaled copy of the opposite seed, read off the affine
    // branches directly.
    let junction = |j: f64, br: &crate::tower::Branch| {
        let pre = hx_inv.eval(j);
        (s.y.eval(br.map.eval(pre)), ry * br.map.slope)
    };

    let affine_piece = |br: &crate::tower::Branch| CubicPiece {
        lo: br.domain.lo,
        hi: br.domain.hi,
        c: [br.map.eval(br.domain.lo), br.map.slope, 0.0, 0.0],
    };

    let (g1, g2) = match f.side {
        Side::Left => {
            // G1 = [i1.hi, base.hi]: filler over the outer gap + I0 branch.
            let (vj, dj) = junction(i1.hi, b_i2);
            let mut p1 = filler_pieces(
                i1.hi,
                b_i0.domain.lo,
                vj,
                b_i0.map.eval(b_i0.domain.lo),
                dj,
                b_i0.map.slope,
                amplitude,
            );
            p1.push(affine_piece(b_i0));
            // G2 = [base.lo, i1.lo]: I2 branch + filler over the inner gap.
            let (vj2, dj2) = junction(i1.lo, b_i0);
            let mut p2 = vec![affine_piece(b_i2)];
            p2.extend(filler_pieces(
                b_i2.domain.hi,
                i1.lo,
                b_i2.map.eval(b_i2.domain.hi),
                vj2,
                b_i2.map.slope,
                dj2,
                amplitude,
            ));
            (GraphSegment::from_pieces(p1), GraphSegment::from_pieces(p2))
        }
        Side::Right => {
            // G1 = [base.lo, i1.lo]: I0 branch + filler.
            let (vj, dj) = junction(i1.lo, b_i2);
            let mut p1 = vec![affine_piece(b_i0)];
            p1.extend(filler_pieces(
                b_i0.domain.hi,
                i1.lo,
                b_i0.map.eval(b_i0.domain.hi),
                vj,
                b_i0.map.slope,
                dj,
                amplitude,
            ));
            // G2 = [i1.hi, base.hi]: filler + I2 branch.
            let (vj2, dj2) = junction(i1.hi, b_i0);
            let mut p2 = filler_pieces(
                i1.hi,
                b_i2.domain.lo,
                vj2,
                b_i2.map.eval(b_i2.domain.lo),
                dj2,
                b_i2.map.slope,
                amplitude,
            );
            p2.push(affine_piece(b_i2));
            (GraphSegment::from_pieces(p2), GraphSegment::from_pieces(p1))
        }
    };

    for seg in [&g1, &g2] {
        let defect = seg.internal_c1_defect();
        if defect > 1e-10 {
            return Err(CoreError::SlopeMismatch {
                x: seg.domain.lo,
                mismatch: defect,
            });
        }
    }
    Ok((g1, g2))
}

pub fn seed_segments(f: &PiecewiseAffineMap) -> Result<(GraphSegment, GraphSegment)> {
    seed_segments_with_bump(f, 0.0)
}

#[derive(Debug, Clone, Copy)]
pub struct BoxRegion {
    pub x: Interval,
    pub y: Interval,
}

#[derive(Debug, Clone, Copy)]
pub struct Junction {
    pub x: f64,
    pub value: f64,
    pub slope_in: f64,
    pub slope_out: f64,
}

#[derive(Debug, Clone)]
pub struct ExtensionGraph {
    pub side: Side,
    pub base: Interval,
    /// construction order: generation k contributes segments 2k and 2k+1
    pub segments: Vec<GraphSegment>,
    pub junctions: Vec<Junction>,
    pub boxes: Vec<BoxRegion>,
    /// one entry per generation: Lipschitz constant of the derivative over
    /// that generation's pair of segments; nonincreasing
    pub lipschitz_ledger: Vec<f64>,
    pub scaling: PlaneAffineMap,
    pub depth: usize,
    pub limit_x: f64,
    pub limit_value: f64,
    sorted: Vec<usize>,
}

fn fixed_point_of(m: &AffineMap1D) -> f64 {
    m.intercept / (1.0 - m.slope)
}

/// Iterate the seed pair `depth` times under the plane scaling.
pub fn iterate_extension(
    side: Side,
    seed: (GraphSegment, GraphSegment),
    s: PlaneAffineMap,
    depth: usize,
) -> Result<ExtensionGraph> {
    if depth < 1 {
        return Err(CoreError::DepthExhausted { need: 1, have: depth });
    }
    let base = Interval::new(
        seed.0.domain.lo.min(seed.1.domain.lo),
        seed.0.domain.hi.max(seed.1.domain.hi),
    );
    let mut segments = vec![seed.0, seed.1];
    for k in 1..=depth {
        let a = segments[2 * (k - 1)].transform(&s);
        let b = segments[2 * (k - 1) + 1].transform(&s);
        segments.push(a);
        segments.push(b);
    }
    finalize_graph(side, base, segments, s, depth)
}

pub(crate) fn finalize_graph(
    side: Side,
    base: Interval,
    segments: Vec<GraphSegment>,
    s: PlaneAffineMap,
    depth: usize,
) -> Result<ExtensionGraph> {
    let limit_x = fixed_point_of(&s.x);
    let limit_value = fixed_point_of(&s.y);

    let mut sorted: Vec<usize> = (0..segments.len()).collect();
    sorted.sort_by(|&a, &b| {
        segments[a]
            .domain
            .lo
            .partial_cmp(&segments[b].domain.lo)
            .unwrap()
    });

    // Adjacent segments must abut with matching value and slope; the single
    // uncovered gap is the hole around the limit point left by truncation.
    let scale = base.len();
    let mut junctions = Vec::new();
    let mut holes = 0usize;
    for w in sorted.windows(2) {
        let a = &segments[w[0]];
        let b = &segments[w[1]];
        let gap = b.domain.lo - a.domain.hi;
        if gap.abs() <= 1e-12 * scale {
            let x = b.domain.lo;
            let (va, vb) = (a.eval(a.domain.hi), b.eval(x));
            if (va - vb).abs() > 1e-9 * scale {
                return Err(CoreError::ShapeViolation(format!(
                    "value jump {:.3e} at junction x = {x}",
                    (va - vb).abs()
                )));
            }
            let (da, db) = (a.deriv(a.domain.hi), b.deriv(x));
            junctions.push(Junction {
                x,
                value: vb,
                slope_in: da,
                slope_out: db,
            });
        } else if gap > 0.0 && a.domain.hi < limit_x && limit_x < b.domain.lo {
            holes += 1;
        } else {
            return Err(CoreError::ShapeViolation(format!(
                "segments [{:.12e},{:.12e}] and [{:.12e},{:.12e}] neither abut nor straddle the limit",
                a.domain.lo, a.domain.hi, b.domain.lo, b.domain.hi
            )));
        }
    }
    if holes != 1 {
        return Err(CoreError::ShapeViolation(format!(
            "expected exactly one truncation hole, found {holes}"
        )));
    }

    // One ledger entry per generation; both chains scale by the same factor
    // per application, so this is geometric and nonincreasing.
    let mut ledger = Vec::with_capacity(depth + 1);
    for k in 0..=depth {
        let l = segments[2 * k]
            .derivative_lipschitz()
            .max(segments[2 * k + 1].derivative_lipschitz());
        ledger.push(l);
    }
    for w in ledger.windows(2) {
        if w[1] > w[0] * (1.0 + 1e-12) {
            return Err(CoreError::ShapeViolation(format!(
                "derivative-Lipschitz ledger not monotone: {} -> {}",
                w[0], w[1]
            )));
        }
    }

    let mut boxes = Vec::with_capacity(depth + 1);
    let mut bx = BoxRegion { x: base, y: base };
    for _ in 0..=depth {
        boxes.push(bx);
        bx = BoxRegion {
            x: s.x.image(&bx.x),
            y: s.y.image(&bx.y),
        };
    }

    Ok(ExtensionGraph {
        side,
        base,
        segments,
        junctions,
        boxes,
        lipschitz_ledger: ledger,
        scaling: s,
        depth,
        limit_x,
        limit_value,
        sorted,
    })
}

impl ExtensionGraph {
    fn covering_segment(&self, x: f64) -> Option<&GraphSegment> {
        // Segment endpoints produced along different arithmetic routes can
        // differ in the last ulp, leaving cracks (and base-edge shortfalls)
        // far narrower than the truncation hole; the slack closes those
        // without swallowing the hole at any practical depth.
        let slack = 1e-13 * self.base.len();
        let idx = self
            .sorted
            .partition_point(|&i| self.segments[i].domain.hi < x);
        match self.sorted.get(idx) {
            Some(&i) if x >= self.segments[i].domain.lo - slack => Some(&self.segments[i]),
            Some(_) => None,
            // beyond the last hi: tolerate the base-edge shortfall
            None => {
                let last = &self.segments[*self.sorted.last().unwrap()];
                (x <= last.domain.hi + slack).then_some(last)
            }
        }
    }

    /// Evaluate at x. Points inside the truncation hole are resolved by the
    /// scaling recursion itself (unzoom until covered), so the evaluation is
    /// exact at every depth; the limit point returns the box-corner limit.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let hy = self.scaling.y;
        // limit_value is the fixed point of hy, so the lift chain keeps it
        self.eval_with(x, self.limit_value, |seg, x| seg.eval(x), |acc| hy.eval(acc))
    }

    /// Derivative; 0 at the limit point (segment slopes decay geometrically
    /// toward it, and 0 is fixed under the unzoom lift).
    pub fn deriv(&self, x: f64) -> Result<f64> {
        let ry = self.scaling.y.slope / self.scaling.x.slope;
        self.eval_with(x, 0.0, |seg, x| seg.deriv(x), |acc| acc * ry)
    }

    fn eval_with(
        &self,
        mut x: f64,
        at_limit: f64,
        leaf: impl Fn(&GraphSegment, f64) -> f64,
        lift: impl Fn(f64) -> f64,
    ) -> Result<f64> {
        // renormalized copies place the base edges an ulp or two off, so
        // clamp a sliver before rejecting
        let slack = 1e-13 * self.base.len();
        if !self.base.contains(x) {
            if x >= self.base.lo - slack && x <= self.base.hi + slack {
                x = x.clamp(self.base.lo, self.base.hi);
            } else {
                return Err(CoreError::OutsideDomain {
                    x,
                    lo: self.base.lo,
                    hi: self.base.hi,
                });
            }
        }
        let hx_inv = self.scaling.x.inverse();
        let mut depth = 0usize;
        loop {
            let acc = if x == self.limit_x {
                Some(at_limit)
            } else {
                self.covering_segment(x).map(|seg| leaf(seg, x))
            };
            if let Some(mut acc) = acc {
                for _ in 0..depth {
                    acc = lift(acc);
                }
                return Ok(acc);
            }
            x = hx_inv.eval(x);
            depth += 1;
            if !self.base.contains(x) || depth > 4096 {
                return Err(CoreError::ShapeViolation(format!(
                    "unzoom recursion failed to resolve x = {x} near the limit"
                )));
            }
        }
    }

    /// Max |slope| per generation (max over the generation's two segments).
    pub fn generation_max_slopes(&self) -> Vec<f64> {
        (0..=self.depth)
            .map(|k| {
                self.segments[2 * k]
                    .max_abs_slope()
                    .max(self.segments[2 * k + 1].max_abs_slope())
            })
            .collect()
    }

    /// Drop the outermost generation and unzoom the rest.
    pub fn renormalize(&self) -> Result<ExtensionGraph> {
        if self.depth < 2 {
            return Err(CoreError::DepthExhausted {
                need: 2,
                have: self.depth,
            });
        }
        let s_inv = self.scaling.inverse();
        let segments: Vec<GraphSegment> = self.segments[2..]
            .iter()
            .map(|seg| seg.transform(&s_inv))
            .collect();
        finalize_graph(self.side, self.base, segments, self.scaling, self.depth - 1)
    }
}

/// Sup over a uniform grid of |h^{-1}(g(g(g(h(x))))) - g(x)|: the zoomed
/// third iterate against the graph itself.
pub fn zoom_reproduction_sup(g: &ExtensionGraph, grid: usize) -> Result<f64> {
    let hx = g.scaling.x;
    let hx_inv = hx.inverse();
    let mut worst = 0.0_f64;
    for i in 0..=grid {
        let x = g.base.lo + g.base.len() * i as f64 / grid as f64;
        let u1 = g.eval(hx.eval(x))?;
        let u2 = g.eval(u1)?;
        let u3 = g.eval(u2)?;
        worst = worst.max((hx_inv.eval(u3) - g.eval(x)?).abs());
    }
    Ok(worst)
}

#[derive(Debug, Clone)]
pub struct JoinedMap {
    pub left: ExtensionGraph,
    pub right: ExtensionGraph,
    pub connector: GraphSegment,
}

impl JoinedMap {
    pub fn eval(&self, x: f64) -> Result<f64> {
        if x <= self.left.base.hi {
            self.left.eval(x)
        } else if x >= self.right.base.lo {
            self.right.eval(x)
        } else {
            Ok(self.connector.eval(x))
        }
    }

    pub fn connector_lipschitz(&self) -> f64 {
        self.connector.derivative_lipschitz()
    }
}

/// Join the two one-sided graphs by a C1 Hermite connector across the
/// middle, then verify the three-lap shape on a grid.
pub fn join_bimodal(
    g_left: ExtensionGraph,
    g_right: ExtensionGraph,
    shape_grid: usize,
) -> Result<JoinedMap> {
    if g_left.depth != g_right.depth {
        return Err(CoreError::BadRange(format!(
            "depth mismatch: left {}, right {}",
            g_left.depth, g_right.depth
        )));
    }
    let xl = g_left.base.hi;
    let xr = g_right.base.lo;
    let connector = GraphSegment::from_pieces(vec![hermite(
        xl,
        xr,
        g_left.eval(xl)?,
        g_right.eval(xr)?,
        g_left.deriv(xl)?,
        g_right.deriv(xr)?,
    )]);
    let joined = JoinedMap {
        left: g_left,
        right: g_right,
        connector,
    };

    // down-up-down: exactly two sign changes of the successive differences,
    // each inside a grid cell of the corresponding critical limit point
    let mut signs = Vec::with_capacity(shape_grid);
    let mut prev = joined.eval(0.0)?;
    for i in 1..=shape_grid {
        let x = i as f64 / shape_grid as f64;
        let v = joined.eval(x)?;
        signs.push(v > prev);
        prev = v;
    }
    let step = 1.0 / shape_grid as f64;
    let mut changes = Vec::new();
    for i in 1..signs.len() {
        if signs[i] != signs[i - 1] {
            changes.push(i as f64 * step);
        }
    }
    let (cl, cr) = (joined.left.limit_x, joined.right.limit_x);
    let ok = changes.len() == 2
        && !signs[0]
        && (changes[0] - cl).abs() <= 2.0 * step
        && (changes[1] - cr).abs() <= 2.0 * step;
    if !ok {
        return Err(CoreError::ShapeViolation(format!(
            "expected down-up-down with turns near {cl:.6} and {cr:.6}, got {} sign changes",
            changes.len()
        )));
    }
    Ok(joined)
}

/// One-sided finite-difference slopes at the junctions, for the derivative
/// continuity report. The truncation bias of a one-sided difference of a
/// C^{1+Lip} function is bounded by lambda * h / 2 per side, so agreement is
/// asserted against that scale, while the analytic one-sided slopes must
/// match to the tight tolerance.
pub struct JunctionSlopeRecord {
    pub x: f64,
    pub analytic_in: f64,
    pub analytic_out: f64,
    pub fd_in: f64,
    pub fd_out: f64,
}

pub fn junction_slope_report(
    g: &ExtensionGraph,
    count: usize,
    h: f64,
) -> Result<Vec<JunctionSlopeRecord>> {
    // order junctions by generation: outermost first
    let mut by_gen = g.junctions.clone();
    by_gen.sort_by(|a, b| {
        (b.x - g.limit_x)
            .abs()
            .partial_cmp(&(a.x - g.limit_x).abs())
            .unwrap()
    });
    by_gen
        .iter()
        .take(count)
        .map(|j| {
            Ok(JunctionSlopeRecord {
                x: j.x,
                analytic_in: j.slope_in,
                analytic_out: j.slope_out,
                fd_in: (g.eval(j.x)? - g.eval(j.x - h)?) / h,
                fd_out: (g.eval(j.x + h)? - g.eval(j.x)?) / h,
            })
        })
        .collect()
}

/// Empirical sup of |g'(u) - g'(v)| / |u - v| over supplied pairs.
pub fn empirical_derivative_lipschitz(g: &ExtensionGraph, pairs: &[(f64, f64)]) -> Result<f64> {
    let mut worst = 0.0_f64;
    for &(u, v) in pairs {
        if u == v {
            continue;
        }
        let q = (g.deriv(u)? - g.deriv(v)?).abs() / (u - v).abs();
        worst = worst.max(q);
    }
    Ok(worst)
}
