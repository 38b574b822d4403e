//! Embedding of the full shift on finitely many symbols into the extension:
//! each symbol indexes a filler policy (a C1 bump of fixed amplitude on both
//! gap fillers of the seed pair), a symbol sequence selects the policy
//! generation by generation, and renormalization acts as the shift.

use crate::error::{CoreError, Result};
use crate::extension::{
    finalize_graph, join_bimodal, mirror_segment, plane_scaling, seed_segments_with_bump,
    ExtensionGraph, GraphSegment, JoinedMap, PlaneAffineMap,
};
use crate::family::Side;
use crate::scaling::solve_fixed_point;
use crate::tower::Interval;

pub const DEFAULT_AMPLITUDE_STEP: f64 = 0.002;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolSequence {
    symbols: Vec<u8>,
    pub alphabet_size: usize,
}

impl SymbolSequence {
    pub fn new(symbols: Vec<u8>, alphabet_size: usize) -> Result<SymbolSequence> {
        if symbols.is_empty() {
            return Err(CoreError::SequenceTooShort { len: 0, need: 1 });
        }
        for &s in &symbols {
            if (s as usize) >= alphabet_size {
                return Err(CoreError::AlphabetMismatch {
                    symbol: s,
                    alphabet: alphabet_size,
                });
            }
        }
        Ok(SymbolSequence {
            symbols,
            alphabet_size,
        })
    }

    pub fn constant(symbol: u8, len: usize, alphabet_size: usize) -> Result<SymbolSequence> {
        SymbolSequence::new(vec![symbol; len], alphabet_size)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    /// Drop the first symbol.
    pub fn shift(&self) -> Result<SymbolSequence> {
        if self.symbols.len() < 2 {
            return Err(CoreError::SequenceTooShort {
                len: self.symbols.len(),
                need: 2,
            });
        }
        Ok(SymbolSequence {
            symbols: self.symbols[1..].to_vec(),
            alphabet_size: self.alphabet_size,
        })
    }
}

/// One seed pair per symbol and side. Policy i bumps both fillers by
/// step * (i - 1), so policy 1 is the plain extension; the right-hand seeds
/// are the exact mirror images, keeping the join symmetric for constant
/// sequences.
pub struct PolicyFamily {
    pub alphabet_size: usize,
    pub amplitude_step: f64,
    left_seeds: Vec<(GraphSegment, GraphSegment)>,
    right_seeds: Vec<(GraphSegment, GraphSegment)>,
    s_left: PlaneAffineMap,
    s_right: PlaneAffineMap,
    base_left: Interval,
    base_right: Interval,
}

impl PolicyFamily {
    pub fn new(alphabet_size: usize, amplitude_step: f64) -> Result<PolicyFamily> {
        if alphabet_size < 2 {
            return Err(CoreError::BadRange(format!(
                "alphabet size {alphabet_size} leaves nothing to distinguish"
            )));
        }
        let c_left = solve_fixed_point(Side::Left, 1e-13)?.c_star;
        let f_left = crate::tower::build_fs(
            Side::Left,
            c_left,
            crate::scaling::scaling_ratios(Side::Left, c_left),
            1,
            1e-8,
        )?;
        let c_right = solve_fixed_point(Side::Right, 1e-13)?.c_star;
        let f_right = crate::tower::build_fs(
            Side::Right,
            c_right,
            crate::scaling::scaling_ratios(Side::Right, c_right),
            1,
            1e-8,
        )?;
        let s_left = plane_scaling(&f_left)?;
        let s_right = plane_scaling(&f_right)?;

        let mut left_seeds = Vec::with_capacity(alphabet_size);
        let mut right_seeds = Vec::with_capacity(alphabet_size);
        for i in 0..alphabet_size {
            let a = amplitude_step * (i as f64 - 1.0);
            let pair = seed_segments_with_bump(&f_left, a)?;
            right_seeds.push((mirror_segment(&pair.0), mirror_segment(&pair.1)));
            left_seeds.push(pair);
        }

        Ok(PolicyFamily {
            alphabet_size,
            amplitude_step,
            left_seeds,
            right_seeds,
            s_left,
            s_right,
            base_left: f_left.base,
            base_right: f_right.base,
        })
    }

    /// Smallest pairwise sup distance between the seed policies, measured on
    /// per-piece grids of the left seeds.
    pub fn separation(&self) -> f64 {
        let mut min_sep = f64::INFINITY;
        for i in 0..self.alphabet_size {
            for j in (i + 1)..self.alphabet_size {
                let mut sup = 0.0_f64;
                for (a, b) in [
                    (&self.left_seeds[i].0, &self.left_seeds[j].0),
                    (&self.left_seeds[i].1, &self.left_seeds[j].1),
                ] {
                    sup = sup.max(segment_sup_distance(a, b, 64));
                }
                min_sep = min_sep.min(sup);
            }
        }
        min_sep
    }

    /// One side of b_alpha: generation k is the (k+1)-th symbol's seed pair
    /// pushed down k levels.
    pub fn side_graph(
        &self,
        side: Side,
        alpha: &SymbolSequence,
        depth: usize,
    ) -> Result<ExtensionGraph> {
        let (seeds, s, base) = match side {
            Side::Left => (&self.left_seeds, self.s_left, self.base_left),
            Side::Right => (&self.right_seeds, self.s_right, self.base_right),
        };
        let mut segments = Vec::with_capacity(2 * depth);
        let mut zoom_k = PlaneAffineMap::identity();
        for k in 0..depth {
            let sym = alpha.symbols()[k] as usize;
            let pair = &seeds[sym];
            if k == 0 {
                segments.push(pair.0.clone());
                segments.push(pair.1.clone());
            } else {
                segments.push(pair.0.transform(&zoom_k));
                segments.push(pair.1.transform(&zoom_k));
            }
            zoom_k = s.compose(&zoom_k);
        }
        finalize_graph(side, base, segments, s, depth - 1)
    }
}

fn segment_sup_distance(a: &GraphSegment, b: &GraphSegment, per_piece: usize) -> f64 {
    let mut sup = 0.0_f64;
    for p in &a.pieces {
        for i in 0..=per_piece {
            let x = p.lo + p.len() * i as f64 / per_piece as f64;
            sup = sup.max((a.eval(x) - b.eval(x)).abs());
        }
    }
    sup
}

/// Build the bimodal map b_alpha: generation k uses the policy named by the
/// (k+1)-th symbol, on both sides.
pub fn build_b_alpha(
    alpha: &SymbolSequence,
    policies: &PolicyFamily,
    depth: usize,
) -> Result<JoinedMap> {
    if alpha.alphabet_size != policies.alphabet_size {
        return Err(CoreError::BadRange(format!(
            "sequence over {} symbols against a family of {}",
            alpha.alphabet_size, policies.alphabet_size
        )));
    }
    if depth < 2 {
        return Err(CoreError::DepthExhausted {
            need: 2,
            have: depth,
        });
    }
    if alpha.len() < depth {
        return Err(CoreError::SequenceTooShort {
            len: alpha.len(),
            need: depth,
        });
    }
    let left = policies.side_graph(Side::Left, alpha, depth)?;
    let right = policies.side_graph(Side::Right, alpha, depth)?;
    join_bimodal(left, right, 1000)
}

/// Renormalize a joined extension: both sides drop their outermost
/// generation and unzoom, and the connector is rebuilt from the new ends.
pub fn renormalize_extended(b: &JoinedMap) -> Result<JoinedMap> {
    let left = b.left.renormalize()?;
    let right = b.right.renormalize()?;
    join_bimodal(left, right, 1000)
}

/// Sup distance between two joined maps over per-piece grids of `a`'s
/// segments plus the connector; fine enough to see the deepest generation.
pub fn joined_sup_distance(a: &JoinedMap, b: &JoinedMap, per_piece: usize) -> Result<f64> {
    let mut sup = 0.0_f64;
    let mut probe = |seg: &GraphSegment| -> Result<()> {
        for p in &seg.pieces {
            for i in 0..=per_piece {
                let x = p.lo + p.len() * i as f64 / per_piece as f64;
                sup = sup.max((a.eval(x)? - b.eval(x)?).abs());
            }
        }
        Ok(())
    };
    for seg in a.left.segments.iter().chain(a.right.segments.iter()) {
        probe(seg)?;
    }
    probe(&a.connector)?;
    Ok(sup)
}

/// Sup distance between b_{a1} and b_{a2}; strictly positive exactly when
/// the truncated sequences differ.
pub fn injectivity_probe(
    a1: &SymbolSequence,
    a2: &SymbolSequence,
    policies: &PolicyFamily,
    depth: usize,
) -> Result<f64> {
    let b1 = build_b_alpha(a1, policies, depth)?;
    let b2 = build_b_alpha(a2, policies, depth)?;
    joined_sup_distance(&b1, &b2, 64)
}
