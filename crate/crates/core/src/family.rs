//! The two one-parameter families of symmetric cubic branch maps on [0, 1].
//!
//! The left family `b_c` has its surviving critical point at `c` in
//! `(0, (3 - sqrt(3))/6)`; the right family at `c` in `((3 + sqrt(3))/6, 1)`.
//! Both are cubic polynomials normalized so that the critical value at the
//! interior minimum (left) resp. maximum (right) hits the interval endpoint:
//! `b_c(c) = 0` on the left, `b~_c(c) = 1` on the right.

use crate::error::{CoreError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn mirror(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }

    /// Open interval of admissible parameters.
    pub fn admissible_interval(self) -> (f64, f64) {
        let t = (3.0 - 3.0_f64.sqrt()) / 6.0;
        match self {
            Side::Left => (0.0, t),
            Side::Right => (1.0 - t, 1.0),
        }
    }

    /// Seed of the critical orbit: the image of the surviving critical point.
    pub fn orbit_seed(self) -> f64 {
        match self {
            Side::Left => 0.0,
            Side::Right => 1.0,
        }
    }
}

pub fn check_admissible(side: Side, c: f64) -> Result<()> {
    let (lo, hi) = side.admissible_interval();
    if c <= lo || c >= hi {
        return Err(CoreError::OutsideAdmissible { c, lo, hi });
    }
    Ok(())
}

/// Evaluate the branch family at `x`.
pub fn branch_value(side: Side, c: f64, x: f64) -> f64 {
    // Shared cubic numerator a0(c) + 6c(1-c).x - 3x^2 + 2x^3; only the
    // constant term and the sign convention of the denominator differ.
    match side {
        Side::Left => {
            let a0 = 1.0 - 6.0 * c + 9.0 * c * c - 4.0 * c * c * c;
            let a1 = 6.0 * c * (1.0 - c);
            let den = (1.0 - 2.0 * c).powi(3);
            1.0 - (a0 + x * (a1 + x * (-3.0 + 2.0 * x))) / den
        }
        Side::Right => {
            let a0 = 4.0 * c * c * c - 3.0 * c * c;
            let a1 = 6.0 * c * (1.0 - c);
            let den = (2.0 * c - 1.0).powi(3);
            1.0 - (a0 + x * (a1 + x * (-3.0 + 2.0 * x))) / den
        }
    }
}

/// Derivative in `x`; factors as -6(c - x)(1 - c - x) / den, so the critical
/// points sit at x = c and x = 1 - c on both sides.
pub fn branch_derivative(side: Side, c: f64, x: f64) -> f64 {
    let den = match side {
        Side::Left => (1.0 - 2.0 * c).powi(3),
        Side::Right => (2.0 * c - 1.0).powi(3),
    };
    -6.0 * (c - x) * (1.0 - c - x) / den
}

/// First `len` points of the critical orbit: `[b^1, b^2, ..., b^len]` of the
/// seed 0 (left) or 1 (right).
pub fn critical_orbit(side: Side, c: f64, len: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(len);
    let mut x = side.orbit_seed();
    for _ in 0..len {
        x = branch_value(side, c, x);
        out.push(x);
    }
    out
}
