//! Renormalization toolkit for symmetric cubic bimodal maps: the one-hump
//! families and their critical orbits, scaling ratios and fixed points of
//! the renormalization map, the affine interval towers, piecewise-affine
//! limit maps with certification, the C^{1+Lip} extension, and the shift
//! embedding.

pub mod error;
pub mod extension;
pub mod family;
pub mod report;
pub mod scaling;
pub mod shift;
pub mod tower;

pub use error::{CoreError, Result};
pub use family::Side;
