use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error("R(c) - c has constant sign on [{lo}, {hi}]; no fixed point bracketed")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("degenerate scaling ratio s1 = {s1:e} at c = {c}")]
    DegenerateRatio { c: f64, s1: f64 },

    #[error("parameter c = {c} outside admissible interval ({lo}, {hi})")]
    OutsideAdmissible { c: f64, lo: f64, hi: f64 },

    #[error("epsilon = {eps} outside configured window [{lo}, {hi}]")]
    EpsilonOutsideWindow { eps: f64, lo: f64, hi: f64 },

    #[error("scaling data not proper: simplex margin {margin:e} < required {required:e}")]
    ImproperData { margin: f64, required: f64 },

    #[error("residual {residual:e} exceeds tolerance {tol:e} at c = {c}")]
    ToleranceBreach { c: f64, residual: f64, tol: f64 },

    #[error("depth exhausted: need at least {need}, have {have}")]
    DepthExhausted { need: usize, have: usize },

    #[error("iteration budget exceeded: level {n} exceeds the 3^n budget cap n <= {max}")]
    BudgetExceeded { n: usize, max: usize },

    #[error("x = {x} outside domain [{lo}, {hi}]")]
    OutsideDomain { x: f64, lo: f64, hi: f64 },

    #[error("contraction order violated: need |y-slope| < |x-slope| < 1, got x {x:e}, y {y:e}")]
    ContractionOrder { x: f64, y: f64 },

    #[error("one-sided slope mismatch {mismatch:e} at x = {x}")]
    SlopeMismatch { x: f64, mismatch: f64 },

    #[error("shape violation: {0}")]
    ShapeViolation(String),

    #[error("branch structure violation: {0}")]
    BranchStructure(String),

    #[error("symbol {symbol} outside alphabet of size {alphabet}")]
    AlphabetMismatch { symbol: u8, alphabet: usize },

    #[error("symbol sequence too short: length {len}, need {need}")]
    SequenceTooShort { len: usize, need: usize },

    #[error("bad range: {0}")]
    BadRange(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
