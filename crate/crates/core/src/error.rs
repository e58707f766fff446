use std::path::PathBuf;

use thiserror::Error;

use crate::Complex;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate set: {0}")]
    DegenerateSet(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no closed-form Green's function for this set; use the nodal estimator instead")]
    OracleUnavailable,

    #[error("mesh exhausted: requested {requested} nodes from a mesh of {available} points")]
    MeshExhausted { requested: usize, available: usize },

    #[error("exhaustive search too large: C({points}, {subset}) exceeds {limit}")]
    SearchTooLarge {
        points: usize,
        subset: usize,
        limit: u64,
    },

    #[error("basis ill-conditioned at degree {requested}; achieved degree {achieved}")]
    IllConditioned { requested: usize, achieved: usize },

    #[error("non-finite sample at mesh index {0}")]
    NonFiniteSample(usize),

    #[error("level set leaves the sampling window; try window {suggested:?}")]
    LevelSetOutsideWindow { suggested: [f64; 4] },

    #[error("Green's function vanishes on the shell at t = {t}: mesh leaks into the polynomial hull")]
    ShellLeak { t: f64 },

    #[error("point {z} coincides with the pole")]
    Pole { z: Complex },

    #[error("decay of dist(chi_B, P_n) is not geometric (rate {rate:.4}, r2 {r2:.4})")]
    NotGeometric { rate: f64, r2: f64 },

    #[error("mesh inadequate: {0}")]
    MeshInadequate(String),

    #[error("spec parse error at line {line}: {message}")]
    SpecParse { line: usize, message: String },

    #[error("missing field `{field}` for kind `{kind}` (line {line})")]
    MissingField {
        kind: String,
        field: String,
        line: usize,
    },

    #[error("cache record {path:?} rejected: {reason}")]
    CacheRejected { path: PathBuf, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
