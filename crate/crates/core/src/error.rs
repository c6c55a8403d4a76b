use std::sync::OnceLock;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("base mismatch: {0}")]
    BaseMismatch(String),
    #[error("not a discrete fibration: {0}")]
    NotDiscreteFibration(String),
    #[error("not a discrete opfibration: {0}")]
    NotDiscreteOpfibration(String),
    #[error("action of `{0}` is not a bijection")]
    NotBijective(String),
    #[error("arrow `{0}` is not idempotent")]
    NotIdempotent(String),
    #[error("{what} exceeds the size cap of {cap}")]
    SizeCap { what: String, cap: u64 },
    #[error("stabilization not certified below depth cap {cap}")]
    DepthCap { cap: usize },
    #[error("unsupported base: {0}")]
    UnsupportedBase(String),
    #[error("invalid data: {0}")]
    Invalid(String),
    #[error("{line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
}

impl Error {
    pub fn is_cap(&self) -> bool {
        matches!(self, Error::SizeCap { .. } | Error::DepthCap { .. })
    }
}

/// Enumeration limits shared by every search in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of search nodes visited by one functor/transformation search.
    pub search_nodes: u64,
    /// Maximum number of elements materialized in one function-set fiber.
    pub fiber_elements: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            search_nodes: 10_000_000,
            fiber_elements: 100_000,
        }
    }
}

/// Limits in effect for this process. `FIBRAE_SIZE_CAP` overrides both caps.
pub fn limits() -> Limits {
    static LIMITS: OnceLock<Limits> = OnceLock::new();
    *LIMITS.get_or_init(|| {
        let mut limits = Limits::default();
        if let Some(cap) = std::env::var("FIBRAE_SIZE_CAP")
            .ok()
            .and_then(|v| v.trim().parse::<u64>().ok())
        {
            limits.search_nodes = cap;
            limits.fiber_elements = cap;
        }
        limits
    })
}
