use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("aliasing: relative energy {relative_energy:.3e} above degree {max_degree} exceeds {threshold:.1e}")]
    Aliasing {
        max_degree: usize,
        relative_energy: f64,
        threshold: f64,
    },

    #[error("not convex: eigenvalue {eigenvalue:.6e} at {location}")]
    NotConvex { eigenvalue: f64, location: String },

    #[error("support function not positive: h = {value:.6e} at {location}")]
    NotPositive { value: f64, location: String },

    #[error("image of the valuation is not convex: eigenvalue {eigenvalue:.6e} at node {node}")]
    ImageNotConvex { eigenvalue: f64, node: usize },

    #[error("area density is negative: {value:.6e} at node {node}")]
    NegativeDensity { value: f64, node: usize },

    #[error("kernel has non-positive mass a_0 = {0:.6e}")]
    ZeroMass(f64),

    #[error("cannot normalize: mean quantity {0:.6e} is not positive")]
    ZeroBody(f64),

    #[error("representation mismatch: {0}")]
    RepresentationMismatch(String),

    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for the numerical-validity failures (convexity of inputs or images).
    pub fn is_numerical_validity(&self) -> bool {
        matches!(
            self,
            Error::NotConvex { .. }
                | Error::NotPositive { .. }
                | Error::ImageNotConvex { .. }
                | Error::NegativeDensity { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
