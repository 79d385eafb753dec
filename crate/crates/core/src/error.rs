use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("seed value is not on the curve (residual {residual:.3e})")]
    SeedOffCurve { residual: f64 },

    #[error("ambiguous sheet continuation near parameter {param}")]
    AmbiguousContinuation { param: f64 },

    #[error("differential evaluated at a branch point (w = 0)")]
    BranchPointSingularity,

    #[error("quadrature tolerance not met: error estimate {estimate:.3e} above target {target:.3e}")]
    ToleranceNotMet { estimate: f64, target: f64 },

    #[error("endpoint singularity grows like distance^{exponent:.3}, beyond the supported -2/3")]
    NonIntegrableSingularity { exponent: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("degenerate associate angle: cos θ = 0")]
    DegenerateAngle,

    #[error("point lies on the singular locus: {0}")]
    SingularPoint(String),

    #[error("sample point lies on the singular locus of the automorphism")]
    SampleOnSingularLocus,

    #[error("matrix group did not close within {0} elements")]
    NonClosure(usize),

    #[error("numeric and symbolic periods disagree for {label} component {component}: {difference:.3e}")]
    Mismatch {
        label: String,
        component: usize,
        difference: f64,
    },

    #[error("malformed matrix data: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
