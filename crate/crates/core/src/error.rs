use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    // stable graphs
    #[error("graph is not connected")]
    Disconnected,
    #[error("edge {0} is not in the graph")]
    UnknownEdge(usize),
    #[error("malformed graph: {0}")]
    MalformedGraph(String),
    #[error("graph is not stable: {0}")]
    UnstableGraph(String),
    #[error("unstable signature (g, n) = ({g}, {n}): need 2g - 2 + n > 0")]
    UnstableSignature { g: u32, n: u32 },

    // linear stratifications
    #[error("invalid stratification: {0}")]
    InvalidStratification(String),
    #[error("order error: {0}")]
    Order(String),
    #[error("support error: {0}")]
    Support(String),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    // gluing engine
    #[error("region error: {0}")]
    Region(String),
    #[error("radius error: {0}")]
    Radius(String),
    #[error("injectivity check failed: {0}")]
    Injectivity(String),
    #[error("gluing data do not coincide: {0}")]
    NotCoincident(String),
    #[error("region is not of boundary type")]
    NotBoundaryType,
    #[error("model has no canonical chart for stratum {0}")]
    NoCanonicalDatum(usize),
    #[error("point outside chart domain: {0}")]
    OutOfDomain(String),
    #[error("separation unattainable: {0}")]
    Separation(String),

    // plumbing
    #[error("annulus violation: {0}")]
    Annulus(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("invalid horocycle structure: {0}")]
    InvalidHorocycle(String),
    #[error("no positive radius certified: {0}")]
    NoCertifiedRadius(String),
}
