use thiserror::Error;

/// Errors raised by the geometric primitives and the porism constructions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("point coincides with the inversion center")]
    PointAtInversionCenter,
    #[error("line passes through the inversion center")]
    LineThroughCenter,
    #[error("conic fit is rank deficient (second-smallest singular value {0:e})")]
    RankDeficient(f64),
    #[error("too few points: need {needed}, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("degenerate conic")]
    DegenerateConic,
    #[error("degenerate polygon: {0}")]
    DegeneratePolygon(&'static str),
    #[error("zero perimeter")]
    ZeroPerimeter,
    #[error("zero area")]
    ZeroArea,
    #[error("consecutive polar lines are parallel")]
    DegeneratePolar,
    #[error("polar image cross-check failed: pole and polar-intersection constructions differ by {0:e}")]
    PolarMismatch(f64),
    #[error("pedal cross-check failed: contact points and perpendicular feet differ by {0:e}")]
    PedalMismatch(f64),
    #[error("homogeneous coordinates describe a point at infinity")]
    InfinitePoint,
    #[error("parallel lines have no intersection")]
    ParallelLines,
}

/// Errors raised while building or sweeping a porism configuration.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PorismError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("chain circle {index} passes through the inversion center at phase {phase}")]
    DegenerateChainCircle { index: usize, phase: f64 },
    #[error("caustic is singular (R^2 cos^2(alpha) = x0^2)")]
    CausticSingular,
    #[error("closed form {0} is singular for this configuration")]
    FormulaSingular(&'static str),
    #[error("configuration is not in the hyperbola regime")]
    NotHyperbola,
    #[error("centroid ratio undefined: area centroid coincides with the incenter")]
    RatioUndefined,
    #[error("triangle center X{0} is undefined (point at infinity)")]
    CenterUndefined(u32),
    #[error("unsupported triangle center X{0}")]
    UnsupportedCenter(u32),
    #[error("circle and parabola admit no Poncelet triangles: {0}")]
    InvalidConfiguration(String),
    #[error(transparent)]
    Geom(#[from] GeomError),
}
