use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("coordinate {index} is zero; Laurent polynomials are only defined on the torus")]
    ZeroCoordinate { index: usize },
    #[error("total degree is undefined for Laurent polynomials")]
    LaurentDegreeUndefined,
    #[error("operation requires a nonzero polynomial")]
    ZeroPolynomial,
    #[error("operation requires ordinary (non-Laurent) polynomials")]
    LaurentMode,
    #[error("negative exponent {exponent} in an ordinary polynomial")]
    NegativeExponent { exponent: i64 },
    #[error("exponent overflow")]
    ExponentOverflow,
    #[error("mixed exact/float arithmetic; convert explicitly with to_float()")]
    MixedMode,
    #[error("variable count mismatch: {left} vs {right}")]
    NvarsMismatch { left: usize, right: usize },
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("malformed input: {0}")]
    Input(String),
    #[error("system is not square: {equations} equations in {nvars} variables")]
    NotSquare { equations: usize, nvars: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("dimension {0} exceeds the supported maximum of 3")]
    DimensionTooLarge(usize),
    #[error("polytope is unbounded or empty")]
    UnboundedPolytope,
    #[error("polytope has non-integer vertices")]
    NonIntegerVertices,
    #[error("sum of polytopes is not full-dimensional")]
    DimensionDeficient,

    #[error("properness profile variant does not match the operation")]
    ProfileVariantMismatch,

    #[error("iteration did not converge; best residual {best_residual:e}")]
    NonConvergence { best_residual: f64 },
    #[error("system has a positive-dimensional zero set (identically vanishing resultant)")]
    PositiveDimensional,
    #[error("Jacobian is singular at the requested point (|det| = {0:e})")]
    SingularJacobian(f64),
    #[error("operation supports n <= {max}, got n = {got}")]
    UnsupportedDimension { got: usize, max: usize },

    #[error("a non-simple zero requires the Bochner-Martinelli or separable path")]
    MultipleZeroUnsupported,
    #[error("system nearly vanishes on the integration sphere (|P| = {0:e}); enlarge the radius")]
    ZeroOnSphere(f64),
    #[error("quadrature did not converge (last difference {0:e})")]
    QuadratureNotConverged(f64),

    #[error("evaluation matrix is ill-conditioned (sigma = {sigma:e}, threshold = {threshold:e})")]
    IllConditioned { sigma: f64, threshold: f64 },
    #[error("scan of {0} monomials exceeds the cap of 5000; pass an explicit Q list")]
    ScanTooLarge(usize),

    #[error("delta weights must be positive")]
    NonpositiveDelta,
    #[error("division identity failed to reconstruct Q (deviation {deviation:e} at sample {sample})")]
    ReconstructionFailed { deviation: f64, sample: usize },
    #[error("Newton polytope fails the good-polyhedron condition")]
    NonGoodPolyhedron,
    #[error("Hefer determinant support leaves the Minkowski sum of the Newton polytopes")]
    SupportConstraintViolated,
}
