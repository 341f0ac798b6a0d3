use alloc::string::String;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not a prime power")]
    NotPrimePower(usize),
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("extension degree {0} is not even")]
    OddDegree(u32),
    #[error("GF({0}^2) exceeds the 256-element table limit")]
    TooLarge(usize),
    #[error("modulus must be monic of the stated degree with coefficients below p")]
    BadModulus,
    #[error("modulus is not primitive")]
    NotPrimitive,
    #[error("no primitive polynomial of degree {degree} over GF({p})")]
    NoPrimitivePolynomial { p: u32, degree: u32 },
}

/// Failures of geometric constructions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("points are not distinct")]
    Coincident,
    #[error("points are not collinear")]
    NotCollinear,
    #[error("sublines must share exactly one point and lie on distinct lines")]
    BadSublinePair,
    #[error("Baer subgenerator has no point on the Hermitian curve")]
    NoCurvePoint,
    #[error("vector is isotropic")]
    Isotropic,
    #[error("scalar does not have norm 1")]
    NotNormOne,
    #[error("unknown object: {0}")]
    Unknown(String),
    #[error("certification failed: {0}")]
    Certification(String),
    #[error("degenerate section: singular radical vector {0}")]
    Degenerate(String),
    #[error("collinearity check failed: {0}")]
    Collinearity(String),
}
