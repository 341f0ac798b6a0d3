//! Finite-geometry core for the split Cayley hexagon H(q) built from Baer
//! subgenerators of the Hermitian surface H(3,q²) and its field reduction to
//! the parabolic quadric Q(6,q).
//!
//! The crate is `no_std` with `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod error;
pub mod galois;
pub mod hermitian;
pub mod hexagon;
pub mod matrix;
pub mod projective;
pub mod quadric;
pub mod unitary;

pub use error::{FieldError, GeometryError};
pub use galois::{Field, FieldElement, FieldSpec, Level};
pub use hermitian::{BaerSubgenerator, BaerSubline, DualBaerMatrix, HermitianSurface, LineType};
pub use matrix::Matrix3;
pub use hexagon::{IncidenceGeometry, PolygonCertificate};
pub use projective::{Point, Subspace, Vector};
pub use quadric::{BcsMap, LineSetCensus, QuadraticSpace, SplitCayleyCertificate};
pub use unitary::{NormClasses, OrbitTable, UnitaryMatrix3};
