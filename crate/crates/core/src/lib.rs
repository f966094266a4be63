//! Complex hyperbolic plane toolkit in the projective model.

pub mod error;
pub mod geometry;
pub mod hermitian;
pub mod invariants;
pub mod linalg;
pub mod quadrangle;
pub mod representations;
pub mod scalar;
pub mod tolerances;

pub use error::{Error, Result};
pub use scalar::Scalar;
pub use tolerances::Tolerances;

// Double-precision aliases; everything underneath is generic over `Scalar`.
pub type ComplexF64 = linalg::C<f64>;
pub type Vec3F64 = linalg::Vec3<f64>;
pub type Mat3F64 = linalg::Mat3<f64>;
pub type ProjectivePointF64 = hermitian::ProjectivePoint<f64>;
pub type IsometryF64 = hermitian::Isometry<f64>;
pub type OrthogonalFrameF64 = hermitian::OrthogonalFrame<f64>;
pub type ComplexGeodesicF64 = geometry::ComplexGeodesic<f64>;
pub type GeodesicF64 = geometry::Geodesic<f64>;
pub type BisectorF64 = geometry::Bisector<f64>;
pub type BisectorSegmentF64 = geometry::BisectorSegment<f64>;
pub type QuadrangleConfigF64 = quadrangle::QuadrangleConfig<f64>;
pub type TriangleInvariantF64 = quadrangle::TriangleInvariant<f64>;
pub type RepresentationF64 = representations::Representation<f64>;
pub type TurnoverF64 = representations::Turnover<f64>;
pub type SectionMeshF64 = invariants::SectionMesh<f64>;
pub type FrameFieldF64 = invariants::FrameField<f64>;
