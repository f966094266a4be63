use crate::error::{Error, Result};
use crate::geometry::ComplexGeodesic;
use crate::hermitian::{reflection_about, PointClass, ProjectivePoint};
use crate::scalar::Scalar;

use super::words::{Relation, RepKind, Representation, Word};

/// Five involutions r1..r5 and the complex geodesics obtained by reflecting C1 = p1^perp.
#[derive(Clone, Debug, PartialEq)]
pub struct H5<T> {
    pub rep: Representation<T>,
    pub points: [ProjectivePoint<T>; 5],
    /// C1 and its images C2 = r2 C1, C3 = r3 C2, C4 = r4 C3.
    pub geodesics: [ComplexGeodesic<T>; 4],
    /// Residual of r5 r4 r3 r2 r1 against the identity; not required to vanish.
    pub residual: T,
}

pub fn h5_builder<T: Scalar>(p1: &ProjectivePoint<T>, rest: &[ProjectivePoint<T>; 4]) -> Result<H5<T>> {
    p1.require(PointClass::Positive)?;
    for p in rest.iter() {
        p.require(PointClass::Negative)?;
    }
    let points = [*p1, rest[0], rest[1], rest[2], rest[3]];
    let mut generators = Vec::with_capacity(5);
    let mut relations = Vec::with_capacity(6);
    for (k, p) in points.iter().enumerate() {
        let name = format!("r{}", k + 1);
        generators.push((name.clone(), reflection_about(p)?));
        relations.push(Relation::new(&name, 2)?);
    }
    relations.push(Relation::new("r5 r4 r3 r2 r1", 1)?);
    let rep = Representation { generators, relations, kind: RepKind::Hyperelliptic };
    let c1 = ComplexGeodesic::new(*p1)?;
    let mut geodesics = vec![c1];
    for k in 1..4 {
        let r = rep.generator(&format!("r{}", k + 1))?;
        let prev = geodesics[k - 1].polar();
        geodesics.push(ComplexGeodesic::new(r.apply(prev))?);
    }
    let residual = rep.evaluate(&Word::parse("r5 r4 r3 r2 r1")?)?.distance_from_identity();
    let geodesics: [ComplexGeodesic<T>; 4] =
        geodesics.try_into().map_err(|_| Error::Degenerate("geodesic chain".into()))?;
    Ok(H5 { rep, points, geodesics, residual })
}
