use num_complex::Complex;

use crate::error::{Error, Result};
use crate::geometry::{orientation4, TangentSpace};
use crate::hermitian::ProjectivePoint;
use crate::linalg::Vec3;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PlaneClass {
    Complex,
    Lagrangian,
    Generic,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KaehlerAngle<T> {
    /// omega(u1, u2) after g-orthonormalizing the pair; in [-1, 1].
    pub value: T,
    pub class: PlaneClass,
}

/// g-orthonormalize (u1, u2) in the tangent space `ts`.
pub fn orthonormal_pair<T: Scalar>(ts: &TangentSpace<T>, u1: &Vec3<T>, u2: &Vec3<T>) -> Result<(Vec3<T>, Vec3<T>)> {
    let a = ts.project(u1);
    let na = ts.g(&a, &a).sqrt();
    let scale = a.norm().max(ts.project(u2).norm()).max(T::min_positive_value());
    if !(na > T::lit(1e-12) * scale) {
        return Err(Error::Degenerate("tangent vectors do not span a plane".into()));
    }
    let a = a.scale_re(T::one() / na);
    let b = ts.project(u2);
    let b = b - a.scale_re(ts.g(&b, &a));
    let nb = ts.g(&b, &b).sqrt();
    if !(nb > T::lit(1e-10) * scale) {
        return Err(Error::Degenerate("tangent vectors do not span a plane".into()));
    }
    Ok((a, b.scale_re(T::one() / nb)))
}

/// omega(u1, u2) for the g-orthonormalized pair, with a class read off at tolerance `tol`.
pub fn kaehler_angle<T: Scalar>(x: &ProjectivePoint<T>, u1: &Vec3<T>, u2: &Vec3<T>, tol: f64) -> Result<KaehlerAngle<T>> {
    let ts = TangentSpace::at(x)?;
    // Tangent vectors are given for the point's unit representative.
    let (a, b) = orthonormal_pair(&ts, u1, u2)?;
    let value = ts.omega(&a, &b).max(-T::one()).min(T::one());
    let t = T::lit(tol);
    let class = if value.abs() > T::one() - t {
        PlaneClass::Complex
    } else if value.abs() < t {
        PlaneClass::Lagrangian
    } else {
        PlaneClass::Generic
    };
    Ok(KaehlerAngle { value, class })
}

/// Whether (u1, u2, i u2, i u1) has the complex orientation (u1, i u1, u2, i u2).
///
/// The two orders differ by an even permutation, so for a Lagrangian pair this holds for
/// either order of u1, u2. The check is the determinant sign itself.
pub fn lagrangian_frame_check<T: Scalar>(x: &ProjectivePoint<T>, u1: &Vec3<T>, u2: &Vec3<T>, tol: f64) -> Result<bool> {
    let ts = TangentSpace::at(x)?;
    let (a, b) = orthonormal_pair(&ts, u1, u2)?;
    let w = ts.omega(&a, &b);
    if w.abs() > T::lit(tol) {
        return Err(Error::NonLagrangian(w.to_f64_lossy()));
    }
    let i = Complex::new(T::zero(), T::one());
    let frame = [ts.to_real(&a), ts.to_real(&b), ts.to_real(&b.scale(i)), ts.to_real(&a.scale(i))];
    let reference = [ts.to_real(&a), ts.to_real(&a.scale(i)), ts.to_real(&b), ts.to_real(&b.scale(i))];
    let (d, r) = (orientation4(&frame), orientation4(&reference));
    Ok(d > T::zero() && r > T::zero())
}

/// Determinant of the real 4-frame (u1, u2, v1, v2) in complex-orientation coordinates.
pub fn frame_orientation<T: Scalar>(ts: &TangentSpace<T>, frame: [&Vec3<T>; 4]) -> T {
    orientation4(&[ts.to_real(frame[0]), ts.to_real(frame[1]), ts.to_real(frame[2]), ts.to_real(frame[3])])
}
