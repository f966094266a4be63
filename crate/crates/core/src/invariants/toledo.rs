use crate::error::{Error, Result};
use crate::hermitian::{tance, ProjectivePoint};
use crate::representations::Representation;
use crate::scalar::Scalar;

use super::mesh::SectionMesh;
use super::quadrature::{omega_triangle, Integral, QuadratureOptions};

/// tau = (2/pi) * integral of omega.
pub fn toledo_from_integral(i: &Integral) -> Integral {
    let k = 2.0 / std::f64::consts::PI;
    Integral { value: k * i.value, error: k * i.error, evaluations: i.evaluations }
}

/// Toledo invariant of a turnover representation from the coned polygon x1 x2 x3 x4,
/// x4 = g1^-1 x2, split into (x1,x2,x3) and (x1,x3,x4).
pub fn toledo_via_coning<T: Scalar>(
    rep: &Representation<T>,
    fixed_points: &[ProjectivePoint<T>; 3],
    opts: &QuadratureOptions,
) -> Result<Integral> {
    for (k, x) in fixed_points.iter().enumerate() {
        let g = rep.generator(&format!("g{}", k + 1))?;
        let r = (tance(&g.apply(x), x)? - T::one()).abs();
        if !(r.to_f64_lossy() <= 1e-8) {
            return Err(Error::BadFixedPoint(r.to_f64_lossy()));
        }
    }
    let g1 = rep.generator("g1")?;
    let [x1, x2, x3] = *fixed_points;
    let x4 = g1.inverse().apply(&x2);
    let a = omega_triangle(&x1, &x2, &x3, opts)?;
    let b = omega_triangle(&x1, &x3, &x4, opts)?;
    Ok(toledo_from_integral(&(a + b)))
}

/// (2/pi) * sum over mesh triangles of the coned omega integral, in triangle order.
pub fn toledo_via_mesh<T: Scalar>(m: &SectionMesh<T>, opts: &QuadratureOptions, pairing_tol: f64) -> Result<Integral> {
    m.validate(pairing_tol)?;
    let mut acc = Integral::default();
    for t in m.triangles.iter() {
        acc = acc + omega_triangle(&m.embedding[t[0]], &m.embedding[t[1]], &m.embedding[t[2]], opts)?;
    }
    Ok(toledo_from_integral(&acc))
}
