use nalgebra::{Matrix4, SymmetricEigen};
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::geometry::TangentSpace;
use crate::hermitian::{herm, phase_align, Isometry};
use crate::linalg::Vec3;
use crate::scalar::Scalar;

use super::kaehler::frame_orientation;
use super::mesh::SectionMesh;

/// Per-vertex g-orthonormal tangent pair (u1, u2) and normal pair (v1, v2), all expressed
/// for the unit representative `base[k]`.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameField<T> {
    pub base: Vec<Vec3<T>>,
    pub u: Vec<[Vec3<T>; 2]>,
    pub v: Vec<[Vec3<T>; 2]>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrameCheck {
    pub orthonormality: f64,
    pub min_orientation: f64,
}

/// Log direction at x (unit) toward y: the tangent part of y phase-aligned with x.
fn log_dir<T: Scalar>(x: &Vec3<T>, y: &Vec3<T>) -> Vec3<T> {
    let yu = phase_align(x, y);
    yu + x.scale(herm(&yu, x))
}

fn normalize<T: Scalar>(v: &Vec3<T>) -> Option<Vec3<T>> {
    let n = herm(v, v).re;
    if n > T::lit(1e-24) {
        Some(v.scale_re(T::one() / n.sqrt()))
    } else {
        None
    }
}

fn g<T: Scalar>(a: &Vec3<T>, b: &Vec3<T>) -> T {
    herm(a, b).re
}

impl<T: Scalar> FrameField<T> {
    /// Tangent plane by principal directions of the neighbour log directions, oriented by an
    /// incident counterclockwise triangle; normal plane as the g-complement, oriented so that
    /// (u1, u2, v1, v2) has the complex orientation.
    pub fn from_mesh(m: &SectionMesh<T>) -> Result<Self> {
        let nb = m.neighbours();
        let mut incident: Vec<Option<[usize; 3]>> = vec![None; m.embedding.len()];
        for t in m.triangles.iter() {
            for k in 0..3 {
                incident[t[k]].get_or_insert([t[k], t[(k + 1) % 3], t[(k + 2) % 3]]);
            }
        }
        let mut base = Vec::with_capacity(nb.len());
        let mut us = Vec::with_capacity(nb.len());
        let mut vs = Vec::with_capacity(nb.len());
        for (k, ns) in nb.iter().enumerate() {
            let x = m.embedding[k].unit_rep()?;
            let ts = TangentSpace::at_unit(x);
            let dirs: Vec<Vec3<T>> = ns
                .iter()
                .map(|&j| m.embedding[j].unit_rep().map(|y| log_dir(&x, &y)))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .filter_map(|d| normalize(&d))
                .collect();
            if dirs.len() < 2 {
                return Err(Error::Mesh(format!("vertex {k} has fewer than two neighbours")));
            }
            let mut cov = Matrix4::<f64>::zeros();
            for d in dirs.iter() {
                let r = ts.to_real(d).map(|c| c.to_f64_lossy());
                for a in 0..4 {
                    for b in 0..4 {
                        cov[(a, b)] += r[a] * r[b];
                    }
                }
            }
            let eig = SymmetricEigen::new(cov);
            let mut order: Vec<usize> = (0..4).collect();
            order.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap_or(std::cmp::Ordering::Equal));
            let col = |c: usize| -> Vec3<T> {
                let e = eig.eigenvectors.column(c);
                ts.from_real(&[T::lit(e[0]), T::lit(e[1]), T::lit(e[2]), T::lit(e[3])])
            };
            let (p1, p2) = (col(order[0]), col(order[1]));
            let [_, i1, i2] = incident[k].ok_or_else(|| Error::Mesh(format!("vertex {k} is in no triangle")))?;
            let d1 = log_dir(&x, &m.embedding[i1].unit_rep()?);
            let d2 = log_dir(&x, &m.embedding[i2].unit_rep()?);
            // u1 along the first incident edge, projected to the plane.
            let u1 = normalize(&(p1.scale_re(g(&d1, &p1)) + p2.scale_re(g(&d1, &p2))))
                .ok_or_else(|| Error::Mesh(format!("edge at vertex {k} is normal to the fitted plane")))?;
            let mut u2 = {
                let a = p1 - u1.scale_re(g(&p1, &u1));
                let b = p2 - u1.scale_re(g(&p2, &u1));
                let pick = if g(&a, &a) >= g(&b, &b) { a } else { b };
                normalize(&pick).ok_or_else(|| Error::Mesh(format!("degenerate plane at vertex {k}")))?
            };
            let cross = g(&d1, &u1) * g(&d2, &u2) - g(&d1, &u2) * g(&d2, &u1);
            if cross < T::zero() {
                u2 = -u2;
            }
            let i = Complex::new(T::zero(), T::one());
            let mut normal: Vec<Vec3<T>> = Vec::with_capacity(2);
            let e = ts.basis();
            for cand in [u1.scale(i), u2.scale(i), e[0], e[0].scale(i), e[1], e[1].scale(i)] {
                let mut w = cand;
                for q in [&u1, &u2].into_iter().chain(normal.iter()) {
                    w = w - q.scale_re(g(&w, q));
                }
                if g(&w, &w) > T::lit(0.25) {
                    normal.push(normalize(&w).expect("nonzero"));
                    if normal.len() == 2 {
                        break;
                    }
                }
            }
            if normal.len() < 2 {
                return Err(Error::Mesh(format!("no normal plane at vertex {k}")));
            }
            let (v1, mut v2) = (normal[0], normal[1]);
            if frame_orientation(&ts, [&u1, &u2, &v1, &v2]) < T::zero() {
                v2 = -v2;
            }
            base.push(x);
            us.push([u1, u2]);
            vs.push([v1, v2]);
        }
        Ok(Self { base, u: us, v: vs })
    }

    pub fn check(&self) -> FrameCheck {
        let mut worst = 0.0f64;
        let mut orient = f64::INFINITY;
        for k in 0..self.base.len() {
            let all = [self.u[k][0], self.u[k][1], self.v[k][0], self.v[k][1]];
            for a in 0..4 {
                for b in 0..4 {
                    let want = if a == b { T::one() } else { T::zero() };
                    worst = worst.max((g(&all[a], &all[b]) - want).abs().to_f64_lossy());
                }
                worst = worst.max(herm(&all[a], &self.base[k]).norm().to_f64_lossy());
            }
            let ts = TangentSpace::at_unit(self.base[k]);
            orient = orient.min(frame_orientation(&ts, [&all[0], &all[1], &all[2], &all[3]]).to_f64_lossy());
        }
        FrameCheck { orthonormality: worst, min_orientation: orient }
    }
}

/// Parallel transport of v (tangent at unit x) along the geodesic to the point with unit
/// representative `yrep`, by the transvection; result expressed for `yrep`.
pub fn transport<T: Scalar>(v: &Vec3<T>, x: &Vec3<T>, yrep: &Vec3<T>) -> Vec3<T> {
    let y = phase_align(x, yrep);
    let ch = (-herm(&y, x).re).max(T::one());
    let sh = (ch * ch - T::one()).sqrt();
    if sh <= T::lit(1e-15) {
        let mu = -herm(yrep, &y);
        return v.scale(mu);
    }
    let w = (y - x.scale_re(ch)).scale_re(T::one() / sh);
    let alpha = herm(v, &w);
    let tv = *v + (x.scale_re(sh) + w.scale_re(ch - T::one())).scale(alpha);
    // yrep = mu y, and a tangent vector at y scales with the representative.
    let mu = -herm(yrep, &y);
    tv.scale(mu)
}

fn project_pair<T: Scalar>(w: &Vec3<T>, pair: &[Vec3<T>; 2]) -> Vec3<T> {
    pair[0].scale_re(g(w, &pair[0])) + pair[1].scale_re(g(w, &pair[1]))
}

/// Rotation angle of the frame `pair` at triangle vertex a after transporting pair[0] around
/// a -> b -> c -> a with projection onto the planes at each stop.
fn loop_holonomy<T: Scalar>(f: &FrameField<T>, planes: &[[Vec3<T>; 2]], tri: &[usize; 3]) -> Result<T> {
    let [a, b, c] = *tri;
    let mut w = planes[a][0];
    let mut at = a;
    for &next in [b, c, a].iter() {
        let moved = transport(&w, &f.base[at], &f.base[next]);
        w = normalize(&project_pair(&moved, &planes[next]))
            .ok_or_else(|| Error::HolonomyMismatch(format!("frame collapsed between vertices {at} and {next}")))?;
        at = next;
    }
    Ok(g(&w, &planes[a][1]).atan2(g(&w, &planes[a][0])))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EulerTotals {
    /// Tangent degree: total discrete curvature / 2 pi.
    pub chi_raw: f64,
    /// Normal degree, same construction on (v1, v2).
    pub e_raw: f64,
    pub max_plane_mismatch: f64,
}

/// Both bundle degrees from per-triangle holonomy of the projected Levi-Civita transport.
/// Side pairings are checked to carry frames' planes onto each other.
pub fn euler_via_mesh<T: Scalar>(m: &SectionMesh<T>, f: &FrameField<T>, pairing_tol: f64) -> Result<EulerTotals> {
    m.validate(pairing_tol)?;
    if f.base.len() != m.embedding.len() {
        return Err(Error::Mesh("frame field does not match the mesh".into()));
    }
    let mismatch = pairing_plane_mismatch(m, f)?;
    if !(mismatch <= pairing_tol.max(1e-8) * 1e2) {
        return Err(Error::HolonomyMismatch(format!("side pairing moves tangent planes off target by {mismatch:e}")));
    }
    let mut ta = 0.0;
    let mut na = 0.0;
    for t in m.triangles.iter() {
        ta += loop_holonomy(f, &f.u, t)?.to_f64_lossy();
        na += loop_holonomy(f, &f.v, t)?.to_f64_lossy();
    }
    let tau = std::f64::consts::TAU;
    Ok(EulerTotals { chi_raw: ta / tau, e_raw: na / tau, max_plane_mismatch: mismatch })
}

/// Max over paired vertices of the part of g_* (u1, u2) leaving the target tangent plane.
pub fn pairing_plane_mismatch<T: Scalar>(m: &SectionMesh<T>, f: &FrameField<T>) -> Result<f64> {
    let mut worst = 0.0f64;
    for p in m.side_pairings.iter() {
        for (&a, &b) in p.from.iter().zip(p.to.iter()) {
            worst = worst.max(push_mismatch(&p.isometry, f, a, b).to_f64_lossy());
        }
    }
    Ok(worst)
}

fn push_mismatch<T: Scalar>(iso: &Isometry<T>, f: &FrameField<T>, a: usize, b: usize) -> T {
    let gx = iso.apply_vec(&f.base[a]);
    let mu = -herm(&f.base[b], &gx) / herm(&gx, &gx).re.abs();
    let mut worst = T::zero();
    for u in f.u[a].iter() {
        let w = iso.apply_vec(u).scale(mu);
        let off = w - project_pair(&w, &f.u[b]);
        worst = worst.max(herm(&off, &off).re.abs().sqrt());
    }
    worst
}
