//! Geodesics, complex geodesics, bisectors, slices and real planes.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::hermitian::{herm, phase_align, polar_span, polar_span_vec, tance, PointClass, ProjectivePoint};
use crate::linalg::{Mat3, Vec3, C};
use crate::scalar::Scalar;
use crate::tolerances::Tolerances;

/// P(polar^perp) intersected with the ball.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexGeodesic<T> {
    polar: ProjectivePoint<T>,
}

impl<T: Scalar> ComplexGeodesic<T> {
    pub fn new(polar: ProjectivePoint<T>) -> Result<Self> {
        polar.require(PointClass::Positive)?;
        Ok(Self { polar })
    }

    pub fn from_vec(v: Vec3<T>) -> Result<Self> {
        Self::new(ProjectivePoint::new(v)?)
    }

    /// The complex geodesic through two distinct points.
    pub fn through(x: &ProjectivePoint<T>, y: &ProjectivePoint<T>) -> Result<Self> {
        Self::new(polar_span(x, y)?)
    }

    pub fn polar(&self) -> &ProjectivePoint<T> {
        &self.polar
    }

    /// |<x, p>| relative to the norms.
    pub fn membership_residual(&self, x: &ProjectivePoint<T>) -> T {
        herm(x.rep(), self.polar.rep()).norm()
    }

    pub fn contains(&self, x: &ProjectivePoint<T>) -> bool {
        self.membership_residual(x) < T::lit(Tolerances::DEFAULT.membership)
    }

    /// Orthogonal projection of a point onto the line P(p^perp).
    pub fn project(&self, x: &Vec3<T>) -> Vec3<T> {
        let p = self.polar.rep();
        *x - p.scale(herm(x, p) / herm(p, p).re)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Position {
    Ultraparallel,
    Asymptotic,
    Concurrent,
}

pub fn position<T: Scalar>(c1: &ComplexGeodesic<T>, c2: &ComplexGeodesic<T>) -> Result<Position> {
    position_with(c1, c2, &Tolerances::DEFAULT)
}

pub fn position_with<T: Scalar>(c1: &ComplexGeodesic<T>, c2: &ComplexGeodesic<T>, tol: &Tolerances) -> Result<Position> {
    if polar_span(c1.polar(), c2.polar()).is_err() {
        return Err(Error::IdenticalGeodesics);
    }
    let t = tance(c1.polar(), c2.polar())?;
    let a = T::lit(tol.asymptotic);
    Ok(if (t - T::one()).abs() < a {
        Position::Asymptotic
    } else if t > T::one() {
        Position::Ultraparallel
    } else {
        Position::Concurrent
    })
}

/// Real geodesic through two negative points, second representative phase-aligned so <x,y> < 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Geodesic<T> {
    x: Vec3<T>,
    y: Vec3<T>,
    length: T,
}

impl<T: Scalar> Geodesic<T> {
    pub fn through(x: &ProjectivePoint<T>, y: &ProjectivePoint<T>) -> Result<Self> {
        x.require(PointClass::Negative)?;
        y.require(PointClass::Negative)?;
        let xu = x.unit_rep()?;
        let yu = phase_align(&xu, &y.unit_rep()?);
        let ch = -herm(&xu, &yu).re;
        Ok(Self { x: xu, y: yu, length: ch.max(T::one()).acosh() })
    }

    /// Endpoints with <x,x> = <y,y> = -1 and <x,y> = -cosh(length).
    pub fn endpoints(&self) -> (&Vec3<T>, &Vec3<T>) {
        (&self.x, &self.y)
    }

    /// Distance between the spanning points (curvature -4 where it matters).
    pub fn length(&self) -> T {
        self.length
    }

    /// Point at arclength s from x toward y (s may exceed the segment).
    pub fn at_arclength(&self, s: T) -> Vec3<T> {
        let d = self.length;
        if d <= T::epsilon() {
            return self.x;
        }
        let sh = d.sinh();
        self.x.scale_re((d - s).sinh() / sh) + self.y.scale_re(s.sinh() / sh)
    }

    /// Unit tangent at arclength s, in the tangent space of the point at s.
    pub fn tangent_at(&self, s: T) -> Vec3<T> {
        let d = self.length;
        if d <= T::epsilon() {
            return Vec3::zero();
        }
        let sh = d.sinh();
        self.x.scale_re(-(d - s).cosh() / sh) + self.y.scale_re(s.cosh() / sh)
    }

    /// Residual of x lying on the full geodesic: the complex line and the real phase condition.
    pub fn membership_residual(&self, p: &ProjectivePoint<T>) -> T {
        let v = match p.unit_rep() {
            Ok(v) => v,
            Err(_) => return T::infinity(),
        };
        let line = polar_span_vec(&self.x, &self.y).expect("distinct spine points");
        let off_line = herm(&v, line.rep()).norm();
        // On the line: v = a x + b y; on the geodesic iff a/b real.
        let g = Mat3::from_rows([
            [herm(&self.x, &self.x), herm(&self.y, &self.x), C::zero()],
            [herm(&self.x, &self.y), herm(&self.y, &self.y), C::zero()],
            [C::zero(), C::zero(), C::one()],
        ]);
        let rhs = [herm(&v, &self.x), herm(&v, &self.y)];
        let det = g.0[0][0] * g.0[1][1] - g.0[0][1] * g.0[1][0];
        let a = (rhs[0] * g.0[1][1] - g.0[0][1] * rhs[1]) / det;
        let b = (g.0[0][0] * rhs[1] - rhs[0] * g.0[1][0]) / det;
        let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
        let imag = if n > T::zero() { (a * b.conj()).im / (n * n) } else { T::zero() };
        off_line.max(imag.abs())
    }
}

/// Bisector with real spine, unit polar f (<f,f> = 1) and complex spine P(f^perp).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bisector<T> {
    pub spine: Geodesic<T>,
    f: Vec3<T>,
    pub complex_spine: ComplexGeodesic<T>,
}

impl<T: Scalar> Bisector<T> {
    pub fn from_spine(spine: Geodesic<T>) -> Result<Self> {
        let (x, y) = spine.endpoints();
        let f = polar_span_vec(x, y)?;
        let fu = f.unit_rep()?;
        Ok(Self { spine, f: fu, complex_spine: ComplexGeodesic::new(f)? })
    }

    pub fn polar_f(&self) -> &Vec3<T> {
        &self.f
    }

    /// Spine points lie in f^perp.
    pub fn check(&self) -> T {
        let (x, y) = self.spine.endpoints();
        herm(x, &self.f).norm().max(herm(y, &self.f).norm())
    }

    /// Signed side of the extended bisector: sin arg(<x,c1><c2,x>), zero exactly on it.
    pub fn side(&self, x: &Vec3<T>) -> T {
        let (c1, c2) = self.spine.endpoints();
        let w = herm(x, c1) * herm(c2, x);
        let n = w.norm();
        if n == T::zero() {
            T::zero()
        } else {
            w.im / n
        }
    }

    /// Differential of Im(<x,c1><c2,x>) at x applied to v.
    pub fn side_differential(&self, x: &Vec3<T>, v: &Vec3<T>) -> T {
        let (c1, c2) = self.spine.endpoints();
        (herm(v, c1) * herm(c2, x) + herm(x, c1) * herm(c2, v)).im
    }
}

/// B[C1,C2]: the bisector segment between two ultraparallel complex geodesics.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BisectorSegment<T> {
    pub bisector: Bisector<T>,
    pub feet: [ProjectivePoint<T>; 2],
    pub end_slices: [ComplexGeodesic<T>; 2],
}

impl<T: Scalar> BisectorSegment<T> {
    pub fn length(&self) -> T {
        self.bisector.spine.length()
    }
}

pub fn common_perpendicular<T: Scalar>(c1: &ComplexGeodesic<T>, c2: &ComplexGeodesic<T>) -> Result<BisectorSegment<T>> {
    common_perpendicular_with(c1, c2, &Tolerances::DEFAULT)
}

pub fn common_perpendicular_with<T: Scalar>(
    c1: &ComplexGeodesic<T>,
    c2: &ComplexGeodesic<T>,
    tol: &Tolerances,
) -> Result<BisectorSegment<T>> {
    let pos = position_with(c1, c2, tol)?;
    if pos != Position::Ultraparallel {
        return Err(Error::NotUltraparallel(tance(c1.polar(), c2.polar())?.to_f64_lossy()));
    }
    let p1 = c1.polar().rep();
    let p2 = c2.polar().rep();
    let foot1 = *p2 - p1.scale(herm(p2, p1) / herm(p1, p1).re);
    let foot2 = *p1 - p2.scale(herm(p1, p2) / herm(p2, p2).re);
    let f1 = ProjectivePoint::new(foot1)?;
    let f2 = ProjectivePoint::new(foot2)?;
    f1.require(PointClass::Negative)?;
    f2.require(PointClass::Negative)?;
    let spine = Geodesic::through(&f1, &f2)?;
    let bisector = Bisector::from_spine(spine)?;
    Ok(BisectorSegment { bisector, feet: [f1, f2], end_slices: [*c1, *c2] })
}

/// Slice through a spine point: polar_span(x, f).
pub fn slice_at<T: Scalar>(b: &Bisector<T>, x: &ProjectivePoint<T>) -> Result<ComplexGeodesic<T>> {
    x.require(PointClass::Negative)?;
    let r = b.spine.membership_residual(x);
    if r > T::lit(Tolerances::DEFAULT.membership) {
        return Err(Error::NotOnSpine(r.to_f64_lossy()));
    }
    let q = polar_span_vec(x.rep(), b.polar_f())?;
    ComplexGeodesic::new(q)
}

/// Point at arclength fraction t from the first foot.
pub fn spine_point<T: Scalar>(seg: &BisectorSegment<T>, t: T) -> Result<ProjectivePoint<T>> {
    if !(t >= T::zero() && t <= T::one()) {
        return Err(Error::ParameterOutOfRange(t.to_f64_lossy()));
    }
    let g = &seg.bisector.spine;
    ProjectivePoint::new(g.at_arclength(t * g.length()))
}

/// Whether three independent points span a real plane (totally real, signature -++).
pub fn real_plane_check<T: Scalar>(x: &ProjectivePoint<T>, y: &ProjectivePoint<T>, z: &ProjectivePoint<T>) -> Result<bool> {
    let (a, b, c) = (*x.rep(), *y.rep(), *z.rep());
    let det = Mat3::from_cols(&a, &b, &c).det();
    if det.norm() < T::lit(1e-10) {
        return Err(Error::Degenerate("points are not projectively independent".into()));
    }
    let small = T::lit(1e-12);
    let vs = [a, b, c];
    let pair = |i: usize, j: usize| herm(&vs[i], &vs[j]);
    let nz: Vec<bool> = [(0, 1), (1, 2), (2, 0)].iter().map(|&(i, j)| pair(i, j).norm() > small).collect();
    if nz.iter().all(|&b| b) {
        let w = pair(0, 1) * pair(1, 2) * pair(2, 0);
        if w.im.abs() > T::lit(1e-9) * w.norm() {
            return Ok(false);
        }
    }
    // Phase-adjust along a spanning tree of nonzero pairings; the remaining pairing is then real.
    let mut adj = vs;
    let mut fixed = [true, false, false];
    for _ in 0..2 {
        for i in 0..3 {
            for j in 0..3 {
                if fixed[i] && !fixed[j] && herm(&adj[i], &adj[j]).norm() > small {
                    let h = herm(&adj[i], &adj[j]);
                    adj[j] = adj[j].scale(h / h.norm());
                    fixed[j] = true;
                }
            }
        }
    }
    let mut g = [[T::zero(); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let h = herm(&adj[i], &adj[j]);
            if h.im.abs() > T::lit(1e-9) * (T::one() + h.norm()) {
                return Ok(false);
            }
            g[i][j] = h.re;
        }
    }
    Ok(signature_is_minus_plus_plus(&g))
}

/// Sign count of a real symmetric 3x3 via Descartes on its characteristic polynomial.
fn signature_is_minus_plus_plus<T: Scalar>(g: &[[T; 3]; 3]) -> bool {
    let tr = g[0][0] + g[1][1] + g[2][2];
    let m2 = g[0][0] * g[1][1] - g[0][1] * g[1][0] + g[0][0] * g[2][2] - g[0][2] * g[2][0] + g[1][1] * g[2][2]
        - g[1][2] * g[2][1];
    let det = g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1]) - g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0])
        + g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0]);
    // Characteristic polynomial l^3 - tr l^2 + m2 l - det, all roots real.
    let coeffs = [T::one(), -tr, m2, -det];
    let mut changes = 0;
    let mut last = T::zero();
    for c in coeffs {
        if c != T::zero() {
            if last != T::zero() && (c > T::zero()) != (last > T::zero()) {
                changes += 1;
            }
            last = c;
        }
    }
    changes == 2 && det < T::zero()
}

/// Orthonormal complex basis of the tangent space at a negative point, with <base,base> = -1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TangentSpace<T> {
    base: Vec3<T>,
    e: [Vec3<T>; 2],
}

impl<T: Scalar> TangentSpace<T> {
    pub fn at(x: &ProjectivePoint<T>) -> Result<Self> {
        x.require(PointClass::Negative)?;
        Ok(Self::at_unit(x.unit_rep()?))
    }

    /// `base` must satisfy <base,base> = -1.
    pub fn at_unit(base: Vec3<T>) -> Self {
        let mut e: Vec<Vec3<T>> = Vec::with_capacity(2);
        let mut cands: Vec<Vec3<T>> = (0..3).map(Vec3::basis).collect();
        cands.sort_by(|a, b| {
            let pa = (*a + base.scale(herm(a, &base))).norm();
            let pb = (*b + base.scale(herm(b, &base))).norm();
            pb.partial_cmp(&pa).unwrap_or(std::cmp::Ordering::Equal)
        });
        for v in cands {
            let mut w = v + base.scale(herm(&v, &base));
            for u in e.iter() {
                w = w - u.scale(herm(&w, u));
            }
            let n2 = herm(&w, &w).re;
            if n2 > T::lit(1e-6) {
                e.push(w.scale_re(T::one() / n2.sqrt()));
                if e.len() == 2 {
                    break;
                }
            }
        }
        Self { base, e: [e[0], e[1]] }
    }

    pub fn base(&self) -> &Vec3<T> {
        &self.base
    }

    pub fn basis(&self) -> &[Vec3<T>; 2] {
        &self.e
    }

    /// Form projection onto base^perp.
    pub fn project(&self, v: &Vec3<T>) -> Vec3<T> {
        *v + self.base.scale(herm(v, &self.base))
    }

    /// Real coordinates (Re, Im of the two complex coordinates); g is the Euclidean dot in these.
    pub fn to_real(&self, v: &Vec3<T>) -> [T; 4] {
        let a = herm(v, &self.e[0]);
        let b = herm(v, &self.e[1]);
        [a.re, a.im, b.re, b.im]
    }

    pub fn from_real(&self, r: &[T; 4]) -> Vec3<T> {
        self.e[0].scale(C::new(r[0], r[1])) + self.e[1].scale(C::new(r[2], r[3]))
    }

    /// Riemannian metric g = Re <u,v>.
    pub fn g(&self, u: &Vec3<T>, v: &Vec3<T>) -> T {
        herm(&self.project(u), &self.project(v)).re
    }

    /// Kaehler form omega = Im <u,v>.
    pub fn omega(&self, u: &Vec3<T>, v: &Vec3<T>) -> T {
        herm(&self.project(u), &self.project(v)).im
    }
}

/// Sign of the 4x4 determinant of real coordinates; positive means the complex orientation.
pub fn orientation4<T: Scalar>(cols: &[[T; 4]; 4]) -> T {
    let m = |i: usize, j: usize| cols[j][i];
    let mut det = T::zero();
    for p in permutations4() {
        let mut prod = T::one();
        for (i, &pi) in p.0.iter().enumerate() {
            prod = prod * m(i, pi);
        }
        det = if p.1 { det + prod } else { det - prod };
    }
    det
}

fn permutations4() -> Vec<([usize; 4], bool)> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    let mut seen = [false; 4];
                    if p.iter().all(|&k| !std::mem::replace(&mut seen[k], true)) {
                        let mut inv = 0;
                        for i in 0..4 {
                            for j in (i + 1)..4 {
                                if p[i] > p[j] {
                                    inv += 1;
                                }
                            }
                        }
                        out.push((p, inv % 2 == 0));
                    }
                }
            }
        }
    }
    out
}
