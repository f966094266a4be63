//! The form of signature (-,+,+), projective points, tance and elliptic isometries.

use num_complex::Complex;
use num_traits::One;

use crate::error::{Error, Result};
use crate::linalg::{cbrt, cube_roots_of_unity, Mat3, Vec3, C};
use crate::scalar::Scalar;
use crate::tolerances::Tolerances;

/// <x,y> = -x0 conj(y0) + x1 conj(y1) + x2 conj(y2).
#[inline]
pub fn herm<T: Scalar>(x: &Vec3<T>, y: &Vec3<T>) -> C<T> {
    -(x.0[0] * y.0[0].conj()) + x.0[1] * y.0[1].conj() + x.0[2] * y.0[2].conj()
}

/// The signature matrix J plus the form. Zero-sized; kept for callers that want a value.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct HermitianSpace;

impl HermitianSpace {
    pub fn form_matrix<T: Scalar>(&self) -> Mat3<T> {
        j_matrix()
    }

    pub fn form<T: Scalar>(&self, x: &Vec3<T>, y: &Vec3<T>) -> C<T> {
        herm(x, y)
    }
}

pub fn j_matrix<T: Scalar>() -> Mat3<T> {
    Mat3::diag(-C::one(), C::one(), C::one())
}

/// J v.
#[inline]
pub fn apply_j<T: Scalar>(v: &Vec3<T>) -> Vec3<T> {
    Vec3([-v.0[0], v.0[1], v.0[2]])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PointClass {
    Negative,
    Null,
    Positive,
}

impl PointClass {
    pub fn name(self) -> &'static str {
        match self {
            PointClass::Negative => "negative",
            PointClass::Null => "null",
            PointClass::Positive => "positive",
        }
    }
}

/// Classify a raw vector with the given zero band.
pub fn classify_vec<T: Scalar>(v: &Vec3<T>, zero_band: f64) -> Result<PointClass> {
    let n2 = v.norm_sqr();
    if n2 == T::zero() || !n2.is_finite() {
        return Err(Error::ZeroVector);
    }
    let q = herm(v, v).re;
    if q.abs() < T::lit(zero_band) * n2 {
        Ok(PointClass::Null)
    } else if q < T::zero() {
        Ok(PointClass::Negative)
    } else {
        Ok(PointClass::Positive)
    }
}

/// A point of CP^2, stored with a Euclidean unit representative.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjectivePoint<T> {
    rep: Vec3<T>,
}

impl<T: Scalar> ProjectivePoint<T> {
    pub fn new(v: Vec3<T>) -> Result<Self> {
        let n = v.norm();
        if n == T::zero() || !n.is_finite() {
            return Err(Error::ZeroVector);
        }
        Ok(ProjectivePoint { rep: v.scale_re(T::one() / n) })
    }

    pub fn from_reals(a: f64, b: f64, c: f64) -> Result<Self> {
        Self::new(Vec3::real(a, b, c))
    }

    pub fn rep(&self) -> &Vec3<T> {
        &self.rep
    }

    pub fn class(&self) -> PointClass {
        classify_vec(&self.rep, Tolerances::DEFAULT.zero_band).expect("nonzero by construction")
    }

    pub fn is_negative(&self) -> bool {
        self.class() == PointClass::Negative
    }

    pub fn is_positive(&self) -> bool {
        self.class() == PointClass::Positive
    }

    /// <rep, rep>.
    pub fn norm_form(&self) -> T {
        herm(&self.rep, &self.rep).re
    }

    /// Representative with <x,x> = -1 or +1 and the stored phase.
    pub fn unit_rep(&self) -> Result<Vec3<T>> {
        if self.class() == PointClass::Null {
            return Err(Error::NullPoint);
        }
        let q = self.norm_form().abs().sqrt();
        Ok(self.rep.scale_re(T::one() / q))
    }

    pub fn require(&self, want: PointClass) -> Result<()> {
        let got = self.class();
        if got == want {
            Ok(())
        } else {
            Err(Error::WrongClass { expected: want.name(), got: got.name() })
        }
    }

    /// Same point with conjugated representative (an antiholomorphic isometry).
    pub fn conj(&self) -> Self {
        ProjectivePoint { rep: self.rep.conj() }
    }

    pub fn cast<U: Scalar>(&self) -> ProjectivePoint<U> {
        ProjectivePoint::new(self.rep.cast()).expect("nonzero")
    }

    /// Representative rotated so that its largest-modulus entry is real positive.
    pub fn canonical_rep(&self) -> Vec3<T> {
        let mut k = 0;
        for i in 1..3 {
            if self.rep.0[i].norm() > self.rep.0[k].norm() + T::lit(1e-12) {
                k = i;
            }
        }
        let z = self.rep.0[k];
        self.rep.scale(z.conj() / z.norm())
    }
}

/// Sign class of a point.
pub fn classify<T: Scalar>(x: &ProjectivePoint<T>) -> PointClass {
    x.class()
}

/// ta(x,y) = <x,y><y,x> / (<x,x><y,y>).
pub fn tance<T: Scalar>(x: &ProjectivePoint<T>, y: &ProjectivePoint<T>) -> Result<T> {
    if x.class() == PointClass::Null || y.class() == PointClass::Null {
        return Err(Error::NullPoint);
    }
    Ok(tance_vec(x.rep(), y.rep()))
}

/// Tance on raw vectors, no class checks.
pub fn tance_vec<T: Scalar>(x: &Vec3<T>, y: &Vec3<T>) -> T {
    herm(x, y).norm_sqr() / (herm(x, x).re * herm(y, y).re)
}

/// Distance in H^2_C: arccosh(sqrt(tance)). Curvature -4 on complex geodesics.
pub fn distance<T: Scalar>(x: &ProjectivePoint<T>, y: &ProjectivePoint<T>) -> Result<T> {
    distance_with(x, y, &Tolerances::DEFAULT)
}

pub fn distance_with<T: Scalar>(x: &ProjectivePoint<T>, y: &ProjectivePoint<T>, tol: &Tolerances) -> Result<T> {
    x.require(PointClass::Negative)?;
    y.require(PointClass::Negative)?;
    let t = tance(x, y)?;
    if t < T::one() - T::lit(tol.tance_clamp) {
        return Err(Error::Domain(t.to_f64_lossy()));
    }
    Ok(t.max(T::one()).sqrt().acosh())
}

/// Polar of the complex line through x and y: J conj(x cross y).
pub fn polar_span<T: Scalar>(x: &ProjectivePoint<T>, y: &ProjectivePoint<T>) -> Result<ProjectivePoint<T>> {
    polar_span_vec(x.rep(), y.rep())
}

pub fn polar_span_vec<T: Scalar>(x: &Vec3<T>, y: &Vec3<T>) -> Result<ProjectivePoint<T>> {
    let z = apply_j(&x.cross(y).conj());
    let scale = x.norm() * y.norm();
    if z.norm() <= T::lit(1e-12) * scale || scale == T::zero() {
        return Err(Error::Degenerate("points are projectively equal".into()));
    }
    ProjectivePoint::new(z)
}

/// Form-orthogonal projection coefficient: the component of v along b.
#[inline]
pub fn proj_coeff<T: Scalar>(v: &Vec3<T>, b: &Vec3<T>) -> C<T> {
    herm(v, b) / herm(b, b).re
}

/// b0 negative, b1 and b2 positive, pairwise orthogonal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrthogonalFrame<T> {
    pub b0: ProjectivePoint<T>,
    pub b1: ProjectivePoint<T>,
    pub b2: ProjectivePoint<T>,
}

impl<T: Scalar> OrthogonalFrame<T> {
    pub fn new(b0: ProjectivePoint<T>, b1: ProjectivePoint<T>, b2: ProjectivePoint<T>) -> Result<Self> {
        Self::new_with(b0, b1, b2, &Tolerances::DEFAULT)
    }

    pub fn new_with(
        b0: ProjectivePoint<T>,
        b1: ProjectivePoint<T>,
        b2: ProjectivePoint<T>,
        tol: &Tolerances,
    ) -> Result<Self> {
        b0.require(PointClass::Negative)?;
        b1.require(PointClass::Positive)?;
        b2.require(PointClass::Positive)?;
        let f = Self { b0, b1, b2 };
        let r = f.orthogonality_residual();
        if r > T::lit(tol.frame.max(T::epsilon().to_f64_lossy() * 64.0)) {
            return Err(Error::FrameNotOrthogonal(r.to_f64_lossy()));
        }
        Ok(f)
    }

    /// Max |<b_i,b_j>| over i != j for the Euclidean-unit representatives.
    pub fn orthogonality_residual(&self) -> T {
        let v = [self.b0.rep(), self.b1.rep(), self.b2.rep()];
        let mut r = T::zero();
        for i in 0..3 {
            for j in (i + 1)..3 {
                r = r.max(herm(v[i], v[j]).norm());
            }
        }
        r
    }

    /// Standard frame (e0, e1, e2).
    pub fn standard() -> Self {
        Self {
            b0: ProjectivePoint::new(Vec3::basis(0)).unwrap(),
            b1: ProjectivePoint::new(Vec3::basis(1)).unwrap(),
            b2: ProjectivePoint::new(Vec3::basis(2)).unwrap(),
        }
    }

    pub fn vectors(&self) -> [Vec3<T>; 3] {
        [*self.b0.rep(), *self.b1.rep(), *self.b2.rep()]
    }
}

/// A determinant-one lift of an element of PU(2,1).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Isometry<T> {
    matrix: Mat3<T>,
}

/// |M^H J M - J|_max.
pub fn isometry_residual<T: Scalar>(m: &Mat3<T>) -> T {
    let j = j_matrix::<T>();
    (m.adjoint() * j * *m - j).max_abs()
}

fn det_normalize<T: Scalar>(m: &Mat3<T>) -> Result<Mat3<T>> {
    let d = m.det();
    if d.norm() == T::zero() || !d.norm().is_finite() {
        return Err(Error::Degenerate("singular matrix".into()));
    }
    Ok(m.scale(C::<T>::one() / cbrt(d)))
}

impl<T: Scalar> Isometry<T> {
    /// Normalize det to one and check the form is preserved.
    pub fn new(m: Mat3<T>) -> Result<Self> {
        Self::new_with(m, &Tolerances::DEFAULT)
    }

    pub fn new_with(m: Mat3<T>, tol: &Tolerances) -> Result<Self> {
        let n = det_normalize(&m)?;
        let r = isometry_residual(&n);
        let allowed = T::lit(tol.isometry).max(T::epsilon() * T::lit(1e3)) * (T::one() + n.max_abs() * n.max_abs());
        if !(r <= allowed) {
            return Err(Error::Degenerate(format!("matrix does not preserve the form (residual {:e})", r.to_f64_lossy())));
        }
        Ok(Isometry { matrix: n })
    }

    /// Normalize det but skip the form check. For products of known isometries.
    pub fn from_matrix_unchecked(m: Mat3<T>) -> Self {
        Isometry { matrix: det_normalize(&m).unwrap_or(m) }
    }

    pub fn identity() -> Self {
        Isometry { matrix: Mat3::identity() }
    }

    pub fn matrix(&self) -> &Mat3<T> {
        &self.matrix
    }

    pub fn det_normalized(&self) -> bool {
        (self.matrix.det() - C::one()).norm() < T::lit(1e-6)
    }

    pub fn residual(&self) -> T {
        isometry_residual(&self.matrix)
    }

    /// Inverse via J M^H J, exact for isometries.
    pub fn inverse(&self) -> Self {
        let j = j_matrix::<T>();
        Isometry { matrix: j * self.matrix.adjoint() * j }
    }

    pub fn compose(&self, other: &Self) -> Self {
        Isometry::from_matrix_unchecked(self.matrix * other.matrix)
    }

    pub fn pow(&self, n: u32) -> Self {
        Isometry::from_matrix_unchecked(self.matrix.pow(n))
    }

    pub fn apply_vec(&self, v: &Vec3<T>) -> Vec3<T> {
        self.matrix.mul_vec(v)
    }

    pub fn apply(&self, x: &ProjectivePoint<T>) -> ProjectivePoint<T> {
        ProjectivePoint::new(self.matrix.mul_vec(x.rep())).expect("isometry is invertible")
    }

    pub fn trace(&self) -> C<T> {
        self.matrix.trace()
    }

    /// min over cube roots w of |A - w B|_max.
    pub fn projective_distance(&self, other: &Self) -> T {
        cube_roots_of_unity::<T>()
            .iter()
            .map(|w| (self.matrix - other.matrix.scale(*w)).max_abs())
            .fold(T::infinity(), |a, b| a.min(b))
    }

    /// Distance of the lift from the centre {w I}.
    pub fn distance_from_identity(&self) -> T {
        self.projective_distance(&Isometry::identity())
    }

    pub fn cast<U: Scalar>(&self) -> Isometry<U> {
        Isometry::from_matrix_unchecked(self.matrix.cast())
    }

    /// Characteristic roots of the lift.
    pub fn eigenvalues(&self) -> [C<T>; 3] {
        let m = &self.matrix;
        let tr = m.trace();
        let c2 = m.cofactor(0, 0) + m.cofactor(1, 1) + m.cofactor(2, 2);
        crate::linalg::cubic_roots(-tr, c2, -m.det())
    }

    /// Eigenvector for a simple eigenvalue `lambda`, or None when the eigenspace is not a line.
    pub fn eigenvector(&self, lambda: C<T>) -> Option<Vec3<T>> {
        let mut a = self.matrix;
        for i in 0..3 {
            a.0[i][i] = a.0[i][i] - lambda;
        }
        let rows = [a.row(0), a.row(1), a.row(2)];
        // Kernel of A is orthogonal (Euclidean, bilinear) to each row: cross of two rows.
        let mut best = Vec3::zero();
        let mut best_n = T::zero();
        for (i, j) in [(0, 1), (1, 2), (0, 2)] {
            let v = rows[i].cross(&rows[j]);
            let n = v.norm();
            if n > best_n {
                best_n = n;
                best = v;
            }
        }
        let scale = self.matrix.max_abs().max(T::one());
        if best_n <= T::lit(1e-7) * scale * scale {
            return None;
        }
        Some(best.scale_re(T::one() / best_n))
    }
}

/// sum_k mu_k P_k with P_k the form projection onto b_k, normalized to det one.
pub fn elliptic_from_frame<T: Scalar>(frame: &OrthogonalFrame<T>, phases: [C<T>; 3]) -> Result<Isometry<T>> {
    for p in phases.iter() {
        if (p.norm() - T::one()).abs() > T::lit(1e-9) {
            return Err(Error::BadPhase);
        }
    }
    let r = frame.orthogonality_residual();
    if r > T::lit(Tolerances::DEFAULT.frame).max(T::epsilon() * T::lit(64.0)) {
        return Err(Error::FrameNotOrthogonal(r.to_f64_lossy()));
    }
    let mut m = Mat3::zero();
    for (b, mu) in frame.vectors().iter().zip(phases.iter()) {
        // x -> <x,b>/<b,b> b  is  b b^H J / <b,b>.
        let p = Mat3::outer(b, b) * j_matrix();
        m = m + p.scale(*mu / herm(b, b).re);
    }
    Ok(Isometry { matrix: det_normalize(&m)? })
}

/// x -> -x + 2 <x,p>/<p,p> p.
pub fn reflection_about<T: Scalar>(p: &ProjectivePoint<T>) -> Result<Isometry<T>> {
    if p.class() == PointClass::Null {
        return Err(Error::NullPoint);
    }
    let v = p.rep();
    let two = T::lit(2.0);
    let m = Mat3::outer(v, v) * j_matrix();
    let m = m.scale(Complex::new(two / herm(v, v).re, T::zero())) - Mat3::identity();
    Ok(Isometry { matrix: det_normalize(&m)? })
}

/// Rotate y's representative so that <x, y> is real and negative (for negative points) or real positive.
pub fn phase_align<T: Scalar>(x: &Vec3<T>, y: &Vec3<T>) -> Vec3<T> {
    let h = herm(y, x);
    if h.norm() == T::zero() {
        return *y;
    }
    // <ly, x> = l <y,x>; choose l = conj(h)/|h| so the pairing is |h| >= 0, then flip sign.
    let l = h.conj() / h.norm();
    y.scale(-l)
}
