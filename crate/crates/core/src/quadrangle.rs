//! Triangles of bisectors, the eps invariant, and K1/K2/K3 certification of quadrangles.

use num_complex::Complex;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::geometry::{common_perpendicular_with, Bisector, BisectorSegment, ComplexGeodesic, TangentSpace};
use crate::hermitian::{herm, polar_span_vec, tance, tance_vec, PointClass, ProjectivePoint};
use crate::linalg::{cis, Vec3, C};
use crate::scalar::Scalar;
use crate::tolerances::Tolerances;

/// t_ij = sqrt(ta(p_i,p_j)) and the normalized triple product eps.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TriangleInvariant<T> {
    pub t12: T,
    pub t23: T,
    pub t31: T,
    pub eps: C<T>,
}

impl<T: Scalar> TriangleInvariant<T> {
    pub fn from_polars(p1: &ProjectivePoint<T>, p2: &ProjectivePoint<T>, p3: &ProjectivePoint<T>) -> Result<Self> {
        let eps = epsilon(p1, p2, p3)?;
        Ok(Self {
            t12: tance(p1, p2)?.sqrt(),
            t23: tance(p2, p3)?.sqrt(),
            t31: tance(p3, p1)?.sqrt(),
            eps,
        })
    }
}

/// <p1,p2><p2,p3><p3,p1> / |same|.
pub fn epsilon<T: Scalar>(p1: &ProjectivePoint<T>, p2: &ProjectivePoint<T>, p3: &ProjectivePoint<T>) -> Result<C<T>> {
    let w = herm(p1.rep(), p2.rep()) * herm(p2.rep(), p3.rep()) * herm(p3.rep(), p1.rep());
    let n = w.norm();
    if n < T::lit(1e-14) {
        return Err(Error::VanishingTripleProduct);
    }
    Ok(w / n)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Transversality<T> {
    pub pass: bool,
    pub margins: [T; 3],
}

/// The three inequalities, with margin = right side minus left side.
pub fn is_transversal<T: Scalar>(tri: &TriangleInvariant<T>) -> Transversality<T> {
    is_transversal_with(tri, &Tolerances::DEFAULT)
}

pub fn is_transversal_with<T: Scalar>(tri: &TriangleInvariant<T>, tol: &Tolerances) -> Transversality<T> {
    let e0 = tri.eps.re;
    let (a, b, c) = (tri.t12, tri.t23, tri.t31);
    let two = T::lit(2.0);
    let rhs = T::one() + two * a * b * c * e0;
    let m = [
        rhs - (e0 * e0 * a * a + b * b + c * c),
        rhs - (e0 * e0 * c * c + a * a + b * b),
        rhs - (e0 * e0 * b * b + c * c + a * a),
    ];
    let s = T::lit(tol.strict);
    Transversality { pass: m.iter().all(|&x| x > s), margins: m }
}

pub fn is_counterclockwise<T: Scalar>(tri: &TriangleInvariant<T>) -> Result<bool> {
    if !is_transversal(tri).pass {
        return Err(Error::NotTransversal);
    }
    Ok(tri.eps.im < T::zero())
}

#[derive(Clone, Debug, PartialEq)]
pub struct TriangleOverGeodesic<T> {
    pub vertices: [ComplexGeodesic<T>; 3],
    pub invariant: TriangleInvariant<T>,
    /// eps real: the vertices are collinear.
    pub degenerate: bool,
}

/// Slices C_i = P(C c_i + C f) over a triangle inside the complex geodesic P(f^perp).
pub fn triangle_over_complex_geodesic<T: Scalar>(
    f: &ProjectivePoint<T>,
    c: [&ProjectivePoint<T>; 3],
) -> Result<TriangleOverGeodesic<T>> {
    f.require(PointClass::Positive)?;
    for ci in c.iter() {
        ci.require(PointClass::Negative)?;
        let r = herm(ci.rep(), f.rep()).norm();
        if r > T::lit(Tolerances::DEFAULT.membership) {
            return Err(Error::NotInPlane(r.to_f64_lossy()));
        }
    }
    for i in 0..3 {
        for j in (i + 1)..3 {
            if (tance(c[i], c[j])? - T::one()).abs() < T::lit(1e-12) {
                return Err(Error::Degenerate("coincident vertices".into()));
            }
        }
    }
    let mut v = Vec::with_capacity(3);
    for ci in c.iter() {
        v.push(ComplexGeodesic::new(polar_span_vec(ci.rep(), f.rep())?)?);
    }
    let vertices = [v[0], v[1], v[2]];
    let invariant = TriangleInvariant::from_polars(vertices[0].polar(), vertices[1].polar(), vertices[2].polar())?;
    let degenerate = invariant.eps.im.abs() < T::lit(1e-12);
    Ok(TriangleOverGeodesic { vertices, invariant, degenerate })
}

/// Four complex geodesics given by positive polars.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadrangleConfig<T> {
    pub polars: [ProjectivePoint<T>; 4],
}

impl<T: Scalar> QuadrangleConfig<T> {
    pub fn new(polars: [ProjectivePoint<T>; 4]) -> Result<Self> {
        for p in polars.iter() {
            p.require(PointClass::Positive)?;
        }
        Ok(Self { polars })
    }

    pub fn geodesic(&self, i: usize) -> ComplexGeodesic<T> {
        ComplexGeodesic::new(self.polars[i]).expect("checked positive")
    }

    /// The two diagonal triangles (C1,C2,C4) and (C3,C4,C2).
    pub fn triangles(&self) -> [[usize; 3]; 2] {
        [[0, 1, 3], [2, 3, 1]]
    }

    /// Cyclic relabeling C_{k+1}..C_{k+4}.
    pub fn rotated(&self, k: usize) -> Self {
        let p = self.polars;
        Self { polars: [p[k % 4], p[(k + 1) % 4], p[(k + 2) % 4], p[(k + 3) % 4]] }
    }

    /// Hex SHA-256 of the canonicalized polars.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        for p in self.polars.iter() {
            let v = p.canonical_rep();
            for z in v.0.iter() {
                h.update(format!("{:.12e},{:.12e};", clean(z.re.to_f64_lossy()), clean(z.im.to_f64_lossy())).as_bytes());
            }
        }
        hex::encode(h.finalize())
    }
}

fn clean(x: f64) -> f64 {
    if x.abs() < 1e-14 {
        0.0
    } else {
        x
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Margin {
    pub label: String,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub pass: bool,
    pub margins: Vec<Margin>,
    pub diagnostics: Vec<String>,
}

impl CheckReport {
    fn from_margins(margins: Vec<Margin>, floor: f64, diagnostics: Vec<String>) -> Self {
        let pass = diagnostics.is_empty() && margins.iter().all(|m| m.value > floor);
        Self { pass, margins, diagnostics }
    }

    pub fn worst(&self) -> Option<&Margin> {
        self.margins.iter().min_by(|a, b| a.value.partial_cmp(&b.value).unwrap_or(std::cmp::Ordering::Equal))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AdjacencyReport {
    pub pass: bool,
    /// Tangent hyperplanes at C2 and C4: min angle minus angle_floor.
    pub transversal: CheckReport,
    /// C3 inside the sector at C1.
    pub sector: CheckReport,
    /// Non-adjacent segments apart.
    pub disjoint: CheckReport,
    pub degenerate: Option<String>,
}

impl AdjacencyReport {
    pub fn failed_subchecks(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.degenerate.is_some() {
            out.push("degenerate");
        }
        if !self.transversal.pass {
            out.push("transversal");
        }
        if !self.sector.pass {
            out.push("sector");
        }
        if !self.disjoint.pass {
            out.push("disjoint");
        }
        out
    }

    fn degenerate(msg: String) -> Self {
        let empty = CheckReport { pass: false, margins: vec![], diagnostics: vec![msg.clone()] };
        Self { pass: false, transversal: empty.clone(), sector: empty.clone(), disjoint: empty, degenerate: Some(msg) }
    }

    pub fn as_check(&self) -> CheckReport {
        let mut margins = Vec::new();
        let mut diagnostics = Vec::new();
        for (name, c) in [("transversal", &self.transversal), ("sector", &self.sector), ("disjoint", &self.disjoint)] {
            if let Some(w) = c.worst() {
                margins.push(Margin { label: format!("{name}: {}", w.label), value: w.value });
            }
            diagnostics.extend(c.diagnostics.iter().map(|d| format!("{name}: {d}")));
        }
        if let Some(d) = &self.degenerate {
            diagnostics.push(d.clone());
        }
        diagnostics.dedup();
        CheckReport { pass: self.pass, margins, diagnostics }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub pass: bool,
    pub k1: CheckReport,
    pub k2: CheckReport,
    pub k3: AdjacencyReport,
    pub tolerances: Tolerances,
    pub digest: String,
}

/// Sample points of a slice: x cosh r + e^{i theta} w sinh r around a centre x on the slice.
fn slice_samples<T: Scalar>(slice: &ComplexGeodesic<T>, center: &Vec3<T>, n: usize) -> Result<Vec<Vec3<T>>> {
    let x = ProjectivePoint::new(*center)?.unit_rep()?;
    let w = polar_span_vec(&x, slice.polar().rep())?.unit_rep()?;
    let (nr, na) = grid_shape(n);
    let mut out = Vec::with_capacity(n);
    for i in 0..nr {
        let r = T::lit(0.3 * (i as f64 + 1.0));
        for k in 0..na {
            let th = T::TAU() * T::lit(k as f64 / na as f64);
            out.push(x.scale_re(r.cosh()) + w.scale(cis(th) * r.sinh()));
        }
    }
    out.truncate(n);
    Ok(out)
}

fn grid_shape(n: usize) -> (usize, usize) {
    let na = (n as f64).sqrt().ceil().max(1.0) as usize;
    let nr = n.div_ceil(na);
    (nr, na)
}

/// Unit normal (real coordinates) of the bisector hypersurface at a point on it.
fn bisector_normal<T: Scalar>(b: &Bisector<T>, y: &Vec3<T>) -> Option<[T; 4]> {
    let yu = ProjectivePoint::new(*y).ok()?.unit_rep().ok()?;
    let ts = TangentSpace::at_unit(yu);
    let e = ts.basis();
    let i = Complex::new(T::zero(), T::one());
    let dirs = [e[0], e[0].scale(i), e[1], e[1].scale(i)];
    let mut g = [T::zero(); 4];
    for (k, d) in dirs.iter().enumerate() {
        g[k] = b.side_differential(&yu, d);
    }
    let n = g.iter().fold(T::zero(), |s, &x| s + x * x).sqrt();
    if n <= T::lit(1e-14) {
        return None;
    }
    Some([g[0] / n, g[1] / n, g[2] / n, g[3] / n])
}

fn seg<T: Scalar>(q: &QuadrangleConfig<T>, i: usize, j: usize, tol: &Tolerances) -> Result<BisectorSegment<T>> {
    common_perpendicular_with(&q.geodesic(i), &q.geodesic(j), tol)
}

/// K3: transversal adjacency of the two diagonal triangles, by sampling.
pub fn adjacency_check<T: Scalar>(q: &QuadrangleConfig<T>) -> AdjacencyReport {
    adjacency_check_with(q, &Tolerances::DEFAULT)
}

pub fn adjacency_check_with<T: Scalar>(q: &QuadrangleConfig<T>, tol: &Tolerances) -> AdjacencyReport {
    match adjacency_inner(q, tol) {
        Ok(r) => r,
        Err(e) => AdjacencyReport::degenerate(format!("degenerate configuration: {e}")),
    }
}

fn adjacency_inner<T: Scalar>(q: &QuadrangleConfig<T>, tol: &Tolerances) -> Result<AdjacencyReport> {
    let n = tol.k3_samples;
    for i in 0..4 {
        for j in (i + 1)..4 {
            if coincident(q.polars[i].rep(), q.polars[j].rep()) {
                return Err(Error::Degenerate(format!("C{} and C{} coincide", i + 1, j + 1)));
            }
        }
    }
    let s12 = seg(q, 0, 1, tol)?;
    let s32 = seg(q, 2, 1, tol)?;
    let s14 = seg(q, 0, 3, tol)?;
    let s34 = seg(q, 2, 3, tol)?;
    let s24 = seg(q, 1, 3, tol)?;
    let s23 = seg(q, 1, 2, tol)?;

    // (a) tangent hyperplanes along the shared slices C2 and C4.
    let mut tmargins = Vec::new();
    let mut tdiag = Vec::new();
    for (label, sa, sb, slice, center) in [
        ("C2", &s12, &s32, q.geodesic(1), *s12.feet[1].rep()),
        ("C4", &s14, &s34, q.geodesic(3), *s14.feet[1].rep()),
    ] {
        let mut worst = f64::INFINITY;
        for y in slice_samples(&slice, &center, n)? {
            match (bisector_normal(&sa.bisector, &y), bisector_normal(&sb.bisector, &y)) {
                (Some(a), Some(b)) => {
                    let dot = (0..4).fold(T::zero(), |s, k| s + a[k] * b[k]).abs().min(T::one());
                    worst = worst.min(dot.acos().to_f64_lossy());
                }
                _ => {
                    tdiag.push(format!("singular bisector normal on {label}"));
                    worst = worst.min(0.0);
                }
            }
        }
        tmargins.push(Margin { label: format!("angle at {label}"), value: worst - tol.angle_floor });
    }
    tdiag.dedup();
    let transversal = CheckReport::from_margins(tmargins, 0.0, tdiag);

    // (b) C3 inside the sector at C1: same side of B(C1,C2) as C4, same side of B(C1,C4) as
    // C2, opposite side of the diagonal B(C2,C4) from C1. Reference sides come from the feet
    // of the neighbouring slices; a reference on the bisector itself (straight angle at C1)
    // falls back to the complex-orientation side for a counterclockwise labeling.
    let signs = [
        ("B(C1,C2) toward C4", &s12.bisector, ref_sign(&s12.bisector, s14.feet[1].rep(), T::one())),
        ("B(C1,C4) toward C2", &s14.bisector, ref_sign(&s14.bisector, s12.feet[1].rep(), -T::one())),
        ("B(C2,C4) away from C1", &s24.bisector, -ref_sign(&s24.bisector, s12.feet[0].rep(), T::one())),
    ];
    let samples3 = slice_samples(&q.geodesic(2), s23.feet[1].rep(), n)?;
    let mut smargins = Vec::new();
    let mut sdiag = Vec::new();
    for (label, b, s) in signs.iter() {
        if *s == T::zero() {
            sdiag.push(format!("reference point lies on {label}"));
        }
        let worst = samples3.iter().map(|y| (b.side(y) * *s).to_f64_lossy()).fold(f64::INFINITY, f64::min);
        smargins.push(Margin { label: label.to_string(), value: worst });
    }
    let sector = CheckReport::from_margins(smargins, tol.strict, sdiag);

    // (c) non-adjacent segments: slices pairwise ultraparallel.
    let mut dmargins = Vec::new();
    for (label, a, b) in [("B[C1,C2] vs B[C3,C4]", &s12, &s34), ("B[C2,C3] vs B[C4,C1]", &s23, &s14)] {
        let qa = segment_slices(a, n)?;
        let qb = segment_slices(b, n)?;
        let mut worst = f64::INFINITY;
        for x in qa.iter() {
            for y in qb.iter() {
                let t = tance_vec(x, y);
                let sep = if t >= T::one() { t.sqrt().acosh() } else { t - T::one() };
                worst = worst.min(sep.to_f64_lossy());
            }
        }
        dmargins.push(Margin { label: label.to_string(), value: worst - tol.sep_floor });
    }
    let disjoint = CheckReport::from_margins(dmargins, 0.0, vec![]);

    let pass = transversal.pass && sector.pass && disjoint.pass;
    Ok(AdjacencyReport { pass, transversal, sector, disjoint, degenerate: None })
}

/// Same projective point, by the Euclidean angle between representatives.
fn coincident<T: Scalar>(a: &Vec3<T>, b: &Vec3<T>) -> bool {
    let dot = (0..3).fold(C::<T>::new(T::zero(), T::zero()), |s, k| s + a.0[k] * b.0[k].conj());
    let na = (0..3).fold(T::zero(), |s, k| s + a.0[k].norm_sqr());
    let nb = (0..3).fold(T::zero(), |s, k| s + b.0[k].norm_sqr());
    T::one() - dot.norm_sqr() / (na * nb) < T::epsilon() * T::lit(8.0)
}

/// Side of `b` holding `reference`, or `orient` times the left side when the reference is on b.
fn ref_sign<T: Scalar>(b: &Bisector<T>, reference: &Vec3<T>, orient: T) -> T {
    let s = b.side(reference);
    if s.abs() > T::lit(1e-9) {
        return sign(s);
    }
    orient * left_sign(b)
}

/// Sign of the side function at a point pushed off the spine midpoint by i times the tangent.
fn left_sign<T: Scalar>(b: &Bisector<T>) -> T {
    let g = &b.spine;
    let h = g.length() * T::lit(0.5);
    let m = g.at_arclength(h);
    let t = g.tangent_at(h).scale(Complex::new(T::zero(), T::one()));
    let e = T::lit(0.1);
    sign(b.side(&(m.scale_re(e.cosh()) + t.scale_re(e.sinh()))))
}

fn sign<T: Scalar>(x: T) -> T {
    if x > T::zero() {
        T::one()
    } else if x < T::zero() {
        -T::one()
    } else {
        T::zero()
    }
}

fn segment_slices<T: Scalar>(s: &BisectorSegment<T>, n: usize) -> Result<Vec<Vec3<T>>> {
    let g = &s.bisector.spine;
    let f = s.bisector.polar_f();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let t = if n == 1 { T::zero() } else { T::lit(k as f64 / (n - 1) as f64) };
        let x = g.at_arclength(t * g.length());
        out.push(*polar_span_vec(&x, f)?.rep());
    }
    Ok(out)
}

pub fn validate_quadrangle<T: Scalar>(q: &QuadrangleConfig<T>) -> Certificate {
    validate_quadrangle_with(q, &Tolerances::DEFAULT)
}

pub fn validate_quadrangle_with<T: Scalar>(q: &QuadrangleConfig<T>, tol: &Tolerances) -> Certificate {
    let mut k1m = Vec::new();
    for i in 0..4 {
        for j in (i + 1)..4 {
            let t = tance_vec(q.polars[i].rep(), q.polars[j].rep());
            k1m.push(Margin { label: format!("ta(p{},p{}) - 1", i + 1, j + 1), value: (t - T::one()).to_f64_lossy() });
        }
    }
    let k1 = CheckReport::from_margins(k1m, tol.strict, vec![]);

    let mut k2m = Vec::new();
    let mut k2d = Vec::new();
    for tri in q.triangles() {
        let name = format!("C{}C{}C{}", tri[0] + 1, tri[1] + 1, tri[2] + 1);
        match TriangleInvariant::from_polars(&q.polars[tri[0]], &q.polars[tri[1]], &q.polars[tri[2]]) {
            Ok(inv) => {
                let tr = is_transversal_with(&inv, tol);
                for (k, m) in tr.margins.iter().enumerate() {
                    k2m.push(Margin { label: format!("{name} transversal {}", k + 1), value: m.to_f64_lossy() });
                }
                k2m.push(Margin { label: format!("{name} -eps1"), value: (-inv.eps.im).to_f64_lossy() });
            }
            Err(e) => k2d.push(format!("{name}: {e}")),
        }
    }
    let k2 = CheckReport::from_margins(k2m, tol.strict, k2d);
    let k3 = adjacency_check_with(q, tol);
    Certificate { pass: k1.pass && k2.pass && k3.pass, k1, k2, k3, tolerances: tol.clone(), digest: q.digest() }
}
