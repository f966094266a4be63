use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::geometry::ComplexGeodesic;
use crate::hermitian::{elliptic_from_frame, herm, polar_span_vec, tance, Isometry, OrthogonalFrame, PointClass, ProjectivePoint};
use crate::linalg::{cis, Vec3, C};
use crate::quadrangle::QuadrangleConfig;
use crate::scalar::Scalar;

use super::words::{Relation, RepKind, Representation};

/// Cone orders of S^2(n1,n2,n3); hyperbolic by construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TurnoverSignature {
    pub n1: u32,
    pub n2: u32,
    pub n3: u32,
}

impl TurnoverSignature {
    pub fn new(n1: u32, n2: u32, n3: u32) -> Result<Self> {
        if n1 < 2 || n2 < 2 || n3 < 2 {
            return Err(Error::NonHyperbolic(n1, n2, n3));
        }
        // 1/n1 + 1/n2 + 1/n3 < 1, in integers.
        let (a, b, c) = (n1 as u64, n2 as u64, n3 as u64);
        if b * c + a * c + a * b >= a * b * c {
            return Err(Error::NonHyperbolic(n1, n2, n3));
        }
        Ok(Self { n1, n2, n3 })
    }

    pub fn orders(&self) -> [u32; 3] {
        [self.n1, self.n2, self.n3]
    }

    pub fn lcm(&self) -> u32 {
        self.n1.lcm(&self.n2).lcm(&self.n3)
    }

    /// Cyclic relabeling (same group, g3 g2 g1 = 1 is invariant) that keeps an order-2 cone
    /// off c1 and c3, where it would put a straight angle into the quadrangle.
    /// Returns the signature and the shift k with new n_i = old n_{i+k}.
    pub fn for_quadrangle(&self) -> (Self, usize) {
        let o = self.orders();
        for k in 0..3 {
            let r = [o[k % 3], o[(k + 1) % 3], o[(k + 2) % 3]];
            if r[0] > 2 && r[2] > 2 {
                return (Self { n1: r[0], n2: r[1], n3: r[2] }, k);
            }
        }
        (*self, 0)
    }
}

impl std::fmt::Display for TurnoverSignature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.n1, self.n2, self.n3)
    }
}

/// Curvature -1 lengths of the sides c1c2 and c1c3.
pub fn side_lengths<T: Scalar>(sig: &TurnoverSignature) -> (T, T) {
    let pi = T::PI();
    let a = pi / T::lit(sig.n1 as f64);
    let b = pi / T::lit(sig.n2 as f64);
    let g = pi / T::lit(sig.n3 as f64);
    // Angle law of cosines: side opposite the angle at c3 is c1c2.
    let l12 = ((g.cos() + a.cos() * b.cos()) / (a.sin() * b.sin())).acosh();
    let l13 = ((b.cos() + a.cos() * g.cos()) / (a.sin() * g.sin())).acosh();
    (l12, l13)
}

/// Point (1, z, 0) of the complex geodesic e2 = 0.
pub fn disc_point<T: Scalar>(z: C<T>) -> ProjectivePoint<T> {
    ProjectivePoint::new(Vec3::new(C::one(), z, C::zero())).expect("nonzero")
}

/// Disc coordinate z of a point in the complex geodesic e2 = 0.
pub fn disc_coordinate<T: Scalar>(x: &ProjectivePoint<T>) -> C<T> {
    x.rep().0[1] / x.rep().0[0]
}

/// Vertices c1 (centre), c2 (positive real axis), c3 (at angle pi/n1), counterclockwise.
pub fn triangle_from_angles<T: Scalar>(sig: &TurnoverSignature) -> [ProjectivePoint<T>; 3] {
    let (l12, l13) = side_lengths::<T>(sig);
    let half = T::lit(0.5);
    let r2 = (l12 * half).tanh();
    let r3 = (l13 * half).tanh();
    let th = T::PI() / T::lit(sig.n1 as f64);
    [disc_point(C::zero()), disc_point(C::new(r2, T::zero())), disc_point(cis(th) * r3)]
}

/// Everything that fixes a turnover candidate inside the complex geodesic e2 = 0
/// plus normal phases.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TurnoverParams<T> {
    /// Distance (curvature -4) from the fixed point of g1 to that of g3.
    pub d13: T,
    /// Direction of the fixed point of g3, seen from the centre.
    pub theta: T,
    /// Phase of g1 on the polar direction e2.
    pub beta1: T,
    /// Phase of g3 on the polar direction e2.
    pub beta3: T,
}

impl<T: Scalar> TurnoverParams<T> {
    /// The untwisted ℂ-Fuchsian parameters.
    pub fn fuchsian(sig: &TurnoverSignature) -> Self {
        let (_, l13) = side_lengths::<T>(sig);
        Self { d13: l13 * T::lit(0.5), theta: T::PI() / T::lit(sig.n1 as f64), beta1: T::zero(), beta3: T::zero() }
    }
}

/// Generators and eigenframes built from parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct TurnoverCandidate<T> {
    pub g1: Isometry<T>,
    pub g2: Isometry<T>,
    pub g3: Isometry<T>,
    pub x1: Vec3<T>,
    pub x3: Vec3<T>,
    /// Polars of the slices fixed by the rotation parts of g1 and g3.
    pub q1: Vec3<T>,
    pub q3: Vec3<T>,
}

pub fn build_candidate<T: Scalar>(sig: &TurnoverSignature, p: &TurnoverParams<T>) -> Result<TurnoverCandidate<T>> {
    let e0 = Vec3::<T>::basis(0);
    let e1 = Vec3::<T>::basis(1);
    let e2 = Vec3::<T>::basis(2);
    let tau = T::TAU();
    let rot1 = cis(-tau / T::lit(sig.n1 as f64));
    let rot3 = cis(-tau / T::lit(sig.n3 as f64));
    let pp = |v: Vec3<T>| ProjectivePoint::new(v);
    let f1 = OrthogonalFrame::new(pp(e0)?, pp(e1)?, pp(e2)?)?;
    let g1 = elliptic_from_frame(&f1, [C::one(), rot1, cis(p.beta1)])?;
    let u = e1.scale(cis(p.theta));
    let (ch, sh) = (p.d13.cosh(), p.d13.sinh());
    let x3 = e0.scale_re(ch) + u.scale_re(sh);
    let w = e0.scale_re(sh) + u.scale_re(ch);
    let f3 = OrthogonalFrame::new(pp(x3)?, pp(w)?, pp(e2)?)?;
    let g3 = elliptic_from_frame(&f3, [C::one(), rot3, cis(p.beta3)])?;
    let g2 = g3.inverse().compose(&g1.inverse());
    Ok(TurnoverCandidate { g1, g2, g3, x1: e0, x3, q1: e1, q3: w })
}

pub fn turnover_relations(sig: &TurnoverSignature) -> Vec<Relation> {
    vec![
        Relation::new("g1", sig.n1).unwrap(),
        Relation::new("g2", sig.n2).unwrap(),
        Relation::new("g3", sig.n3).unwrap(),
        Relation::new("g3 g2 g1", 1).unwrap(),
    ]
}

pub fn turnover_representation<T: Scalar>(sig: &TurnoverSignature, c: &TurnoverCandidate<T>) -> Representation<T> {
    Representation {
        generators: vec![("g1".into(), c.g1), ("g2".into(), c.g2), ("g3".into(), c.g3)],
        relations: turnover_relations(sig),
        kind: RepKind::Turnover,
    }
}

/// Quadrangle C1..C4 read off a turnover representation.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadrangleFromRep<T> {
    pub rep: Representation<T>,
    pub vertices: [ComplexGeodesic<T>; 4],
    /// 1 - tance(g1^-1 C2, g3 C2) in absolute value.
    pub c4_consistency: T,
}

impl<T: Scalar> QuadrangleFromRep<T> {
    pub fn config(&self) -> QuadrangleConfig<T> {
        QuadrangleConfig::new([
            *self.vertices[0].polar(),
            *self.vertices[1].polar(),
            *self.vertices[2].polar(),
            *self.vertices[3].polar(),
        ])
        .expect("positive polars")
    }
}

/// A turnover representation together with its geometric data.
#[derive(Clone, Debug, PartialEq)]
pub struct Turnover<T> {
    pub signature: TurnoverSignature,
    pub params: TurnoverParams<T>,
    pub quadrangle: QuadrangleFromRep<T>,
    /// Fixed points x1, x2, x3 of g1, g2, g3.
    pub fixed_points: [ProjectivePoint<T>; 3],
    /// Normal phases 2 pi k / n used for (g1, g3).
    pub normal_twist: (u32, u32),
    /// g2 has order n2 in PU(2,1) for this twist.
    pub genuine: bool,
}

impl<T: Scalar> Turnover<T> {
    pub fn rep(&self) -> &Representation<T> {
        &self.quadrangle.rep
    }

    /// Fixed points of g1, g2, g3 and x4 = g1^-1 x2.
    pub fn polygon(&self) -> Result<[ProjectivePoint<T>; 4]> {
        let g1 = self.rep().generator("g1")?;
        let x4 = g1.inverse().apply(&self.fixed_points[1]);
        Ok([self.fixed_points[0], self.fixed_points[1], self.fixed_points[2], x4])
    }
}

/// Fixed point of g in the ball nearest to `guess`.
pub fn fixed_point_near<T: Scalar>(g: &Isometry<T>, guess: &Vec3<T>) -> Result<Vec3<T>> {
    let ev = g.eigenvalues();
    let mut best: Option<(T, Vec3<T>)> = None;
    for lam in ev.iter() {
        let cands: Vec<Vec3<T>> = match g.eigenvector(*lam) {
            Some(v) => vec![v],
            None => eigenplane_projection(g, *lam, guess).into_iter().collect(),
        };
        for v in cands {
            if herm(&v, &v).re < T::zero() {
                let y = ProjectivePoint::new(v)?;
                let t = crate::hermitian::tance_vec(y.rep(), guess);
                let score = (t - T::one()).abs();
                if best.map_or(true, |(s, _)| score < s) {
                    best = Some((score, *y.rep()));
                }
            }
        }
    }
    best.map(|(_, v)| v).ok_or_else(|| Error::Degenerate("element has no fixed point in the ball".into()))
}

/// Projection of `guess` onto the 2-dimensional eigenspace of `lam` (when M - lam I has rank one).
fn eigenplane_projection<T: Scalar>(g: &Isometry<T>, lam: C<T>, guess: &Vec3<T>) -> Option<Vec3<T>> {
    let mut a = *g.matrix();
    for i in 0..3 {
        a.0[i][i] = a.0[i][i] - lam;
    }
    let row = (0..3).map(|i| a.row(i)).max_by(|x, y| x.norm().partial_cmp(&y.norm()).unwrap())?;
    if row.norm() == T::zero() {
        return Some(*guess);
    }
    let mut basis = Vec::new();
    for k in 0..3 {
        let v = row.cross(&Vec3::basis(k));
        if v.norm() > T::lit(1e-6) * row.norm() {
            basis.push(v);
        }
    }
    if basis.len() < 2 {
        return None;
    }
    let q = polar_span_vec(&basis[0], &basis[1]).ok()?;
    let qv = q.rep();
    Some(*guess - qv.scale(herm(guess, qv) / herm(qv, qv).re))
}

/// Polar of the slice through the fixed point x rotated by the in-line eigenvalue closest
/// to e^{-2 pi i / n} relative to x; falls back to the unique simple positive eigenvector.
pub fn rotation_polar<T: Scalar>(g: &Isometry<T>, x: &Vec3<T>, n: u32, hint: &Vec3<T>) -> Result<Vec3<T>> {
    let gx = g.apply_vec(x);
    let lam_fix = herm(&gx, x) / herm(x, x).re;
    let want = lam_fix * cis(-T::TAU() / T::lit(n as f64));
    let mut best: Option<(T, Vec3<T>)> = None;
    for lam in g.eigenvalues() {
        if let Some(v) = g.eigenvector(lam) {
            if herm(&v, &v).re > T::zero() && herm(&v, x).norm() < T::lit(1e-6) {
                let score = (lam - want).norm() - T::lit(1e-9) * crate::hermitian::tance_vec(&v, hint);
                if best.map_or(true, |(s, _)| score < s) {
                    best = Some((score, v));
                }
            }
        }
    }
    best.map(|(_, v)| v).ok_or_else(|| Error::Degenerate("no rotation polar found".into()))
}

/// Assemble quadrangle and fixed points for a candidate.
pub fn assemble<T: Scalar>(
    sig: &TurnoverSignature,
    params: &TurnoverParams<T>,
    cand: &TurnoverCandidate<T>,
    c2_guess: &Vec3<T>,
    normal: Option<&Vec3<T>>,
    twist: (u32, u32),
) -> Result<Turnover<T>> {
    let rep = turnover_representation(sig, cand);
    let x2 = fixed_point_near(&cand.g2, c2_guess)?;
    let p2 = match normal {
        Some(f) => polar_span_vec(&x2, f)?,
        None => {
            let slice_hint = *polar_span_vec(c2_guess, &Vec3::basis(2))?.rep();
            ProjectivePoint::new(rotation_polar(&cand.g2, &x2, sig.n2, &slice_hint)?)?
        }
    };
    let via1 = cand.g1.inverse().apply(&p2);
    let via3 = cand.g3.apply(&p2);
    let c4_consistency = (tance(&via1, &via3)? - T::one()).abs();
    let mk = |v: Vec3<T>| ComplexGeodesic::from_vec(v);
    let vertices = [mk(cand.q1)?, ComplexGeodesic::new(p2)?, mk(cand.q3)?, ComplexGeodesic::new(via1)?];
    let genuine = rep.max_relation_residual()? < T::lit(1e-8);
    let fixed_points = [ProjectivePoint::new(cand.x1)?, ProjectivePoint::new(x2)?, ProjectivePoint::new(cand.x3)?];
    for x in fixed_points.iter() {
        x.require(PointClass::Negative)?;
    }
    Ok(Turnover {
        signature: *sig,
        params: *params,
        quadrangle: QuadrangleFromRep { rep, vertices, c4_consistency },
        fixed_points,
        normal_twist: twist,
        genuine,
    })
}

/// Normal twists (k1, k3) for which g2 has order n2; (0,0) first when admissible.
pub fn admissible_twists(sig: &TurnoverSignature) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for k1 in 0..sig.n1 {
        for k3 in 0..sig.n3 {
            let p = twisted_params::<f64>(sig, (k1, k3));
            if let Ok(c) = build_candidate(sig, &p) {
                if c.g2.pow(sig.n2).distance_from_identity() < 1e-9 {
                    out.push((k1, k3));
                }
            }
        }
    }
    out.sort_by_key(|&(a, b)| (a + b, a));
    out
}

fn twisted_params<T: Scalar>(sig: &TurnoverSignature, twist: (u32, u32)) -> TurnoverParams<T> {
    let mut p = TurnoverParams::<T>::fuchsian(sig);
    p.beta1 = T::TAU() * T::lit(twist.0 as f64 / sig.n1 as f64);
    p.beta3 = T::TAU() * T::lit(twist.1 as f64 / sig.n3 as f64);
    p
}

/// The ℂ-Fuchsian turnover stabilizing e2 = 0.
///
/// g1, g3 rotate by -2 pi/n1, -2 pi/n3 about c1, c3. The normal phases are 2 pi k/n,
/// chosen so that g2 has order n2 when such (k1,k3) exists; otherwise both are 1 and the
/// result is flagged non-genuine.
pub fn fuchsian_turnover<T: Scalar>(sig: &TurnoverSignature) -> Result<Turnover<T>> {
    let twists = admissible_twists(sig);
    let twist = twists.first().copied().unwrap_or((0, 0));
    fuchsian_turnover_twisted(sig, twist)
}

pub fn fuchsian_turnover_twisted<T: Scalar>(sig: &TurnoverSignature, twist: (u32, u32)) -> Result<Turnover<T>> {
    let params = twisted_params::<T>(sig, twist);
    let cand = build_candidate(sig, &params)?;
    let c = triangle_from_angles::<T>(sig);
    assemble(sig, &params, &cand, c[1].rep(), Some(&Vec3::basis(2)), twist)
}

/// True when the untwisted construction already closes up, i.e. chi/2 lies in sum (1/n_i) Z.
pub fn has_genuine_fuchsian_turnover(sig: &TurnoverSignature) -> bool {
    !admissible_twists(sig).is_empty()
}
