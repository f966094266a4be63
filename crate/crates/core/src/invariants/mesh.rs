use std::collections::HashMap;

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::geometry::Geodesic;
use crate::hermitian::{elliptic_from_frame, herm, tance, Isometry, OrthogonalFrame, PointClass, ProjectivePoint};
use crate::linalg::{cis, Vec3, C};
use crate::representations::{side_lengths, Turnover, TurnoverSignature};
use crate::scalar::Scalar;

/// g maps the vertices `from[k]` onto `to[k]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SidePairing<T> {
    pub label: String,
    pub from: Vec<usize>,
    pub to: Vec<usize>,
    pub isometry: Isometry<T>,
}

/// Triangulated base polygon with an embedding into the ball.
#[derive(Clone, Debug, PartialEq)]
pub struct SectionMesh<T> {
    /// Planar coordinates of the base polygon (Klein coordinates of the model surface).
    pub base: Vec<[f64; 2]>,
    pub embedding: Vec<ProjectivePoint<T>>,
    /// Counterclockwise in `base`.
    pub triangles: Vec<[usize; 3]>,
    pub side_pairings: Vec<SidePairing<T>>,
    pub cone_points: Vec<(usize, u32)>,
    /// Corner vertices of the base polygon in boundary order.
    pub corners: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeshCheck {
    pub max_pairing_residual: f64,
    pub max_edge_length: f64,
}

impl<T: Scalar> SectionMesh<T> {
    pub fn validate(&self, pairing_tol: f64) -> Result<MeshCheck> {
        if self.base.len() != self.embedding.len() {
            return Err(Error::Mesh("base and embedding sizes differ".into()));
        }
        for (k, x) in self.embedding.iter().enumerate() {
            if x.class() != PointClass::Negative {
                return Err(Error::Mesh(format!("vertex {k} is not a negative point")));
            }
        }
        let mut max_edge = 0.0f64;
        for t in self.triangles.iter() {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                if a >= self.embedding.len() || b >= self.embedding.len() || a == b {
                    return Err(Error::Mesh(format!("bad triangle {t:?}")));
                }
                let d = crate::hermitian::distance(&self.embedding[a], &self.embedding[b])?;
                max_edge = max_edge.max(d.to_f64_lossy());
            }
        }
        let mut worst = 0.0f64;
        for p in self.side_pairings.iter() {
            if p.from.len() != p.to.len() {
                return Err(Error::Mesh(format!("pairing {} has runs of different length", p.label)));
            }
            for (&a, &b) in p.from.iter().zip(p.to.iter()) {
                let r = (tance(&p.isometry.apply(&self.embedding[a]), &self.embedding[b])? - T::one()).abs();
                worst = worst.max(r.to_f64_lossy());
            }
        }
        if !(worst <= pairing_tol) {
            return Err(Error::Mesh(format!("side pairing misses its target edge by {worst:e}")));
        }
        Ok(MeshCheck { max_pairing_residual: worst, max_edge_length: max_edge })
    }

    /// Vertex neighbours in ascending order, from the triangle list.
    pub fn neighbours(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.embedding.len()];
        for t in self.triangles.iter() {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                out[a].push(b);
                out[b].push(a);
            }
        }
        for n in out.iter_mut() {
            n.sort_unstable();
            n.dedup();
        }
        out
    }

    /// The same mesh moved by an isometry (pairings conjugated).
    pub fn transformed(&self, g: &Isometry<T>) -> Self {
        let gi = g.inverse();
        Self {
            base: self.base.clone(),
            embedding: self.embedding.iter().map(|x| g.apply(x)).collect(),
            triangles: self.triangles.clone(),
            side_pairings: self
                .side_pairings
                .iter()
                .map(|p| SidePairing { isometry: g.compose(&p.isometry).compose(&gi), ..p.clone() })
                .collect(),
            cone_points: self.cone_points.clone(),
            corners: self.corners.clone(),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Key {
    Corner(usize),
    Edge(usize, usize, usize),
    Interior(usize, usize, usize),
}

/// Uniform subdivision of a polygon triangulated by corner triples; shared edges are merged.
struct Subdivision {
    base: Vec<[f64; 2]>,
    triangles: Vec<[usize; 3]>,
    index: HashMap<Key, usize>,
    n: usize,
}

impl Subdivision {
    fn key(&self, ti: usize, t: &[usize; 3], w: [usize; 3]) -> Key {
        let nz: Vec<usize> = (0..3).filter(|&k| w[k] > 0).collect();
        match nz.len() {
            1 => Key::Corner(t[nz[0]]),
            2 => {
                let (p, q) = (t[nz[0]], t[nz[1]]);
                let (lo, hi, whi) = if p < q { (p, q, w[nz[1]]) } else { (q, p, w[nz[0]]) };
                Key::Edge(lo, hi, whi)
            }
            _ => Key::Interior(ti, w[1], w[2]),
        }
    }

    fn vertex(&mut self, corners: &[[f64; 2]], key: Key) -> usize {
        if let Some(&k) = self.index.get(&key) {
            return k;
        }
        let n = self.n as f64;
        let p = match key {
            Key::Corner(c) => corners[c],
            Key::Edge(lo, hi, whi) => {
                let s = whi as f64 / n;
                [corners[lo][0] + s * (corners[hi][0] - corners[lo][0]), corners[lo][1] + s * (corners[hi][1] - corners[lo][1])]
            }
            Key::Interior(..) => unreachable!("interior points are placed up front"),
        };
        self.base.push(p);
        self.index.insert(key, self.base.len() - 1);
        self.base.len() - 1
    }

    /// Vertices from corner a to corner b along their shared edge.
    fn run(&self, a: usize, b: usize) -> Vec<usize> {
        (0..=self.n)
            .map(|k| {
                let key = if k == 0 {
                    Key::Corner(a)
                } else if k == self.n {
                    Key::Corner(b)
                } else if a < b {
                    Key::Edge(a, b, k)
                } else {
                    Key::Edge(b, a, self.n - k)
                };
                self.index[&key]
            })
            .collect()
    }
}

fn subdivide(corners: &[[f64; 2]], tris: &[[usize; 3]], n: usize) -> Result<Subdivision> {
    if n == 0 {
        return Err(Error::Mesh("subdivision level must be positive".into()));
    }
    // Interior keys need the triangle's corner positions; place them up front.
    let mut s = Subdivision { base: Vec::new(), triangles: Vec::new(), index: HashMap::new(), n };
    for c in 0..corners.len() {
        s.vertex(corners, Key::Corner(c));
    }
    let nf = n as f64;
    for (ti, t) in tris.iter().enumerate() {
        for i in 0..=n {
            for j in 0..=(n - i) {
                let w = [n - i - j, i, j];
                if let Key::Interior(..) = s.key(ti, t, w) {
                    let key = Key::Interior(ti, i, j);
                    let p = [0, 1].map(|d| {
                        (w[0] as f64 * corners[t[0]][d] + w[1] as f64 * corners[t[1]][d] + w[2] as f64 * corners[t[2]][d]) / nf
                    });
                    s.base.push(p);
                    s.index.insert(key, s.base.len() - 1);
                }
            }
        }
    }
    s.fill_triangles(corners, tris);
    Ok(s)
}

impl Subdivision {
    fn fill_triangles(&mut self, corners: &[[f64; 2]], tris: &[[usize; 3]]) {
        let n = self.n;
        let s = self;
        for (ti, t) in tris.iter().enumerate() {
            let id = |s: &mut Subdivision, i: usize, j: usize| {
                let key = s.key(ti, t, [n - i - j, i, j]);
                s.vertex(corners, key)
            };
            for i in 0..n {
                for j in 0..(n - i) {
                    let a = id(s, i, j);
                    let b = id(s, i + 1, j);
                    let c = id(s, i, j + 1);
                    s.triangles.push([a, b, c]);
                    if i + j + 1 < n {
                        let d = id(s, i + 1, j + 1);
                        s.triangles.push([b, d, c]);
                    }
                }
            }
        }
    }
}

/// Poincare coordinate of a Klein point, both for the curvature -1 model.
pub fn klein_to_poincare(k: [f64; 2]) -> [f64; 2] {
    let r2 = k[0] * k[0] + k[1] * k[1];
    let s = 1.0 / (1.0 + (1.0 - r2).max(0.0).sqrt());
    [k[0] * s, k[1] * s]
}

pub fn poincare_to_klein(z: [f64; 2]) -> [f64; 2] {
    let s = 2.0 / (1.0 + z[0] * z[0] + z[1] * z[1]);
    [z[0] * s, z[1] * s]
}

fn disc_embed<T: Scalar>(k: [f64; 2]) -> ProjectivePoint<T> {
    let z = klein_to_poincare(k);
    ProjectivePoint::new(Vec3::new(C::one(), Complex::new(T::lit(z[0]), T::lit(z[1])), C::zero())).expect("nonzero")
}

fn real_embed<T: Scalar>(k: [f64; 2]) -> ProjectivePoint<T> {
    ProjectivePoint::new(Vec3::from_reals(T::one(), T::lit(k[0]), T::lit(k[1]))).expect("nonzero")
}

fn polar_klein(r: f64, angle: f64) -> [f64; 2] {
    [r * angle.cos(), r * angle.sin()]
}

/// The ℂ-Fuchsian turnover polygon x1 x2 x3 x4 subdivided n times per side.
/// Pairings: g1^-1 takes [x1,x2] to [x1,x4], g3 takes [x3,x2] to [x3,x4].
pub fn baseline_mesh<T: Scalar>(t: &Turnover<T>, n: usize) -> Result<SectionMesh<T>> {
    let e2 = Vec3::<T>::basis(2);
    let poly = t.polygon()?;
    for x in poly.iter() {
        if herm(x.rep(), &e2).norm() > T::lit(1e-10) * x.rep().norm() {
            return Err(Error::Mesh("turnover does not stabilize the complex geodesic e2 = 0".into()));
        }
    }
    let corners: Vec<[f64; 2]> = poly
        .iter()
        .map(|x| {
            let z = x.rep().0[1] / x.rep().0[0];
            poincare_to_klein([z.re.to_f64_lossy(), z.im.to_f64_lossy()])
        })
        .collect();
    let tris = [[0, 1, 2], [0, 2, 3]];
    let s = subdivide(&corners, &tris, n)?;
    let mut embedding: Vec<ProjectivePoint<T>> = s.base.iter().map(|&k| disc_embed(k)).collect();
    // Corners exactly at the fixed points.
    for (c, x) in poly.iter().enumerate() {
        embedding[s.index[&Key::Corner(c)]] = *x;
    }
    let g1 = t.rep().generator("g1")?;
    let g3 = t.rep().generator("g3")?;
    let side_pairings = vec![
        SidePairing { label: "g1^-1".into(), from: s.run(0, 1), to: s.run(0, 3), isometry: g1.inverse() },
        SidePairing { label: "g3".into(), from: s.run(2, 1), to: s.run(2, 3), isometry: *g3 },
    ];
    let sig = t.signature;
    let corners_idx: Vec<usize> = (0..4).map(|c| s.index[&Key::Corner(c)]).collect();
    let cone_points = vec![(corners_idx[0], sig.n1), (corners_idx[1], sig.n2), (corners_idx[2], sig.n3)];
    Ok(SectionMesh { base: s.base, embedding, triangles: s.triangles, side_pairings, cone_points, corners: corners_idx })
}

/// Rotation by `theta` (counterclockwise in Klein coordinates) about a point of the real plane
/// of real vectors.
pub fn real_rotation<T: Scalar>(p: &ProjectivePoint<T>, theta: T) -> Result<Isometry<T>> {
    let x = p.unit_rep()?;
    // Real tangent frame at p: Gram-Schmidt of e1, e2 against x, staying real.
    let mut t: Vec<Vec3<T>> = Vec::new();
    for k in 1..3 {
        let mut w = Vec3::<T>::basis(k) + x.scale(herm(&Vec3::basis(k), &x));
        for u in t.iter() {
            w = w - u.scale(herm(&w, u));
        }
        let n = herm(&w, &w).re.sqrt();
        t.push(w.scale_re(T::one() / n));
    }
    let i = Complex::new(T::zero(), T::one());
    let plus = t[0] + t[1].scale(i);
    let minus = t[0] - t[1].scale(i);
    let frame = OrthogonalFrame::new(ProjectivePoint::new(x)?, ProjectivePoint::new(plus)?, ProjectivePoint::new(minus)?)?;
    elliptic_from_frame(&frame, [C::one(), cis(-theta), cis(theta)])
}

/// An ℝ-Fuchsian turnover: the same polygon inside the real plane of real vectors, with
/// rotations by -2 pi/n1, -2 pi/n3 about the corners c1, c3.
pub fn lagrangian_mesh<T: Scalar>(sig: &TurnoverSignature, n: usize) -> Result<(SectionMesh<T>, [Isometry<T>; 3])> {
    let (l12, l13) = side_lengths::<f64>(sig);
    let a1 = std::f64::consts::PI / sig.n1 as f64;
    let corners = vec![
        [0.0, 0.0],
        polar_klein(l12.tanh(), 0.0),
        polar_klein(l13.tanh(), a1),
        polar_klein(l12.tanh(), 2.0 * a1),
    ];
    let tris = [[0, 1, 2], [0, 2, 3]];
    let s = subdivide(&corners, &tris, n)?;
    let embedding: Vec<ProjectivePoint<T>> = s.base.iter().map(|&k| real_embed(k)).collect();
    let c = |k: usize| embedding[s.index[&Key::Corner(k)]];
    let tau = T::TAU();
    let g1 = real_rotation(&c(0), -tau / T::lit(sig.n1 as f64))?;
    let g3 = real_rotation(&c(2), -tau / T::lit(sig.n3 as f64))?;
    let g2 = g3.inverse().compose(&g1.inverse());
    let side_pairings = vec![
        SidePairing { label: "g1^-1".into(), from: s.run(0, 1), to: s.run(0, 3), isometry: g1.inverse() },
        SidePairing { label: "g3".into(), from: s.run(2, 1), to: s.run(2, 3), isometry: g3 },
    ];
    let corners_idx: Vec<usize> = (0..4).map(|k| s.index[&Key::Corner(k)]).collect();
    let cone_points = vec![(corners_idx[0], sig.n1), (corners_idx[1], sig.n2), (corners_idx[2], sig.n3)];
    let mesh = SectionMesh { base: s.base, embedding, triangles: s.triangles, side_pairings, cone_points, corners: corners_idx };
    Ok((mesh, [g1, g2, g3]))
}

/// Rotation of the disc e2 = 0 about its centre: z -> e^{i a} z.
fn disc_rotation<T: Scalar>(a: T) -> Result<Isometry<T>> {
    let f = OrthogonalFrame::standard();
    elliptic_from_frame(&f, [C::one(), cis(a), C::one()])
}

/// Half-turn of the disc e2 = 0 about a point in it.
fn disc_half_turn<T: Scalar>(m: &ProjectivePoint<T>) -> Result<Isometry<T>> {
    let x = m.unit_rep()?;
    let e2 = Vec3::<T>::basis(2);
    let w = crate::hermitian::polar_span_vec(&x, &e2)?;
    let frame = OrthogonalFrame::new(*m, w, ProjectivePoint::new(e2)?)?;
    elliptic_from_frame(&frame, [C::one(), -C::<T>::one(), C::one()])
}

/// Closed genus-2 surface: regular octagon with angles pi/4 inside the disc e2 = 0,
/// sides j -> j+2 (j = 0, 1, 4, 5) glued by a1 b1 a1^-1 b1^-1 a2 b2 a2^-1 b2^-1.
pub fn genus2_mesh<T: Scalar>(n: usize) -> Result<SectionMesh<T>> {
    let pi = std::f64::consts::PI;
    let cot = 1.0 / (pi / 8.0).tan();
    let big_r = (cot * cot).acosh();
    let mut corners = vec![[0.0, 0.0]];
    for k in 0..8 {
        corners.push(polar_klein(big_r.tanh(), k as f64 * pi / 4.0));
    }
    let tris: Vec<[usize; 3]> = (0..8).map(|k| [0, 1 + k, 1 + (k + 1) % 8]).collect();
    let s = subdivide(&corners, &tris, n)?;
    let embedding: Vec<ProjectivePoint<T>> = s.base.iter().map(|&k| disc_embed(k)).collect();
    let v = |k: usize| 1 + k % 8;
    let mut side_pairings = Vec::new();
    for j in [0usize, 1, 4, 5] {
        let a = embedding[s.index[&Key::Corner(v(j + 2))]];
        let b = embedding[s.index[&Key::Corner(v(j + 3))]];
        let g = Geodesic::through(&a, &b)?;
        let m = ProjectivePoint::new(g.at_arclength(g.length() * T::lit(0.5)))?;
        let iso = disc_half_turn(&m)?.compose(&disc_rotation(T::FRAC_PI_2())?);
        side_pairings.push(SidePairing {
            label: format!("side{}->side{}", j, j + 2),
            from: s.run(v(j), v(j + 1)),
            to: s.run(v(j + 3), v(j + 2)),
            isometry: iso,
        });
    }
    let corners_idx: Vec<usize> = (1..9).map(|k| s.index[&Key::Corner(k)]).collect();
    Ok(SectionMesh { base: s.base, embedding, triangles: s.triangles, side_pairings, cone_points: vec![], corners: corners_idx })
}
