//! Shared helpers and independent oracles for the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use chdisc_core::hermitian::{herm, polar_span_vec, ProjectivePoint};
use chdisc_core::linalg::{Vec3, C};
use chdisc_core::IsometryF64;
use chdisc_core::{hermitian::elliptic_from_frame, hermitian::OrthogonalFrame};
use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type P = ProjectivePoint<f64>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> C<f64> {
    Complex::new(re, im)
}

pub fn pt(a: f64, b: f64, cc: f64) -> P {
    ProjectivePoint::from_reals(a, b, cc).unwrap()
}

pub fn ptc(a: C<f64>, b: C<f64>, cc: C<f64>) -> P {
    ProjectivePoint::new(Vec3::new(a, b, cc)).unwrap()
}

/// Point (1, z, 0) of the disc e2 = 0; z is the Poincare coordinate.
pub fn disc(z: C<f64>) -> P {
    ptc(c(1.0, 0.0), z, c(0.0, 0.0))
}

pub fn random_unit_disc(r: &mut impl Rng, radius: f64) -> C<f64> {
    let rho = radius * r.gen::<f64>().sqrt();
    Complex::from_polar(rho, r.gen_range(0.0..2.0 * PI))
}

/// A negative point (1, z1, z2) with |z| < radius, times a random complex scalar.
pub fn random_negative(r: &mut impl Rng, radius: f64) -> P {
    let a = random_unit_disc(r, 1.0);
    let b = random_unit_disc(r, 1.0);
    let n = (a.norm_sqr() + b.norm_sqr()).sqrt().max(1e-9);
    let s = radius * r.gen::<f64>().sqrt() / n;
    let scale = Complex::from_polar(r.gen_range(0.5..2.0), r.gen_range(0.0..2.0 * PI));
    ptc(scale, a * s * scale, b * s * scale)
}

/// Orthogonal frame centred at a random point of the ball.
pub fn random_frame(r: &mut impl Rng, radius: f64) -> OrthogonalFrame<f64> {
    let b0 = random_negative(r, radius);
    let x = *b0.rep();
    let w = Vec3::new(c(r.gen(), r.gen()), c(r.gen(), r.gen()), c(r.gen(), r.gen()));
    // Form projection off x leaves a positive vector.
    let w = w - x.scale(herm(&w, &x) / herm(&x, &x).re);
    let b1 = ProjectivePoint::new(w).unwrap();
    let b2 = polar_span_vec(&x, &w).unwrap();
    OrthogonalFrame::new(b0, b1, b2).unwrap()
}

pub fn random_elliptic(r: &mut impl Rng, radius: f64) -> IsometryF64 {
    let f = random_frame(r, radius);
    let ph = [0; 3].map(|_| Complex::from_polar(1.0, r.gen_range(0.0..2.0 * PI)));
    elliptic_from_frame(&f, ph).unwrap()
}

/// Product of three random elliptics: generic elements of all types, moderate size.
pub fn random_isometry(r: &mut impl Rng) -> IsometryF64 {
    let a = random_elliptic(r, 0.6);
    let b = random_elliptic(r, 0.6);
    let d = random_elliptic(r, 0.6);
    a.compose(&b).compose(&d)
}

// ---------------------------------------------------------------- oracles

/// Curvature -1 Poincare distance.
pub fn poincare_dist(z: C<f64>, w: C<f64>) -> f64 {
    2.0 * ((z - w).norm() / (c(1.0, 0.0) - z.conj() * w).norm()).atanh()
}

/// Interior angles from the curvature -1 law of cosines.
pub fn angles(z: [C<f64>; 3]) -> [f64; 3] {
    let a = poincare_dist(z[1], z[2]);
    let b = poincare_dist(z[2], z[0]);
    let cc = poincare_dist(z[0], z[1]);
    let ang = |opp: f64, s1: f64, s2: f64| ((s1.cosh() * s2.cosh() - opp.cosh()) / (s1.sinh() * s2.sinh())).clamp(-1.0, 1.0).acos();
    [ang(a, b, cc), ang(b, cc, a), ang(cc, a, b)]
}

/// Curvature -4 area by angle defect.
pub fn gauss_bonnet_area(z: [C<f64>; 3]) -> f64 {
    let a = angles(z);
    (PI - a[0] - a[1] - a[2]) / 4.0
}

fn klein(z: C<f64>) -> [f64; 2] {
    let k = z * 2.0 / (1.0 + z.norm_sqr());
    [k.re, k.im]
}

/// Curvature -4 area by integrating the Klein area element over the straight triangle.
pub fn klein_area(z: [C<f64>; 3]) -> f64 {
    let v = z.map(klein);
    let q = GaussLegendre::new(NonZeroUsize::new(24).unwrap());
    let nodes: Vec<(f64, f64)> = q.as_node_weight_pairs().iter().map(|&(x, w)| (0.5 * (x + 1.0), 0.5 * w)).collect();
    fn rec(v: [[f64; 2]; 3], nodes: &[(f64, f64)], depth: usize) -> f64 {
        if depth > 0 {
            let m = |a: [f64; 2], b: [f64; 2]| [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0];
            let (a, b, cc) = (v[0], v[1], v[2]);
            let (ab, bc, ca) = (m(a, b), m(b, cc), m(cc, a));
            return [[a, ab, ca], [ab, b, bc], [ca, bc, cc], [ab, bc, ca]].iter().map(|t| rec(*t, nodes, depth - 1)).sum();
        }
        let (a, b, cc) = (v[0], v[1], v[2]);
        let det = ((b[0] - a[0]) * (cc[1] - a[1]) - (cc[0] - a[0]) * (b[1] - a[1])).abs();
        let mut acc = 0.0;
        // Collapsed square: p = a + s (b - a) + s t (c - b), Jacobian s det.
        for &(s, ws) in nodes {
            for &(t, wt) in nodes {
                let x = a[0] + s * (b[0] - a[0]) + s * t * (cc[0] - b[0]);
                let y = a[1] + s * (b[1] - a[1]) + s * t * (cc[1] - b[1]);
                acc += ws * wt * s * det / (1.0 - x * x - y * y).powf(1.5);
            }
        }
        acc
    }
    rec(v, &nodes, 3) / 4.0
}

/// Closed form of the omega integral over a geodesic triangle with vertices a, b, c.
pub fn omega_closed_form(a: &Vec3<f64>, b: &Vec3<f64>, cc: &Vec3<f64>) -> f64 {
    -0.5 * (-(herm(a, b) * herm(b, cc) * herm(cc, a))).arg()
}

/// Orientation of the geodesic triangle: Klein geodesics are chords, so a straight cross product.
pub fn klein_cross(z: [C<f64>; 3]) -> f64 {
    let k = z.map(klein);
    (k[1][0] - k[0][0]) * (k[2][1] - k[0][1]) - (k[2][0] - k[0][0]) * (k[1][1] - k[0][1])
}

/// Random counterclockwise geodesic triangle inside |z| < radius, not too thin.
pub fn random_ccw_triangle(r: &mut impl Rng, radius: f64) -> [C<f64>; 3] {
    loop {
        let mut z = [0; 3].map(|_| random_unit_disc(r, radius));
        let cross = klein_cross(z);
        if cross.abs() < 1e-3 {
            continue;
        }
        if cross < 0.0 {
            z.swap(1, 2);
        }
        return z;
    }
}

/// Smallest max |Im| of the three normalized pairings over phases on y and z: a grid search
/// refined around the best cell. Zero exactly when the triple spans a real plane.
pub fn phase_search_residual(x: &Vec3<f64>, y: &Vec3<f64>, z: &Vec3<f64>, steps: usize) -> f64 {
    let n = |u: &Vec3<f64>, v: &Vec3<f64>| herm(u, v).im.abs() / (herm(u, u).re.abs() * herm(v, v).re.abs()).sqrt();
    let eval = |a: f64, b: f64| {
        let (ys, zs) = (y.scale(Complex::from_polar(1.0, a)), z.scale(Complex::from_polar(1.0, b)));
        n(x, &ys).max(n(x, &zs)).max(n(&ys, &zs))
    };
    let mut best = (f64::INFINITY, 0.0, 0.0);
    let h = 2.0 * PI / steps as f64;
    for i in 0..steps {
        for j in 0..steps {
            let (a, b) = (i as f64 * h, j as f64 * h);
            let v = eval(a, b);
            if v < best.0 {
                best = (v, a, b);
            }
        }
    }
    let mut w = h;
    for _ in 0..12 {
        let (_, a0, b0) = best;
        for i in -10..=10 {
            for j in -10..=10 {
                let (a, b) = (a0 + w * i as f64 / 10.0, b0 + w * j as f64 / 10.0);
                let v = eval(a, b);
                if v < best.0 {
                    best = (v, a, b);
                }
            }
        }
        w *= 0.2;
    }
    best.0
}
