//! Random configurations and independent oracles for the CLI-level tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use chdisc_core::hermitian::{elliptic_from_frame, herm, polar_span_vec, OrthogonalFrame, ProjectivePoint};
use chdisc_core::linalg::{Vec3, C};
use chdisc_core::representations::TurnoverSignature;
use chdisc_core::IsometryF64;
use num_complex::Complex;
use num_integer::Integer;
use num_rational::Ratio;
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

/// (1, z, 0).
pub fn disc(z: C<f64>) -> P {
    ptc(c(1.0, 0.0), z, c(0.0, 0.0))
}

pub fn random_unit_disc(r: &mut impl Rng, radius: f64) -> C<f64> {
    let rho = radius * r.gen::<f64>().sqrt();
    Complex::from_polar(rho, r.gen_range(0.0..2.0 * PI))
}

pub fn random_negative(r: &mut impl Rng, radius: f64) -> P {
    let a = random_unit_disc(r, 1.0);
    let b = random_unit_disc(r, 1.0);
    let n = (a.norm_sqr() + b.norm_sqr()).sqrt().max(1e-9);
    let s = radius * r.gen::<f64>().sqrt() / n;
    let scale = Complex::from_polar(r.gen_range(0.5..2.0), r.gen_range(0.0..2.0 * PI));
    ptc(scale, a * s * scale, b * s * scale)
}

pub fn random_positive(r: &mut impl Rng) -> P {
    let x = random_negative(r, 0.9);
    let y = random_negative(r, 0.9);
    polar_span_vec(x.rep(), y.rep()).unwrap()
}

pub fn random_isometry(r: &mut impl Rng) -> IsometryF64 {
    let mut g = IsometryF64::identity();
    for _ in 0..3 {
        let b0 = random_negative(r, 0.6);
        let x = *b0.rep();
        let w = Vec3::new(c(r.gen(), r.gen()), c(r.gen(), r.gen()), c(r.gen(), r.gen()));
        let w = w - x.scale(herm(&w, &x) / herm(&x, &x).re);
        let f = OrthogonalFrame::new(b0, ProjectivePoint::new(w).unwrap(), polar_span_vec(&x, &w).unwrap()).unwrap();
        let ph = [0; 3].map(|_| Complex::from_polar(1.0, r.gen_range(0.0..2.0 * PI)));
        g = g.compose(&elliptic_from_frame(&f, ph).unwrap());
    }
    g
}

pub fn poincare_dist(z: C<f64>, w: C<f64>) -> f64 {
    2.0 * ((z - w).norm() / (c(1.0, 0.0) - z.conj() * w).norm()).atanh()
}

/// Curvature -4 area from the angle defect.
pub fn gauss_bonnet_area(z: [C<f64>; 3]) -> f64 {
    let a = poincare_dist(z[1], z[2]);
    let b = poincare_dist(z[2], z[0]);
    let cc = poincare_dist(z[0], z[1]);
    let ang = |opp: f64, s1: f64, s2: f64| ((s1.cosh() * s2.cosh() - opp.cosh()) / (s1.sinh() * s2.sinh())).clamp(-1.0, 1.0).acos();
    (PI - ang(a, b, cc) - ang(b, cc, a) - ang(cc, a, b)) / 4.0
}

fn klein(z: C<f64>) -> [f64; 2] {
    let k = z * 2.0 / (1.0 + z.norm_sqr());
    [k.re, k.im]
}

/// Klein chords make the orientation a straight cross product.
pub fn klein_cross(z: [C<f64>; 3]) -> f64 {
    let k = z.map(klein);
    (k[1][0] - k[0][0]) * (k[2][1] - k[0][1]) - (k[2][0] - k[0][0]) * (k[1][1] - k[0][1])
}

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

/// 2 - sum (1 - 1/n_i).
pub fn chi_oracle(n: [u32; 3]) -> Ratio<i64> {
    Ratio::from_integer(2) - n.iter().map(|&k| Ratio::new(k as i64 - 1, k as i64)).sum::<Ratio<i64>>()
}

/// Whether chi/2 is an angle sum reachable by normal rotations 2 pi k/n_i, i.e. whether the
/// complex-geodesic lift can give g2 order n2.
pub fn half_chi_is_reachable(s: &TurnoverSignature) -> bool {
    let o = s.orders();
    let chi = chi_oracle(o);
    let l = o.iter().fold(1i64, |a, &n| a.lcm(&(n as i64)));
    let g = o.iter().fold(0i64, |a, &n| a.gcd(&(l / n as i64)));
    (chi / 2 / Ratio::new(g, l)).is_integer()
}

/// A random tangent vector at x (for its unit representative).
pub fn random_tangent(r: &mut impl Rng, x: &P) -> Vec3<f64> {
    let ts = chdisc_core::geometry::TangentSpace::at(x).unwrap();
    ts.project(&Vec3::new(c(r.gen(), r.gen()), c(r.gen(), r.gen()), c(r.gen(), r.gen())))
}

/// Tangent vectors re-expressed for the point's unit representative.
pub fn to_unit_rep(x: &P, v: &Vec3<f64>) -> Vec3<f64> {
    let u = x.unit_rep().unwrap();
    v.scale(herm(&u, x.rep()) / herm(x.rep(), x.rep()).re.abs())
}

/// A point of the real plane of real vectors with two real tangents there, moved by g and
/// rescaled by a random complex factor.
pub fn random_lagrangian(r: &mut impl Rng, g: &IsometryF64) -> (P, Vec3<f64>, Vec3<f64>) {
    let z = random_unit_disc(r, 0.7);
    let x = Vec3::real(1.0, z.re, z.im).scale_re(1.0 / (1.0 - z.norm_sqr()).sqrt());
    let mut t = [0; 2].map(|_| Vec3::real(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)));
    for v in t.iter_mut() {
        *v = *v + x.scale(herm(v, &x));
    }
    let lam = Complex::from_polar(r.gen_range(0.5..2.0), r.gen_range(0.0..2.0 * PI));
    let gx = g.apply_vec(&x).scale(lam);
    (ProjectivePoint::new(gx).unwrap(), g.apply_vec(&t[0]).scale(lam), g.apply_vec(&t[1]).scale(lam))
}
