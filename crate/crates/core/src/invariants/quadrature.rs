use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;

use crate::error::{Error, Result};
use crate::hermitian::{herm, phase_align, ProjectivePoint};
use crate::linalg::Vec3;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureOptions {
    /// Gauss-Legendre points per direction on each cell.
    pub order: usize,
    /// Absolute tolerance per triangle.
    pub tol: f64,
    pub max_depth: usize,
    /// Central-difference step in patch coordinates.
    pub fd_step: f64,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self { order: 7, tol: 1e-10, max_depth: 6, fd_step: 1e-5 }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

impl std::ops::Add for Integral {
    type Output = Integral;
    fn add(self, o: Integral) -> Integral {
        Integral { value: self.value + o.value, error: self.error + o.error, evaluations: self.evaluations + o.evaluations }
    }
}

fn unit<T: Scalar>(x: &Vec3<T>) -> Vec3<T> {
    let n = (-herm(x, x).re).sqrt();
    x.scale_re(T::one() / n)
}

/// Point at fraction s along the geodesic from x to y (unit reps, y phase-aligned to x).
fn geo<T: Scalar>(x: &Vec3<T>, y: &Vec3<T>, s: T) -> Vec3<T> {
    let xu = unit(x);
    let yu = phase_align(&xu, &unit(y));
    let ch = (-herm(&xu, &yu).re).max(T::one());
    let d = ch.acosh();
    if d <= T::lit(1e-12) {
        return xu.scale_re(T::one() - s) + yu.scale_re(s);
    }
    let sh = d.sinh();
    xu.scale_re(((T::one() - s) * d).sinh() / sh) + yu.scale_re((s * d).sinh() / sh)
}

/// The coned patch S(s,t) = geo(a, geo(b, c, s), t).
fn patch<T: Scalar>(a: &Vec3<T>, b: &Vec3<T>, c: &Vec3<T>, s: T, t: T) -> Vec3<T> {
    geo(a, &geo(b, c, s), t)
}

/// omega(dS/dt, dS/ds) at (s, t), by central differences.
fn integrand<T: Scalar>(a: &Vec3<T>, b: &Vec3<T>, c: &Vec3<T>, s: T, t: T, h: T) -> T {
    let x = patch(a, b, c, s, t);
    let two_h = h + h;
    let st = (patch(a, b, c, s, t + h) - patch(a, b, c, s, t - h)).scale_re(T::one() / two_h);
    let ss = (patch(a, b, c, s + h, t) - patch(a, b, c, s - h, t)).scale_re(T::one() / two_h);
    let nx = herm(&x, &x).re;
    let proj = |v: &Vec3<T>| *v - x.scale(herm(v, &x) / nx);
    (-herm(&proj(&st), &proj(&ss)) / nx).im
}

struct Rule {
    pairs: Vec<(f64, f64)>,
}

impl Rule {
    fn new(order: usize) -> Self {
        let q = GaussLegendre::new(NonZeroUsize::new(order.max(1)).unwrap());
        // Map nodes from [-1, 1] to [0, 1].
        let pairs = q.as_node_weight_pairs().iter().map(|&(x, w)| (0.5 * (x + 1.0), 0.5 * w)).collect();
        Self { pairs }
    }

    fn cell<T: Scalar>(&self, f: &impl Fn(T, T) -> T, s0: f64, t0: f64, w: f64) -> f64 {
        let mut acc = 0.0;
        for &(xs, ws) in self.pairs.iter() {
            for &(xt, wt) in self.pairs.iter() {
                let v = f(T::lit(s0 + w * xs), T::lit(t0 + w * xt));
                acc += ws * wt * v.to_f64_lossy();
            }
        }
        acc * w * w
    }
}

fn adapt<T: Scalar>(
    rule: &Rule,
    f: &impl Fn(T, T) -> T,
    s0: f64,
    t0: f64,
    w: f64,
    whole: f64,
    tol: f64,
    depth: usize,
    evals: &mut usize,
) -> (f64, f64, bool) {
    let h = 0.5 * w;
    let n = rule.pairs.len() * rule.pairs.len();
    let parts = [(s0, t0), (s0 + h, t0), (s0, t0 + h), (s0 + h, t0 + h)].map(|(s, t)| rule.cell(f, s, t, h));
    *evals += 4 * n;
    let refined: f64 = parts.iter().sum();
    let err = (refined - whole).abs();
    if err <= tol || depth == 0 {
        return (refined, err, err <= tol);
    }
    let mut v = 0.0;
    let mut e = 0.0;
    let mut ok = true;
    for (k, (s, t)) in [(s0, t0), (s0 + h, t0), (s0, t0 + h), (s0 + h, t0 + h)].into_iter().enumerate() {
        let (pv, pe, pok) = adapt(rule, f, s, t, h, parts[k], 0.25 * tol, depth - 1, evals);
        v += pv;
        e += pe;
        ok &= pok;
    }
    (v, e, ok)
}

/// Integral of omega over the geodesic cone from `a` over the geodesic b-c, adaptively.
pub fn omega_triangle<T: Scalar>(a: &ProjectivePoint<T>, b: &ProjectivePoint<T>, c: &ProjectivePoint<T>, opts: &QuadratureOptions) -> Result<Integral> {
    let (a, b, c) = (a.unit_rep()?, b.unit_rep()?, c.unit_rep()?);
    for v in [&a, &b, &c] {
        if herm(v, v).re >= T::zero() {
            return Err(Error::Degenerate("triangle vertex is not a negative point".into()));
        }
    }
    let h = T::lit(opts.fd_step);
    let f = |s: T, t: T| integrand(&a, &b, &c, s, t, h);
    let rule = Rule::new(opts.order);
    let whole = rule.cell(&f, 0.0, 0.0, 1.0);
    let mut evals = rule.pairs.len() * rule.pairs.len();
    let (value, error, ok) = adapt(&rule, &f, 0.0, 0.0, 1.0, whole, opts.tol, opts.max_depth, &mut evals);
    if !ok || !value.is_finite() {
        return Err(Error::Quadrature { estimate: value, error });
    }
    Ok(Integral { value, error, evaluations: evals })
}

/// Same integral on a fixed uniform k x k grid of cells, no adaptivity.
pub fn omega_triangle_fixed<T: Scalar>(
    a: &ProjectivePoint<T>,
    b: &ProjectivePoint<T>,
    c: &ProjectivePoint<T>,
    order: usize,
    cells: usize,
    fd_step: f64,
) -> Result<f64> {
    let (a, b, c) = (a.unit_rep()?, b.unit_rep()?, c.unit_rep()?);
    let h = T::lit(fd_step);
    let f = |s: T, t: T| integrand(&a, &b, &c, s, t, h);
    let rule = Rule::new(order);
    let w = 1.0 / cells.max(1) as f64;
    let mut acc = 0.0;
    for i in 0..cells.max(1) {
        for j in 0..cells.max(1) {
            acc += rule.cell(&f, i as f64 * w, j as f64 * w, w);
        }
    }
    Ok(acc)
}
