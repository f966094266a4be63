use crate::error::{Error, Result};
use crate::linalg::{cis, Vec3, C};
use crate::quadrangle::{validate_quadrangle_with, Certificate};
use crate::scalar::Scalar;
use crate::tolerances::Tolerances;

use super::turnover::{
    admissible_twists, assemble, build_candidate, triangle_from_angles, Turnover, TurnoverParams, TurnoverSignature,
};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverConfig {
    /// |bend| beyond this is refused.
    pub window: f64,
    pub max_step: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub fd_step: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { window: 0.5, max_step: 0.01, tol: 1e-12, max_iter: 60, fd_step: 1e-7 }
    }
}

/// One continuation step.
#[derive(Clone, Debug, PartialEq)]
pub struct SolverStep {
    pub bend: f64,
    pub iterations: usize,
    pub residual: f64,
    pub d13: f64,
    pub phi: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverOutput<T> {
    pub turnover: Turnover<T>,
    /// Trace the lift of g2 was driven to.
    pub target_trace: C<T>,
    /// Phase offset on g3 found by the solver.
    pub phi: T,
    pub certificate: Certificate,
    pub log: Vec<SolverStep>,
}

/// Traces nu (z^a + z^b + z^c) of det-one lifts whose n-th power is central.
/// For n >= 3 only regular classes (a, b, c distinct) are kept: a repeated eigenvalue
/// does not pin the conjugacy class by the trace alone.
pub fn target_traces<T: Scalar>(n: u32) -> Vec<C<T>> {
    let regular = n >= 3;
    let z = |k: i64| cis(T::TAU() * T::lit(k as f64) / T::lit(n as f64));
    let n = n as i64;
    let mut out = Vec::new();
    for j in 0..3 * n {
        // nu = exp(2 pi i j / 3n), nu^3 = z^j.
        let nu = cis(T::TAU() * T::lit(j as f64) / T::lit((3 * n) as f64));
        for a in 0..n {
            for b in a..n {
                let cc = (-(a + b) - j).rem_euclid(n);
                if cc < b || (regular && (a == b || b == cc)) {
                    continue;
                }
                out.push(nu * (z(a) + z(b) + z(cc)));
            }
        }
    }
    out
}

fn params_at<T: Scalar>(base: &TurnoverParams<T>, bend: T, d: T, phi: T) -> TurnoverParams<T> {
    TurnoverParams { d13: d, theta: base.theta, beta1: base.beta1 + bend, beta3: base.beta3 + bend + phi }
}

fn trace_at<T: Scalar>(sig: &TurnoverSignature, p: &TurnoverParams<T>) -> Result<C<T>> {
    Ok(build_candidate(sig, p)?.g2.trace())
}

/// Deform the ℂ-Fuchsian turnover by rotating both normal phases by `bend`, then solve for
/// the fixed-point separation d13 and a relative phase phi on g3 so that g2 keeps order n2.
///
/// The target trace is the admissible one nearest the bend-zero seed; it is held fixed along
/// the continuation. Fails with ConvergedInvalid only on K1/K2; K3 is in the certificate.
pub fn turnover_solve<T: Scalar>(
    sig: &TurnoverSignature,
    bend: T,
    seed: Option<TurnoverParams<T>>,
    cfg: &SolverConfig,
    tol: &Tolerances,
) -> Result<SolverOutput<T>> {
    if !(bend.abs().to_f64_lossy() <= cfg.window) {
        return Err(Error::NoConvergence { iterations: 0, residual: f64::INFINITY });
    }
    let twist = admissible_twists(sig).first().copied().unwrap_or((0, 0));
    let base = seed.unwrap_or_else(|| {
        let mut p = TurnoverParams::<T>::fuchsian(sig);
        p.beta1 = T::TAU() * T::lit(twist.0 as f64 / sig.n1 as f64);
        p.beta3 = T::TAU() * T::lit(twist.1 as f64 / sig.n3 as f64);
        p
    });
    // Continuation origin: an exact seed at bend zero is returned as is. Its g2 may be a
    // complex reflection, whose class the trace target cannot hold.
    if bend == T::zero() {
        let cand = build_candidate(sig, &base)?;
        if cand.g2.pow(sig.n2).distance_from_identity() < T::lit(cfg.tol.max(1e-10)) {
            let c = triangle_from_angles::<T>(sig);
            let turnover = assemble(sig, &base, &cand, c[1].rep(), Some(&Vec3::basis(2)), twist)?;
            let certificate = validate_quadrangle_with(&turnover.quadrangle.config(), tol);
            let log = vec![SolverStep { bend: 0.0, iterations: 0, residual: 0.0, d13: base.d13.to_f64_lossy(), phi: 0.0 }];
            return Ok(SolverOutput { target_trace: cand.g2.trace(), turnover, phi: T::zero(), certificate, log });
        }
    }
    let seed_tr = trace_at(sig, &base)?;
    let target = target_traces::<T>(sig.n2)
        .into_iter()
        .min_by(|a, b| (*a - seed_tr).norm().partial_cmp(&(*b - seed_tr).norm()).unwrap())
        .expect("nonempty target set");

    let f = |bend: T, d: T, phi: T| -> Result<[T; 2]> {
        let t = trace_at(sig, &params_at(&base, bend, d, phi))? - target;
        Ok([t.re, t.im])
    };

    let steps = ((bend.abs().to_f64_lossy() / cfg.max_step).ceil() as usize).max(1);
    let mut d = base.d13;
    let mut phi = T::zero();
    let mut log = Vec::new();
    let h = T::lit(cfg.fd_step);
    for s in 1..=steps {
        let b = bend * T::lit(s as f64 / steps as f64);
        let mut r = f(b, d, phi)?;
        let mut rn = r[0].hypot(r[1]);
        let mut it = 0;
        while rn > T::lit(cfg.tol) && it < cfg.max_iter {
            it += 1;
            let fd = {
                let p = f(b, d + h, phi)?;
                let m = f(b, d - h, phi)?;
                [(p[0] - m[0]) / (h + h), (p[1] - m[1]) / (h + h)]
            };
            let fp = {
                let p = f(b, d, phi + h)?;
                let m = f(b, d, phi - h)?;
                [(p[0] - m[0]) / (h + h), (p[1] - m[1]) / (h + h)]
            };
            let det = fd[0] * fp[1] - fp[0] * fd[1];
            if det.abs() < T::lit(1e-14) {
                return Err(Error::NoConvergence { iterations: it, residual: rn.to_f64_lossy() });
            }
            let dd = -(r[0] * fp[1] - fp[0] * r[1]) / det;
            let dp = -(fd[0] * r[1] - r[0] * fd[1]) / det;
            let mut lam = T::one();
            let mut accepted = false;
            for _ in 0..30 {
                let nd = d + lam * dd;
                if nd > T::zero() {
                    if let Ok(nr) = f(b, nd, phi + lam * dp) {
                        let nn = nr[0].hypot(nr[1]);
                        if nn < rn {
                            d = nd;
                            phi = phi + lam * dp;
                            r = nr;
                            rn = nn;
                            accepted = true;
                            break;
                        }
                    }
                }
                lam = lam * T::lit(0.5);
            }
            if !accepted {
                break;
            }
        }
        log.push(SolverStep {
            bend: b.to_f64_lossy(),
            iterations: it,
            residual: rn.to_f64_lossy(),
            d13: d.to_f64_lossy(),
            phi: phi.to_f64_lossy(),
        });
        let accept = T::lit(1e-9).max(T::epsilon() * T::lit(1e3));
        if !(rn <= accept) {
            return Err(Error::NoConvergence { iterations: it, residual: rn.to_f64_lossy() });
        }
    }

    let params = params_at(&base, bend, d, phi);
    let cand = build_candidate(sig, &params)?;
    let c = triangle_from_angles::<T>(sig);
    // Track the fixed point of g2 from the undeformed c2.
    let turnover = assemble(sig, &params, &cand, c[1].rep(), None, twist)?;
    let certificate = validate_quadrangle_with(&turnover.quadrangle.config(), tol);
    if !certificate.k1.pass || !certificate.k2.pass {
        let mut failed = Vec::new();
        if !certificate.k1.pass {
            failed.push("K1");
        }
        if !certificate.k2.pass {
            failed.push("K2");
        }
        return Err(Error::ConvergedInvalid(failed.join("+")));
    }
    Ok(SolverOutput { turnover, target_trace: target, phi, certificate, log })
}

/// |tr - nearest admissible trace| for g2.
pub fn order_trace_gap<T: Scalar>(n: u32, tr: C<T>) -> T {
    target_traces::<T>(n).into_iter().map(|t| (t - tr).norm()).fold(T::infinity(), |a, b| a.min(b))
}
