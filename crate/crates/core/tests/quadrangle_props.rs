mod common;

use std::f64::consts::PI;

use chdisc_core::hermitian::{polar_span, tance, Isometry};
use chdisc_core::linalg::{Vec3, C};
use chdisc_core::quadrangle::{
    adjacency_check, epsilon, is_counterclockwise, is_transversal, triangle_over_complex_geodesic, validate_quadrangle,
    Certificate, QuadrangleConfig, TriangleInvariant,
};
use chdisc_core::representations::{disc_coordinate, fuchsian_turnover, Turnover, TurnoverSignature};
use common::*;
use num_complex::Complex;
use proptest::prelude::*;
use rand::Rng;

fn f0() -> P {
    pt(0.0, 0.0, 1.0)
}

fn turnover(s: (u32, u32, u32)) -> Turnover<f64> {
    let sig = TurnoverSignature::new(s.0, s.1, s.2).unwrap().for_quadrangle().0;
    fuchsian_turnover::<f64>(&sig).unwrap()
}

const BASELINES: [(u32, u32, u32); 4] = [(3, 3, 4), (2, 3, 7), (2, 4, 5), (3, 3, 5)];

fn all_margins(c: &Certificate) -> Vec<(String, f64)> {
    let mut out: Vec<(String, f64)> = Vec::new();
    for m in c.k1.margins.iter().chain(c.k2.margins.iter()) {
        out.push((m.label.clone(), m.value));
    }
    for (name, r) in [("transversal", &c.k3.transversal), ("sector", &c.k3.sector), ("disjoint", &c.k3.disjoint)] {
        for m in r.margins.iter() {
            out.push((format!("{name}: {}", m.label), m.value));
        }
    }
    out
}

/// Poincare-disc reflection across the geodesic through a and b.
fn reflect_across(z: C<f64>, a: C<f64>, b: C<f64>) -> C<f64> {
    let one = c(1.0, 0.0);
    let to0 = |w: C<f64>| (w - a) / (one - a.conj() * w);
    let from0 = |w: C<f64>| (w + a) / (one + a.conj() * w);
    let rot = to0(b) / to0(b).norm();
    let w = to0(z) / rot;
    from0(w.conj() * rot)
}

fn moved(q: &QuadrangleConfig<f64>, g: &Isometry<f64>) -> QuadrangleConfig<f64> {
    QuadrangleConfig::new(q.polars.map(|p| g.apply(&p))).unwrap()
}

// ---------------------------------------------------------------- eps and area

#[test]
fn eps_example_triangle() {
    let z = [c(0.0, 0.0), c(0.5, 0.0), c(0.0, 0.5)];
    let t = triangle_over_complex_geodesic(&f0(), [&disc(z[0]), &disc(z[1]), &disc(z[2])]).unwrap();
    let arg = t.invariant.eps.arg();
    assert!((arg + 0.25f64.atan()).abs() < 1e-12);
    assert!((arg + 0.244979).abs() < 1e-6);
    let gb = gauss_bonnet_area(z);
    let kl = klein_area(z);
    assert!((gb - 0.122489).abs() < 1e-6);
    assert!((gb - kl).abs() < 1e-6, "{gb} vs {kl}");
    assert!((arg + 2.0 * gb).abs() < 1e-10);
    assert!(is_counterclockwise(&t.invariant).unwrap());
    assert!((t.invariant.eps.im + 0.2425).abs() < 1e-4);

    let r = triangle_over_complex_geodesic(&f0(), [&disc(z[0]), &disc(z[2]), &disc(z[1])]).unwrap();
    assert!(!is_counterclockwise(&r.invariant).unwrap());
}

#[test]
fn collinear_triangle_is_degenerate() {
    let v = [c(-0.4, 0.0), c(0.1, 0.0), c(0.6, 0.0)].map(disc);
    let t = triangle_over_complex_geodesic(&f0(), [&v[0], &v[1], &v[2]]).unwrap();
    assert!(t.degenerate);
    assert!((t.invariant.eps - c(1.0, 0.0)).norm() < 1e-12);
    assert!(!is_transversal(&t.invariant).pass);
}

#[test]
fn vertices_off_the_plane_are_rejected() {
    let off = ptc(c(1.0, 0.0), c(0.1, 0.0), c(0.2, 0.0));
    assert!(triangle_over_complex_geodesic(&f0(), [&disc(c(0.0, 0.0)), &disc(c(0.3, 0.0)), &off]).is_err());
}

#[test]
fn eps_area_law_on_random_triangles() {
    let mut r = rng(21);
    for k in 0..500 {
        let z = random_ccw_triangle(&mut r, 0.8);
        assert!(klein_cross(z) > 0.0);
        let v = z.map(disc);
        let t = triangle_over_complex_geodesic(&f0(), [&v[0], &v[1], &v[2]]).unwrap();
        let inv = &t.invariant;
        assert!(is_transversal(inv).pass, "trial {k}: {:?}", is_transversal(inv).margins);
        assert!(inv.eps.im < 0.0, "trial {k}: {z:?} eps {} area {}", inv.eps, gauss_bonnet_area(z));
        let gb = gauss_bonnet_area(z);
        assert!(gb < PI / 4.0);
        assert!((inv.eps.arg() + 2.0 * gb).abs() < 1e-6, "trial {k}");
        // Other area oracles: Klein-model integral and the closed form of -omega.
        if k % 5 == 0 {
            let kl = klein_area(z);
            assert!((gb - kl).abs() < 1e-6, "trial {k}: {gb} vs {kl}");
        }
        let om = -omega_closed_form(v[0].rep(), v[1].rep(), v[2].rep());
        assert!((gb - om).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn eps_is_isometry_invariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_isometry(&mut r);
        let p = [0; 3].map(|_| polar_span(&random_negative(&mut r, 0.9), &random_negative(&mut r, 0.9)).unwrap());
        let e0 = epsilon(&p[0], &p[1], &p[2]).unwrap();
        let gp = p.map(|x| g.apply(&x));
        let e1 = epsilon(&gp[0], &gp[1], &gp[2]).unwrap();
        prop_assert!((e0 - e1).norm() < 1e-10);
    }
}

// ---------------------------------------------------------------- baseline quadrangles

#[test]
fn baseline_quadrangles_are_certified() {
    for s in BASELINES {
        let t = turnover(s);
        let cert = validate_quadrangle(&t.quadrangle.config());
        assert!(cert.pass, "{s:?}: {:?}", cert);
        for (label, v) in all_margins(&cert) {
            assert!(v > 1e-6, "{s:?} {label}: {v}");
        }
        assert_eq!(cert.digest.len(), 64);
    }
}

#[test]
fn dropping_the_relabel_makes_a_straight_angle() {
    // Order-2 cone at c1: C1, C2, C4 lie over one geodesic and eps is real.
    let sig = TurnoverSignature::new(2, 3, 7).unwrap();
    let t = fuchsian_turnover::<f64>(&sig).unwrap();
    let cert = validate_quadrangle(&t.quadrangle.config());
    assert!(cert.k1.pass);
    assert!(!cert.k2.pass);
    assert!(cert.k2.worst().unwrap().value.abs() < 1e-9);
}

// ---------------------------------------------------------------- counterexamples

#[test]
fn concurrent_geodesics_fail_k1() {
    // Four complex geodesics through the origin, counterclockwise around it.
    let p = [0.0f64, 1.0, 2.0, 3.0].map(|k| ptc(c(0.0, 0.0), c(1.0, 0.0), Complex::from_polar(0.5, k * PI / 4.0)));
    let cert = validate_quadrangle(&QuadrangleConfig::new(p).unwrap());
    assert!(!cert.k1.pass);
    assert!(cert.k1.margins.iter().all(|m| m.value < 0.0));
    assert!(cert.k2.pass, "{:?}", cert.k2);
    // No common perpendiculars, so K3 has nothing to sample.
    assert!(cert.k3.degenerate.is_some());
}

/// Replace C3 by the complex geodesic through a point of C1 and a point of the old C3,
/// both drawn from a seeded stream, until C1 and C3 are the only meeting pair.
fn single_meeting_pair(t: &Turnover<f64>) -> QuadrangleConfig<f64> {
    let q = t.quadrangle.config();
    let mut r = rng(3);
    loop {
        let a = random_negative(&mut r, 0.97);
        let b = random_negative(&mut r, 0.97);
        let y1 = chdisc_core::hermitian::ProjectivePoint::new(q.geodesic(0).project(a.rep())).unwrap();
        let y3 = chdisc_core::hermitian::ProjectivePoint::new(q.geodesic(2).project(b.rep())).unwrap();
        if !y1.is_negative() || !y3.is_negative() {
            continue;
        }
        let mut p = q.polars;
        p[2] = polar_span(&y1, &y3).unwrap();
        let qn = QuadrangleConfig::new(p).unwrap();
        let k1 = validate_quadrangle(&qn).k1;
        if k1.margins.iter().filter(|m| m.label != "ta(p1,p3) - 1").all(|m| m.value > 1e-3) {
            return qn;
        }
    }
}

#[test]
fn single_meeting_pair_fails_k1_on_that_pair() {
    let t = turnover((3, 3, 4));
    let q = single_meeting_pair(&t);
    let cert = validate_quadrangle(&q);
    assert!(!cert.k1.pass);
    let w = cert.k1.worst().unwrap();
    assert_eq!(w.label, "ta(p1,p3) - 1");
    assert!(w.value <= 0.0);
    // With the other five pairs apart, C3 C4 C2 cannot stay transversal.
    assert!(!cert.k2.pass);
    assert!(cert.k2.worst().unwrap().label.starts_with("C3C4C2 transversal"));
}

#[test]
fn conjugated_polars_fail_k2_only() {
    for s in [(3, 3, 4), (2, 3, 7), (3, 3, 5)] {
        let q = turnover(s).quadrangle.config();
        let qc = QuadrangleConfig::new(q.polars.map(|p| p.conj())).unwrap();
        let cert = validate_quadrangle(&qc);
        assert!(cert.k1.pass, "{s:?}");
        assert!(!cert.k2.pass, "{s:?}");
        assert!(cert.k3.pass, "{s:?}: {:?}", cert.k3.failed_subchecks());
        // Failure is through the orientation margins.
        for m in cert.k2.margins.iter().filter(|m| m.label.ends_with("-eps1")) {
            assert!(m.value < 0.0, "{s:?} {}", m.label);
        }
    }
}

#[test]
fn c3_past_c2_fails_the_sector_only() {
    let t = turnover((3, 3, 4));
    let q = t.quadrangle.config();
    for z in [c(0.75, -0.05), c(0.7, -0.1), c(0.8, -0.02)] {
        let mut p = q.polars;
        p[2] = polar_span(&disc(z), &f0()).unwrap();
        let cert = validate_quadrangle(&QuadrangleConfig::new(p).unwrap());
        assert!(cert.k1.pass && cert.k2.pass, "{z}");
        assert_eq!(cert.k3.failed_subchecks(), vec!["sector"], "{z}");
        assert!(cert.k3.sector.worst().unwrap().value < 0.0);
    }
}

#[test]
fn c3_reflected_across_the_diagonal_fails_the_sector() {
    let t = turnover((3, 3, 4));
    let q = t.quadrangle.config();
    let x = t.polygon().unwrap().map(|p| disc_coordinate(&p));
    let z3 = reflect_across(x[2], x[1], x[3]);
    // The reflection fixes the diagonal's endpoints.
    assert!((reflect_across(x[1], x[1], x[3]) - x[1]).norm() < 1e-12);
    assert!((reflect_across(x[3], x[1], x[3]) - x[3]).norm() < 1e-12);
    let mut p = q.polars;
    p[2] = polar_span(&disc(z3), &f0()).unwrap();
    let cert = validate_quadrangle(&QuadrangleConfig::new(p).unwrap());
    assert!(cert.k1.pass);
    assert!(cert.k3.failed_subchecks().contains(&"sector"));
    // The mirror image also reverses the triangle C3 C4 C2.
    assert!(cert.k2.margins.iter().any(|m| m.label == "C3C4C2 -eps1" && m.value < 0.0));
}

#[test]
fn coincident_c1_c3_is_degenerate() {
    let q = turnover((3, 3, 4)).quadrangle.config();
    let mut p = q.polars;
    p[2] = p[0];
    let qd = QuadrangleConfig::new(p).unwrap();
    let a = adjacency_check(&qd);
    assert!(!a.pass);
    assert!(a.degenerate.is_some());
    assert!(!validate_quadrangle(&qd).pass);
}

// ---------------------------------------------------------------- invariance and continuity

fn same_certificate(a: &Certificate, b: &Certificate, what: &str) {
    assert_eq!(a.k1.pass, b.k1.pass, "{what}");
    assert_eq!(a.k2.pass, b.k2.pass, "{what}");
    assert_eq!(a.k3.failed_subchecks(), b.k3.failed_subchecks(), "{what}");
    for (x, y) in a.k1.margins.iter().chain(a.k2.margins.iter()).zip(b.k1.margins.iter().chain(b.k2.margins.iter())) {
        assert_eq!(x.label, y.label);
        let rel = (x.value - y.value).abs() / x.value.abs().max(1.0);
        assert!(rel < 1e-10, "{what} {}: {} vs {}", x.label, x.value, y.value);
    }
}

#[test]
fn certificate_is_isometry_invariant() {
    let mut r = rng(31);
    let qs: Vec<_> = BASELINES.iter().map(|&s| turnover(s).quadrangle.config()).collect();
    for k in 0..1000 {
        let g = random_isometry(&mut r);
        let q = &qs[k % qs.len()];
        let a = validate_quadrangle(q);
        let b = validate_quadrangle(&moved(q, &g));
        same_certificate(&a, &b, &format!("trial {k}"));
        assert!(b.pass);
    }
}

/// Same K1/K2 margin values up to the relabeling's permutation.
fn same_values(a: &Certificate, b: &Certificate, what: &str) {
    let sorted = |r: &chdisc_core::quadrangle::CheckReport| {
        let mut v: Vec<f64> = r.margins.iter().map(|m| m.value).collect();
        v.sort_by(|x, y| x.partial_cmp(y).unwrap());
        v
    };
    for (ra, rb) in [(&a.k1, &b.k1), (&a.k2, &b.k2)] {
        assert_eq!(ra.pass, rb.pass, "{what}");
        for (x, y) in sorted(ra).iter().zip(sorted(rb).iter()) {
            assert!((x - y).abs() < 1e-10 * x.abs().max(1.0), "{what}: {x} vs {y}");
        }
    }
    assert_eq!(a.k3.pass, b.k3.pass, "{what}");
}

#[test]
fn certificate_survives_relabeling() {
    for s in BASELINES {
        let q = turnover(s).quadrangle.config();
        // A half turn keeps the diagonal pair.
        same_values(&validate_quadrangle(&q), &validate_quadrangle(&q.rotated(2)), &format!("{s:?}"));
        for k in 1..4 {
            assert!(validate_quadrangle(&q.rotated(k)).pass, "{s:?} shift {k}");
        }
    }
}

#[test]
fn margins_move_linearly_with_perturbation() {
    let mut r = rng(41);
    let q = turnover((3, 3, 4)).quadrangle.config();
    let base = all_margins(&validate_quadrangle(&q));
    let dir: [Vec3<f64>; 4] = [0; 4].map(|_| {
        Vec3::new(
            Complex::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)),
            Complex::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)),
            Complex::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)),
        )
    });
    let mut slopes = Vec::new();
    for delta in [1e-6, 1e-7, 1e-8] {
        let mut p = q.polars;
        for k in 0..4 {
            let u = p[k].unit_rep().unwrap();
            p[k] = chdisc_core::hermitian::ProjectivePoint::new(u + dir[k].scale_re(delta)).unwrap();
        }
        let m = all_margins(&validate_quadrangle(&QuadrangleConfig::new(p).unwrap()));
        assert_eq!(m.len(), base.len());
        let worst = m.iter().zip(base.iter()).map(|(a, b)| (a.1 - b.1).abs()).fold(0.0, f64::max);
        slopes.push(worst / delta);
    }
    for s in slopes.iter() {
        assert!(*s < 1e3, "{slopes:?}");
    }
}

#[test]
fn triangle_invariant_from_polars_matches_parts() {
    let q = turnover((3, 3, 5)).quadrangle.config();
    let p = q.polars;
    let inv = TriangleInvariant::from_polars(&p[0], &p[1], &p[3]).unwrap();
    assert!((inv.t12 * inv.t12 - tance(&p[0], &p[1]).unwrap()).abs() < 1e-12);
    assert!((inv.eps - epsilon(&p[0], &p[1], &p[3]).unwrap()).norm() < 1e-14);
}
