mod common;

use chdisc_core::geometry::{
    common_perpendicular, position, real_plane_check, slice_at, spine_point, Bisector, ComplexGeodesic, Geodesic, Position,
};
use chdisc_core::hermitian::{distance, herm, polar_span, tance, tance_vec, ProjectivePoint};
use chdisc_core::linalg::Vec3;
use common::*;
use num_complex::Complex;
use proptest::prelude::*;
use rand::Rng;

fn random_geodesic(r: &mut impl Rng) -> ComplexGeodesic<f64> {
    let a = random_negative(r, 0.85);
    let b = random_negative(r, 0.85);
    ComplexGeodesic::new(polar_span(&a, &b).unwrap()).unwrap()
}

/// Two complex geodesics through points far enough apart to be ultraparallel, by rejection.
fn random_ultraparallel(r: &mut impl Rng) -> (ComplexGeodesic<f64>, ComplexGeodesic<f64>) {
    loop {
        let (a, b) = (random_geodesic(r), random_geodesic(r));
        let t = tance(a.polar(), b.polar()).unwrap();
        if t > 1.05 && t < 50.0 {
            return (a, b);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn position_is_isometry_invariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_isometry(&mut r);
        let (a, b) = (random_geodesic(&mut r), random_geodesic(&mut r));
        let t = tance(a.polar(), b.polar()).unwrap();
        prop_assume!((t - 1.0).abs() > 1e-6);
        let p0 = position(&a, &b).unwrap();
        let ga = ComplexGeodesic::new(g.apply(a.polar())).unwrap();
        let gb = ComplexGeodesic::new(g.apply(b.polar())).unwrap();
        prop_assert_eq!(p0, position(&ga, &gb).unwrap());
    }
}

#[test]
fn feet_realize_the_distance() {
    let mut r = rng(11);
    for _ in 0..200 {
        let (a, b) = random_ultraparallel(&mut r);
        let s = common_perpendicular(&a, &b).unwrap();
        let want = tance(a.polar(), b.polar()).unwrap().sqrt().acosh();
        let d = distance(&s.feet[0], &s.feet[1]).unwrap();
        assert!((d - want).abs() < 1e-10, "{d} vs {want}");
        let f = s.bisector.polar_f();
        assert!((herm(f, f).re - 1.0).abs() < 1e-12);
        for foot in s.feet.iter() {
            assert!(herm(&foot.unit_rep().unwrap(), f).norm() < 1e-12);
        }
        // End slices match the inputs.
        for k in 0..2 {
            let q = slice_at(&s.bisector, &s.feet[k]).unwrap();
            assert!((tance(q.polar(), s.end_slices[k].polar()).unwrap() - 1.0).abs() < 1e-9);
        }
    }
}

#[test]
fn slices_of_one_bisector_are_ultraparallel() {
    let mut r = rng(12);
    for _ in 0..20 {
        let (a, b) = random_ultraparallel(&mut r);
        let s = common_perpendicular(&a, &b).unwrap();
        let qs: Vec<_> = (0..9)
            .map(|k| slice_at(&s.bisector, &spine_point(&s, k as f64 / 8.0).unwrap()).unwrap())
            .collect();
        for q in qs.iter() {
            assert!(q.polar().is_positive());
        }
        for i in 0..qs.len() {
            for j in (i + 1)..qs.len() {
                assert!(tance(qs[i].polar(), qs[j].polar()).unwrap() > 1.0);
            }
        }
        // Arclength parameterization.
        let total = s.length();
        for k in 1..=4 {
            let t = k as f64 / 4.0;
            let d = distance(&s.feet[0], &spine_point(&s, t).unwrap()).unwrap();
            assert!((d - t * total).abs() < 1e-10 * total.max(1.0), "{} vs {}", d, t * total);
        }
    }
}

#[test]
fn real_plane_check_matches_phase_search() {
    let mut r = rng(13);
    let mut seen = [0usize; 2];
    for k in 0..60 {
        let (x, y, z) = if k % 2 == 0 {
            // A real triple moved by a random isometry: always a real plane.
            let g = random_isometry(&mut r);
            let mk = |r: &mut rand_chacha::ChaCha8Rng| {
                let a = random_unit_disc(r, 0.7);
                pt(1.0, a.re, a.im)
            };
            (g.apply(&mk(&mut r)), g.apply(&mk(&mut r)), g.apply(&mk(&mut r)))
        } else {
            (random_negative(&mut r, 0.8), random_negative(&mut r, 0.8), random_negative(&mut r, 0.8))
        };
        let got = real_plane_check(&x, &y, &z).unwrap();
        let res = phase_search_residual(x.rep(), y.rep(), z.rep(), 90);
        let oracle = res < 1e-7;
        assert_eq!(got, oracle, "trial {k}: residual {res}");
        seen[got as usize] += 1;
    }
    assert!(seen[0] > 10 && seen[1] > 10);
}

#[test]
fn bisector_is_an_equidistant_set() {
    // Spine along the real axis of the disc e2 = 0; p, p' mirror images across it.
    let u = 0.8f64;
    let spine = Geodesic::through(&pt(1.0, 0.0, 0.0), &pt(u.cosh(), u.sinh(), 0.0)).unwrap();
    let b = Bisector::from_spine(spine).unwrap();
    let t = 0.4;
    let p = ptc(c(1.0, 0.0), c(0.0, t), c(0.0, 0.0));
    let q = ptc(c(1.0, 0.0), c(0.0, -t), c(0.0, 0.0));
    let mut r = rng(14);
    let mut sgn = 0.0;
    for _ in 0..500 {
        let x = random_negative(&mut r, 0.9);
        let d = tance(&x, &p).unwrap() - tance(&x, &q).unwrap();
        let s = b.side(&x.unit_rep().unwrap());
        if d.abs() > 1e-9 {
            if sgn == 0.0 {
                sgn = (d * s).signum();
            }
            assert_eq!((d * s).signum(), sgn);
        }
    }
    // Points on slices are equidistant.
    for k in 0..10 {
        let x = ProjectivePoint::new(spine.at_arclength(0.2 * k as f64 - 0.5)).unwrap();
        let w = Vec3::new(c(0.0, 0.0), c(0.0, 0.0), Complex::from_polar(0.5, k as f64));
        let y = ProjectivePoint::new(x.unit_rep().unwrap() + w).unwrap();
        assert!(b.side(&y.unit_rep().unwrap()).abs() < 1e-12);
        assert!((tance(&y, &p).unwrap() - tance(&y, &q).unwrap()).abs() < 1e-12);
    }
}

#[test]
fn concurrent_pair_meets() {
    let (a, b) = (pt(0.0, 1.0, 0.0), pt(0.0, 0.0, 1.0));
    let (ca, cb) = (ComplexGeodesic::new(a).unwrap(), ComplexGeodesic::new(b).unwrap());
    assert_eq!(position(&ca, &cb).unwrap(), Position::Concurrent);
    let meet = polar_span(&a, &b).unwrap();
    assert!(meet.is_negative());
    assert!(tance_vec(meet.rep(), &Vec3::real(1.0, 0.0, 0.0)) > 1.0 - 1e-12);
}
