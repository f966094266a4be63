//! Subcommand bodies. Each returns the process exit code or a `CliError`.

use std::io::Write;
use std::path::{Path, PathBuf};

use chdisc_core::geometry::{common_perpendicular, slice_at, spine_point};
use chdisc_core::hermitian::{polar_span_vec, ProjectivePoint};
use chdisc_core::invariants::gkl_euler;
use chdisc_core::linalg::{cis, Vec3};
use chdisc_core::quadrangle::{validate_quadrangle_with, QuadrangleConfig};
use chdisc_core::representations::{fuchsian_turnover, turnover_solve, SolverConfig, Turnover, TurnoverSignature};
use chdisc_core::Tolerances;

use crate::error::{classify, CliError, EXIT_FAIL, EXIT_OK};
use crate::formats::{write_json, CertificateFile, FigureSpec, Layer, QuadrangleFile};
use crate::pipeline::{run_turnover, TurnoverOptions};
use crate::svg::{Canvas, Z};

/// File name up to the first dot.
pub fn stem(path: &Path) -> String {
    let name = path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    name.split('.').next().filter(|s| !s.is_empty()).unwrap_or("out").to_string()
}

pub fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

// ---------------------------------------------------------------- check-quadrangle

pub fn check_quadrangle(input: &Path, out: &Path, log: &mut impl Write) -> Result<i32, CliError> {
    let file = QuadrangleFile::load(input)?;
    let q = file.config()?;
    let tol = file.tolerances()?;
    let cert = validate_quadrangle_with(&q, &tol);
    let json = CertificateFile::from(&cert);
    ensure_dir(out)?;
    let path = out.join(format!("{}.cert.json", stem(input)));
    write_json(&path, &json)?;
    let verdict = if cert.pass { "pass".to_string() } else { format!("fail ({})", json.failed.join(", ")) };
    writeln!(log, "{}: {verdict}", path.display()).ok();
    for (name, c) in [("K1", &json.k1), ("K2", &json.k2)] {
        if let Some(w) = &c.worst {
            writeln!(log, "  {name} worst margin {:+.3e} at {}", w.value, w.label).ok();
        }
    }
    if !cert.k3.pass {
        writeln!(log, "  K3 failed: {}", json.k3.failed.join(", ")).ok();
    }
    Ok(if cert.pass { EXIT_OK } else { EXIT_FAIL })
}

// ---------------------------------------------------------------- turnover

pub fn turnover(o: &TurnoverOptions, out: &Path, log: &mut impl Write) -> Result<i32, CliError> {
    let run = run_turnover(o)?;
    ensure_dir(out)?;
    let s = o.stem();
    write_json(&out.join(format!("{s}.rep.json")), &run.rep_file)?;
    write_json(&out.join(format!("{s}.cert.json")), &run.cert_file)?;
    write_json(&out.join(format!("{s}.report.json")), &run.report_file)?;
    let r = &run.report_file;
    let show = |x: &Option<crate::formats::SnappedJson>| {
        x.as_ref().map_or("n/a".to_string(), |s| s.snapped.clone().unwrap_or(format!("~{:.6} (no snap)", s.raw)))
    };
    writeln!(log, "signature {} (quadrangle {})  bend {}", run.signature, run.quadrangle_signature, o.bend).ok();
    writeln!(log, "  chi = {}  tau = {}  e = {}", r.chi, show(&Some(r.toledo.clone())), show(&r.euler)).ok();
    match (r.kalashnikov_signed, r.kalashnikov_unsigned) {
        (Some(a), Some(b)) => writeln!(log, "  |3tau - 2e - 2chi| = {}  |-3|tau| - 2e - 2chi| = {}", num(a), num(b)).ok(),
        _ => writeln!(log, "  identity not checked: no section mesh").ok(),
    };
    writeln!(
        log,
        "  certificate {}  relation residual {:.3e}  g2 order residual {:.3e}",
        if run.certificate.pass { "pass" } else { "fail" },
        run.relation_residual,
        run.g2_order_residual
    )
    .ok();
    Ok(run.exit_code())
}

fn num(x: f64) -> String {
    if x == 0.0 {
        "0".into()
    } else {
        format!("{x:.3e}")
    }
}

// ---------------------------------------------------------------- gkl

pub fn gkl(genus: i64, tau_abs: i64, log: &mut impl Write) -> Result<i32, CliError> {
    let k = gkl_euler(genus, tau_abs).map_err(|e| CliError::Invalid(e.to_string()))?;
    let chi = 2 - 2 * genus;
    let lhs = -3 * tau_abs;
    let rhs = 2 * k.e + 2 * chi;
    writeln!(log, "genus {genus}  |tau| {tau_abs}").ok();
    writeln!(log, "t       {}", k.t).ok();
    writeln!(log, "g1      {}", k.g1).ok();
    writeln!(log, "g2      {}", k.g2).ok();
    writeln!(log, "chi(S1) {}", k.chi1).ok();
    writeln!(log, "chi(S2) {}", k.chi2).ok();
    writeln!(log, "e       {}", k.e).ok();
    writeln!(log, "-3|tau| = {lhs}, 2e + 2chi = {rhs}: {}", if lhs == rhs { "OK" } else { "FAIL" }).ok();
    Ok(if lhs == rhs { EXIT_OK } else { EXIT_FAIL })
}

// ---------------------------------------------------------------- figure

fn disc_coord(v: &Vec3<f64>) -> Z {
    v.0[1] / v.0[0]
}

fn turnover_for(sig: [u32; 3], bend: f64) -> Result<Turnover<f64>, CliError> {
    let s = TurnoverSignature::new(sig[0], sig[1], sig[2]).map_err(classify)?;
    let (q, _) = s.for_quadrangle();
    if bend == 0.0 {
        fuchsian_turnover(&q).map_err(classify)
    } else {
        let out = turnover_solve(&q, bend, None, &SolverConfig::default(), &Tolerances::DEFAULT).map_err(classify)?;
        Ok(out.turnover)
    }
}

/// Spines, end slices and labels of a quadrangle, projected to the disc e2 = 0 by dropping
/// the last coordinate.
fn draw_quadrangle(canvas: &mut Canvas, q: &QuadrangleConfig<f64>, layers: &[Layer]) -> Result<(), CliError> {
    for i in 0..4 {
        let seg = common_perpendicular(&q.geodesic(i), &q.geodesic((i + 1) % 4)).map_err(classify)?;
        if layers.contains(&Layer::Spines) {
            let pts = (0..=32)
                .map(|k| spine_point(&seg, k as f64 / 32.0).map(|p| disc_coord(p.rep())))
                .collect::<Result<Vec<_>, _>>()
                .map_err(classify)?;
            canvas.polyline(&pts, &format!("spine s{}{}", i + 1, (i + 1) % 4 + 1), false);
        }
        if layers.contains(&Layer::Slices) {
            for foot in seg.feet.iter() {
                let slice = slice_at(&seg.bisector, foot).map_err(classify)?;
                let x = foot.unit_rep().map_err(classify)?;
                let w = polar_span_vec(&x, slice.polar().rep()).and_then(|p| p.unit_rep()).map_err(classify)?;
                let r = 0.8f64;
                let pts: Vec<Z> = (0..48)
                    .map(|k| {
                        let th = std::f64::consts::TAU * k as f64 / 48.0;
                        disc_coord(&(x.scale_re(r.cosh()) + w.scale(cis(th) * r.sinh())))
                    })
                    .collect();
                canvas.polyline(&pts, "slice", true);
            }
        }
    }
    let origin = Vec3::real(1.0, 0.0, 0.0);
    for i in 0..4 {
        let p = ProjectivePoint::new(q.geodesic(i).project(&origin)).map_err(classify)?;
        canvas.label(disc_coord(p.rep()), &format!("C{}", i + 1));
    }
    Ok(())
}

/// The SVG text for a figure spec; relative paths resolve against `base`.
pub fn figure_svg(spec: &FigureSpec, base: &Path) -> Result<String, CliError> {
    let mut canvas = Canvas::new(spec.size);
    if let Some(t) = &spec.title {
        canvas.title(t);
    }
    canvas.boundary();
    let turnover = spec.signature.map(|s| turnover_for(s, spec.bend)).transpose()?;
    if spec.draw.contains(&Layer::BasePolygon) {
        let t = turnover
            .as_ref()
            .ok_or_else(|| CliError::Invalid("base_polygon needs a signature".into()))?;
        let poly = t.polygon().map_err(classify)?;
        let z: Vec<Z> = poly.iter().map(|p| disc_coord(p.rep())).collect();
        if z.iter().any(|w| !(w.norm() < 1.0)) {
            return Err(CliError::Invalid("polygon leaves the disc e2 = 0 chart".into()));
        }
        canvas.polygon(&z, "base");
        let n = t.signature.orders();
        for k in 0..3 {
            canvas.label(z[k], &format!("x{} ({})", k + 1, n[k]));
        }
    }
    if spec.draw.iter().any(|l| matches!(l, Layer::Spines | Layer::Slices)) {
        let q = match &spec.quadrangle {
            Some(p) => QuadrangleFile::load(&base.join(p))?.config()?,
            None => turnover
                .as_ref()
                .ok_or_else(|| CliError::Invalid("spines need a signature or a quadrangle".into()))?
                .quadrangle
                .config(),
        };
        draw_quadrangle(&mut canvas, &q, &spec.draw)?;
    }
    Ok(canvas.finish())
}

pub fn figure(spec_path: &Path, out: &Path, log: &mut impl Write) -> Result<PathBuf, CliError> {
    let spec = FigureSpec::load(spec_path)?;
    let base = spec_path.parent().unwrap_or(Path::new("."));
    let svg = figure_svg(&spec, base)?;
    ensure_dir(out)?;
    let path = out.join(format!("{}.svg", stem(spec_path)));
    std::fs::write(&path, svg).map_err(|e| CliError::io(&path, e))?;
    writeln!(log, "{}", path.display()).ok();
    Ok(path)
}
