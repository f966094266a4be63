//! The turnover pipeline shared by `turnover` and `scan`.

use chdisc_core::hermitian::distance;
use chdisc_core::invariants::{
    baseline_mesh, euler_via_mesh, toledo_via_coning, FrameField, InvariantReport, QuadratureOptions,
};
use chdisc_core::quadrangle::{validate_quadrangle_with, Certificate};
use chdisc_core::representations::{
    fuchsian_turnover, orbifold_euler, turnover_solve, SolverConfig, SolverStep, Turnover, TurnoverSignature,
};
use chdisc_core::Tolerances;

use crate::error::{classify, CliError, EXIT_FAIL, EXIT_OK};
use crate::formats::{
    point_to_json, CertificateFile, RelationJson, RepFile, ReportFile, ReportTolerances, FORMAT,
};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TurnoverOptions {
    pub n: [u32; 3],
    pub bend: f64,
    /// Solver convergence tolerance.
    pub tol: f64,
    /// Target mesh edge length (curvature -4) for the Euler computation.
    pub mesh: f64,
    pub seed: u64,
}

impl Default for TurnoverOptions {
    fn default() -> Self {
        Self { n: [3, 3, 4], bend: 0.0, tol: 1e-12, mesh: 0.1, seed: 0 }
    }
}

impl TurnoverOptions {
    pub fn validate(&self) -> Result<(), CliError> {
        if !self.bend.is_finite() {
            return Err(CliError::Invalid(format!("bend {} is not finite", self.bend)));
        }
        for (name, v) in [("tol", self.tol), ("mesh", self.mesh)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::Invalid(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    pub fn stem(&self) -> String {
        format!("turnover_{}_{}_{}_b{}", self.n[0], self.n[1], self.n[2], self.bend)
    }
}

#[derive(Clone, Debug)]
pub struct TurnoverRun {
    pub signature: TurnoverSignature,
    /// Relabelled signature the quadrangle is built for.
    pub quadrangle_signature: TurnoverSignature,
    pub turnover: Turnover<f64>,
    pub certificate: Certificate,
    pub report: InvariantReport,
    pub has_euler: bool,
    pub mesh_subdivisions: Option<usize>,
    pub solver_log: Vec<SolverStep>,
    pub g2_order_residual: f64,
    pub relation_residual: f64,
    pub rep_file: RepFile,
    pub cert_file: CertificateFile,
    pub report_file: ReportFile,
}

impl TurnoverRun {
    /// 0 when the certificate passes and, where e is available, the snapped identity holds.
    pub fn exit_code(&self) -> i32 {
        let identity_ok = !self.has_euler || (self.report.reliable && self.report.kalashnikov_signed == 0.0);
        if self.certificate.pass && identity_ok {
            EXIT_OK
        } else {
            EXIT_FAIL
        }
    }
}

fn mesh_subdivisions(t: &Turnover<f64>, h: f64) -> Result<usize, CliError> {
    let p = t.polygon().map_err(classify)?;
    let mut longest = 0.0f64;
    for k in 0..4 {
        longest = longest.max(distance(&p[k], &p[(k + 1) % 4]).map_err(classify)?);
    }
    Ok(((longest / h).ceil() as usize).clamp(2, 64))
}

pub fn run_turnover(o: &TurnoverOptions) -> Result<TurnoverRun, CliError> {
    o.validate()?;
    let signature = TurnoverSignature::new(o.n[0], o.n[1], o.n[2]).map_err(classify)?;
    let (qsig, _) = signature.for_quadrangle();
    let tol = Tolerances::DEFAULT;
    let (turnover, certificate, solver_log) = if o.bend == 0.0 {
        let t = fuchsian_turnover::<f64>(&qsig).map_err(classify)?;
        let cert = validate_quadrangle_with(&t.quadrangle.config(), &tol);
        (t, cert, vec![])
    } else {
        let cfg = SolverConfig { tol: o.tol, ..SolverConfig::default() };
        let out = turnover_solve::<f64>(&qsig, o.bend, None, &cfg, &tol).map_err(classify)?;
        (out.turnover, out.certificate, out.log)
    };
    let rep = turnover.rep();

    let qopts = QuadratureOptions::default();
    let tau = toledo_via_coning(rep, &turnover.fixed_points, &qopts).map_err(classify)?;

    // A section mesh exists only while the group keeps the disc e2 = 0.
    let (euler, mesh_n) = match baseline_mesh(&turnover, 2) {
        Ok(_) => {
            let n = mesh_subdivisions(&turnover, o.mesh)?;
            let m = baseline_mesh(&turnover, n).map_err(classify)?;
            let f = FrameField::from_mesh(&m).map_err(classify)?;
            (Some(euler_via_mesh(&m, &f, tol.pairing).map_err(classify)?), Some(n))
        }
        Err(_) => (None, None),
    };
    let chi = orbifold_euler(&signature);
    let lcm = signature.lcm() as i64;
    let report = InvariantReport::from_raw(
        chi,
        tau.value,
        euler.map_or(f64::NAN, |e| e.e_raw),
        euler.map(|e| e.chi_raw),
        lcm,
        tol.snap_gap,
    );

    let residuals = rep.relation_residuals().map_err(classify)?;
    let relation_residual = residuals.iter().fold(0.0f64, |a, (_, r)| a.max(*r));
    let g2 = rep.generator("g2").map_err(classify)?;
    let g2_order_residual = g2.pow(qsig.n2).distance_from_identity();

    let rep_file = RepFile {
        format: FORMAT.into(),
        kind: rep.kind.name().into(),
        signature: o.n,
        quadrangle_signature: qsig.orders(),
        bend: o.bend,
        genuine: turnover.genuine,
        generators: RepFile::generators_of(rep),
        relations: rep
            .relations
            .iter()
            .zip(residuals.iter())
            .map(|(r, (_, res))| RelationJson { word: r.word.to_string(), order: r.order, residual: *res })
            .collect(),
        fixed_points: turnover.fixed_points.iter().map(|x| point_to_json(x.rep())).collect(),
        polars: turnover.quadrangle.config().polars.iter().map(|p| point_to_json(p.rep())).collect(),
        c4_consistency: turnover.quadrangle.c4_consistency,
    };
    let cert_file = CertificateFile::from(&certificate);
    let report_file = ReportFile::new(
        o.n,
        o.bend,
        o.seed,
        &report,
        euler.is_some(),
        mesh_n,
        certificate.pass,
        ReportTolerances { snap_gap: tol.snap_gap, quadrature: qopts.tol, pairing: tol.pairing, solver: o.tol },
    );
    Ok(TurnoverRun {
        signature,
        quadrangle_signature: qsig,
        turnover,
        certificate,
        report,
        has_euler: euler.is_some(),
        mesh_subdivisions: mesh_n,
        solver_log,
        g2_order_residual,
        relation_residual,
        rep_file,
        cert_file,
        report_file,
    })
}
