//! Grid runner: one turnover pipeline per (signature, bend), in parallel, rows sorted by key.

use std::path::Path;

use rayon::prelude::*;

use crate::error::{CliError, EXIT_OK};
use crate::formats::{write_json, CertificateSummary, ScanConfig, ScanRow, ScanSummary, FORMAT};
use crate::pipeline::{run_turnover, TurnoverOptions};

/// Sorted, deduplicated grid plus a warning per dropped duplicate.
pub fn grid(cfg: &ScanConfig) -> Result<(Vec<([u32; 3], f64)>, Vec<String>), CliError> {
    let mut pts = Vec::new();
    for s in cfg.signatures.iter() {
        for &b in cfg.bends.iter() {
            if !b.is_finite() {
                return Err(CliError::Invalid(format!("bend {b} is not finite")));
            }
            // Folds -0 into 0.
            pts.push((*s, b + 0.0));
        }
    }
    pts.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut warnings = Vec::new();
    let mut out: Vec<([u32; 3], f64)> = Vec::with_capacity(pts.len());
    for p in pts {
        if out.last() == Some(&p) {
            warnings.push(format!("duplicate grid point ({},{},{}) bend {} dropped", p.0[0], p.0[1], p.0[2], p.1));
        } else {
            out.push(p);
        }
    }
    Ok((out, warnings))
}

fn row(o: &TurnoverOptions, out: Option<&Path>) -> ScanRow {
    let mut r = ScanRow {
        signature: o.n,
        bend: o.bend,
        converged: false,
        certificate: None,
        relation_residual: None,
        g2_order_residual: None,
        toledo_raw: None,
        euler_raw: None,
        kalashnikov_signed: None,
        exit_code: EXIT_OK,
        error: None,
    };
    let run = match run_turnover(o) {
        Ok(run) => run,
        Err(e) => {
            r.exit_code = e.exit_code();
            r.error = Some(e.to_string());
            return r;
        }
    };
    r.converged = true;
    r.certificate = Some(CertificateSummary { k1: run.certificate.k1.pass, k2: run.certificate.k2.pass, k3: run.certificate.k3.pass });
    r.relation_residual = Some(run.relation_residual);
    r.g2_order_residual = Some(run.g2_order_residual);
    r.toledo_raw = Some(run.report.toledo.raw);
    r.euler_raw = run.has_euler.then_some(run.report.euler.raw);
    r.kalashnikov_signed = run.report_file.kalashnikov_signed;
    r.exit_code = run.exit_code();
    if let Some(dir) = out {
        let s = o.stem();
        let files = [
            write_json(&dir.join(format!("{s}.rep.json")), &run.rep_file),
            write_json(&dir.join(format!("{s}.cert.json")), &run.cert_file),
            write_json(&dir.join(format!("{s}.report.json")), &run.report_file),
        ];
        if let Some(Err(e)) = files.into_iter().find(|f| f.is_err()) {
            r.exit_code = e.exit_code();
            r.error = Some(e.to_string());
        }
    }
    r
}

/// Runs the grid; per-point failures are recorded in their rows.
pub fn run_scan(cfg: &ScanConfig, out: Option<&Path>) -> Result<ScanSummary, CliError> {
    let base = TurnoverOptions::default();
    let opts = TurnoverOptions {
        mesh: cfg.mesh.unwrap_or(base.mesh),
        tol: cfg.tol.unwrap_or(base.tol),
        seed: cfg.seed,
        ..base
    };
    opts.validate()?;
    let (pts, warnings) = grid(cfg)?;
    if let Some(dir) = out {
        crate::commands::ensure_dir(dir)?;
    }
    let rows: Vec<ScanRow> = pts.par_iter().map(|&(n, bend)| row(&TurnoverOptions { n, bend, ..opts }, out)).collect();
    Ok(ScanSummary { format: FORMAT.into(), seed: cfg.seed, warnings, rows })
}

fn opt(x: Option<f64>) -> String {
    x.map_or("-".into(), |v| format!("{v:.3e}"))
}

pub fn summary_tsv(s: &ScanSummary) -> String {
    let mut t = String::from("signature\tbend\tconverged\tK1\tK2\tK3\trelation_residual\tg2_order_residual\ttoledo\teuler\tidentity\texit\terror\n");
    for r in s.rows.iter() {
        let k = |f: fn(&CertificateSummary) -> bool| r.certificate.as_ref().map_or("-", |c| if f(c) { "pass" } else { "fail" });
        t.push_str(&format!(
            "({},{},{})\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            r.signature[0],
            r.signature[1],
            r.signature[2],
            r.bend,
            r.converged,
            k(|c| c.k1),
            k(|c| c.k2),
            k(|c| c.k3),
            opt(r.relation_residual),
            opt(r.g2_order_residual),
            opt(r.toledo_raw),
            opt(r.euler_raw),
            opt(r.kalashnikov_signed),
            r.exit_code,
            r.error.as_deref().unwrap_or("")
        ));
    }
    t
}

/// Writes summary.json and summary.tsv into `out`.
pub fn write_summary(s: &ScanSummary, out: &Path) -> Result<(), CliError> {
    crate::commands::ensure_dir(out)?;
    write_json(&out.join("summary.json"), s)?;
    let p = out.join("summary.tsv");
    std::fs::write(&p, summary_tsv(s)).map_err(|e| CliError::io(&p, e))
}
