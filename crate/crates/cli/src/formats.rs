//! JSON files. Every file carries `"format": "chdisc/1"`; unknown fields are rejected.
//! Complex numbers are `[re, im]`.

use std::path::Path;

use chdisc_core::hermitian::{Isometry, ProjectivePoint};
use chdisc_core::invariants::{InvariantReport, Snapped};
use chdisc_core::linalg::{Mat3, Vec3};
use chdisc_core::quadrangle::{AdjacencyReport, Certificate, CheckReport, QuadrangleConfig};
use chdisc_core::representations::Representation;
use chdisc_core::Tolerances;
use num_complex::Complex;
use num_rational::Ratio;
use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::error::CliError;

pub const FORMAT: &str = "chdisc/1";

pub type ComplexJson = [f64; 2];
pub type PointJson = [ComplexJson; 3];
pub type MatrixJson = [[ComplexJson; 3]; 3];

pub fn point_to_json(v: &Vec3<f64>) -> PointJson {
    v.0.map(|z| [z.re, z.im])
}

pub fn point_from_json(p: &PointJson) -> Result<ProjectivePoint<f64>, CliError> {
    if p.iter().flatten().any(|x| !x.is_finite()) {
        return Err(CliError::Invalid("non-finite coordinate".into()));
    }
    ProjectivePoint::new(Vec3::new(c(p[0]), c(p[1]), c(p[2]))).map_err(|e| CliError::Invalid(e.to_string()))
}

fn c(z: ComplexJson) -> Complex<f64> {
    Complex::new(z[0], z[1])
}

pub fn matrix_to_json(m: &Mat3<f64>) -> MatrixJson {
    m.0.map(|row| row.map(|z| [z.re, z.im]))
}

pub fn matrix_from_json(m: &MatrixJson) -> Mat3<f64> {
    Mat3(m.map(|row| row.map(c)))
}

pub fn ratio_string(r: &Ratio<i64>) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn check_format(f: &str) -> Result<(), CliError> {
    if f != FORMAT {
        return Err(CliError::Invalid(format!("unsupported format `{f}`, expected `{FORMAT}`")));
    }
    Ok(())
}

pub fn read_json<D: DeserializeOwned>(path: &Path) -> Result<D, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}

/// Pretty JSON with a trailing newline.
pub fn write_json<S: Serialize>(path: &Path, value: &S) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

// ---------------------------------------------------------------- tolerances

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TolerancesJson {
    pub zero_band: f64,
    pub tance_clamp: f64,
    pub asymptotic: f64,
    pub strict: f64,
    pub isometry: f64,
    pub frame: f64,
    pub membership: f64,
    pub angle_floor: f64,
    pub sep_floor: f64,
    pub k3_samples: usize,
    pub kaehler: f64,
    pub snap_gap: f64,
    pub pairing: f64,
}

impl Default for TolerancesJson {
    fn default() -> Self {
        Self::from(&Tolerances::DEFAULT)
    }
}

impl From<&Tolerances> for TolerancesJson {
    fn from(t: &Tolerances) -> Self {
        Self {
            zero_band: t.zero_band,
            tance_clamp: t.tance_clamp,
            asymptotic: t.asymptotic,
            strict: t.strict,
            isometry: t.isometry,
            frame: t.frame,
            membership: t.membership,
            angle_floor: t.angle_floor,
            sep_floor: t.sep_floor,
            k3_samples: t.k3_samples,
            kaehler: t.kaehler,
            snap_gap: t.snap_gap,
            pairing: t.pairing,
        }
    }
}

impl TolerancesJson {
    pub fn to_core(&self) -> Result<Tolerances, CliError> {
        let t = Tolerances {
            zero_band: self.zero_band,
            tance_clamp: self.tance_clamp,
            asymptotic: self.asymptotic,
            strict: self.strict,
            isometry: self.isometry,
            frame: self.frame,
            membership: self.membership,
            angle_floor: self.angle_floor,
            sep_floor: self.sep_floor,
            k3_samples: self.k3_samples,
            kaehler: self.kaehler,
            snap_gap: self.snap_gap,
            pairing: self.pairing,
        };
        t.validate().map_err(CliError::Invalid)?;
        if t.k3_samples == 0 {
            return Err(CliError::Invalid("k3_samples must be positive".into()));
        }
        Ok(t)
    }
}

// ---------------------------------------------------------------- quadrangle input

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadrangleFile {
    pub format: String,
    /// Polars of C1..C4.
    pub polars: Vec<PointJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<TolerancesJson>,
}

impl QuadrangleFile {
    pub fn from_config(q: &QuadrangleConfig<f64>) -> Self {
        Self { format: FORMAT.into(), polars: q.polars.iter().map(|p| point_to_json(p.rep())).collect(), tolerances: None }
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let f: Self = read_json(path)?;
        check_format(&f.format)?;
        Ok(f)
    }

    pub fn config(&self) -> Result<QuadrangleConfig<f64>, CliError> {
        if self.polars.len() != 4 {
            return Err(CliError::Invalid(format!("expected 4 polars, got {}", self.polars.len())));
        }
        let p: Vec<ProjectivePoint<f64>> = self.polars.iter().map(point_from_json).collect::<Result<_, _>>()?;
        QuadrangleConfig::new([p[0], p[1], p[2], p[3]]).map_err(|e| CliError::Invalid(e.to_string()))
    }

    pub fn tolerances(&self) -> Result<Tolerances, CliError> {
        self.tolerances.clone().unwrap_or_default().to_core()
    }
}

// ---------------------------------------------------------------- certificate

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarginJson {
    pub label: String,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckJson {
    pub pass: bool,
    pub worst: Option<MarginJson>,
    pub margins: Vec<MarginJson>,
    pub diagnostics: Vec<String>,
}

impl From<&CheckReport> for CheckJson {
    fn from(c: &CheckReport) -> Self {
        let m = |x: &chdisc_core::quadrangle::Margin| MarginJson { label: x.label.clone(), value: x.value };
        Self { pass: c.pass, worst: c.worst().map(m), margins: c.margins.iter().map(m).collect(), diagnostics: c.diagnostics.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdjacencyJson {
    pub pass: bool,
    pub failed: Vec<String>,
    pub transversal: CheckJson,
    pub sector: CheckJson,
    pub disjoint: CheckJson,
    pub degenerate: Option<String>,
}

impl From<&AdjacencyReport> for AdjacencyJson {
    fn from(a: &AdjacencyReport) -> Self {
        Self {
            pass: a.pass,
            failed: a.failed_subchecks().into_iter().map(String::from).collect(),
            transversal: (&a.transversal).into(),
            sector: (&a.sector).into(),
            disjoint: (&a.disjoint).into(),
            degenerate: a.degenerate.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateFile {
    pub format: String,
    pub pass: bool,
    /// Names of the failed checks among K1, K2, K3.
    pub failed: Vec<String>,
    pub digest: String,
    pub k1: CheckJson,
    pub k2: CheckJson,
    pub k3: AdjacencyJson,
    pub tolerances: TolerancesJson,
}

impl From<&Certificate> for CertificateFile {
    fn from(c: &Certificate) -> Self {
        let failed = [("K1", c.k1.pass), ("K2", c.k2.pass), ("K3", c.k3.pass)]
            .iter()
            .filter(|(_, p)| !p)
            .map(|(n, _)| n.to_string())
            .collect();
        Self {
            format: FORMAT.into(),
            pass: c.pass,
            failed,
            digest: c.digest.clone(),
            k1: (&c.k1).into(),
            k2: (&c.k2).into(),
            k3: (&c.k3).into(),
            tolerances: (&c.tolerances).into(),
        }
    }
}

// ---------------------------------------------------------------- representation

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorJson {
    pub name: String,
    pub matrix: MatrixJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationJson {
    pub word: String,
    pub order: u32,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepFile {
    pub format: String,
    pub kind: String,
    pub signature: [u32; 3],
    /// Cyclic relabeling used to build the quadrangle.
    pub quadrangle_signature: [u32; 3],
    pub bend: f64,
    pub genuine: bool,
    pub generators: Vec<GeneratorJson>,
    pub relations: Vec<RelationJson>,
    pub fixed_points: Vec<PointJson>,
    pub polars: Vec<PointJson>,
    pub c4_consistency: f64,
}

impl RepFile {
    pub fn generators_of(rep: &Representation<f64>) -> Vec<GeneratorJson> {
        rep.generators.iter().map(|(n, g)| GeneratorJson { name: n.clone(), matrix: matrix_to_json(g.matrix()) }).collect()
    }

    /// The representation read back, with the stored relations.
    pub fn representation(&self) -> Result<Representation<f64>, CliError> {
        check_format(&self.format)?;
        let generators = self
            .generators
            .iter()
            .map(|g| {
                let iso = Isometry::new(matrix_from_json(&g.matrix)).map_err(|e| CliError::Invalid(e.to_string()))?;
                Ok((g.name.clone(), iso))
            })
            .collect::<Result<_, CliError>>()?;
        let relations = self
            .relations
            .iter()
            .map(|r| chdisc_core::representations::Relation::new(&r.word, r.order).map_err(|e| CliError::Invalid(e.to_string())))
            .collect::<Result<_, _>>()?;
        let kind = match self.kind.as_str() {
            "turnover" => chdisc_core::representations::RepKind::Turnover,
            "hyperelliptic" => chdisc_core::representations::RepKind::Hyperelliptic,
            _ => chdisc_core::representations::RepKind::Custom,
        };
        Ok(Representation { generators, relations, kind })
    }
}

// ---------------------------------------------------------------- invariants report

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SnappedJson {
    pub raw: f64,
    pub denominator: i64,
    pub nearest: String,
    pub gap: f64,
    pub snapped: Option<String>,
}

impl From<&Snapped> for SnappedJson {
    fn from(s: &Snapped) -> Self {
        Self {
            raw: s.raw,
            denominator: s.denominator,
            nearest: ratio_string(&s.nearest),
            gap: s.gap,
            snapped: s.snapped.as_ref().map(ratio_string),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportTolerances {
    pub snap_gap: f64,
    pub quadrature: f64,
    pub pairing: f64,
    pub solver: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportFile {
    pub format: String,
    pub signature: [u32; 3],
    pub bend: f64,
    pub seed: u64,
    pub chi: String,
    pub toledo: SnappedJson,
    /// Absent when no section mesh is available for the representation.
    pub euler: Option<SnappedJson>,
    pub chi_mesh: Option<SnappedJson>,
    pub mesh_subdivisions: Option<usize>,
    pub orientation: String,
    /// |3 tau - 2e - 2 chi|.
    pub kalashnikov_signed: Option<f64>,
    /// |-3|tau| - 2e - 2 chi|.
    pub kalashnikov_unsigned: Option<f64>,
    pub reliable: bool,
    pub certificate_pass: bool,
    pub tolerances: ReportTolerances,
}

impl ReportFile {
    pub fn new(
        signature: [u32; 3],
        bend: f64,
        seed: u64,
        report: &InvariantReport,
        has_euler: bool,
        mesh_subdivisions: Option<usize>,
        certificate_pass: bool,
        tolerances: ReportTolerances,
    ) -> Self {
        Self {
            format: FORMAT.into(),
            signature,
            bend,
            seed,
            chi: ratio_string(&report.chi),
            toledo: (&report.toledo).into(),
            euler: has_euler.then(|| (&report.euler).into()),
            chi_mesh: report.chi_mesh.as_ref().map(Into::into),
            mesh_subdivisions,
            orientation: report.orientation.name().into(),
            kalashnikov_signed: has_euler.then_some(report.kalashnikov_signed),
            kalashnikov_unsigned: has_euler.then_some(report.kalashnikov_unsigned),
            reliable: has_euler && report.reliable,
            certificate_pass,
            tolerances,
        }
    }
}

// ---------------------------------------------------------------- figure and scan inputs

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Layer {
    /// The turnover fundamental polygon in the disc e2 = 0.
    BasePolygon,
    /// Spines of the four bisector segments, projected to the disc.
    Spines,
    /// Slices at the segment ends, as projected circles.
    Slices,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FigureSpec {
    pub format: String,
    #[serde(default)]
    pub signature: Option<[u32; 3]>,
    #[serde(default)]
    pub bend: f64,
    /// Quadrangle file, relative to the spec file; overrides the turnover quadrangle.
    #[serde(default)]
    pub quadrangle: Option<String>,
    #[serde(default)]
    pub draw: Vec<Layer>,
    #[serde(default = "default_size")]
    pub size: u32,
    #[serde(default)]
    pub title: Option<String>,
}

fn default_size() -> u32 {
    480
}

impl FigureSpec {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let f: Self = read_json(path)?;
        check_format(&f.format)?;
        if f.draw.is_empty() {
            return Err(CliError::Invalid("figure spec draws nothing".into()));
        }
        if f.signature.is_none() && f.quadrangle.is_none() {
            return Err(CliError::Invalid("figure spec names neither a signature nor a quadrangle".into()));
        }
        if !(16..=8192).contains(&f.size) {
            return Err(CliError::Invalid(format!("size {} outside 16..8192", f.size)));
        }
        Ok(f)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    pub format: String,
    #[serde(default)]
    pub signatures: Vec<[u32; 3]>,
    #[serde(default)]
    pub bends: Vec<f64>,
    #[serde(default)]
    pub mesh: Option<f64>,
    #[serde(default)]
    pub tol: Option<f64>,
    #[serde(default)]
    pub seed: u64,
}

impl ScanConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let f: Self = read_json(path)?;
        check_format(&f.format)?;
        Ok(f)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanRow {
    pub signature: [u32; 3],
    pub bend: f64,
    pub converged: bool,
    pub certificate: Option<CertificateSummary>,
    /// max over relations of the relation residual.
    pub relation_residual: Option<f64>,
    /// g2^{n2} distance from the identity.
    pub g2_order_residual: Option<f64>,
    pub toledo_raw: Option<f64>,
    pub euler_raw: Option<f64>,
    pub kalashnikov_signed: Option<f64>,
    pub exit_code: i32,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateSummary {
    pub k1: bool,
    pub k2: bool,
    pub k3: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanSummary {
    pub format: String,
    pub seed: u64,
    pub warnings: Vec<String>,
    pub rows: Vec<ScanRow>,
}
