use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Signed;

use crate::error::{Error, Result};

/// Nearest k/den to `raw` and the gap |raw - k/den|.
pub fn snap(raw: f64, den: i64) -> (Ratio<i64>, f64) {
    let den = den.max(1);
    let k = (raw * den as f64).round() as i64;
    let r = Ratio::new(k, den);
    (r, (raw - ratio_f64(&r)).abs())
}

pub fn ratio_f64(r: &Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Which identity the residual refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrientationConvention {
    /// tau signed by the counterclockwise disc orientation: 3 tau = 2e + 2 chi.
    Signed,
    /// -3|tau| = 2e + 2 chi.
    Unsigned,
}

impl OrientationConvention {
    pub fn name(self) -> &'static str {
        match self {
            OrientationConvention::Signed => "signed",
            OrientationConvention::Unsigned => "unsigned",
        }
    }
}

/// A raw value and its snapped rational, when the snap is within tolerance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Snapped {
    pub raw: f64,
    pub denominator: i64,
    pub nearest: Ratio<i64>,
    pub gap: f64,
    pub snapped: Option<Ratio<i64>>,
}

impl Snapped {
    pub fn new(raw: f64, denominator: i64, max_gap: f64) -> Self {
        let (nearest, gap) = snap(raw, denominator);
        Self { raw, denominator, nearest, gap, snapped: (gap <= max_gap).then_some(nearest) }
    }

    pub fn exact(r: Ratio<i64>) -> Self {
        Self { raw: ratio_f64(&r), denominator: *r.denom(), nearest: r, gap: 0.0, snapped: Some(r) }
    }

    fn scaled(&self, d: i64) -> Self {
        Self {
            raw: self.raw * d as f64,
            denominator: self.denominator,
            nearest: self.nearest * d,
            gap: self.gap * d as f64,
            snapped: self.snapped.map(|r| r * d),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InvariantReport {
    pub chi: Ratio<i64>,
    /// Tangent degree from the mesh, when one was used.
    pub chi_mesh: Option<Snapped>,
    pub toledo: Snapped,
    pub euler: Snapped,
    pub orientation: OrientationConvention,
    pub kalashnikov_signed: f64,
    pub kalashnikov_unsigned: f64,
    /// All snaps succeeded and the mesh chi (if any) equals chi.
    pub reliable: bool,
}

impl InvariantReport {
    /// Build from raw values. `lcm` is the lcm of the cone orders (1 for a smooth surface);
    /// tau snaps to denominators dividing 3 lcm, e and the mesh chi to divisors of lcm.
    pub fn from_raw(chi: Ratio<i64>, toledo_raw: f64, euler_raw: f64, chi_raw: Option<f64>, lcm: i64, max_gap: f64) -> Self {
        let toledo = Snapped::new(toledo_raw, 3 * lcm, max_gap);
        let euler = Snapped::new(euler_raw, lcm, max_gap);
        let chi_mesh = chi_raw.map(|c| Snapped::new(c, lcm, max_gap));
        Self::assemble(chi, chi_mesh, toledo, euler, OrientationConvention::Signed)
    }

    pub fn exact(chi: Ratio<i64>, euler: Ratio<i64>, toledo: Ratio<i64>) -> Self {
        Self::assemble(chi, None, Snapped::exact(toledo), Snapped::exact(euler), OrientationConvention::Signed)
    }

    pub fn with_orientation(mut self, o: OrientationConvention) -> Self {
        self.orientation = o;
        self
    }

    fn assemble(
        chi: Ratio<i64>,
        chi_mesh: Option<Snapped>,
        toledo: Snapped,
        euler: Snapped,
        orientation: OrientationConvention,
    ) -> Self {
        let mesh_ok = chi_mesh.map_or(true, |c| c.snapped == Some(chi));
        let reliable = toledo.snapped.is_some() && euler.snapped.is_some() && mesh_ok;
        let mut r = Self {
            chi,
            chi_mesh,
            toledo,
            euler,
            orientation,
            kalashnikov_signed: 0.0,
            kalashnikov_unsigned: 0.0,
            reliable,
        };
        r.kalashnikov_signed = identity_residual(&r, OrientationConvention::Signed);
        r.kalashnikov_unsigned = identity_residual(&r, OrientationConvention::Unsigned);
        r
    }

    /// tau and e as used by the identity: snapped when available, else None.
    pub fn exact_values(&self) -> Option<(Ratio<i64>, Ratio<i64>)> {
        Some((self.toledo.snapped?, self.euler.snapped?))
    }
}

fn identity_residual(r: &InvariantReport, o: OrientationConvention) -> f64 {
    if let Some((tau, e)) = r.exact_values() {
        let three = Ratio::from_integer(3);
        let two = Ratio::from_integer(2);
        let lhs = match o {
            OrientationConvention::Signed => three * tau,
            OrientationConvention::Unsigned => -(three * tau.abs()),
        };
        return ratio_f64(&(lhs - two * e - two * r.chi).abs());
    }
    let chi = ratio_f64(&r.chi);
    let (tau, e) = (r.toledo.raw, r.euler.raw);
    let lhs = match o {
        OrientationConvention::Signed => 3.0 * tau,
        OrientationConvention::Unsigned => -3.0 * tau.abs(),
    };
    (lhs - 2.0 * e - 2.0 * chi).abs()
}

/// |3 tau - 2e - 2 chi| or |-3|tau| - 2e - 2 chi| per the report's convention, exact when
/// snapped values exist.
pub fn kalashnikov_residual(r: &InvariantReport) -> f64 {
    identity_residual(r, r.orientation)
}

/// Multiply chi, e, tau by the covering degree.
pub fn pullback_scale(r: &InvariantReport, degree: u32) -> Result<InvariantReport> {
    if degree == 0 {
        return Err(Error::ParameterOutOfRange(0.0));
    }
    let d = degree as i64;
    Ok(InvariantReport::assemble(
        r.chi * d,
        r.chi_mesh.map(|c| c.scaled(d)),
        r.toledo.scaled(d),
        r.euler.scaled(d),
        r.orientation,
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Gkl {
    pub e: i64,
    pub chi1: i64,
    pub chi2: i64,
    pub t: i64,
    pub g1: i64,
    pub g2: i64,
}

/// e = chi(S1)/2 - chi(S2) with g1 = g-1-t, g2 = t, t = g-1-|tau|/2.
pub fn gkl_euler(genus: i64, tau_abs: i64) -> Result<Gkl> {
    if genus < 2 {
        return Err(Error::GklBounds(format!("genus {genus} < 2")));
    }
    if tau_abs < 0 || tau_abs.is_odd() || tau_abs > 2 * genus - 2 {
        return Err(Error::GklBounds(format!("|tau| = {tau_abs} must be even and at most {}", 2 * genus - 2)));
    }
    let t = genus - 1 - tau_abs / 2;
    let (g1, g2) = (genus - 1 - t, t);
    let (chi1, chi2) = (-2 * g1, -2 * g2);
    let e = chi1 / 2 - chi2;
    Ok(Gkl { e, chi1, chi2, t, g1, g2 })
}
