/// Every numerical threshold used by the library, in one place.
///
/// Values are `f64` and converted to the working scalar where used.
#[derive(Clone, Debug, PartialEq)]
pub struct Tolerances {
    /// |<x,x>| < zero_band * |x|^2 means null.
    pub zero_band: f64,
    /// tance of negative points may dip this far below 1 before `distance` errors.
    pub tance_clamp: f64,
    /// |tance - 1| below this is asymptotic.
    pub asymptotic: f64,
    /// A strict inequality passes only when its slack exceeds this.
    pub strict: f64,
    /// Allowed |M^H J M - J|_max for a matrix accepted as an isometry.
    pub isometry: f64,
    /// Allowed pairwise form values in an orthogonal frame (relative).
    pub frame: f64,
    /// Membership residual for spines, planes, fixed points.
    pub membership: f64,
    /// Minimum angle between tangent hyperplanes at a shared slice.
    pub angle_floor: f64,
    /// Minimum separation between non-adjacent bisector segments.
    pub sep_floor: f64,
    /// Samples per slice or segment in the adjacency check.
    pub k3_samples: usize,
    /// Kaehler value within this of 0 or 1 classifies as Lagrangian or complex.
    pub kaehler: f64,
    /// Largest accepted gap between a raw invariant and its snapped rational.
    pub snap_gap: f64,
    /// Side pairing must match embedded edges to this tance defect.
    pub pairing: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        zero_band: 1e-10,
        tance_clamp: 1e-9,
        asymptotic: 1e-9,
        strict: 1e-9,
        isometry: 1e-8,
        frame: 1e-10,
        membership: 1e-9,
        angle_floor: 1e-6,
        sep_floor: 1e-8,
        k3_samples: 64,
        kaehler: 1e-9,
        snap_gap: 1e-3,
        pairing: 1e-8,
    };

    /// Every tolerance must be positive.
    pub fn validate(&self) -> Result<(), String> {
        let vals = [
            ("zero_band", self.zero_band),
            ("tance_clamp", self.tance_clamp),
            ("asymptotic", self.asymptotic),
            ("strict", self.strict),
            ("isometry", self.isometry),
            ("frame", self.frame),
            ("membership", self.membership),
            ("angle_floor", self.angle_floor),
            ("sep_floor", self.sep_floor),
            ("kaehler", self.kaehler),
            ("snap_gap", self.snap_gap),
            ("pairing", self.pairing),
        ];
        for (name, v) in vals {
            if !(v > 0.0 && v.is_finite()) {
                return Err(format!("tolerance {name} must be positive, got {v}"));
            }
        }
        if self.k3_samples == 0 {
            return Err("k3_samples must be positive".into());
        }
        Ok(())
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
