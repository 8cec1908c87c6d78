//! Margin-based check reports.
//!
//! Every inequality verified numerically is recorded as `rhs - lhs`
//! samples with an explicit tolerance, so `pass` always means
//! `margin >= -tol` and CSV consumers never have to guess orientation.

/// Where a margin sample was taken.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SampleCoord {
    /// A spatial node coordinate.
    Node(f64),
    /// A time instant.
    Time(f64),
    /// A space-time point.
    SpaceTime { x: f64, t: f64 },
    /// A scalar parameter (probe value, exponent, mass fraction, ...).
    Param(f64),
    /// An opaque item index (probe number, random-set number, ...).
    Index(usize),
}

impl SampleCoord {
    /// Two-column encoding used by CSV writers: (first, second).
    pub fn columns(&self) -> (f64, f64) {
        match *self {
            SampleCoord::Node(x) => (x, 0.0),
            SampleCoord::Time(t) => (t, 0.0),
            SampleCoord::SpaceTime { x, t } => (x, t),
            SampleCoord::Param(p) => (p, 0.0),
            SampleCoord::Index(i) => (i as f64, 0.0),
        }
    }
}

/// One `lhs <= rhs + tol` observation.
#[derive(Debug, Clone, Copy)]
pub struct MarginSample {
    pub coord: SampleCoord,
    pub lhs: f64,
    pub rhs: f64,
    pub tol: f64,
}

impl MarginSample {
    pub fn margin(&self) -> f64 {
        self.rhs - self.lhs
    }

    pub fn pass(&self) -> bool {
        self.margin() >= -self.tol
    }
}

/// Record of a single inequality check over many sample points.
#[derive(Debug, Clone)]
pub struct InequalityReport {
    pub check: String,
    pub samples: Vec<MarginSample>,
    /// Smallest `rhs - lhs` over all samples.
    pub worst_margin: f64,
    /// Tolerance at the worst sample.
    pub worst_tol: f64,
    /// True iff every sample satisfies `margin >= -tol` (per-sample tolerances).
    pub pass: bool,
    pub warnings: Vec<String>,
    pub metadata: Vec<(String, String)>,
}

impl InequalityReport {
    pub fn from_samples(check: impl Into<String>, samples: Vec<MarginSample>) -> Self {
        let mut worst_margin = f64::INFINITY;
        let mut worst_tol = 0.0;
        let mut pass = true;
        for s in &samples {
            let m = s.margin();
            if m < worst_margin {
                worst_margin = m;
                worst_tol = s.tol;
            }
            pass &= s.pass();
        }
        if samples.is_empty() {
            worst_margin = f64::NAN;
            pass = false;
        }
        InequalityReport {
            check: check.into(),
            samples,
            worst_margin,
            worst_tol,
            pass,
            warnings: Vec::new(),
            metadata: Vec::new(),
        }
    }

    pub fn with_warning(mut self, w: impl Into<String>) -> Self {
        self.warnings.push(w.into());
        self
    }

    pub fn with_metadata(mut self, key: impl Into<String>, value: impl Into<String>) -> Self {
        self.metadata.push((key.into(), value.into()));
        self
    }

    /// Worst sample (by margin), if any.
    pub fn worst_sample(&self) -> Option<&MarginSample> {
        self.samples
            .iter()
            .min_by(|a, b| a.margin().partial_cmp(&b.margin()).unwrap())
    }
}

/// Overall outcome of a theorem-style check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// Hypotheses were not satisfied by the run; the conclusion was not judged.
    HypothesesUnmet,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Pass => write!(f, "pass"),
            Verdict::Fail => write!(f, "fail"),
            Verdict::HypothesesUnmet => write!(f, "hypotheses-unmet"),
        }
    }
}

/// One hypothesis bullet of a gradient-bound theorem, evaluated on a run.
#[derive(Debug, Clone)]
pub struct HypothesisCheck {
    pub name: String,
    pub satisfied: bool,
    /// Most adverse value of the certified expression (sign convention:
    /// `<= 0` conditions report their max, `>= 0` conditions their min).
    pub worst_value: f64,
    pub witness: Option<SampleCoord>,
}

/// Constants entering a gradient bound, recorded for reproducibility.
#[derive(Debug, Clone)]
pub struct BoundConstants {
    /// Sup of the pressure over the recorded window.
    pub sup_v: f64,
    /// Rate constant `(p - 1)(m - 1) k`.
    pub rate_k: f64,
    /// Envelope offset; NaN when the theorem does not use one.
    pub a: f64,
    /// Which window the sup was taken over.
    pub sup_convention: &'static str,
    /// Largest time admitted by the check when `1 + 2 M K t` degenerates.
    pub time_cutoff: Option<f64>,
}

/// Outcome of a local or global gradient-estimate check.
#[derive(Debug, Clone)]
pub struct GradientBoundReport {
    pub theorem: String,
    pub hypotheses: Vec<HypothesisCheck>,
    pub samples: Vec<MarginSample>,
    pub worst_margin: f64,
    pub tol: f64,
    pub constants: BoundConstants,
    /// Empirical constant for local estimates: max over points of lhs/rhs.
    pub empirical_constant: Option<f64>,
    pub verdict: Verdict,
    pub metadata: Vec<(String, String)>,
}

impl GradientBoundReport {
    pub fn hypotheses_met(&self) -> bool {
        self.hypotheses.iter().all(|h| h.satisfied)
    }
}

/// Exponential-decay observation along a semigroup run.
#[derive(Debug, Clone)]
pub struct DecayReport {
    pub times: Vec<f64>,
    /// Observed functional values at each time.
    pub observed: Vec<f64>,
    /// Decay envelope `exp(-2 k t) * value(0)` at each time.
    pub theoretical: Vec<f64>,
    /// Per-time tolerances (absolute).
    pub tolerances: Vec<f64>,
    /// Observed ratios `value(t) / value(0)`; 0 when the start value vanishes.
    pub ratios: Vec<f64>,
    /// Max of `observed - theoretical * (1 + tol_rel)` over times.
    pub worst_excess: f64,
    pub pass: bool,
    pub warnings: Vec<String>,
}

/// Fixed-format float used by all report serialisation (deterministic).
pub fn fmt_float(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else {
        format!("{x:.12e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_tracks_worst_sample() {
        let samples = vec![
            MarginSample {
                coord: SampleCoord::Node(0.0),
                lhs: 1.0,
                rhs: 2.0,
                tol: 0.0,
            },
            MarginSample {
                coord: SampleCoord::Node(1.0),
                lhs: 2.0,
                rhs: 1.5,
                tol: 0.6,
            },
        ];
        let r = InequalityReport::from_samples("demo", samples);
        assert!((r.worst_margin + 0.5).abs() < 1e-15);
        assert!(r.pass);
        let worst = r.worst_sample().unwrap();
        assert_eq!(worst.coord, SampleCoord::Node(1.0));
    }

    #[test]
    fn failing_sample_fails_report() {
        let samples = vec![MarginSample {
            coord: SampleCoord::Index(0),
            lhs: 1.0,
            rhs: 0.0,
            tol: 0.5,
        }];
        let r = InequalityReport::from_samples("demo", samples);
        assert!(!r.pass);
    }

    #[test]
    fn float_format_is_fixed_width() {
        assert_eq!(fmt_float(1.0), "1.000000000000e0");
        assert_eq!(fmt_float(f64::NAN), "nan");
    }
}
