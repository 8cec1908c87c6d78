//! Discrete one-dimensional weighted spaces and analytic model spaces.
//!
//! A [`WeightedSpace`] is a uniform grid over a circle, interval, or
//! truncated line together with a closed-form weight `phi` and trapezoid
//! quadrature masses for `exp(-phi) dx`. Weights come from a registry that
//! supplies `phi`, `phi'`, `phi''` exactly, so curvature tensors never pay
//! extra differencing error.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::ScalarField;

/// Boundary condition attached to interval domains.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Neumann,
    Dirichlet,
}

/// The ambient 1-D domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DomainKind {
    /// Periodic domain of length `period`.
    Circle { period: f64 },
    /// Bounded interval `[a, b]` with the given boundary condition.
    Interval { a: f64, b: f64, boundary: Boundary },
    /// `[-half_width, half_width]` standing in for the real line; the cut
    /// carries a Neumann closure and should sit where the weight tail is
    /// below quadrature tolerance.
    TruncatedLine { half_width: f64 },
}

impl DomainKind {
    fn validate(&self) -> Result<()> {
        match *self {
            DomainKind::Circle { period } => {
                if !(period > 0.0) || !period.is_finite() {
                    return Err(Error::InvalidParam(format!("circle period must be positive, got {period}")));
                }
            }
            DomainKind::Interval { a, b, .. } => {
                if !(a < b) || !a.is_finite() || !b.is_finite() {
                    return Err(Error::InvalidParam(format!("interval needs a < b, got [{a}, {b}]")));
                }
            }
            DomainKind::TruncatedLine { half_width } => {
                if !(half_width > 0.0) || !half_width.is_finite() {
                    return Err(Error::InvalidParam(format!(
                        "truncated line half-width must be positive, got {half_width}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self, DomainKind::Circle { .. })
    }

    /// Endpoints of the coordinate range covered by grid nodes.
    pub fn range(&self) -> (f64, f64) {
        match *self {
            DomainKind::Circle { period } => (0.0, period),
            DomainKind::Interval { a, b, .. } => (a, b),
            DomainKind::TruncatedLine { half_width } => (-half_width, half_width),
        }
    }

    pub fn boundary(&self) -> Boundary {
        match *self {
            DomainKind::Interval { boundary, .. } => boundary,
            _ => Boundary::Neumann,
        }
    }
}

/// Floor used inside `log`-type weights so endpoint nodes stay finite.
const LOG_WEIGHT_FLOOR: f64 = 1e-150;

/// Closed-form weight `phi` with exact first and second derivatives.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightSpec {
    /// `phi = 0` (unweighted Lebesgue measure).
    Zero,
    /// `phi = scale * x^2 / 2`; `scale = 1` is the Gaussian / Ornstein-Uhlenbeck weight.
    Quadratic { scale: f64 },
    /// `phi = sum_i coeffs[i] * x^i`.
    Polynomial { coeffs: Vec<f64> },
    /// `phi = -(m - 1) log(sin t)` on `(0, pi)`; `sin` is floored at a tiny
    /// positive value so the endpoint nodes evaluate finite.
    LogSin { m: f64 },
}

impl WeightSpec {
    /// Quadratic weight with scale 1: the standard Gaussian weight.
    pub fn gaussian() -> Self {
        WeightSpec::Quadratic { scale: 1.0 }
    }

    pub fn phi(&self, x: f64) -> f64 {
        match self {
            WeightSpec::Zero => 0.0,
            WeightSpec::Quadratic { scale } => 0.5 * scale * x * x,
            WeightSpec::Polynomial { coeffs } => {
                let mut acc = 0.0;
                for &c in coeffs.iter().rev() {
                    acc = acc * x + c;
                }
                acc
            }
            WeightSpec::LogSin { m } => -(m - 1.0) * x.sin().max(LOG_WEIGHT_FLOOR).ln(),
        }
    }

    pub fn phi_prime(&self, x: f64) -> f64 {
        match self {
            WeightSpec::Zero => 0.0,
            WeightSpec::Quadratic { scale } => scale * x,
            WeightSpec::Polynomial { coeffs } => {
                let mut acc = 0.0;
                for i in (1..coeffs.len()).rev() {
                    acc = acc * x + coeffs[i] * i as f64;
                }
                acc
            }
            WeightSpec::LogSin { m } => -(m - 1.0) * x.cos() / x.sin().max(LOG_WEIGHT_FLOOR),
        }
    }

    pub fn phi_double_prime(&self, x: f64) -> f64 {
        match self {
            WeightSpec::Zero => 0.0,
            WeightSpec::Quadratic { scale } => *scale,
            WeightSpec::Polynomial { coeffs } => {
                let mut acc = 0.0;
                for i in (2..coeffs.len()).rev() {
                    acc = acc * x + coeffs[i] * (i * (i - 1)) as f64;
                }
                acc
            }
            WeightSpec::LogSin { m } => {
                let s = x.sin().max(LOG_WEIGHT_FLOOR);
                (m - 1.0) / (s * s)
            }
        }
    }

    /// Registry identifier (addressable from scenario configs).
    pub fn registry_id(&self) -> &'static str {
        match self {
            WeightSpec::Zero => "zero",
            WeightSpec::Quadratic { .. } => "quadratic",
            WeightSpec::Polynomial { .. } => "poly",
            WeightSpec::LogSin { .. } => "log_sin",
        }
    }

    /// Builds a weight from a registry id and parameter list.
    pub fn from_registry(id: &str, params: &[f64]) -> Result<Self> {
        match id {
            "zero" => Ok(WeightSpec::Zero),
            "quadratic" => {
                let scale = params.first().copied().unwrap_or(1.0);
                if !scale.is_finite() {
                    return Err(Error::InvalidParam("quadratic weight scale must be finite".into()));
                }
                Ok(WeightSpec::Quadratic { scale })
            }
            "poly" => {
                if params.is_empty() {
                    return Err(Error::EmptyInput("polynomial weight coefficients"));
                }
                Ok(WeightSpec::Polynomial { coeffs: params.to_vec() })
            }
            "log_sin" => {
                let m = params.first().copied().ok_or_else(|| {
                    Error::InvalidParam("log_sin weight needs the dimension parameter m".into())
                })?;
                if !(m > 1.0) {
                    return Err(Error::InvalidParam(format!("log_sin weight needs m > 1, got {m}")));
                }
                Ok(WeightSpec::LogSin { m })
            }
            other => Err(Error::InvalidParam(format!("unknown weight registry id '{other}'"))),
        }
    }

    /// Cross-checks `phi'` and `phi''` against central differences of `phi`
    /// at the supplied points. Catches inconsistently wired registries.
    fn check_consistency(&self, points: &[f64]) -> Result<()> {
        let h = 1e-5;
        for &x in points {
            let d1 = (self.phi(x + h) - self.phi(x - h)) / (2.0 * h);
            let d2 = (self.phi(x + h) - 2.0 * self.phi(x) + self.phi(x - h)) / (h * h);
            let p1 = self.phi_prime(x);
            let p2 = self.phi_double_prime(x);
            let scale1 = 1.0 + p1.abs() + h * h * p2.abs();
            let scale2 = 1.0 + p2.abs();
            if (d1 - p1).abs() > 1e-4 * scale1 || (d2 - p2).abs() > 1e-3 * scale2 {
                return Err(Error::InvalidParam(format!(
                    "weight derivatives inconsistent with phi near x = {x}"
                )));
            }
        }
        Ok(())
    }
}

/// A discrete weighted space: uniform grid, weight, quadrature masses.
#[derive(Debug)]
pub struct WeightedSpace {
    kind: DomainKind,
    weight: WeightSpec,
    nodes: Vec<f64>,
    quad_weights: Vec<f64>,
    h: f64,
    normalized: bool,
    /// Total trapezoid mass before any normalisation.
    raw_mass: f64,
}

impl WeightedSpace {
    /// Builds a uniform grid with trapezoid quadrature for `exp(-phi) dx`.
    ///
    /// The circle uses the periodic trapezoid rule (all masses equal before
    /// weighting); intervals and truncated lines use half masses at the two
    /// end nodes. With `normalize` the masses are rescaled to total 1.
    pub fn build(
        kind: DomainKind,
        weight: WeightSpec,
        node_count: usize,
        normalize: bool,
    ) -> Result<Arc<Self>> {
        kind.validate()?;
        if node_count < 16 {
            return Err(Error::InvalidParam(format!(
                "node_count must be at least 16, got {node_count}"
            )));
        }
        let (lo, hi) = kind.range();
        let periodic = kind.is_periodic();
        let h = if periodic {
            (hi - lo) / node_count as f64
        } else {
            (hi - lo) / (node_count - 1) as f64
        };
        let nodes: Vec<f64> = (0..node_count).map(|i| lo + i as f64 * h).collect();

        // Weight-derivative consistency probe over a sample of interior nodes.
        let probe: Vec<f64> = (1..8).map(|i| lo + (hi - lo) * i as f64 / 8.0).collect();
        weight.check_consistency(&probe)?;

        let mut quad_weights = Vec::with_capacity(node_count);
        for (i, &x) in nodes.iter().enumerate() {
            let phi = weight.phi(x);
            if !phi.is_finite() {
                return Err(Error::NonFiniteWeight { node: i, x });
            }
            let cell = if periodic || (i > 0 && i + 1 < node_count) {
                h
            } else {
                0.5 * h
            };
            let q = cell * (-phi).exp();
            if !(q > 0.0) || !q.is_finite() {
                return Err(Error::NonFiniteWeight { node: i, x });
            }
            quad_weights.push(q);
        }
        let raw_mass: f64 = quad_weights.iter().sum();
        if !(raw_mass > 0.0) || !raw_mass.is_finite() {
            return Err(Error::InvalidParam("total measure is not positive and finite".into()));
        }
        if normalize {
            for q in quad_weights.iter_mut() {
                *q /= raw_mass;
            }
        }
        Ok(Arc::new(WeightedSpace {
            kind,
            weight,
            nodes,
            quad_weights,
            h,
            normalized: normalize,
            raw_mass,
        }))
    }

    pub fn kind(&self) -> DomainKind {
        self.kind
    }

    pub fn weight(&self) -> &WeightSpec {
        &self.weight
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn quad_weights(&self) -> &[f64] {
        &self.quad_weights
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn is_periodic(&self) -> bool {
        self.kind.is_periodic()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Total mass of the quadrature (1 when normalised).
    pub fn total_mass(&self) -> f64 {
        if self.normalized {
            1.0
        } else {
            self.raw_mass
        }
    }

    /// Trapezoid mass before normalisation.
    pub fn raw_mass(&self) -> f64 {
        self.raw_mass
    }

    /// Returns a normalised version of this space. Already-normalised
    /// spaces are returned as-is, so normalising twice is bit-for-bit
    /// the same as normalising once.
    pub fn normalized_copy(self: &Arc<Self>) -> Arc<Self> {
        if self.normalized {
            return Arc::clone(self);
        }
        let mut quad_weights = self.quad_weights.clone();
        for q in quad_weights.iter_mut() {
            *q /= self.raw_mass;
        }
        Arc::new(WeightedSpace {
            kind: self.kind,
            weight: self.weight.clone(),
            nodes: self.nodes.clone(),
            quad_weights,
            h: self.h,
            normalized: true,
            raw_mass: self.raw_mass,
        })
    }

    /// Integrates a field against the weighted measure.
    pub fn integrate(&self, f: &ScalarField) -> Result<f64> {
        if !std::ptr::eq(f.space_ref(), self) || f.values().len() != self.nodes.len() {
            return Err(Error::SpaceMismatch);
        }
        Ok(self.integrate_values(f.values()))
    }

    pub(crate) fn integrate_values(&self, values: &[f64]) -> f64 {
        values
            .iter()
            .zip(self.quad_weights.iter())
            .map(|(v, q)| v * q)
            .sum()
    }

    /// Node indices untouched by boundary closures: all nodes on the
    /// circle, `margin..n-margin` otherwise.
    pub fn interior_range(&self, margin: usize) -> std::ops::Range<usize> {
        if self.is_periodic() {
            0..self.node_count()
        } else {
            margin..self.node_count().saturating_sub(margin)
        }
    }

    pub fn phi_at(&self, x: f64) -> f64 {
        self.weight.phi(x)
    }
}

/// Convenience free function mirroring the module-level operation list.
pub fn build_space(
    kind: DomainKind,
    weight: WeightSpec,
    node_count: usize,
    normalize: bool,
) -> Result<Arc<WeightedSpace>> {
    WeightedSpace::build(kind, weight, node_count, normalize)
}

pub fn integrate(space: &WeightedSpace, f: &ScalarField) -> Result<f64> {
    space.integrate(f)
}

/// Volume of the unit `n`-ball from the two-step recurrence
/// `w_n = w_{n-2} * 2 pi / n`, `w_0 = 1`, `w_1 = 2`.
pub fn unit_ball_volume(n: u32) -> f64 {
    match n {
        0 => 1.0,
        1 => 2.0,
        _ => {
            let mut values = [1.0, 2.0];
            let mut dim = 1;
            while dim < n {
                dim += 1;
                let next = values[0] * 2.0 * PI / dim as f64;
                values[0] = values[1];
                values[1] = next;
            }
            values[1]
        }
    }
}

/// Analytic model spaces with closed-form profile parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelSpace {
    /// Euclidean `R^n`, `n >= 2`.
    Euclidean { n: u32 },
    /// Round unit sphere `S^n`, `n >= 2`.
    Sphere { n: u32 },
    /// Gauss space `(R^n, gamma_n)`, `n >= 1`.
    Gauss { n: u32 },
}

impl ModelSpace {
    pub fn new_euclidean(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParam(format!("Euclidean model needs n >= 2, got {n}")));
        }
        Ok(ModelSpace::Euclidean { n })
    }

    pub fn new_sphere(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParam(format!("sphere model needs n >= 2, got {n}")));
        }
        Ok(ModelSpace::Sphere { n })
    }

    pub fn new_gauss(n: u32) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidParam(format!("Gauss model needs n >= 1, got {n}")));
        }
        Ok(ModelSpace::Gauss { n })
    }

    pub fn dimension(&self) -> u32 {
        match *self {
            ModelSpace::Euclidean { n } | ModelSpace::Sphere { n } | ModelSpace::Gauss { n } => n,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ou_line(nodes: usize, normalize: bool) -> Arc<WeightedSpace> {
        WeightedSpace::build(
            DomainKind::TruncatedLine { half_width: 8.0 },
            WeightSpec::gaussian(),
            nodes,
            normalize,
        )
        .unwrap()
    }

    #[test]
    fn uniform_circle_masses() {
        let s = WeightedSpace::build(
            DomainKind::Circle { period: 2.0 * PI },
            WeightSpec::Zero,
            64,
            true,
        )
        .unwrap();
        assert!((s.total_mass() - 1.0).abs() < 1e-12);
        for &q in s.quad_weights() {
            assert!((q - 1.0 / 64.0).abs() < 1e-15);
        }
    }

    #[test]
    fn truncated_gaussian_mass() {
        // Oracle: sqrt(2 pi) * erf(8 / sqrt(2)), tail below 1e-14.
        let s = ou_line(2048, false);
        let exact = (2.0 * PI).sqrt() * libm::erf(8.0 / 2.0_f64.sqrt());
        assert!((s.raw_mass() - exact).abs() < 1e-10, "{} vs {}", s.raw_mass(), exact);
    }

    #[test]
    fn sin_squared_interval_mass() {
        // phi = -(m-1) log sin t with m = 3 gives density sin^2; integral pi/2.
        let s = WeightedSpace::build(
            DomainKind::Interval {
                a: 0.0,
                b: PI,
                boundary: Boundary::Neumann,
            },
            WeightSpec::LogSin { m: 3.0 },
            513,
            false,
        )
        .unwrap();
        assert!((s.raw_mass() - PI / 2.0).abs() < 1e-5, "{}", s.raw_mass());
    }

    #[test]
    fn integrate_constant_on_probability_space() {
        let s = ou_line(256, true);
        let one = ScalarField::constant(&s, 1.0);
        assert!((s.integrate(&one).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gaussian_moments() {
        let s = ou_line(512, true);
        let x = ScalarField::from_fn(&s, |x| x);
        let xx = ScalarField::from_fn(&s, |x| x * x);
        assert!(s.integrate(&x).unwrap().abs() < 1e-10);
        assert!((s.integrate(&xx).unwrap() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn refinement_shrinks_trapezoid_error() {
        // Smooth non-periodic integrand on an interval: error drops ~4x per halving.
        let kind = DomainKind::Interval {
            a: 0.0,
            b: 1.0,
            boundary: Boundary::Neumann,
        };
        let weight = WeightSpec::Polynomial { coeffs: vec![0.0, 1.0] };
        let exact = {
            // integral of exp(-x) * (2 + sin 3x) over [0,1]
            let f = |x: f64| (-x).exp() * (2.0 + (3.0 * x).sin());
            crate::quad::adaptive_simpson(&f, 0.0, 1.0, 1e-14)
        };
        let err_at = |n: usize| {
            let s = WeightedSpace::build(kind, weight.clone(), n, false).unwrap();
            let f = ScalarField::from_fn(&s, |x| 2.0 + (3.0 * x).sin());
            (s.integrate(&f).unwrap() - exact).abs()
        };
        let e1 = err_at(65);
        let e2 = err_at(129);
        assert!(e1 / e2 >= 3.5, "ratio {}", e1 / e2);
    }

    #[test]
    fn normalization_is_idempotent() {
        let s = ou_line(128, false);
        let n1 = s.normalized_copy();
        let n2 = n1.normalized_copy();
        assert!(Arc::ptr_eq(&n1, &n2));
        for (a, b) in n1.quad_weights().iter().zip(n2.quad_weights().iter()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
        let total: f64 = n1.quad_weights().iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn weight_derivative_consistency_order() {
        // max |phi' - central difference| decays like h^2 on interior nodes.
        let w = WeightSpec::Polynomial {
            coeffs: vec![0.3, -1.0, 0.5, 0.25],
        };
        let err = |h: f64| {
            let mut worst: f64 = 0.0;
            for i in 1..50 {
                let x = -1.0 + 2.0 * i as f64 / 50.0;
                let fd = (w.phi(x + h) - w.phi(x - h)) / (2.0 * h);
                worst = worst.max((fd - w.phi_prime(x)).abs());
            }
            worst
        };
        let e1 = err(1e-2);
        let e2 = err(5e-3);
        assert!(e1 / e2 > 3.5, "ratio {}", e1 / e2);
    }

    #[test]
    fn small_grid_rejected() {
        let err = WeightedSpace::build(
            DomainKind::Circle { period: 1.0 },
            WeightSpec::Zero,
            8,
            false,
        );
        assert!(err.is_err());
    }

    #[test]
    fn ball_volumes_cross_checked() {
        assert!((unit_ball_volume(2) - PI).abs() < 1e-14);
        assert!((unit_ball_volume(3) - 4.0 * PI / 3.0).abs() < 1e-14);
        assert!((unit_ball_volume(4) - PI * PI / 2.0).abs() < 1e-13);
    }

    #[test]
    fn model_space_dimension_guards() {
        assert!(ModelSpace::new_euclidean(1).is_err());
        assert!(ModelSpace::new_sphere(1).is_err());
        assert!(ModelSpace::new_gauss(0).is_err());
        assert_eq!(ModelSpace::new_gauss(1).unwrap().dimension(), 1);
    }

    #[test]
    fn registry_roundtrip() {
        let w = WeightSpec::from_registry("quadratic", &[2.0]).unwrap();
        assert_eq!(w, WeightSpec::Quadratic { scale: 2.0 });
        assert!(WeightSpec::from_registry("nope", &[]).is_err());
        assert!(WeightSpec::from_registry("log_sin", &[0.5]).is_err());
    }
}
