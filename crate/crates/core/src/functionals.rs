//! Variance, entropy, Dirichlet energy, Fisher information and Lp norms,
//! plus the entropy form of the Lp-norm derivative and log-norm convexity.

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::operators::gradient;
use crate::report::{InequalityReport, MarginSample, SampleCoord};
use crate::space::WeightedSpace;

/// Which functional a [`FunctionalValue`] records.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FunctionalKind {
    Variance,
    Entropy,
    Energy,
    Fisher,
    LpNorm,
}

/// Evaluated functional with its parameters.
#[derive(Debug, Clone, Copy)]
pub struct FunctionalValue {
    pub kind: FunctionalKind,
    pub value: f64,
    /// Exponent for `LpNorm`; unused otherwise.
    pub p: Option<f64>,
}

fn check_field(space: &WeightedSpace, f: &ScalarField) -> Result<()> {
    if !std::ptr::eq(f.space().as_ref(), space) {
        return Err(Error::SpaceMismatch);
    }
    Ok(())
}

fn require_positive(f: &ScalarField, what: &'static str) -> Result<()> {
    if let Some(node) = f.values().iter().position(|&v| !(v > 0.0)) {
        return Err(Error::NonPositiveField {
            what,
            node,
            value: f.values()[node],
        });
    }
    Ok(())
}

/// `Var(f) = int f^2 dmu - (int f dmu)^2`.
pub fn variance(space: &WeightedSpace, f: &ScalarField) -> Result<f64> {
    check_field(space, f)?;
    let mean = space.integrate_values(f.values());
    let second: f64 = f
        .values()
        .iter()
        .zip(space.quad_weights())
        .map(|(v, q)| v * v * q)
        .sum();
    Ok(second - mean * mean)
}

// 0 log 0 = 0: the floor removes the removable singularity before the log.
fn xlogx(v: f64) -> f64 {
    v * v.max(1e-300).ln()
}

/// `Ent(f) = int f log f dmu - (int f dmu) log(int f dmu)`, `f > 0`.
pub fn entropy(space: &WeightedSpace, f: &ScalarField) -> Result<f64> {
    check_field(space, f)?;
    require_positive(f, "entropy")?;
    let mean = space.integrate_values(f.values());
    let flogf: f64 = f
        .values()
        .iter()
        .zip(space.quad_weights())
        .map(|(&v, q)| xlogx(v) * q)
        .sum();
    Ok(flogf - xlogx(mean))
}

/// Dirichlet energy `int |grad f|^2 dmu`.
pub fn energy(space: &WeightedSpace, f: &ScalarField) -> Result<f64> {
    check_field(space, f)?;
    let g = gradient(f);
    Ok(g.values()
        .iter()
        .zip(space.quad_weights())
        .map(|(v, q)| v * v * q)
        .sum())
}

/// Fisher information `int |grad f|^2 / f dmu`, `f > 0`.
pub fn fisher(space: &WeightedSpace, f: &ScalarField) -> Result<f64> {
    check_field(space, f)?;
    require_positive(f, "Fisher information")?;
    let g = gradient(f);
    Ok(g.values()
        .iter()
        .zip(f.values().iter())
        .zip(space.quad_weights())
        .map(|((gv, fv), q)| gv * gv / fv * q)
        .sum())
}

/// `(int |f|^p dmu)^(1/p)` for `p >= 1`.
pub fn lp_norm(space: &WeightedSpace, f: &ScalarField, p: f64) -> Result<f64> {
    check_field(space, f)?;
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::InvalidParam(format!("Lp norm needs finite p >= 1, got {p}")));
    }
    let int: f64 = f
        .values()
        .iter()
        .zip(space.quad_weights())
        .map(|(v, q)| v.abs().powf(p) * q)
        .sum();
    Ok(int.powf(1.0 / p))
}

/// Derivative of `p -> ||f||_p` in entropy form:
/// `(1/p^2) ||f||_p^{1-p} Ent(|f|^p)` for `p > 1`, `f > 0`.
pub fn lp_norm_derivative(space: &WeightedSpace, f: &ScalarField, p: f64) -> Result<f64> {
    check_field(space, f)?;
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::InvalidParam(format!("Lp-norm derivative needs finite p > 1, got {p}")));
    }
    require_positive(f, "Lp-norm derivative")?;
    let fp = f.map(|v| v.powf(p));
    let ent = entropy(space, &fp)?;
    let norm = lp_norm(space, f, p)?;
    Ok(ent * norm.powf(1.0 - p) / (p * p))
}

/// Second form of the same derivative, with the entropy written against the
/// normalised density `|f|^p / ||f||_p^p`. Agrees with
/// [`lp_norm_derivative`] to rounding; kept as an internal cross-check.
pub fn lp_norm_derivative_normalized(space: &WeightedSpace, f: &ScalarField, p: f64) -> Result<f64> {
    check_field(space, f)?;
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::InvalidParam(format!("Lp-norm derivative needs finite p > 1, got {p}")));
    }
    require_positive(f, "Lp-norm derivative")?;
    let norm = lp_norm(space, f, p)?;
    let norm_p = norm.powf(p);
    let int: f64 = f
        .values()
        .iter()
        .zip(space.quad_weights())
        .map(|(&v, q)| {
            let vp = v.powf(p);
            vp * (vp / norm_p).max(1e-300).ln() * q
        })
        .sum();
    Ok(int * norm.powf(1.0 - p) / (p * p))
}

/// Convexity of `r -> log ||f||_{1/r}` on a grid of `r` values in `(0, 1)`:
/// all divided second differences must be `>= -tol`.
pub fn log_norm_convexity_check(
    space: &WeightedSpace,
    f: &ScalarField,
    r_grid: &[f64],
) -> Result<InequalityReport> {
    check_field(space, f)?;
    require_positive(f, "log-norm convexity")?;
    if r_grid.len() < 5 {
        return Err(Error::InvalidParam("log-norm convexity needs at least 5 grid points".into()));
    }
    for w in r_grid.windows(2) {
        if !(w[0] < w[1]) {
            return Err(Error::InvalidParam("r grid must be strictly increasing".into()));
        }
    }
    if !(r_grid[0] > 0.0) || !(r_grid[r_grid.len() - 1] < 1.0) {
        return Err(Error::InvalidParam("r grid must lie strictly inside (0, 1)".into()));
    }
    let values: Vec<f64> = r_grid
        .iter()
        .map(|&r| lp_norm(space, f, 1.0 / r).map(|n| n.ln()))
        .collect::<Result<_>>()?;
    let scale = values.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    let tol = 1e-8 * scale;
    let samples: Vec<MarginSample> = (1..r_grid.len() - 1)
        .map(|i| {
            let left = (values[i] - values[i - 1]) / (r_grid[i] - r_grid[i - 1]);
            let right = (values[i + 1] - values[i]) / (r_grid[i + 1] - r_grid[i]);
            let second = 2.0 * (right - left) / (r_grid[i + 1] - r_grid[i - 1]);
            MarginSample {
                coord: SampleCoord::Param(r_grid[i]),
                lhs: 0.0,
                rhs: second,
                tol,
            }
        })
        .collect();
    Ok(InequalityReport::from_samples("log-norm-convexity", samples))
}

/// Evaluates one functional into a [`FunctionalValue`] record.
pub fn evaluate(
    kind: FunctionalKind,
    space: &WeightedSpace,
    f: &ScalarField,
    p: Option<f64>,
) -> Result<FunctionalValue> {
    let value = match kind {
        FunctionalKind::Variance => variance(space, f)?,
        FunctionalKind::Entropy => entropy(space, f)?,
        FunctionalKind::Energy => energy(space, f)?,
        FunctionalKind::Fisher => fisher(space, f)?,
        FunctionalKind::LpNorm => {
            let p = p.ok_or_else(|| Error::InvalidParam("Lp norm needs an exponent".into()))?;
            lp_norm(space, f, p)?
        }
    };
    Ok(FunctionalValue { kind, value, p })
}
