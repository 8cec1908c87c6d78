//! Grid functions tied to a weighted space.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::space::WeightedSpace;

/// A function sampled at the nodes of one [`WeightedSpace`].
///
/// Fields carry a shared handle to their space; operations check space
/// identity, not just lengths.
#[derive(Debug, Clone)]
pub struct ScalarField {
    space: Arc<WeightedSpace>,
    values: Vec<f64>,
}

impl ScalarField {
    /// Samples `f` at every node.
    pub fn from_fn<F: Fn(f64) -> f64>(space: &Arc<WeightedSpace>, f: F) -> Self {
        let values = space.nodes().iter().map(|&x| f(x)).collect();
        ScalarField {
            space: Arc::clone(space),
            values,
        }
    }

    /// Wraps explicit node values; rejects length mismatches and non-finite entries.
    pub fn from_values(space: &Arc<WeightedSpace>, values: Vec<f64>) -> Result<Self> {
        if values.len() != space.node_count() {
            return Err(Error::SpaceMismatch);
        }
        if let Some(node) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonPositiveField {
                what: "finite field construction",
                node,
                value: values[node],
            });
        }
        Ok(ScalarField {
            space: Arc::clone(space),
            values,
        })
    }

    pub fn constant(space: &Arc<WeightedSpace>, c: f64) -> Self {
        ScalarField {
            space: Arc::clone(space),
            values: vec![c; space.node_count()],
        }
    }

    pub fn space(&self) -> &Arc<WeightedSpace> {
        &self.space
    }

    pub(crate) fn space_ref(&self) -> &WeightedSpace {
        &self.space
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// True when both fields reference the same space instance.
    pub fn same_space(&self, other: &ScalarField) -> bool {
        Arc::ptr_eq(&self.space, &other.space)
    }

    pub(crate) fn require_same_space(&self, other: &ScalarField) -> Result<()> {
        if self.same_space(other) {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    /// Pointwise map, staying on the same space.
    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> ScalarField {
        ScalarField {
            space: Arc::clone(&self.space),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Pointwise combination of two fields on the same space.
    pub fn zip_with<F: Fn(f64, f64) -> f64>(&self, other: &ScalarField, f: F) -> Result<ScalarField> {
        self.require_same_space(other)?;
        Ok(ScalarField {
            space: Arc::clone(&self.space),
            values: self
                .values
                .iter()
                .zip(other.values.iter())
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn linf_norm(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().fold(f64::INFINITY, |m, &v| m.min(v))
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v))
    }

    /// Max absolute difference against another field on the same space.
    pub fn linf_distance(&self, other: &ScalarField) -> Result<f64> {
        self.require_same_space(other)?;
        Ok(self
            .values
            .iter()
            .zip(other.values.iter())
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs())))
    }

    /// Weighted L2 norm against the space quadrature.
    pub fn l2_mu_norm(&self) -> f64 {
        self.values
            .iter()
            .zip(self.space.quad_weights().iter())
            .map(|(v, q)| v * v * q)
            .sum::<f64>()
            .sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{DomainKind, WeightSpec, WeightedSpace};

    fn circle() -> Arc<WeightedSpace> {
        WeightedSpace::build(
            DomainKind::Circle {
                period: std::f64::consts::TAU,
            },
            WeightSpec::Zero,
            32,
            true,
        )
        .unwrap()
    }

    #[test]
    fn from_values_checks_length_and_finiteness() {
        let s = circle();
        assert!(ScalarField::from_values(&s, vec![0.0; 31]).is_err());
        let mut bad = vec![0.0; 32];
        bad[7] = f64::NAN;
        assert!(ScalarField::from_values(&s, bad).is_err());
        assert!(ScalarField::from_values(&s, vec![1.0; 32]).is_ok());
    }

    #[test]
    fn space_identity_distinguishes_equal_grids() {
        let a = circle();
        let b = circle();
        let fa = ScalarField::constant(&a, 1.0);
        let fb = ScalarField::constant(&b, 1.0);
        assert!(!fa.same_space(&fb));
        assert!(fa.zip_with(&fb, |x, y| x + y).is_err());
    }
}
