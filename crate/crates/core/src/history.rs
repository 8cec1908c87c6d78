//! Space-time record of a computed diffusion run.

use std::sync::Arc;

use crate::field::ScalarField;
use crate::space::WeightedSpace;

/// Per-step solver diagnostics (zero iterations for linear steps).
#[derive(Debug, Clone, Copy, Default)]
pub struct StepDiagnostics {
    pub newton_iterations: u32,
    pub final_residual: f64,
    pub step_halvings: u32,
}

/// Stored snapshots of a diffusion solution, with strictly increasing times.
#[derive(Debug, Clone)]
pub struct SolutionHistory {
    space: Arc<WeightedSpace>,
    times: Vec<f64>,
    states: Vec<Vec<f64>>,
    diagnostics: Vec<StepDiagnostics>,
}

impl SolutionHistory {
    pub(crate) fn new(space: Arc<WeightedSpace>) -> Self {
        SolutionHistory {
            space,
            times: Vec::new(),
            states: Vec::new(),
            diagnostics: Vec::new(),
        }
    }

    pub(crate) fn push(&mut self, t: f64, state: Vec<f64>, diag: StepDiagnostics) {
        debug_assert!(self.times.last().map_or(true, |&last| t > last));
        debug_assert_eq!(state.len(), self.space.node_count());
        self.times.push(t);
        self.states.push(state);
        self.diagnostics.push(diag);
    }

    pub fn space(&self) -> &Arc<WeightedSpace> {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn state(&self, idx: usize) -> &[f64] {
        &self.states[idx]
    }

    pub fn diagnostics(&self) -> &[StepDiagnostics] {
        &self.diagnostics
    }

    /// Materialises snapshot `idx` as a field on the run's space.
    pub fn field_at(&self, idx: usize) -> ScalarField {
        ScalarField::from_values(&self.space, self.states[idx].clone())
            .expect("stored states match the space")
    }

    pub fn final_time(&self) -> f64 {
        *self.times.last().expect("history is never empty")
    }

    pub fn final_field(&self) -> ScalarField {
        self.field_at(self.len() - 1)
    }

    /// Index of the first stored time `>= t - 1e-12`.
    pub fn index_at_or_after(&self, t: f64) -> Option<usize> {
        self.times.iter().position(|&s| s >= t - 1e-12)
    }
}
