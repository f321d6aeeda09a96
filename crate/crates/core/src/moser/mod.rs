//! Ball embeddings by the Moser deformation method, in chart coordinates.
//!
//! A [`ChartForm`] is a symplectic form on a star-shaped chart that is
//! standard at the origin, rotation invariant, and carries an exact moment
//! map for the diagonal circle action with all weights one. The engine lifts
//! the half Euler field through the moment map, flows the chart into the
//! region where the form is understood, corrects with a Moser isotopy, and
//! composes with the inner normalization into an explicit symplectic
//! embedding whose pullback residual can be measured directly.

mod engine;
mod forms;

pub use engine::{
    construct_embedding, euler_flow, lift_euler, radial_primitive, sample_admissible,
    verify_pullback, Embedding,
};
pub use forms::{ChartForm, InnerNormalization};

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MoserError {
    #[error("invalid chart form: {0}")]
    InvalidForm(String),
    #[error("invalid integration grid: {0}")]
    InvalidGrid(String),
    #[error("flow time must be finite and nonnegative, got {0}")]
    InvalidTime(f64),
    #[error("point outside the embedding domain at stage {stage}: Phi = {phi:.6} exceeds {limit:.6}")]
    Domain {
        stage: &'static str,
        phi: f64,
        limit: f64,
    },
    #[error("moment-map gradient vanishes away from the origin (|x| = {radius:.3e})")]
    DegenerateGradient { radius: f64 },
    #[error("singular linear solve at stage {stage} (tau = {tau:.4})")]
    SingularSolve { stage: &'static str, tau: f64 },
    #[error("non-finite value produced at stage {stage}")]
    NonFinite { stage: &'static str },
    #[error("sample rejection starved: drew {drawn} of {requested} admissible points")]
    Sampling { requested: usize, drawn: usize },
}

/// Integration parameters. Deterministic: the contraction flow shortens
/// steps near a cap as a pure function of the state, never of runtime
/// error estimates, so repeated runs agree bit for bit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegrationGrid {
    /// Base RK4 steps per unit flow time, for both the lifted Euler flow
    /// and the Moser isotopy.
    pub steps_per_unit_time: usize,
    /// Gauss-Legendre node count for the radial homotopy primitive.
    pub quad_nodes: usize,
    /// Blend window for the lifted Euler field, as fractions of the inner
    /// normalization's validity cap.
    pub cutoff: (f64, f64),
}

impl Default for IntegrationGrid {
    fn default() -> Self {
        IntegrationGrid {
            steps_per_unit_time: 64,
            quad_nodes: 24,
            cutoff: (0.2, 0.8),
        }
    }
}

impl IntegrationGrid {
    pub fn with_steps(steps: usize) -> Self {
        IntegrationGrid {
            steps_per_unit_time: steps,
            ..IntegrationGrid::default()
        }
    }

    pub fn validate(&self) -> Result<(), MoserError> {
        if self.steps_per_unit_time < 8 {
            return Err(MoserError::InvalidGrid(
                "need at least 8 steps per unit time".into(),
            ));
        }
        if self.quad_nodes < 4 {
            return Err(MoserError::InvalidGrid(
                "need at least 4 quadrature nodes".into(),
            ));
        }
        let (lo, hi) = self.cutoff;
        if !(0.0 < lo && lo < hi && hi < 1.0) {
            return Err(MoserError::InvalidGrid(
                "cutoff must satisfy 0 < lo < hi < 1".into(),
            ));
        }
        Ok(())
    }
}
