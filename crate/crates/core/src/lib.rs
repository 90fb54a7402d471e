//! Simulation of direct state measurement with a qubit probe under
//! state-preparation-and-measurement (SPAM) noise.
//!
//! The numerical core is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix the scalar for the common double-precision case.

// Negated comparisons such as `!(x > 0)` are used on purpose so NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod experiment;
pub mod linalg;
pub mod metrics;
pub mod mixed_protocol;
pub mod montecarlo;
pub mod noise;
pub mod pure_protocol;
pub mod scalar;
pub mod state;

pub use error::{Error, Result};
pub use linalg::CMatrix;
pub use metrics::{qfi_noisy, qfi_pure, trace_distance_mixed, trace_distance_pure, QfiReport};
pub use mixed_protocol::{physicalize, reconstruct_mixed, LambdaTable, ProbeConditionalMatrix};
pub use montecarlo::{run_repetitions, RunResult, RunSpec, Target};
pub use noise::{perturb_pure_state, white_noise_channel, KrausChannel, PrepNoiseParams};
pub use pure_protocol::{reconstruct_pure, Configuration, PauliBasis, PauliProbabilities};
pub use scalar::{Real, C};
pub use state::{make_standard_state, ConjugateState, DensityMatrix, PureState, StandardState};

pub type Complex64 = C<f64>;
pub type PureStateF64 = PureState<f64>;
pub type DensityMatrixF64 = DensityMatrix<f64>;
pub type ConjugateStateF64 = ConjugateState<f64>;
pub type CMatrixF64 = CMatrix<f64>;
pub type RunSpecF64 = RunSpec<f64>;
pub type PureStateF32 = PureState<f32>;
pub type DensityMatrixF32 = DensityMatrix<f32>;
pub type ConjugateStateF32 = ConjugateState<f32>;
