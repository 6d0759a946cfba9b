//! Cross-layer secure scheduling for a multi-user MISO downlink.
//!
//! A base station with `N_A` antennas serves `K` users one at a time while
//! `N_E` single-antenna eavesdroppers listen. Each slot it beamforms data to
//! the chosen user and fills the user's null space with artificial noise.
//! A drift-plus-penalty controller picks admissions, the served user, the
//! total power and the data/noise split from finite grids, keeping every
//! data queue below `Vθ_i + A_max` and the long-run power at `P_av`.
//!
//! The numerical core is generic over [`Scalar`] (`f32` or `f64`). The
//! aliases at the crate root fix the scalar to `f64`.

// Negated comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod config;
pub mod control;
pub mod error;
pub mod linalg;
pub mod scalar;
pub mod secrecy;
pub mod simulator;

pub use config::{CsiKind, ScenarioConfig};
pub use error::{Error, Result};
pub use scalar::Scalar;
pub use secrecy::{Collusion, Csi};

pub type ComplexVector = linalg::ComplexVector<f64>;
pub type ComplexMatrix = linalg::ComplexMatrix<f64>;
pub type ChannelRealization = channel::ChannelRealization<f64>;
pub type BeamformingBasis = channel::BeamformingBasis<f64>;
pub type TransmitParams = secrecy::TransmitParams<f64>;
pub type SecrecyRegime = secrecy::SecrecyRegime<f64>;
pub type RateCost = secrecy::RateCost<f64>;
pub type SecrecyRateResult = secrecy::SecrecyRateResult<f64>;
pub type SecrecyEvaluator = secrecy::SecrecyEvaluator<f64>;
pub type OutageValidationRow = secrecy::OutageValidationRow<f64>;
pub type QueueState = control::QueueState<f64>;
pub type ControlWeights = control::ControlWeights<f64>;
pub type ActionGrid = control::ActionGrid<f64>;
pub type Allocation = control::Allocation<f64>;
pub type SlotDecision = control::SlotDecision<f64>;
pub type PerformanceBounds = control::PerformanceBounds<f64>;
pub type RunMetrics = simulator::RunMetrics<f64>;
pub type RunOutput = simulator::RunOutput<f64>;
pub type SlotTraceRecord = simulator::SlotTraceRecord<f64>;
pub type Simulation = simulator::Simulation<f64>;
