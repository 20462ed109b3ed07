//! Simulation and verification toolkit for snapping out Brownian motion: a
//! Brownian particle that reflects off a semi-permeable barrier at the origin
//! and switches side each time its barrier local time crosses an exponential
//! threshold.
//!
//! * [`space`]: the split state space and shared parameter types.
//! * [`analytic`]: resolvent kernels, hitting-time transforms, the semigroup
//!   by quadrature and the barrier-condition residuals.
//! * [`random`]: reproducible streams and the exact one-step primitives.
//! * [`sim`]: the one-step sampler, path generation, elastic lifetimes and the
//!   thin-layer random walk.
//! * [`mc`]: Monte Carlo estimators and the statistical tests used to compare
//!   them with the analytic side.
//! * [`verify`]: named verification suites, as run by the command line tool.

pub mod analytic;
pub mod cli;
pub mod error;
pub mod mc;
pub mod random;
pub mod sim;
pub mod space;
pub mod verify;

pub use error::{Result, SnobError};
pub use space::{GPoint, Side, SnobParams, TimeGrid, Trajectory};
