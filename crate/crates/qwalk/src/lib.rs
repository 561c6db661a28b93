//! Monte Carlo wavefunction simulator for momentum-space discrete-time
//! quantum walks realized with a spinor atom-optics kicked rotor, including
//! a tunable spontaneous-emission channel that drives the walk from quantum
//! (ballistic) to classical (diffusive) behavior.

pub mod bessel;
pub mod cli;
pub mod config;
pub mod decoherence;
pub mod ensemble;
pub mod error;
pub mod observables;
pub mod operators;
pub mod output;
pub mod spinor;

pub use decoherence::{SEConfig, SEEvent, SEMode};
pub use ensemble::{BetaDist, EnsembleConfig, EnsembleStatistics, TrajectoryResult};
pub use error::{ConfigError, Error, Result};
pub use operators::{KickOperator, WalkConfig};
pub use spinor::{MomentumDistribution, Spin, SpinorState};
