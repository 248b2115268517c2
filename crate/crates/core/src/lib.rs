//! Joint microstrip selection and hybrid beamforming for mmWave downlinks
//! transmitted from a dynamic metasurface antenna (DMA).
//!
//! A DMA feeds each microstrip from one RF chain; every element along the
//! strip applies a Lorentzian-constrained weight `g = (j + e^{jφ})/2`. With
//! fewer RF chains than strips, the design picks which strips to drive,
//! applies MRT across them and tunes the element phases by coordinate
//! ascent, alternating until the SNR stops improving.
//!
//! The numerical core is generic over [`Real`] (`f32`/`f64`); the aliases
//! below fix the precision. The [`harness`] runs seeded Monte Carlo sweeps
//! in `f64` and writes CSV.

pub mod baselines;
pub mod channel;
pub mod config;
pub mod error;
pub mod harness;
pub mod optimizer;
pub mod scalar;
pub mod weights;

pub use baselines::SchemeId;
pub use channel::{ChannelRealization, PathSet, SteeringVector};
pub use config::SystemConfig;
pub use error::{Error, Result};
pub use optimizer::{BeamformingSolution, OptimizerTrace};
pub use scalar::Real;
pub use weights::DmaWeights;

pub type SystemConfigF64 = SystemConfig<f64>;
pub type SystemConfigF32 = SystemConfig<f32>;
pub type PathSetF64 = PathSet<f64>;
pub type PathSetF32 = PathSet<f32>;
pub type ChannelF64 = ChannelRealization<f64>;
pub type ChannelF32 = ChannelRealization<f32>;
pub type DmaWeightsF64 = DmaWeights<f64>;
pub type DmaWeightsF32 = DmaWeights<f32>;
pub type SolutionF64 = BeamformingSolution<f64>;
pub type SolutionF32 = BeamformingSolution<f32>;
pub type TraceF64 = OptimizerTrace<f64>;
pub type TraceF32 = OptimizerTrace<f32>;
