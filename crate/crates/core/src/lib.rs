//! Simulation and verification workbench for private quantum channels.
//!
//! The numeric core is generic over a [`Real`] scalar; the `*64` aliases
//! below fix it to `f64`, which is what the default tolerances target.

pub mod entropy;
pub mod error;
pub mod protocols;
pub mod qmath;
pub mod reductions;
pub mod scalar;
pub mod tolerance;

pub use error::{Error, Result};
pub use scalar::Real;
pub use tolerance::Tolerances;

pub type ComplexMatrix64 = qmath::ComplexMatrix<f64>;
pub type Ket64 = qmath::Ket<f64>;
pub type DensityOp64 = qmath::DensityOp<f64>;
pub type UnitaryOp64 = qmath::UnitaryOp<f64>;
pub type ProbabilityDist64 = entropy::ProbabilityDist<f64>;
pub type ChannelProtocol64 = protocols::ChannelProtocol<f64>;
pub type Tolerances64 = Tolerances<f64>;

pub type Ket32 = qmath::Ket<f32>;
pub type DensityOp32 = qmath::DensityOp<f32>;
pub type ChannelProtocol32 = protocols::ChannelProtocol<f32>;

/// Largest joint simulation dimension accepted by the protocol builders.
pub const MAX_DIMENSION: usize = 4096;
