//! Numerics for the Akhiezer integral transform pair on the real line.
//!
//! `Φ_ω` and `Ψ_ω` act on pairs of signals through the kernels
//! `C_ω(ξ) = (ω/π) sech(ωξ)` and `S_ω(ξ) = (ω/π)/sinh(ωξ)`:
//!
//! ```text
//! Φ_ω [x₁, x₂] = [C x₁ + S x₂, S x₁ + C x₂]
//! Ψ_ω [x₁, x₂] = [C x₁ − S x₂, −S x₁ + C x₂]
//! ```
//!
//! Both are unitary on `L² ⊕ L²` and inverse to each other. The crate evaluates
//! them by direct quadrature ([`quadrature`]) and by Fourier multipliers
//! ([`transform`]), and checks the underlying identities ([`verify`]).
//!
//! Everything is generic over [`scalar::Real`] (`f32` or `f64`); the aliases
//! below fix `f64`, with `*32` variants for single precision.

pub mod bench;
pub mod error;
pub mod kernels;
pub mod quadrature;
pub mod scalar;
pub mod signals;
pub mod spectral;
pub mod transform;
pub mod verify;

pub use error::{Error, Result};
pub use kernels::{OmegaParam, SigmaParam};
pub use quadrature::{Grid, GridSignal, PVConfig};
pub use scalar::Real;
pub use transform::{make_plan, BoundReport, OperatorTag, Tolerances, TransformPlan, VectorSignal};

pub type Omega = OmegaParam<f64>;
pub type Sigma = SigmaParam<f64>;
pub type Signal = GridSignal<f64>;
pub type Vector = VectorSignal<f64>;
pub type Plan = TransformPlan<f64>;
pub type Multiplier = spectral::MultiplierMatrix<f64>;

pub type Omega32 = OmegaParam<f32>;
pub type Sigma32 = SigmaParam<f32>;
pub type Signal32 = GridSignal<f32>;
pub type Vector32 = VectorSignal<f32>;
pub type Plan32 = TransformPlan<f32>;
pub type Multiplier32 = spectral::MultiplierMatrix<f32>;
