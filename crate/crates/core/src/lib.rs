//! Observable dynamics of quasi-classical Kerr-type nonlinear oscillators.
//!
//! The crate computes exact coherent-state expectation values for the Kerr
//! oscillator and its open-system variants, measures the quantum-induced
//! spectral linewidth `Δν_ħ = 2√2/τ_ħ` that survives decoherence, and
//! carries the supporting machinery: a truncated number-basis oracle, DFT
//! linewidth metrology, pure-dephasing thermal baths with their classical
//! limit, a single-mode ring condensate, two-condensate phase diffusion,
//! and experimental survival estimates.
//!
//! Everything dynamical is dimensionless (`τ = ωt`, `μ̄ = ħμ/ω`,
//! `ε = ħ/J`); physical units appear only in the condensate estimates. The
//! numerics are generic over the floating-point scalar via [`Scalar`]; the
//! `*64` aliases below cover the common `f64` case. All operations are pure
//! functions of their inputs and safe to call from any number of threads.

// validation guards use negated comparisons so NaN inputs are rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bec;
pub mod error;
pub mod fock;
pub mod open_system;
pub mod oscillator;
pub mod phase_diffusion;
pub mod quadrature;
pub mod regime;
pub mod scalar;
pub mod spectrum;
pub mod timescales;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Complex double-precision scalar.
pub type C64 = num_complex::Complex<f64>;

pub type OscillatorParams64 = oscillator::OscillatorParams<f64>;
pub type TimeGrid64 = oscillator::TimeGrid<f64>;
pub type ComplexSeries64 = oscillator::ComplexSeries<f64>;
pub type ModulationDecomposition64 = oscillator::ModulationDecomposition<f64>;
pub type TimescaleReport64 = timescales::TimescaleReport<f64>;
pub type TruncationPolicy64 = fock::TruncationPolicy<f64>;
pub type SpectrumResult64 = spectrum::SpectrumResult<f64>;
pub type LinewidthMeasurement64 = spectrum::LinewidthMeasurement<f64>;
pub type DampedParams64 = open_system::DampedParams<f64>;
pub type DiscreteBath64 = open_system::DiscreteBath<f64>;
pub type BathSpec64 = open_system::BathSpec<f64>;
pub type CrossoverReport64 = open_system::CrossoverReport<f64>;
pub type BecTorusParams64 = bec::BecTorusParams<f64>;
pub type BecModeState64 = bec::BecModeState<f64>;
pub type SplitState64 = phase_diffusion::SplitState<f64>;
pub type PhaseDistribution64 = phase_diffusion::PhaseDistribution<f64>;
pub type PlatformEstimate64 = regime::PlatformEstimate<f64>;
