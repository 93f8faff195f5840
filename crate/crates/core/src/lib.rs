//! Integral-uniform norm toolkit.
//!
//! The integral-uniform norm ‖f‖_{m,∞} is the expected maximum of |f| over
//! m independent points of the probability space carrying f. It interpolates
//! between ‖f‖₁ (m = 1) and ‖f‖_∞ (m → ∞). This crate computes it exactly
//! for discrete functions ([`norm`]), by Monte Carlo for arbitrary samplers,
//! and on uniform nets of the circle for trigonometric polynomials
//! ([`trig`]); [`ensemble`] measures the norm of random polynomials
//! Σ aᵢξᵢfᵢ against the scales it is provably sandwiched between, and
//! [`signs`] searches for sign choices with large dyadic tail averages.
//!
//! Everything is generic over the scalar type via [`scalar::Real`]
//! (`f32`/`f64`); the `*64` aliases below fix `f64`.

pub mod ensemble;
pub mod error;
pub mod norm;
pub mod rng;
pub mod scalar;
pub mod signs;
pub mod trig;

pub use ensemble::{
    envelope_upper_scale, expected_m_norm, expected_m_norms, lower_bound_scale, norm_distribution,
    salem_zygmund_ratio, uniform_upper_scale, BoundReport, CoefficientVector, EnsembleSpec,
    FunctionSystem, XiKind,
};
pub use error::{Error, Result};
pub use norm::{indicator_m_norm, m_norm_monte_carlo, Atom, DiscreteFunction, NormEstimate};
pub use scalar::Real;
pub use signs::{
    dyadic_tail_average, search_signs, sharpness_seminorm, sharpness_witness, tail_certificate,
    CertRow, Certificate, SearchOptions, SearchReport, SeminormHypothesis, SignVector,
};
pub use trig::{discretization_gap, kernel, KernelKind, NetVector, TrigPoly};

/// Concrete `f64` aliases.
pub type DiscreteFunction64 = norm::DiscreteFunction<f64>;
pub type NormEstimate64 = norm::NormEstimate<f64>;
pub type TrigPoly64 = trig::TrigPoly<f64>;
pub type NetVector64 = trig::NetVector<f64>;
pub type EnsembleSpec64 = ensemble::EnsembleSpec<f64>;
pub type CoefficientVector64 = ensemble::CoefficientVector<f64>;
pub type FunctionSystem64 = ensemble::FunctionSystem<f64>;
pub type BoundReport64 = ensemble::BoundReport<f64>;
