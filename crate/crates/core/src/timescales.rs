//! Characteristic time-scales and the mesoscopic-window classification.
//!
//! Five scales control which quantum features survive in an open nonlinear
//! oscillator: the classical period `τ_cl = 2π/(1+2μ_cl)`, the Ehrenfest
//! time `τ_ħ = 1/(2μ̄|α|)`, the revival time `τ_R = π/μ̄`, and (when the
//! system is open) a relaxation time `τ_γ` and a decoherence time `τ_d`.
//! The quantum linewidth prediction is `Δν_ħ = 2√2/τ_ħ`.

use crate::error::{Error, Result};
use crate::oscillator::OscillatorParams;
use crate::scalar::{lit, Scalar};

/// Which ordering chain defines the mesoscopic window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChainTemplate {
    /// Relaxation-dominated environment: `τ_d ≪ τ_cl < τ_ħ < τ_γ`.
    ///
    /// The upper comparison `τ_γ < τ_R` is deliberately not part of the
    /// classification: weaker relaxation never makes the quantum width
    /// *less* observable, so the flag stays monotone in `τ_γ`.
    #[default]
    Relaxation,
    /// Pure-dephasing environment: `τ_cl < τ_ħ < τ_d < τ_R`.
    DephasingWindow,
}

/// Optional environment scales and chain configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderingOptions<T> {
    pub tau_gamma: Option<T>,
    pub tau_d: Option<T>,
    /// Ratio threshold realizing "≪" (default 0.1).
    pub margin: T,
    pub chain: ChainTemplate,
}

impl<T: Scalar> Default for OrderingOptions<T> {
    fn default() -> Self {
        OrderingOptions {
            tau_gamma: None,
            tau_d: None,
            margin: lit::<T>(0.1),
            chain: ChainTemplate::Relaxation,
        }
    }
}

/// All characteristic scales plus the mesoscopic-window flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimescaleReport<T> {
    pub tau_cl: T,
    pub tau_hbar: T,
    pub tau_r: T,
    pub tau_gamma: Option<T>,
    pub tau_d: Option<T>,
    /// Predicted quantum linewidth `2√2/τ_ħ`.
    pub delta_nu_hbar: T,
    /// `τ_γ/τ_ħ` when a relaxation time is supplied.
    pub theta: Option<T>,
    pub mesoscopic: bool,
}

/// Compute every scale and classify the parameter set.
///
/// Errors when `μ̄ ≤ 0` or `|α| = 0` (no Ehrenfest collapse, `τ_ħ` and
/// `τ_R` undefined).
pub fn compute_timescales<T: Scalar>(
    params: &OscillatorParams<T>,
    opts: &OrderingOptions<T>,
) -> Result<TimescaleReport<T>> {
    if !(params.mu_bar() > T::zero()) {
        return Err(Error::domain(
            "mu_bar must be positive (linear oscillator has no Ehrenfest collapse)",
        ));
    }
    if params.alpha_abs() == T::zero() {
        return Err(Error::domain("|alpha| must be positive"));
    }
    if !(opts.margin > T::zero()) {
        return Err(Error::domain("ordering margin must be positive"));
    }
    let two = lit::<T>(2.0);
    let tau_cl = two * T::PI() / (T::one() + two * params.mu_cl());
    let tau_hbar = (two * params.mu_bar() * params.alpha_abs()).recip();
    let tau_r = T::PI() / params.mu_bar();
    let delta_nu_hbar = two * two.sqrt() / tau_hbar;
    let theta = opts.tau_gamma.map(|g| g / tau_hbar);

    let mesoscopic = match opts.chain {
        ChainTemplate::Relaxation => {
            opts.tau_d.is_none_or(|d| d / tau_cl < opts.margin)
                && tau_cl < tau_hbar
                && opts.tau_gamma.is_none_or(|g| tau_hbar < g)
                && tau_hbar < tau_r
        }
        ChainTemplate::DephasingWindow => {
            tau_cl < tau_hbar
                && opts.tau_d.is_none_or(|d| tau_hbar < d && d < tau_r)
                && tau_hbar < tau_r
        }
    };

    Ok(TimescaleReport {
        tau_cl,
        tau_hbar,
        tau_r,
        tau_gamma: opts.tau_gamma,
        tau_d: opts.tau_d,
        delta_nu_hbar,
        theta,
        mesoscopic,
    })
}

/// Exact hierarchy ratios `(τ_cl/τ_ħ, τ_ħ/τ_R)` on the canonical family.
///
/// Definitionally `τ_ħ/τ_R = 1/(2π|α|)`; asymptotic-constant comparisons
/// are left to callers. Errors off the family `|α|² = 1/ε`.
pub fn canonical_ratios<T: Scalar>(params: &OscillatorParams<T>) -> Result<(T, T)> {
    if !params.is_canonical() {
        return Err(Error::domain(
            "canonical_ratios requires the canonical family |alpha|^2 = 1/epsilon",
        ));
    }
    let report = compute_timescales(params, &OrderingOptions::default())?;
    Ok((
        report.tau_cl / report.tau_hbar,
        report.tau_hbar / report.tau_r,
    ))
}
