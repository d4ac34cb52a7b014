//! Survival estimates `Θ = τ_γ/τ_ħ` for concrete experimental platforms.
//!
//! Quantum linewidth effects survive relaxation when `Θ ≫ 1`. For the
//! generic oscillator on the canonical family `Θ = 2μ_cl√ε·τ_γ`; a
//! mechanical resonator with `n` levels and quality factor `Q` has
//! `ε = 1/n`, `τ_γ = 2Q`, giving `Θ = 4μ_cl·Q/√n`; optical cavities reuse
//! the generic form with `μ_cl = χJ/ω_cav` and `ε = 1/n_photons`.

use crate::error::{Error, Result};
use crate::scalar::{lit, Scalar};

/// Default threshold realizing "Θ ≫ 1".
pub const DEFAULT_THETA_THRESHOLD: f64 = 10.0;

/// Platform the estimate applies to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Platform {
    Generic,
    Cantilever,
    OpticalCavity,
}

/// Survival estimate with the raw inputs echoed back.
#[derive(Debug, Clone, PartialEq)]
pub struct PlatformEstimate<T> {
    pub platform: Platform,
    pub theta: T,
    pub threshold: T,
    /// `theta > threshold`.
    pub satisfied: bool,
    /// Raw inputs as (name, value) pairs.
    pub inputs: Vec<(&'static str, T)>,
}

fn build_estimate<T: Scalar>(
    platform: Platform,
    theta: T,
    threshold: Option<T>,
    inputs: Vec<(&'static str, T)>,
) -> PlatformEstimate<T> {
    let threshold = threshold.unwrap_or_else(|| lit::<T>(DEFAULT_THETA_THRESHOLD));
    PlatformEstimate {
        platform,
        theta,
        threshold,
        satisfied: theta > threshold,
        inputs,
    }
}

/// `Θ = 2μ_cl·√ε·τ_γ`, exactly `τ_γ/τ_ħ` on the canonical family.
pub fn theta_generic<T: Scalar>(mu_cl: T, epsilon: T, tau_gamma: T) -> Result<T> {
    if !(mu_cl > T::zero()) || !(epsilon > T::zero()) || !(tau_gamma > T::zero()) {
        return Err(Error::domain(
            "mu_cl, epsilon, and tau_gamma must be positive",
        ));
    }
    Ok(lit::<T>(2.0) * mu_cl * epsilon.sqrt() * tau_gamma)
}

/// `Θ = 4μ_cl·Q/√n`, routed through [`theta_generic`] with `ε = 1/n`,
/// `τ_γ = 2Q` so the identity is exact to the bit.
pub fn theta_cantilever<T: Scalar>(mu_cl: T, n_levels: T, q_factor: T) -> Result<T> {
    if !(n_levels >= T::one()) {
        return Err(Error::domain("n_levels must be at least 1"));
    }
    if !(q_factor > T::zero()) {
        return Err(Error::domain("quality factor must be positive"));
    }
    theta_generic(mu_cl, n_levels.recip(), lit::<T>(2.0) * q_factor)
}

/// Classical nonlinearity of a Kerr cavity, `μ_cl = χJ/ω_cav`.
pub fn mu_cl_optical<T: Scalar>(chi: T, j_action: T, omega_cav: T) -> Result<T> {
    if !(omega_cav > T::zero()) {
        return Err(Error::domain("cavity frequency must be positive"));
    }
    Ok(chi * j_action / omega_cav)
}

/// Generic-oscillator estimate.
pub fn estimate_generic<T: Scalar>(
    mu_cl: T,
    epsilon: T,
    tau_gamma: T,
    threshold: Option<T>,
) -> Result<PlatformEstimate<T>> {
    let theta = theta_generic(mu_cl, epsilon, tau_gamma)?;
    Ok(build_estimate(
        Platform::Generic,
        theta,
        threshold,
        vec![
            ("mu_cl", mu_cl),
            ("epsilon", epsilon),
            ("tau_gamma", tau_gamma),
        ],
    ))
}

/// Mechanical-resonator estimate.
pub fn estimate_cantilever<T: Scalar>(
    mu_cl: T,
    n_levels: T,
    q_factor: T,
    threshold: Option<T>,
) -> Result<PlatformEstimate<T>> {
    let theta = theta_cantilever(mu_cl, n_levels, q_factor)?;
    Ok(build_estimate(
        Platform::Cantilever,
        theta,
        threshold,
        vec![
            ("mu_cl", mu_cl),
            ("n_levels", n_levels),
            ("q_factor", q_factor),
        ],
    ))
}

/// Nonlinear-cavity estimate from susceptibility, action, and photon number.
pub fn estimate_optical<T: Scalar>(
    chi: T,
    j_action: T,
    omega_cav: T,
    n_photons: T,
    tau_gamma: T,
    threshold: Option<T>,
) -> Result<PlatformEstimate<T>> {
    if !(n_photons >= T::one()) {
        return Err(Error::domain("photon number must be at least 1"));
    }
    let mu_cl = mu_cl_optical(chi, j_action, omega_cav)?;
    let theta = theta_generic(mu_cl, n_photons.recip(), tau_gamma)?;
    Ok(build_estimate(
        Platform::OpticalCavity,
        theta,
        threshold,
        vec![
            ("chi", chi),
            ("j_action", j_action),
            ("omega_cav", omega_cav),
            ("n_photons", n_photons),
            ("tau_gamma", tau_gamma),
        ],
    ))
}
