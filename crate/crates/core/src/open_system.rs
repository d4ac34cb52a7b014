//! Open-system dynamics: phenomenological damping and exact pure dephasing.
//!
//! Two environments act on the closed solution multiplicatively. A
//! relaxation rate γ attaches an `exp(-γτ)` factor. A thermal bath coupled
//! through the excitation number (pure dephasing, no energy exchange)
//! attaches the exact attenuation
//!
//! ```text
//! R(τ) = Π_q (1 - e^{-ħω_q/kT}) / (1 - e^{-ħω_q/kT - iħλ_qτ/ω}),   |R| ≤ 1
//! ```
//!
//! whose isotropic-continuum limit is `exp(-Γ(τ) + iΦ(τ))` with
//! `Γ(τ) = -(V/2π²) ∫ dq q² ln|R^{(q)}(τ)|`. In the classical limit the
//! attenuation becomes Gaussian, `Γ ≈ τ²/2τ_d²`, defining the decoherence
//! time `τ_d` that competes with the Ehrenfest time for the linewidth.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::oscillator::{alpha_closed_at, ComplexSeries, OscillatorParams, TimeGrid};
use crate::quadrature::{integrate_complex, integrate_real, QuadOptions};
use crate::scalar::{lit, Scalar};

/// Exponent beyond which the mode-factor denominator underflows.
const MODE_EXPONENT_LIMIT: f64 = 700.0;

/// Closed-system parameters plus a phenomenological relaxation rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DampedParams<T> {
    base: OscillatorParams<T>,
    gamma: T,
}

impl<T: Scalar> DampedParams<T> {
    pub fn new(base: OscillatorParams<T>, gamma: T) -> Result<Self> {
        if !(gamma >= T::zero()) || !gamma.is_finite() {
            return Err(Error::domain("gamma must be non-negative and finite"));
        }
        Ok(DampedParams { base, gamma })
    }

    pub fn base(&self) -> &OscillatorParams<T> {
        &self.base
    }

    pub fn gamma(&self) -> T {
        self.gamma
    }

    /// `τ_γ = 1/γ`, when γ > 0.
    pub fn tau_gamma(&self) -> Option<T> {
        (self.gamma > T::zero()).then(|| self.gamma.recip())
    }
}

/// Damped trajectory value `α(τ)·exp(-γτ)` at one time.
pub fn alpha_damped_at<T: Scalar>(dp: &DampedParams<T>, tau: T) -> Complex<T> {
    alpha_closed_at(dp.base(), tau) * (-dp.gamma * tau).exp()
}

/// Damped trajectory on a grid.
pub fn evolve_damped<T: Scalar>(dp: &DampedParams<T>, grid: &TimeGrid<T>) -> ComplexSeries<T> {
    ComplexSeries::from_fn(*grid, |tau| alpha_damped_at(dp, tau))
}

fn mode_factor_unchecked<T: Scalar>(x: T, y: T) -> Complex<T> {
    let num = T::one() - (-x).exp();
    let den = Complex::new(T::one(), T::zero()) - Complex::new(-x, -y).exp();
    Complex::new(num, T::zero()) / den
}

/// Dephasing factor of a single bath mode.
///
/// `x = ħω_q/kT` sets the thermal occupation and `y = ħλ_qτ/ω` the
/// accumulated phase; the factor is 1 at `τ = 0` or `λ_q = 0`, returns to 1
/// whenever `y` is a multiple of 2π, and always has modulus ≤ 1.
pub fn mode_dephasing_factor<T: Scalar>(
    hbar: T,
    k_t: T,
    omega: T,
    omega_q: T,
    lambda_q: T,
    tau: T,
) -> Result<Complex<T>> {
    if !(hbar > T::zero()) || !(k_t > T::zero()) || !(omega > T::zero()) {
        return Err(Error::domain("hbar, kT, and omega must be positive"));
    }
    if !(omega_q > T::zero()) {
        return Err(Error::domain("omega_q must be positive"));
    }
    let x = hbar * omega_q / k_t;
    if x > lit::<T>(MODE_EXPONENT_LIMIT) {
        return Err(Error::domain(
            "hbar*omega_q/kT too large: thermal denominator underflows",
        ));
    }
    let y = hbar * lambda_q * tau / omega;
    Ok(mode_factor_unchecked(x, y))
}

/// Finite list of bath modes with a shared thermal context.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteBath<T> {
    hbar: T,
    k_t: T,
    omega: T,
    modes: Vec<(T, T)>,
}

impl<T: Scalar> DiscreteBath<T> {
    /// `modes` holds `(ω_q, λ_q)` pairs.
    pub fn new(hbar: T, k_t: T, omega: T, modes: Vec<(T, T)>) -> Result<Self> {
        if !(hbar > T::zero()) || !(k_t > T::zero()) || !(omega > T::zero()) {
            return Err(Error::domain("hbar, kT, and omega must be positive"));
        }
        if modes.is_empty() {
            return Err(Error::domain("a discrete bath needs at least one mode"));
        }
        if modes.iter().any(|&(wq, _)| !(wq > T::zero())) {
            return Err(Error::domain("all mode frequencies must be positive"));
        }
        Ok(DiscreteBath {
            hbar,
            k_t,
            omega,
            modes,
        })
    }

    pub fn modes(&self) -> &[(T, T)] {
        &self.modes
    }
}

/// Parametric spectral function for dispersion `ω(q)` or coupling `λ(q)`.
#[derive(Debug, Clone, PartialEq)]
pub enum SpectralFn<T> {
    /// `A·q^s·exp(-q/q_c)`; no exponential cutoff when `cutoff_q` is absent.
    PowerLawExp {
        amplitude: T,
        exponent: T,
        cutoff_q: Option<T>,
    },
    /// Tabulated samples with linear interpolation (clamped outside).
    Table { q: Vec<T>, value: Vec<T> },
}

impl<T: Scalar> SpectralFn<T> {
    pub fn eval(&self, q: T) -> T {
        match self {
            SpectralFn::PowerLawExp {
                amplitude,
                exponent,
                cutoff_q,
            } => {
                let cut = match cutoff_q {
                    Some(qc) => (-q / *qc).exp(),
                    None => T::one(),
                };
                *amplitude * q.powf(*exponent) * cut
            }
            SpectralFn::Table { q: qs, value } => {
                if q <= qs[0] {
                    return value[0];
                }
                if q >= qs[qs.len() - 1] {
                    return value[value.len() - 1];
                }
                let idx = qs.partition_point(|&x| x < q).max(1);
                let (q0, q1) = (qs[idx - 1], qs[idx]);
                let (v0, v1) = (value[idx - 1], value[idx]);
                v0 + (v1 - v0) * (q - q0) / (q1 - q0)
            }
        }
    }

    fn validate(&self) -> Result<()> {
        if let SpectralFn::Table { q, value } = self {
            if q.len() < 2 || q.len() != value.len() {
                return Err(Error::domain(
                    "table needs matching q/value lists, len >= 2",
                ));
            }
            if q.windows(2).any(|w| w[1] <= w[0]) {
                return Err(Error::domain("table abscissae must be strictly increasing"));
            }
        }
        Ok(())
    }
}

/// Isotropic 3D continuum bath with mode density `(V/2π²) q² dq`.
#[derive(Debug, Clone, PartialEq)]
pub struct BathSpec<T> {
    pub hbar: T,
    pub k_t: T,
    pub omega: T,
    pub volume: T,
    pub dispersion: SpectralFn<T>,
    pub coupling: SpectralFn<T>,
    pub q_max: T,
}

impl<T: Scalar> BathSpec<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.hbar > T::zero())
            || !(self.k_t > T::zero())
            || !(self.omega > T::zero())
            || !(self.volume > T::zero())
            || !(self.q_max > T::zero())
        {
            return Err(Error::domain(
                "hbar, kT, omega, volume, and q_max must be positive",
            ));
        }
        self.dispersion.validate()?;
        self.coupling.validate()?;
        // dispersion must stay positive away from the origin
        for i in 1..=8 {
            let q = self.q_max * lit::<T>(i as f64 / 8.0);
            if !(self.dispersion.eval(q) > T::zero()) {
                return Err(Error::domain("dispersion omega(q) must be positive"));
            }
        }
        Ok(())
    }

    fn density_prefactor(&self) -> T {
        self.volume / (lit::<T>(2.0) * T::PI() * T::PI())
    }

    /// `(V/2π²)∫ dq q² Ln R^{(q)}(τ)` — real part `-Γ(τ)`, imaginary part
    /// the accumulated bath phase.
    fn log_attenuation(&self, tau: T) -> Result<Complex<T>> {
        self.validate()?;
        let f = |q: T| {
            let x = self.hbar * self.dispersion.eval(q) / self.k_t;
            let y = self.hbar * self.coupling.eval(q) * tau / self.omega;
            mode_factor_unchecked(x, y).ln() * (q * q)
        };
        let quad = integrate_complex(f, T::zero(), self.q_max, &QuadOptions::default())?;
        Ok(quad.value * self.density_prefactor())
    }

    /// Exact dephasing exponent `Γ(τ) ≥ 0`.
    pub fn gamma_exact(&self, tau: T) -> Result<T> {
        Ok((-self.log_attenuation(tau)?.re).max(T::zero()))
    }

    /// Exact attenuation factor `R(τ) = exp(-Γ + iΦ)`.
    pub fn attenuation(&self, tau: T) -> Result<Complex<T>> {
        Ok(self.log_attenuation(tau)?.exp())
    }

    /// Classical-limit decoherence time from
    /// `1/τ_d² = (V/2π²)·(kT/ω)²·∫ dq q²λ_q²/ω_q²`.
    pub fn gamma_classical(&self) -> Result<T> {
        self.validate()?;
        self.check_classical_convergence()?;
        let f = |q: T| {
            let lam = self.coupling.eval(q);
            let wq = self.dispersion.eval(q);
            q * q * lam * lam / (wq * wq)
        };
        let quad = integrate_real(
            f,
            T::zero(),
            self.q_max,
            &QuadOptions {
                rel_tol: lit::<T>(1e-10),
                ..QuadOptions::default()
            },
        )?;
        let ratio = self.k_t / self.omega;
        let inv_td_sq = self.density_prefactor() * ratio * ratio * quad.value.re;
        if !(inv_td_sq > T::zero()) {
            return Err(Error::domain(
                "bath has no classical dephasing (zero coupling integral)",
            ));
        }
        Ok(inv_td_sq.sqrt().recip())
    }

    /// Classical-limit accumulated phase,
    /// `Φ(τ) = -τ·(V/2π²)·(kT/ω)·∫ dq q²λ_q/ω_q` — exactly linear in τ.
    pub fn phase_drift_classical(&self, tau: T) -> Result<T> {
        self.validate()?;
        self.check_classical_convergence()?;
        let f = |q: T| q * q * self.coupling.eval(q) / self.dispersion.eval(q);
        let quad = integrate_real(
            f,
            T::zero(),
            self.q_max,
            &QuadOptions {
                rel_tol: lit::<T>(1e-10),
                ..QuadOptions::default()
            },
        )?;
        Ok(-tau * self.density_prefactor() * (self.k_t / self.omega) * quad.value.re)
    }

    /// Reject power-law pairs whose classical integrand diverges at q → 0.
    fn check_classical_convergence(&self) -> Result<()> {
        if let (
            SpectralFn::PowerLawExp {
                exponent: s_disp, ..
            },
            SpectralFn::PowerLawExp {
                exponent: s_coup, ..
            },
        ) = (&self.dispersion, &self.coupling)
        {
            let power = lit::<T>(2.0) + lit::<T>(2.0) * *s_coup - lit::<T>(2.0) * *s_disp;
            if power <= -T::one() {
                return Err(Error::domain(
                    "classical bath integral diverges at q -> 0 for these exponents",
                ));
            }
        }
        Ok(())
    }

    /// Double `q_max` until one extra octave contributes less than 1e-10 of
    /// the classical coupling integral.
    pub fn with_auto_q_max(mut self) -> Result<Self> {
        self.validate()?;
        let integrand = |bath: &BathSpec<T>, a: T, b: T| -> Result<T> {
            let f = |q: T| {
                let lam = bath.coupling.eval(q);
                let wq = bath.dispersion.eval(q);
                q * q * lam * lam / (wq * wq)
            };
            Ok(integrate_real(f, a, b, &QuadOptions::default())?.value.re)
        };
        for _ in 0..60 {
            let base = integrand(&self, T::zero(), self.q_max)?;
            let octave = integrand(&self, self.q_max, self.q_max + self.q_max)?;
            if octave.abs() <= lit::<T>(1e-10) * base.abs() {
                return Ok(self);
            }
            self.q_max = self.q_max + self.q_max;
        }
        Err(Error::domain("could not find a converged q_max"))
    }
}

/// Anything that multiplies the closed solution by a dephasing factor.
pub trait DephasingEnvironment<T: Scalar> {
    /// `R(τ)` with `R(0) = 1` and `|R| ≤ 1`.
    fn attenuation(&self, tau: T) -> Result<Complex<T>>;
}

impl<T: Scalar> DephasingEnvironment<T> for DiscreteBath<T> {
    fn attenuation(&self, tau: T) -> Result<Complex<T>> {
        let mut r = Complex::new(T::one(), T::zero());
        for &(omega_q, lambda_q) in &self.modes {
            r = r * mode_dephasing_factor(self.hbar, self.k_t, self.omega, omega_q, lambda_q, tau)?;
        }
        Ok(r)
    }
}

impl<T: Scalar> DephasingEnvironment<T> for BathSpec<T> {
    fn attenuation(&self, tau: T) -> Result<Complex<T>> {
        BathSpec::attenuation(self, tau)
    }
}

/// Exact open-system trajectory `α(τ)·R(τ)` on a grid.
pub fn evolve_open<T: Scalar, B: DephasingEnvironment<T>>(
    params: &OscillatorParams<T>,
    bath: &B,
    grid: &TimeGrid<T>,
) -> Result<ComplexSeries<T>> {
    let mut values = Vec::with_capacity(grid.n_samples());
    for tau in grid.times() {
        values.push(alpha_closed_at(params, tau) * bath.attenuation(tau)?);
    }
    ComplexSeries::new(*grid, values)
}

/// Which mechanism sets the spectral linewidth.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WidthRegime {
    /// `τ_ħ < margin·τ_env`: the Ehrenfest collapse dominates the line.
    QuantumWidth,
    /// Otherwise the environment sets the width.
    EnvironmentWidth,
}

/// Outcome of [`crossover_analysis`], echoing both competing scales.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossoverReport<T> {
    pub dominant: WidthRegime,
    pub tau_hbar: T,
    pub tau_env: T,
    pub margin: T,
}

/// Default crossover margin.
pub const DEFAULT_CROSSOVER_MARGIN: f64 = 0.5;

/// Decide whether the quantum or the environment scale sets the linewidth.
///
/// `tau_env` is the relaxation time `τ_γ` or the decoherence time `τ_d`.
/// Ties go to the environment.
pub fn crossover_analysis<T: Scalar>(
    params: &OscillatorParams<T>,
    tau_env: T,
    margin: Option<T>,
) -> Result<CrossoverReport<T>> {
    if !(tau_env > T::zero()) {
        return Err(Error::domain("environment time-scale must be positive"));
    }
    let margin = margin.unwrap_or_else(|| lit::<T>(DEFAULT_CROSSOVER_MARGIN));
    if !(margin > T::zero()) {
        return Err(Error::domain("margin must be positive"));
    }
    let denom = lit::<T>(2.0) * params.mu_bar() * params.alpha_abs();
    if !(denom > T::zero()) {
        return Err(Error::domain("tau_hbar undefined for these parameters"));
    }
    let tau_hbar = denom.recip();
    let dominant = if tau_hbar < margin * tau_env {
        WidthRegime::QuantumWidth
    } else {
        WidthRegime::EnvironmentWidth
    };
    Ok(CrossoverReport {
        dominant,
        tau_hbar,
        tau_env,
        margin,
    })
}

/// Crossover against a relaxation rate γ (`τ_env = 1/γ`).
pub fn crossover_with_relaxation<T: Scalar>(
    params: &OscillatorParams<T>,
    gamma: T,
    margin: Option<T>,
) -> Result<CrossoverReport<T>> {
    if !(gamma > T::zero()) {
        return Err(Error::domain("gamma must be positive"));
    }
    crossover_analysis(params, gamma.recip(), margin)
}

/// Crossover against a continuum bath (`τ_env = τ_d`).
pub fn crossover_with_bath<T: Scalar>(
    params: &OscillatorParams<T>,
    bath: &BathSpec<T>,
    margin: Option<T>,
) -> Result<CrossoverReport<T>> {
    crossover_analysis(params, bath.gamma_classical()?, margin)
}
