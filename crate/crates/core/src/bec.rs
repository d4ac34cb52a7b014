//! Single-mode condensate on a one-dimensional torus.
//!
//! A repulsive condensate confined to a ring, restricted to one momentum
//! mode `k`, evolves its coherent-state amplitude exactly as
//!
//! ```text
//! α_k(τ) = exp{-ik²τ - (1 - e^{-iετ})|α_k|²}·α_k,   τ = ħt/2mR²
//! ```
//!
//! with the interaction strength `ε = 4Ra/S` fixed by the trap geometry and
//! scattering length. Up to a linear-frequency shift this is the Kerr
//! evolution with `μ̄ = ε/2`, so the collapse and revival scales are
//! `τ_ħ = 1/(√N·|ε|)` and `τ_R = 2π/|ε|`. The mean-field (constant-modulus)
//! rotation and CGS-unit laboratory estimates live here as well.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::oscillator::{ComplexSeries, TimeGrid};
use crate::scalar::{lit, Scalar};

/// ħ in erg·s.
pub const HBAR_ERG_S: f64 = 1.0546e-27;

/// Mass of ⁸⁷Rb (86.909 u) in grams.
pub const RB87_MASS_G: f64 = 1.443e-22;

/// Toroidal-trap condensate in CGS units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BecTorusParams<T> {
    pub radius_cm: T,
    pub cross_section_cm2: T,
    pub scattering_length_cm: T,
    pub atom_mass_g: T,
    pub atom_number: u64,
    pub mode_index: i32,
}

impl<T: Scalar> BecTorusParams<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.radius_cm > T::zero())
            || !(self.cross_section_cm2 > T::zero())
            || !(self.atom_mass_g > T::zero())
        {
            return Err(Error::domain("R, S, and m must be positive"));
        }
        if !(self.scattering_length_cm > T::zero()) {
            return Err(Error::domain(
                "scattering length must be positive (repulsive interactions only)",
            ));
        }
        if self.atom_number < 1 {
            return Err(Error::domain("atom number must be at least 1"));
        }
        Ok(())
    }
}

/// Dimensionless interaction strength `ε = 4Ra/S`.
pub fn epsilon_param<T: Scalar>(p: &BecTorusParams<T>) -> Result<T> {
    p.validate()?;
    Ok(lit::<T>(4.0) * p.radius_cm * p.scattering_length_cm / p.cross_section_cm2)
}

/// Coherent single-mode state with all `N` atoms in one momentum mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BecModeState<T> {
    alpha_k: Complex<T>,
    epsilon_int: T,
    atom_number: u64,
}

impl<T: Scalar> BecModeState<T> {
    pub fn new(atom_number: u64, phase: T, epsilon_int: T) -> Result<Self> {
        if atom_number < 1 {
            return Err(Error::domain("atom number must be at least 1"));
        }
        if !epsilon_int.is_finite() || !phase.is_finite() {
            return Err(Error::domain("epsilon and phase must be finite"));
        }
        let amp = lit::<T>(atom_number as f64).sqrt();
        Ok(BecModeState {
            alpha_k: Complex::from_polar(amp, phase),
            epsilon_int,
            atom_number,
        })
    }

    pub fn from_torus(p: &BecTorusParams<T>, phase: T) -> Result<Self> {
        Self::new(p.atom_number, phase, epsilon_param(p)?)
    }

    pub fn alpha_k(&self) -> Complex<T> {
        self.alpha_k
    }

    pub fn epsilon_int(&self) -> T {
        self.epsilon_int
    }

    pub fn atom_number(&self) -> u64 {
        self.atom_number
    }
}

fn single_mode_value<T: Scalar>(alpha: Complex<T>, epsilon: T, k: i32, tau: T) -> Complex<T> {
    let a2 = alpha.norm_sqr();
    let ksq = lit::<T>((k as f64) * (k as f64));
    let w = epsilon * tau;
    // -(1 - e^{-iετ})|α|² = |α|²(cos ετ - 1) - i|α|² sin ετ, real part ≤ 0
    let re = (a2 * (w.cos() - T::one())).min(T::zero());
    let im = -(a2 * w.sin()) - ksq * tau;
    alpha * Complex::new(re, im).exp()
}

/// Exact single-mode amplitude at one time.
pub fn single_mode_at<T: Scalar>(state: &BecModeState<T>, k: i32, tau: T) -> Complex<T> {
    single_mode_value(state.alpha_k, state.epsilon_int, k, tau)
}

/// Exact single-mode trajectory on a grid.
pub fn evolve_single_mode<T: Scalar>(
    state: &BecModeState<T>,
    k: i32,
    grid: &TimeGrid<T>,
) -> ComplexSeries<T> {
    ComplexSeries::from_fn(*grid, |tau| single_mode_at(state, k, tau))
}

/// Mean-field amplitude `exp{-i(k² + ε|α|²)τ}·α` at one time.
pub fn gp_at<T: Scalar>(state: &BecModeState<T>, k: i32, tau: T) -> Complex<T> {
    let ksq = lit::<T>((k as f64) * (k as f64));
    let freq = ksq + state.epsilon_int * state.alpha_k.norm_sqr();
    state.alpha_k * Complex::cis(-freq * tau)
}

/// Constant-modulus mean-field trajectory on a grid.
pub fn evolve_gp<T: Scalar>(
    state: &BecModeState<T>,
    k: i32,
    grid: &TimeGrid<T>,
) -> ComplexSeries<T> {
    ComplexSeries::from_fn(*grid, |tau| gp_at(state, k, tau))
}

/// Collapse and revival scales `(τ_ħ, τ_R) = (1/(√N|ε|), 2π/|ε|)`.
pub fn bec_timescales<T: Scalar>(state: &BecModeState<T>) -> Result<(T, T)> {
    let eps = state.epsilon_int.abs();
    if eps == T::zero() {
        return Err(Error::domain(
            "epsilon = 0: non-interacting mode never collapses",
        ));
    }
    let tau_hbar = (state.alpha_k.norm() * eps).recip();
    let tau_r = lit::<T>(2.0) * T::PI() / eps;
    Ok((tau_hbar, tau_r))
}

/// Laboratory-unit collapse time and spectral bandwidth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BecPhysicalEstimate<T> {
    /// `t_ħ = mRS/(2ħ√N·a)` in seconds.
    pub t_hbar_seconds: T,
    /// `Δν = 2√2/t_ħ` in Hz.
    pub bandwidth_hz: T,
}

/// Physical-unit estimate of the quantum collapse time and its bandwidth.
pub fn t_hbar_physical<T: Scalar>(p: &BecTorusParams<T>) -> Result<BecPhysicalEstimate<T>> {
    p.validate()?;
    let hbar = lit::<T>(HBAR_ERG_S);
    let sqrt_n = lit::<T>(p.atom_number as f64).sqrt();
    let t_hbar = p.atom_mass_g * p.radius_cm * p.cross_section_cm2
        / (lit::<T>(2.0) * hbar * sqrt_n * p.scattering_length_cm);
    let bandwidth = lit::<T>(2.0) * lit::<T>(2.0).sqrt() / t_hbar;
    Ok(BecPhysicalEstimate {
        t_hbar_seconds: t_hbar,
        bandwidth_hz: bandwidth,
    })
}

/// Residual of the action-angle transport equation on the exact solution.
///
/// With `α_k = √N e^{-iθ}`, the solution satisfies
/// `∂α/∂τ = (k² − ε/2 + εN)·∂α/∂θ + εN·∂²α/∂N∂θ`. The θ-derivatives are
/// analytic (`∂α/∂θ = -iα`); the N-derivative is a central difference with
/// step `h`, so the residual is `O(h²)`.
pub fn bec_pde_residual<T: Scalar>(state: &BecModeState<T>, k: i32, tau: T, h: T) -> Result<T> {
    if !(h > T::zero()) || !h.is_finite() {
        return Err(Error::domain("finite-difference step h must be positive"));
    }
    let n = lit::<T>(state.atom_number as f64);
    if h >= n {
        return Err(Error::domain("step h must be smaller than the atom number"));
    }
    let eps = state.epsilon_int;
    let theta = -state.alpha_k.arg();
    let ksq = lit::<T>((k as f64) * (k as f64));
    let two = lit::<T>(2.0);
    let i = Complex::<T>::i();

    let at_n = |nn: T| -> Complex<T> {
        let alpha = Complex::from_polar(nn.sqrt(), -theta);
        single_mode_value(alpha, eps, k, tau)
    };

    let v0 = at_n(n);
    let dn_fd = (at_n(n + h) - at_n(n - h)) / (two * h);

    // ∂α/∂τ = α·(-ik² - iεN e^{-iετ})
    let lhs = v0
        * (Complex::new(T::zero(), -ksq)
            + Complex::cis(-eps * tau) * Complex::new(T::zero(), -(eps * n)));
    // (k² − ε/2 + εN)(-iα) + εN·(-i ∂α/∂N)
    let coeff = ksq - eps / two + eps * n;
    let rhs = (v0 * coeff + dn_fd * (eps * n)) * (-i);

    Ok((lhs - rhs).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oscillator::{alpha_closed_at, OscillatorParams};
    use std::f64::consts::PI;

    type C64 = Complex<f64>;

    fn rubidium() -> BecTorusParams<f64> {
        BecTorusParams {
            radius_cm: 5e-4,
            cross_section_cm2: 1e-8,
            scattering_length_cm: 2.5e-6,
            atom_mass_g: RB87_MASS_G,
            atom_number: 1000,
            mode_index: 0,
        }
    }

    fn fig2_like_state() -> BecModeState<f64> {
        BecModeState::new(900, 0.0, 1.0 / 900.0).unwrap()
    }

    #[test]
    fn geometry_sets_epsilon() {
        let p = rubidium();
        let eps = epsilon_param(&p).unwrap();
        assert!((eps - 0.5).abs() < 1e-15);

        let mut doubled_a = p;
        doubled_a.scattering_length_cm *= 2.0;
        assert!((epsilon_param(&doubled_a).unwrap() - 1.0).abs() < 1e-15);

        let mut doubled_s = p;
        doubled_s.cross_section_cm2 *= 2.0;
        assert!((epsilon_param(&doubled_s).unwrap() - 0.25).abs() < 1e-15);

        let mut attractive = p;
        attractive.scattering_length_cm = -2.5e-6;
        assert!(epsilon_param(&attractive).is_err());
    }

    #[test]
    fn state_construction() {
        let s = fig2_like_state();
        assert!((s.alpha_k().norm_sqr() - 900.0).abs() < 1e-9 * 900.0);
        let p = rubidium();
        let s2 = BecModeState::from_torus(&p, 0.3).unwrap();
        assert!((s2.alpha_k().norm_sqr() - 1000.0).abs() < 1e-9 * 1000.0);
        assert!(BecModeState::<f64>::new(0, 0.0, 0.5).is_err());
    }

    #[test]
    fn non_interacting_mode_rotates() {
        let s = BecModeState::new(16, 0.0, 0.0).unwrap();
        let v = single_mode_at(&s, 2, 0.77);
        let expect = s.alpha_k() * C64::cis(-4.0 * 0.77);
        assert!((v - expect).norm() < 1e-13);
        // matches the mean-field solution exactly at ε = 0
        assert!((v - gp_at(&s, 2, 0.77)).norm() < 1e-13);
    }

    #[test]
    fn full_revival_at_tau_r() {
        let s = fig2_like_state();
        let (_, tau_r) = bec_timescales(&s).unwrap();
        assert!((tau_r - 1800.0 * PI).abs() < 1e-9);
        let v = single_mode_at(&s, 3, tau_r);
        let expect = s.alpha_k() * C64::cis(-9.0 * tau_r);
        assert!((v - expect).norm() < 1e-9 * s.alpha_k().norm());
        assert!((v.norm() - s.alpha_k().norm()).abs() < 1e-10 * s.alpha_k().norm());
    }

    #[test]
    fn modulus_bounded_by_sqrt_n() {
        let s = fig2_like_state();
        let grid = TimeGrid::new(0.0, 2.3, 700).unwrap();
        let series = evolve_single_mode(&s, 1, &grid);
        let cap = s.alpha_k().norm();
        for v in series.values() {
            assert!(v.norm() <= cap * (1.0 + 1e-12));
        }
    }

    #[test]
    fn maps_onto_kerr_evolution_at_k_zero() {
        // μ̄ = ε/2 with the linear frequency (1 + μ̄) compensated
        let s = fig2_like_state();
        let eps = s.epsilon_int();
        let mu_bar = eps / 2.0;
        let osc = OscillatorParams::explicit(mu_bar, mu_bar, s.alpha_k()).unwrap();
        let grid = TimeGrid::new(0.0, 0.37, 200).unwrap();
        let cap = s.alpha_k().norm();
        for tau in grid.times() {
            let bec = single_mode_at(&s, 0, tau);
            let kerr = alpha_closed_at(&osc, tau) * C64::cis((1.0 + mu_bar) * tau);
            assert!((bec - kerr).norm() < 1e-12 * cap, "tau = {tau}");
        }
        // spot-check at the revival as well
        let (_, tau_r) = bec_timescales(&s).unwrap();
        let bec = single_mode_at(&s, 0, tau_r);
        let kerr = alpha_closed_at(&osc, tau_r) * C64::cis((1.0 + mu_bar) * tau_r);
        assert!((bec - kerr).norm() < 1e-10 * cap);
    }

    #[test]
    fn gp_modulus_is_constant() {
        let s = fig2_like_state();
        let grid = TimeGrid::new(0.0, 5.1, 300).unwrap();
        let series = evolve_gp(&s, 2, &grid);
        let cap = s.alpha_k().norm();
        for v in series.values() {
            assert!((v.norm() - cap).abs() < 1e-12 * cap);
        }
    }

    #[test]
    fn gp_is_the_large_n_limit() {
        // ε → 0, N → ∞ with εN fixed: the exact solution approaches GP
        let t_max = 2.0;
        let mut prev_gap = f64::INFINITY;
        for (n, eps) in [(100u64, 1e-2), (400, 2.5e-3), (1600, 6.25e-4)] {
            let s = BecModeState::new(n, 0.0, eps).unwrap();
            let grid = TimeGrid::new(0.0, t_max / 100.0, 101).unwrap();
            let exact = evolve_single_mode(&s, 1, &grid);
            let gp = evolve_gp(&s, 1, &grid);
            let gap = exact
                .values()
                .iter()
                .zip(gp.values())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0f64, f64::max)
                / s.alpha_k().norm();
            assert!(gap < prev_gap, "gap {gap} did not shrink");
            prev_gap = gap;
        }
        assert!(prev_gap < 2e-2);
    }

    #[test]
    fn timescale_formulas() {
        let s = fig2_like_state();
        let (tau_hbar, tau_r) = bec_timescales(&s).unwrap();
        assert!((tau_hbar - 30.0).abs() < 1e-10);
        assert!((tau_r - 1800.0 * PI).abs() < 1e-9);

        let doubled = BecModeState::<f64>::new(900, 0.0, 2.0 / 900.0).unwrap();
        let (th2, tr2) = bec_timescales(&doubled).unwrap();
        assert!((th2 - 15.0).abs() < 1e-10 && (tr2 - 900.0 * PI).abs() < 1e-9);

        let quad_n = BecModeState::<f64>::new(3600, 0.0, 1.0 / 900.0).unwrap();
        let (th4, tr4) = bec_timescales(&quad_n).unwrap();
        assert!((th4 - 15.0).abs() < 1e-10 && (tr4 - 1800.0 * PI).abs() < 1e-9);

        assert!(bec_timescales(&BecModeState::<f64>::new(16, 0.0, 0.0).unwrap()).is_err());
    }

    #[test]
    fn rubidium_estimate_lands_in_the_millisecond_range() {
        let est = t_hbar_physical(&rubidium()).unwrap();
        let ms = est.t_hbar_seconds * 1e3;
        assert!((3.9..=4.8).contains(&ms), "t_hbar = {ms} ms");
        let khz = est.bandwidth_hz / 1e3;
        assert!((0.5..=0.75).contains(&khz), "bandwidth = {khz} kHz");

        // N → 4N halves the collapse time
        let mut big = rubidium();
        big.atom_number = 4000;
        let est4 = t_hbar_physical(&big).unwrap();
        assert!((est4.t_hbar_seconds - est.t_hbar_seconds / 2.0).abs() < 1e-12);
    }

    #[test]
    fn transport_residual_vanishes_without_interaction() {
        let s = BecModeState::new(100, 0.0, 0.0).unwrap();
        let r = bec_pde_residual(&s, 2, 5.0, 1e-3).unwrap();
        assert!(r < 1e-12, "residual {r:e}");
    }

    #[test]
    fn transport_residual_thresholds() {
        let s = fig2_like_state();
        let sqrt_n = 30.0;
        let r = bec_pde_residual(&s, 1, 10.0, 1e-3).unwrap();
        assert!(r < 1e-5 * sqrt_n, "residual {r:e}");
        let r4 = bec_pde_residual(&s, 1, 10.0, 1e-4).unwrap();
        assert!(r4 < 1e-5 * sqrt_n, "residual {r4:e}");

        // revival point is regular too
        let (_, tau_r) = bec_timescales(&s).unwrap();
        let r_rev = bec_pde_residual(&s, 0, tau_r, 1e-3).unwrap();
        assert!(r_rev < 1e-5 * sqrt_n, "revival residual {r_rev:e}");
    }

    #[test]
    fn transport_residual_is_second_order() {
        let s = fig2_like_state();
        let h = 16.0;
        let r1 = bec_pde_residual(&s, 1, 10.0, h).unwrap();
        let r2 = bec_pde_residual(&s, 1, 10.0, h / 2.0).unwrap();
        let ratio = r1 / r2;
        assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}");
        assert!(bec_pde_residual(&s, 1, 10.0, 0.0).is_err());
        assert!(bec_pde_residual(&s, 1, 10.0, 1000.0).is_err());
    }
}
