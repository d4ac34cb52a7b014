//! Relative-phase diffusion between two symmetrically split condensates.
//!
//! A condensate split coherently into two wells lands in the binomial
//! superposition of relative number states
//!
//! ```text
//! c_k = e^{iφk} √(binom(N,k)/2^N),   k = 0..N
//! ```
//!
//! Interactions give each number state a phase quadratic in the imbalance,
//! `c_k → c_k·exp(-iξ(k - N/2)²t)`, which spreads the distribution over the
//! discrete phase states `φ_p = 2πp/(N+1)`. The circular dispersion grows
//! as `Δφ²(t) = Δφ₀² + R²t²` with `Δφ₀² = 1/N` and rate `R = √N·ξ`; the
//! associated diffusion time `1/(2μ̄√N)` coincides with the Ehrenfest time
//! of a Kerr oscillator holding `N` quanta.

use num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::scalar::{lit, Scalar};

/// Largest supported atom number (binomial weights stay log-domain safe).
pub const MAX_ATOMS: u64 = 10_000;

/// Two-mode relative-number superposition.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitState<T> {
    atom_number: u64,
    amplitudes: Vec<Complex<T>>,
}

impl<T: Scalar> SplitState<T> {
    pub fn atom_number(&self) -> u64 {
        self.atom_number
    }

    /// Amplitudes `c_k`, `k = 0..=N`.
    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    /// `Σ|c_k|²` (1 up to rounding).
    pub fn norm_sqr(&self) -> T {
        self.amplitudes
            .iter()
            .fold(T::zero(), |acc, c| acc + c.norm_sqr())
    }
}

/// Discrete relative-phase distribution over `φ_p = 2πp/(N+1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseDistribution<T> {
    phases: Vec<T>,
    probabilities: Vec<T>,
}

impl<T: Scalar> PhaseDistribution<T> {
    pub fn phases(&self) -> &[T] {
        &self.phases
    }

    pub fn probabilities(&self) -> &[T] {
        &self.probabilities
    }
}

/// Binomial split state with relative phase `phi`.
///
/// Weights are built in the log domain and renormalized once, so the
/// normalization holds to machine precision for any admissible `N`.
pub fn build_split_state<T: Scalar>(n: u64, phi: T) -> Result<SplitState<T>> {
    if !(2..=MAX_ATOMS).contains(&n) {
        return Err(Error::domain(format!(
            "atom number must be even and in [2, {MAX_ATOMS}]"
        )));
    }
    if !n.is_multiple_of(2) {
        return Err(Error::domain("atom number must be even"));
    }
    if !phi.is_finite() {
        return Err(Error::domain("phi must be finite"));
    }
    let nn = n as usize;
    // running log-factorials: ln k! for k = 0..=N
    let mut ln_fact = Vec::with_capacity(nn + 1);
    let mut acc = T::zero();
    ln_fact.push(T::zero());
    for k in 1..=nn {
        acc = acc + lit::<T>(k as f64).ln();
        ln_fact.push(acc);
    }
    let n_ln2 = lit::<T>(n as f64) * lit::<T>(2.0).ln();
    let half = lit::<T>(0.5);
    let mut amplitudes: Vec<Complex<T>> = (0..=nn)
        .map(|k| {
            let ln_binom = ln_fact[nn] - ln_fact[k] - ln_fact[nn - k];
            let mag = (half * (ln_binom - n_ln2)).exp();
            Complex::from_polar(mag, phi * lit::<T>(k as f64))
        })
        .collect();
    let norm = amplitudes
        .iter()
        .fold(T::zero(), |acc, c| acc + c.norm_sqr())
        .sqrt();
    for c in &mut amplitudes {
        *c = *c / norm;
    }
    Ok(SplitState {
        atom_number: n,
        amplitudes,
    })
}

/// Apply the interaction phases `exp(-iξ(k - N/2)²t)`.
///
/// The overall single-well phase is dropped (it cancels in every phase
/// observable). Exactly norm-preserving; `ξt = 2π` is the identity since
/// `(k - N/2)²` is an integer for even `N`.
pub fn evolve_split_state<T: Scalar>(state: &SplitState<T>, xi: T, t: T) -> SplitState<T> {
    let half_n = lit::<T>(state.atom_number as f64) * lit::<T>(0.5);
    let amplitudes = state
        .amplitudes
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let m = lit::<T>(k as f64) - half_n;
            c * Complex::cis(-xi * m * m * t)
        })
        .collect();
    SplitState {
        atom_number: state.atom_number,
        amplitudes,
    }
}

/// Project onto the orthonormal phase states,
/// `P(φ_p) = |(1/√(N+1)) Σ_k e^{-iφ_p k} c_k|²`.
pub fn phase_distribution<T: Scalar>(state: &SplitState<T>) -> PhaseDistribution<T> {
    let n = state.atom_number as usize;
    let len = n + 1;
    let mut buf: Vec<Complex<T>> = state.amplitudes.clone();
    FftPlanner::<T>::new()
        .plan_fft_forward(len)
        .process(&mut buf);

    let two_pi = lit::<T>(2.0) * T::PI();
    let len_t = lit::<T>(len as f64);
    let half = (n / 2) as i64;
    let mut phases = Vec::with_capacity(len);
    let mut probabilities = Vec::with_capacity(len);
    for p in -half..=half {
        let idx = p.rem_euclid(len as i64) as usize;
        phases.push(two_pi * lit::<T>(p as f64) / len_t);
        probabilities.push(buf[idx].norm_sqr() / len_t);
    }
    PhaseDistribution {
        phases,
        probabilities,
    }
}

/// Circular variance of a phase distribution about its circular mean.
pub fn phase_dispersion<T: Scalar>(dist: &PhaseDistribution<T>) -> T {
    let resultant = dist
        .phases
        .iter()
        .zip(&dist.probabilities)
        .fold(Complex::new(T::zero(), T::zero()), |acc, (&phi, &p)| {
            acc + Complex::cis(phi) * p
        });
    let mean = if resultant.norm() > lit::<T>(1e-14) {
        resultant.arg()
    } else {
        T::zero()
    };
    let two_pi = lit::<T>(2.0) * T::PI();
    dist.phases
        .iter()
        .zip(&dist.probabilities)
        .fold(T::zero(), |acc, (&phi, &p)| {
            // wrap the deviation into (−π, π]
            let mut d = phi - mean;
            while d > T::PI() {
                d = d - two_pi;
            }
            while d <= -T::PI() {
                d = d + two_pi;
            }
            acc + p * d * d
        })
}

/// Phase-diffusion time `1/(2μ̄√N)`.
///
/// Algebraically identical to the Ehrenfest time of a Kerr oscillator with
/// `|α|² = N`.
pub fn diffusion_time<T: Scalar>(mu_bar: T, n: T) -> Result<T> {
    if !(mu_bar > T::zero()) || !(n > T::zero()) {
        return Err(Error::domain("mu_bar and N must be positive"));
    }
    Ok((lit::<T>(2.0) * mu_bar * n.sqrt()).recip())
}

/// Predicted spread and rate for a number-squeezed split.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezedPrediction<T> {
    /// Initial phase dispersion `s/N`.
    pub delta_phi0_sq: T,
    /// Diffusion rate `s·√N·ξ`.
    pub rate: T,
}

/// Scaling predictions for a squeezed initial state (`s = 1` is coherent).
pub fn squeezed_variant<T: Scalar>(n: T, s: T, xi: T) -> Result<SqueezedPrediction<T>> {
    if !(s >= T::one()) {
        return Err(Error::domain("squeezing parameter must be at least 1"));
    }
    if !(n > T::zero()) {
        return Err(Error::domain("N must be positive"));
    }
    Ok(SqueezedPrediction {
        delta_phi0_sq: s / n,
        rate: s * n.sqrt() * xi,
    })
}

/// Least-squares fit of `Δφ²` against `t²`: returns `(slope, intercept)`.
pub fn fit_dispersion_growth<T: Scalar>(times: &[T], dispersions: &[T]) -> Result<(T, T)> {
    if times.len() != dispersions.len() || times.len() < 2 {
        return Err(Error::domain("need matching series with at least 2 points"));
    }
    let n = lit::<T>(times.len() as f64);
    let xs: Vec<T> = times.iter().map(|&t| t * t).collect();
    let sx = xs.iter().fold(T::zero(), |a, &x| a + x);
    let sy = dispersions.iter().fold(T::zero(), |a, &y| a + y);
    let sxx = xs.iter().fold(T::zero(), |a, &x| a + x * x);
    let sxy = xs
        .iter()
        .zip(dispersions)
        .fold(T::zero(), |a, (&x, &y)| a + x * y);
    let denom = n * sxx - sx * sx;
    if denom == T::zero() {
        return Err(Error::domain("degenerate regression abscissae"));
    }
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    Ok((slope, intercept))
}
