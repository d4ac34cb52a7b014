//! Discrete Fourier analysis of observable records and linewidth metrology.
//!
//! The spectrum of a sampled record is defined by the plain Riemann sum
//!
//! ```text
//! A(ν_k) = Σ_j s_j · exp(-i ν_k τ_j) · dt,   ν_k = 2πk/(dt·n_pad)
//! ```
//!
//! (realized through an FFT of the zero-padded record). Two width
//! conventions are supported: the e⁻¹ level of the magnitude for
//! Gaussian-type lines, and the half-maximum of the carrier-aligned real
//! part for Lorentzian-type lines.

use num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::oscillator::TimeGrid;
use crate::scalar::{lit, Scalar};

/// Minimum record length accepted by [`dft`].
pub const MIN_SAMPLES: usize = 16;

/// Local maxima below this fraction of the spectrum peak are treated as
/// floor artifacts by [`detect_comb`].
const COMB_FLOOR_FRAC: f64 = 1e-3;

/// Optional analysis window applied before padding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Window {
    #[default]
    Rectangular,
    /// Hann taper, for leakage diagnostics only.
    Hann,
}

/// Discrete spectrum over `ν ∈ [0, 2π/dt)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult<T> {
    freqs: Vec<T>,
    amplitudes: Vec<Complex<T>>,
}

impl<T: Scalar> SpectrumResult<T> {
    pub fn freqs(&self) -> &[T] {
        &self.freqs
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn len(&self) -> usize {
        self.freqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.freqs.is_empty()
    }

    /// `|A(ν_k)|` for every bin.
    pub fn magnitude(&self) -> Vec<T> {
        self.amplitudes.iter().map(|a| a.norm()).collect()
    }

    /// Uniform bin spacing `Δν = 2π/(dt·n_pad)`.
    pub fn bin_spacing(&self) -> T {
        self.freqs[1] - self.freqs[0]
    }
}

/// Width conventions for [`measure_linewidth`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WidthConvention {
    /// Width at the `e⁻¹` level of the magnitude.
    EInverse,
    /// Width at half maximum of the carrier-phase-aligned real part.
    HalfMax,
}

/// A measured spectral line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinewidthMeasurement<T> {
    pub peak_freq: T,
    pub width: T,
    pub convention: WidthConvention,
    /// Whether the threshold crossings fell between bins.
    pub interpolated: bool,
}

/// Spectrum of a complex record.
pub fn dft<T: Scalar>(
    values: &[Complex<T>],
    grid: &TimeGrid<T>,
    zero_pad_factor: usize,
) -> Result<SpectrumResult<T>> {
    dft_with(values, grid, zero_pad_factor, Window::Rectangular)
}

/// Spectrum of a real record.
pub fn dft_real<T: Scalar>(
    values: &[T],
    grid: &TimeGrid<T>,
    zero_pad_factor: usize,
) -> Result<SpectrumResult<T>> {
    let complex: Vec<Complex<T>> = values.iter().map(|&v| Complex::new(v, T::zero())).collect();
    dft_with(&complex, grid, zero_pad_factor, Window::Rectangular)
}

/// Spectrum with an explicit window choice.
pub fn dft_with<T: Scalar>(
    values: &[Complex<T>],
    grid: &TimeGrid<T>,
    zero_pad_factor: usize,
    window: Window,
) -> Result<SpectrumResult<T>> {
    let n = values.len();
    if n != grid.n_samples() {
        return Err(Error::domain("series length must match the grid"));
    }
    if n < MIN_SAMPLES {
        return Err(Error::domain("record too short for spectral analysis"));
    }
    if zero_pad_factor == 0 {
        return Err(Error::domain("zero_pad_factor must be positive"));
    }
    let n_pad = n * zero_pad_factor;

    let mut buf: Vec<Complex<T>> = Vec::with_capacity(n_pad);
    match window {
        Window::Rectangular => buf.extend_from_slice(values),
        Window::Hann => {
            let denom = lit::<T>((n - 1) as f64);
            for (j, v) in values.iter().enumerate() {
                let w = lit::<T>(0.5)
                    * (T::one() - (lit::<T>(2.0) * T::PI() * lit::<T>(j as f64) / denom).cos());
                buf.push(*v * w);
            }
        }
    }
    buf.resize(n_pad, Complex::new(T::zero(), T::zero()));

    FftPlanner::<T>::new()
        .plan_fft_forward(n_pad)
        .process(&mut buf);

    let dt = grid.dt();
    let dnu = lit::<T>(2.0) * T::PI() / (dt * lit::<T>(n_pad as f64));
    let t0 = grid.t_start();
    let mut freqs = Vec::with_capacity(n_pad);
    let mut amplitudes = Vec::with_capacity(n_pad);
    for (k, coeff) in buf.into_iter().enumerate() {
        let nu = dnu * lit::<T>(k as f64);
        freqs.push(nu);
        // the FFT sums exp(-i ν_k j dt); restore the grid origin and scale
        amplitudes.push(coeff * Complex::cis(-nu * t0) * dt);
    }
    Ok(SpectrumResult { freqs, amplitudes })
}

/// Parabolic refinement of a discrete maximum: offset in bins, refined value.
fn parabolic_refine<T: Scalar>(curve: &[T], k: usize) -> (T, T) {
    let half = lit::<T>(0.5);
    let ym = curve[k - 1];
    let y0 = curve[k];
    let yp = curve[k + 1];
    let denom = ym - y0 - y0 + yp;
    if denom == T::zero() {
        return (T::zero(), y0);
    }
    let delta = (half * (ym - yp) / denom).max(-half).min(half);
    let value = y0 - lit::<T>(0.25) * (ym - yp) * delta;
    (delta, value)
}

fn argmax<T: Scalar>(curve: &[T]) -> usize {
    let mut k = 0;
    for (i, &v) in curve.iter().enumerate() {
        if v > curve[k] {
            k = i;
        }
    }
    k
}

/// Locate the dominant line and measure its width.
///
/// The peak is the first global maximum of the magnitude (for real records
/// the mirrored negative-frequency image ties; the lower-frequency copy
/// wins), refined by three-point parabolic interpolation. Threshold
/// crossings on either side are located by linear interpolation between
/// bins.
pub fn measure_linewidth<T: Scalar>(
    spec: &SpectrumResult<T>,
    convention: WidthConvention,
) -> Result<LinewidthMeasurement<T>> {
    let mag = spec.magnitude();
    let k_peak = argmax(&mag);
    if k_peak == 0 || k_peak + 1 == mag.len() {
        return Err(Error::NoPeak);
    }
    let (delta, _) = parabolic_refine(&mag, k_peak);
    let dnu = spec.bin_spacing();
    let peak_freq = spec.freqs()[k_peak] + delta * dnu;

    let (curve, threshold) = match convention {
        WidthConvention::EInverse => {
            let (_, refined) = parabolic_refine(&mag, k_peak);
            (mag, refined * (-T::one()).exp())
        }
        WidthConvention::HalfMax => {
            // rotate so the line is real and positive at its peak
            let rot = Complex::cis(-spec.amplitudes()[k_peak].arg());
            let re: Vec<T> = spec.amplitudes().iter().map(|a| (a * rot).re).collect();
            let (_, refined) = parabolic_refine(&re, k_peak);
            (re, refined * lit::<T>(0.5))
        }
    };

    let mut interpolated = false;
    let mut cross = |from: usize, step_down: bool| -> Result<T> {
        // walk outward from the peak until the curve drops below threshold
        let idx_iter: Box<dyn Iterator<Item = usize>> = if step_down {
            Box::new((0..from).rev())
        } else {
            Box::new(from + 1..curve.len())
        };
        let mut prev = from;
        for i in idx_iter {
            if curve[i] < threshold {
                let frac = (curve[prev] - threshold) / (curve[prev] - curve[i]);
                if frac != T::zero() && frac != T::one() {
                    interpolated = true;
                }
                let sign = if step_down { -T::one() } else { T::one() };
                return Ok(spec.freqs()[prev] + sign * frac * dnu);
            }
            prev = i;
        }
        Err(Error::NoCrossing {
            side: if step_down {
                "low-frequency"
            } else {
                "high-frequency"
            },
        })
    };

    let left = cross(k_peak, true)?;
    let right = cross(k_peak, false)?;
    Ok(LinewidthMeasurement {
        peak_freq,
        width: right - left,
        convention,
        interpolated,
    })
}

/// Find comb lines: local maxima whose spacing matches `expected_spacing`.
///
/// Returns the refined frequencies of maxima that sit within `tolerance`
/// of the expected spacing from at least one neighboring maximum; an empty
/// list when no periodic fine structure is resolved. Errors when the bin
/// spacing exceeds a quarter of the expected spacing.
pub fn detect_comb<T: Scalar>(
    spec: &SpectrumResult<T>,
    expected_spacing: T,
    tolerance: T,
) -> Result<Vec<T>> {
    if !(expected_spacing > T::zero()) || tolerance < T::zero() {
        return Err(Error::domain(
            "expected_spacing must be positive and tolerance non-negative",
        ));
    }
    let bin = spec.bin_spacing();
    let required = expected_spacing / lit::<T>(4.0);
    if bin > required {
        return Err(Error::ResolutionTooCoarse {
            bin_spacing: bin.to_f64().unwrap_or(f64::NAN),
            required: required.to_f64().unwrap_or(f64::NAN),
        });
    }

    let mag = spec.magnitude();
    let peak = mag.iter().copied().fold(T::zero(), T::max);
    let floor = peak * lit::<T>(COMB_FLOOR_FRAC);
    let mut maxima: Vec<(T, T)> = Vec::new(); // (freq, magnitude)
    for i in 1..mag.len() - 1 {
        if mag[i] > mag[i - 1] && mag[i] > mag[i + 1] && mag[i] >= floor {
            let (delta, value) = parabolic_refine(&mag, i);
            maxima.push((spec.freqs()[i] + delta * bin, value));
        }
    }
    // non-maximum suppression at half the expected spacing removes the
    // sidelobe maxima a finite record puts between the true lines
    maxima.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(std::cmp::Ordering::Equal));
    let window = expected_spacing * lit::<T>(0.5);
    let mut lines: Vec<T> = Vec::new();
    for &(nu, _) in &maxima {
        if lines.iter().all(|&kept| (kept - nu).abs() >= window) {
            lines.push(nu);
        }
    }
    lines.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    if lines.len() < 2 {
        return Ok(Vec::new());
    }
    let fits = |a: T, b: T| ((b - a).abs() - expected_spacing).abs() <= tolerance;
    let kept = lines
        .iter()
        .enumerate()
        .filter(|&(i, &nu)| {
            (i > 0 && fits(lines[i - 1], nu)) || (i + 1 < lines.len() && fits(nu, lines[i + 1]))
        })
        .map(|(_, &nu)| nu)
        .collect();
    Ok(kept)
}
