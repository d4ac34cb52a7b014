//! Globally adaptive Gauss–Kronrod (G7, K15) quadrature.
//!
//! Complex-valued integrands on a finite interval; the interval with the
//! largest local error estimate is bisected until the summed estimate meets
//! the tolerance. Endpoints are never evaluated (all Kronrod abscissae are
//! interior), which is what lets integrands with a benign endpoint
//! singularity like `q² ln q` converge.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{lit, Scalar};

/// Kronrod abscissae (positive half, descending; last entry is the center).
const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
];

/// Kronrod weights matching `XGK`.
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];

/// Gauss weights for the embedded 7-point rule (abscissae XGK[1,3,5,7]).
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

/// Tolerances and budget for [`integrate_complex`].
#[derive(Debug, Clone, Copy)]
pub struct QuadOptions<T> {
    pub rel_tol: T,
    pub abs_tol: T,
    /// Number of equal panels the interval starts from.
    pub initial_panels: usize,
    /// Subdivision budget; exceeding it raises [`Error::QuadratureFail`].
    pub max_intervals: usize,
}

impl<T: Scalar> Default for QuadOptions<T> {
    fn default() -> Self {
        QuadOptions {
            rel_tol: lit::<T>(1e-8),
            abs_tol: T::zero(),
            initial_panels: 8,
            max_intervals: 4096,
        }
    }
}

/// Converged integral value with its error estimate.
#[derive(Debug, Clone, Copy)]
pub struct Quadrature<T> {
    pub value: Complex<T>,
    pub error_estimate: T,
    pub evaluations: usize,
}

struct Panel<T> {
    a: T,
    b: T,
    value: Complex<T>,
    error: T,
}

fn gk15<T: Scalar>(f: &mut impl FnMut(T) -> Complex<T>, a: T, b: T) -> (Complex<T>, T) {
    let half = lit::<T>(0.5);
    let center = (a + b) * half;
    let hw = (b - a) * half;
    let mut kronrod = Complex::new(T::zero(), T::zero());
    let mut gauss = Complex::new(T::zero(), T::zero());
    for (j, (&x, &wk)) in XGK.iter().zip(WGK.iter()).enumerate() {
        let dx = hw * lit::<T>(x);
        let sum = if j == 7 {
            f(center)
        } else {
            f(center - dx) + f(center + dx)
        };
        kronrod = kronrod + sum * lit::<T>(wk);
        if j % 2 == 1 {
            gauss = gauss + sum * lit::<T>(WG[j / 2]);
        }
    }
    let value = kronrod * hw;
    let error = (kronrod - gauss).norm() * hw.abs();
    (value, error)
}

/// Adaptively integrate `f` over `[a, b]`.
///
/// Converges when the summed error estimate drops below
/// `max(abs_tol, rel_tol·|value|)`.
pub fn integrate_complex<T: Scalar>(
    mut f: impl FnMut(T) -> Complex<T>,
    a: T,
    b: T,
    opts: &QuadOptions<T>,
) -> Result<Quadrature<T>> {
    if !(b > a) || !a.is_finite() || !b.is_finite() {
        return Err(Error::domain(
            "integration bounds must be finite with b > a",
        ));
    }
    if opts.initial_panels == 0 || opts.max_intervals < opts.initial_panels {
        return Err(Error::domain("invalid quadrature budget"));
    }

    let mut evals = 0usize;
    let mut eval = |x: T| {
        evals += 1;
        f(x)
    };

    let n0 = opts.initial_panels;
    let width = (b - a) / lit::<T>(n0 as f64);
    let mut panels: Vec<Panel<T>> = Vec::with_capacity(n0 * 2);
    for i in 0..n0 {
        let pa = a + width * lit::<T>(i as f64);
        let pb = if i + 1 == n0 {
            b
        } else {
            a + width * lit::<T>((i + 1) as f64)
        };
        let (value, error) = gk15(&mut eval, pa, pb);
        panels.push(Panel {
            a: pa,
            b: pb,
            value,
            error,
        });
    }

    loop {
        let total: Complex<T> = panels
            .iter()
            .fold(Complex::new(T::zero(), T::zero()), |acc, p| acc + p.value);
        let total_err = panels.iter().fold(T::zero(), |acc, p| acc + p.error);
        let target = opts.abs_tol.max(opts.rel_tol * total.norm());
        if total_err <= target {
            return Ok(Quadrature {
                value: total,
                error_estimate: total_err,
                evaluations: evals,
            });
        }
        if panels.len() >= opts.max_intervals {
            return Err(Error::QuadratureFail {
                estimate: total.norm().to_f64().unwrap_or(f64::NAN),
                error_estimate: total_err.to_f64().unwrap_or(f64::NAN),
            });
        }
        // bisect the worst panel (leftmost on ties, for determinism)
        let mut worst = 0;
        for (i, p) in panels.iter().enumerate() {
            if p.error > panels[worst].error {
                worst = i;
            }
        }
        let Panel { a: pa, b: pb, .. } = panels[worst];
        let mid = (pa + pb) * lit::<T>(0.5);
        if mid <= pa || mid >= pb {
            // interval at floating-point resolution; cannot improve further
            return Err(Error::QuadratureFail {
                estimate: total.norm().to_f64().unwrap_or(f64::NAN),
                error_estimate: total_err.to_f64().unwrap_or(f64::NAN),
            });
        }
        let (lv, le) = gk15(&mut eval, pa, mid);
        let (rv, re) = gk15(&mut eval, mid, pb);
        panels[worst] = Panel {
            a: pa,
            b: mid,
            value: lv,
            error: le,
        };
        panels.push(Panel {
            a: mid,
            b: pb,
            value: rv,
            error: re,
        });
    }
}

/// Real-valued convenience wrapper around [`integrate_complex`].
pub fn integrate_real<T: Scalar>(
    mut f: impl FnMut(T) -> T,
    a: T,
    b: T,
    opts: &QuadOptions<T>,
) -> Result<Quadrature<T>> {
    integrate_complex(|x| Complex::new(f(x), T::zero()), a, b, opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn value(q: &Quadrature<f64>) -> f64 {
        q.value.re
    }

    #[test]
    fn polynomial_is_exact() {
        let q = integrate_real(|x| x * x, 0.0, 1.0, &QuadOptions::default()).unwrap();
        assert!((value(&q) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn oscillatory_integrand() {
        let q =
            integrate_real(|x: f64| (10.0 * x).sin(), 0.0, 2.0, &QuadOptions::default()).unwrap();
        let exact = (1.0 - (20.0f64).cos()) / 10.0;
        assert!((value(&q) - exact).abs() < 1e-12);
    }

    #[test]
    fn endpoint_log_singularity() {
        // ∫₀¹ x² ln x dx = −1/9; integrand vanishes at the endpoint
        let q = integrate_real(
            |x: f64| x * x * x.ln(),
            0.0,
            1.0,
            &QuadOptions {
                rel_tol: 1e-10,
                ..QuadOptions::default()
            },
        )
        .unwrap();
        assert!((value(&q) + 1.0 / 9.0).abs() < 1e-10);
    }

    #[test]
    fn complex_integrand() {
        // ∫₀^π e^{ix} dx = 2i
        let q = integrate_complex(
            Complex::cis,
            0.0,
            std::f64::consts::PI,
            &QuadOptions::default(),
        )
        .unwrap();
        assert!((q.value - Complex::new(0.0, 2.0)).norm() < 1e-12);
    }

    #[test]
    fn jump_discontinuity_converges() {
        let q = integrate_real(
            |x| if x < 1.0 { 0.0 } else { x * x },
            0.0,
            2.0,
            &QuadOptions {
                rel_tol: 1e-9,
                max_intervals: 8192,
                ..QuadOptions::default()
            },
        )
        .unwrap();
        assert!((value(&q) - 7.0 / 3.0).abs() < 1e-8 * (7.0 / 3.0));
    }

    #[test]
    fn budget_exhaustion_reports_failure() {
        let r = integrate_real(
            |x: f64| (1.0 / (x - 0.3141).abs()).min(1e12),
            0.0,
            1.0,
            &QuadOptions {
                rel_tol: 1e-13,
                initial_panels: 4,
                max_intervals: 8,
                ..QuadOptions::default()
            },
        );
        assert!(matches!(r, Err(Error::QuadratureFail { .. })));
    }

    #[test]
    fn zero_integrand_converges_immediately() {
        let q = integrate_real(|_| 0.0, 0.0, 5.0, &QuadOptions::default()).unwrap();
        assert_eq!(value(&q), 0.0);
        assert_eq!(q.error_estimate, 0.0);
    }

    #[test]
    fn invalid_bounds_rejected() {
        assert!(integrate_real(|x| x, 1.0, 1.0, &QuadOptions::default()).is_err());
        assert!(integrate_real(|x| x, 2.0, 1.0, &QuadOptions::default()).is_err());
    }
}
