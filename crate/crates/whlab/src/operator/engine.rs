//! Spectral engine on a line grid.
//!
//! The Fourier transform convention is `(F f)(xi) = integral f(x) e^{+i xi x} dx`,
//! so the discrete forward transform rides on the *inverse* FFT kernel:
//!
//! ```text
//! (F f)(xi_k) = h e^{i xi_k x_0} sum_j f_j e^{+2 pi i j k / M},
//! xi_k = 2 pi s(k) / (M h),  s(k) = k - M [k >= M/2]   (DFT frequencies)
//! ```
//!
//! with `x_0` the first cell center. Multiplier operators `W0(a)` never need
//! the boundary phases (they cancel), so they cost two raw FFTs and one
//! scaling. The convolution-side sign operator `J = F sgn(x) F^{-1}` is the
//! Cauchy singular operator in the frequency variable; cell centers never sit
//! at `x = 0`, so `sgn(x_j)` is unambiguous and `J^2 = I` holds to rounding.

use crate::grid::GridDomain;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

/// FFT plans and grid data for one line domain.
pub struct Spectral {
    domain: GridDomain,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    /// `xi_k` in raw DFT order.
    xi: Vec<f64>,
    /// `sgn(x_j)` at cell centers.
    sign_x: Vec<f64>,
}

impl Spectral {
    /// Builds the engine for a [`GridDomain::Line`].
    pub fn new(domain: GridDomain) -> Spectral {
        assert!(
            matches!(domain, GridDomain::Line { .. }),
            "spectral engine requires a line grid"
        );
        let m = domain.n();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(m);
        let inverse = planner.plan_fft_inverse(m);
        let h = domain.h();
        let xi = (0..m)
            .map(|k| {
                let s = if k < m / 2 {
                    k as f64
                } else {
                    k as f64 - m as f64
                };
                std::f64::consts::TAU * s / (m as f64 * h)
            })
            .collect();
        let sign_x = (0..m).map(|j| domain.center(j).signum()).collect();
        Spectral {
            domain,
            forward,
            inverse,
            xi,
            sign_x,
        }
    }

    pub fn domain(&self) -> GridDomain {
        self.domain
    }

    pub fn len(&self) -> usize {
        self.domain.n()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Frequency grid in raw DFT order.
    pub fn xi(&self) -> &[f64] {
        &self.xi
    }

    /// Largest resolved frequency `pi / h`.
    pub fn xi_max(&self) -> f64 {
        std::f64::consts::PI / self.domain.h()
    }

    /// Symbol samples `a(xi_k)` in raw DFT order.
    pub fn multiplier(&self, a: &crate::symbol::Symbol) -> Vec<Complex64> {
        self.xi.iter().map(|&x| a.at(x)).collect()
    }

    fn run(&self, plan: &Arc<dyn Fft<f64>>, buf: &mut [Complex64]) {
        let mut scratch = vec![Complex64::ZERO; plan.get_inplace_scratch_len()];
        plan.process_with_scratch(buf, &mut scratch);
    }

    /// Raw spectrum `s_k = sum_j f_j e^{+2 pi i jk/M}` (no scaling).
    pub fn to_spectrum(&self, buf: &mut [Complex64]) {
        self.run(&self.inverse, buf);
    }

    /// Inverse of [`Spectral::to_spectrum`] including the `1/M` scale.
    pub fn to_space(&self, buf: &mut [Complex64]) {
        self.run(&self.forward, buf);
        let scale = 1.0 / self.len() as f64;
        for v in buf.iter_mut() {
            *v *= scale;
        }
    }

    /// `W0(a) f` for a precomputed multiplier, in place.
    pub fn apply_multiplier(&self, mult: &[Complex64], buf: &mut [Complex64]) {
        self.to_spectrum(buf);
        for (v, m) in buf.iter_mut().zip(mult) {
            *v *= m;
        }
        self.to_space(buf);
    }

    /// The Riesz-type projection `P = W0(chi_{xi <= 0})`: keeps the closed
    /// negative frequency half-axis, zeroes the rest. The `xi = 0` bin
    /// belongs to the kept half, making `P` exactly idempotent.
    pub fn apply_projection(&self, buf: &mut [Complex64]) {
        self.to_spectrum(buf);
        for (v, &x) in buf.iter_mut().zip(&self.xi) {
            if x > 0.0 {
                *v = Complex64::ZERO;
            }
        }
        self.to_space(buf);
    }

    /// Cauchy singular operator on the line: multiplier `-sgn(xi)` with the
    /// `xi = 0` bin counted as negative, so `S = 2P - I` exactly.
    pub fn apply_cauchy(&self, buf: &mut [Complex64]) {
        self.to_spectrum(buf);
        for (v, &x) in buf.iter_mut().zip(&self.xi) {
            if x > 0.0 {
                *v = -*v;
            }
        }
        self.to_space(buf);
    }

    /// The frequency-side sign operator `J` on a raw spectrum: conjugation of
    /// `sgn(x)` by the transform. `J` is the spectral discretization of the
    /// Cauchy singular operator acting in the frequency variable.
    pub fn apply_freq_sign(&self, spectrum: &mut [Complex64]) {
        self.run(&self.forward, spectrum);
        let scale = 1.0 / self.len() as f64;
        for (v, s) in spectrum.iter_mut().zip(&self.sign_x) {
            *v *= scale * s;
        }
        self.run(&self.inverse, spectrum);
    }

    /// Full forward transform `(F f)(xi_k)` with boundary phases and the `h`
    /// scale; the output approximates the continuum transform at `xi_k`.
    pub fn forward_transform(&self, f: &[Complex64]) -> Vec<Complex64> {
        let mut buf = f.to_vec();
        self.to_spectrum(&mut buf);
        let h = self.domain.h();
        let x0 = self.domain.center(0);
        for (v, &x) in buf.iter_mut().zip(&self.xi) {
            *v *= h * Complex64::from_polar(1.0, x * x0);
        }
        buf
    }

    /// Inverse of [`Spectral::forward_transform`].
    pub fn inverse_transform(&self, spectrum: &[Complex64]) -> Vec<Complex64> {
        let h = self.domain.h();
        let x0 = self.domain.center(0);
        let mut buf: Vec<Complex64> = spectrum
            .iter()
            .zip(&self.xi)
            .map(|(v, &x)| v * Complex64::from_polar(1.0, -x * x0))
            .collect();
        self.run(&self.forward, &mut buf);
        let scale = 1.0 / (self.len() as f64 * h);
        for v in buf.iter_mut() {
            *v *= scale;
        }
        buf
    }

    /// Band-limited evaluation of a raw spectrum at an arbitrary point.
    pub fn eval_spectrum_at(&self, spectrum: &[Complex64], x: f64) -> Complex64 {
        let x0 = self.domain.center(0);
        let mut acc = Complex64::ZERO;
        for (s, &xi) in spectrum.iter().zip(&self.xi) {
            acc += s * Complex64::from_polar(1.0, -xi * (x - x0));
        }
        acc / self.len() as f64
    }
}
