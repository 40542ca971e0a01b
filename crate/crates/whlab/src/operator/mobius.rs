//! Circle-side operators and the Moebius transfer between line and circle.
//!
//! The circle coordinate is `t = e^{i theta}` with `xi = -cot(theta / 2)`, so
//! `theta = 0` corresponds to `xi = infinity`. Circle grids use an odd number
//! of cell-centered angles: trigonometric interpolation is then unambiguous
//! and no angle ever hits the singular point.
//!
//! The transfer pair is
//!
//! ```text
//! (B f)(x)    = 2^{1 - 1/p} / (x + i) * f((x - i) / (x + i))
//! (B^{-1} g)(t) = i 2^{1/p} / (1 - t) * g(i (1 + t) / (1 - t))
//! ```
//!
//! `B` evaluates circle data by exact trigonometric interpolation; `B^{-1}`
//! evaluates line data by band-limited interpolation, which degrades near the
//! singular angle where `|xi(t)|` leaves the line window.

use super::engine::Spectral;
use super::matrix::{self, OperatorMatrix, OperatorSpace};
use super::OperatorError;
use crate::grid::GridDomain;
use crate::symbol::Symbol;
use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::{PI, TAU};

/// Cell-centered circle angles in `(-pi, pi)`; `n` must be odd.
pub(crate) fn circle_angles(n: usize) -> Vec<f64> {
    (0..n)
        .map(|l| -PI + TAU * (l as f64 + 0.5) / n as f64)
        .collect()
}

fn require_odd(n: usize) -> Result<(), OperatorError> {
    if n < 3 || n % 2 == 0 {
        return Err(OperatorError::Invalid(format!(
            "circle grids need an odd number of angles >= 3, got {n}"
        )));
    }
    Ok(())
}

/// Dirichlet kernel of odd order: trig interpolation weight of one sample.
fn dirichlet(n: usize, phi: f64) -> f64 {
    let half = 0.5 * phi;
    let s = half.sin();
    if s.abs() < 1e-9 {
        // removable singularity at multiples of 2 pi (value 1 for odd n)
        return (n as f64 * half).cos() / half.cos();
    }
    (n as f64 * half).sin() / (n as f64 * s)
}

/// The Cauchy singular integral operator on the circle: Fourier mode
/// multiplier `+1` for `m >= 0` and `-1` for `m < 0`.
pub fn cauchy_singular_circle(n: usize) -> Result<OperatorMatrix, OperatorError> {
    require_odd(n)?;
    let mut planner = FftPlanner::new();
    let forward = planner.plan_fft_forward(n);
    let inverse = planner.plan_fft_inverse(n);
    let space = OperatorSpace::Circle { n };
    Ok(matrix::assemble(space, space, "S_T", move |j| {
        let mut buf = vec![Complex64::ZERO; n];
        buf[j] = Complex64::new(1.0, 0.0);
        // sample phases cancel between the two transforms, so the raw DFT
        // bins carry the signed modes directly: bin k <-> mode k - n [k > n/2]
        forward.process(&mut buf);
        for (k, v) in buf.iter_mut().enumerate() {
            if k > n / 2 {
                *v = -*v;
            }
        }
        inverse.process(&mut buf);
        let scale = 1.0 / n as f64;
        for v in buf.iter_mut() {
            *v *= scale;
        }
        buf
    }))
}

/// Fourier coefficients `m -> hat(B_0 a)(m)` of the circle pullback,
/// computed from `k` samples (`k` odd, aliasing error only).
fn pullback_coefficients(a: &Symbol, k: usize, max_mode: usize) -> Vec<Complex64> {
    let angles = circle_angles(k);
    let mut buf: Vec<Complex64> = angles.iter().map(|&t| a.mobius_pullback(t)).collect();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(k).process(&mut buf);
    // c_m = e^{i m (pi - pi/k)} / k * bin(m mod k)
    let mut coeff = vec![Complex64::ZERO; 2 * max_mode + 1];
    for (idx, c) in coeff.iter_mut().enumerate() {
        let m = idx as i64 - max_mode as i64;
        let bin = m.rem_euclid(k as i64) as usize;
        let phase = Complex64::from_polar(1.0, m as f64 * (PI - PI / k as f64));
        *c = phase * buf[bin] / k as f64;
    }
    coeff
}

fn toeplitz_from_coefficients(
    a: &Symbol,
    rows: usize,
    cols: usize,
) -> Result<OperatorMatrix, OperatorError> {
    if rows == 0 || cols == 0 {
        return Err(OperatorError::Invalid(
            "toeplitz sections need positive dimensions".into(),
        ));
    }
    if !a.is_continuous() {
        return Err(OperatorError::Invalid(format!(
            "toeplitz section of a discontinuous symbol {a}"
        )));
    }
    let max_mode = rows.max(cols);
    let mut samples = (8 * max_mode + 1).max(2187);
    if samples % 2 == 0 {
        samples += 1;
    }
    let coeff = pullback_coefficients(a, samples, max_mode);
    let at = |m: i64| coeff[(m + max_mode as i64) as usize];
    let columns: Vec<Vec<Complex64>> = (0..cols)
        .map(|q| (0..rows).map(|p| at(p as i64 - q as i64)).collect())
        .collect();
    Ok(OperatorMatrix::from_columns(
        OperatorSpace::Sequence { len: cols },
        OperatorSpace::Sequence { len: rows },
        format!("T_{rows}x{cols}({a})"),
        columns,
    ))
}

/// The `n x n` Toeplitz section of the circle pullback `B_0 a`.
pub fn toeplitz_section(a: &Symbol, n: usize) -> Result<OperatorMatrix, OperatorError> {
    toeplitz_from_coefficients(a, n, n)
}

/// A tall `(n + extra) x n` Toeplitz section; its smallest singular values
/// count the kernel of the infinite Toeplitz operator without interference
/// from the cokernel.
pub fn toeplitz_section_tall(
    a: &Symbol,
    n: usize,
    extra: usize,
) -> Result<OperatorMatrix, OperatorError> {
    toeplitz_from_coefficients(a, n + extra, n)
}

/// The Moebius transfer pair `(B, B^{-1})` between a circle grid with `n`
/// odd angles and a line grid, as matrices for the exponent `p`.
pub fn mobius_transform(
    p: f64,
    n: usize,
    line: GridDomain,
) -> Result<(OperatorMatrix, OperatorMatrix), OperatorError> {
    require_odd(n)?;
    if !(p.is_finite() && p >= 1.0) {
        return Err(OperatorError::Invalid(format!(
            "moebius transform needs an exponent p >= 1, got {p}"
        )));
    }
    let GridDomain::Line { .. } = line else {
        return Err(OperatorError::Invalid(
            "moebius transform needs a line grid".into(),
        ));
    };
    let m = line.n();
    let angles = circle_angles(n);
    let circle = OperatorSpace::Circle { n };
    let grid = OperatorSpace::Grid(line);

    // B: for each line point, the pulled-back angle and the prefactor
    let theta_star: Vec<f64> = (0..m)
        .map(|j| {
            let x = line.center(j);
            (Complex64::new(x, -1.0) / Complex64::new(x, 1.0)).arg()
        })
        .collect();
    let factor: Vec<Complex64> = (0..m)
        .map(|j| {
            let x = line.center(j);
            2f64.powf(1.0 - 1.0 / p) / (x + Complex64::I)
        })
        .collect();
    let b = {
        let angles = angles.clone();
        matrix::assemble(circle, grid, "B", move |l| {
            (0..m)
                .map(|j| factor[j] * dirichlet(n, theta_star[j] - angles[l]))
                .collect()
        })
    };

    // B^{-1}: band-limited evaluation of line data at xi(t_l)
    let eng = Spectral::new(line);
    let xi_star: Vec<f64> = angles.iter().map(|&t| -1.0 / (0.5 * t).tan()).collect();
    let prefactor: Vec<Complex64> = angles
        .iter()
        .map(|&t| {
            let tc = Complex64::from_polar(1.0, t);
            Complex64::I * 2f64.powf(1.0 / p) / (Complex64::new(1.0, 0.0) - tc)
        })
        .collect();
    let b_inv = matrix::assemble(grid, circle, "B^{-1}", move |j| {
        let mut spectrum = vec![Complex64::ZERO; m];
        spectrum[j] = Complex64::new(1.0, 0.0);
        eng.to_spectrum(&mut spectrum);
        (0..n)
            .map(|l| prefactor[l] * eng.eval_spectrum_at(&spectrum, xi_star[l]))
            .collect()
    });

    Ok((b, b_inv))
}
