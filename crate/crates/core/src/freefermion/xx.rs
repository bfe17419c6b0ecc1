//! Closed forms for the XX chain (`γ = 0`) with the probe attached.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use super::special::{airy_ai, bessel_j};

/// Airy argument maximizing the leading-order peak amplitude.
pub const XI_OPT: f64 = -1.019;

/// Spectrum and modes of the `M = n + 1` site XX chain, mode `k` on row `k`:
/// `E_k = 2J cos(π(k+1)/(M+1)) + 2h` (signed) and
/// `P_kl = √(2/(M+1)) sin(π(k+1)(l+1)/(M+1))`.
pub fn xx_exact_modes(n: usize, j: f64, h: f64) -> (DVector<f64>, DMatrix<f64>) {
    let m = n + 1;
    let d = (m + 1) as f64;
    let e = DVector::from_fn(m, |k, _| 2.0 * j * (PI * (k + 1) as f64 / d).cos() + 2.0 * h);
    let norm = (2.0 / d).sqrt();
    let p = DMatrix::from_fn(m, m, |k, l| norm * (PI * ((k + 1) * (l + 1)) as f64 / d).sin());
    (e, p)
}

/// `|J_N(β) + 2 J_{N+2}(β) + J_{N+4}(β)|`, the end-to-end amplitude with
/// the reflected wave fronts dropped; `β = 2Jt`.
pub fn xx_asymptotic_u(n: usize, beta: f64) -> f64 {
    let n = n as u32;
    (bessel_j(n, beta) + 2.0 * bessel_j(n + 2, beta) + bessel_j(n + 4, beta)).abs()
}

/// Airy-expanded amplitude at `β = N − ξ (N/2)^{1/3}`.
pub fn xx_airy_u(n: usize, xi: f64) -> f64 {
    let nf = n as f64;
    let (ai, aip) = airy_ai(xi);
    2f64.powf(7.0 / 3.0) / nf.cbrt() * ai + 2.0 * xi / (5.0 * nf) * (3.0 * xi * aip + 22.0 * ai)
}

/// Predicted first peak `(β*, u*)` with `β* = 2Jt*`.
pub fn xx_peak_estimate(n: usize) -> (f64, f64) {
    let nf = n as f64;
    (nf - XI_OPT * (nf / 2.0).cbrt(), 2.700 / nf.cbrt() - 4.804 / nf)
}
