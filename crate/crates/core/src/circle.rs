//! Sampled functions on the circle and their discrete Fourier calculus.
//!
//! Samples live on the uniform grid ζ_j = e^{2πij/L} with L a power of two.
//! Coefficient vectors are indexed by frequency mod L; `signed_freq` maps a
//! bucket to its representative in (−L/2, L/2]. Rotation by an arbitrary angle
//! is done in the coefficient domain, i.e. by trigonometric interpolation,
//! which is exact for band-limited data.

use num_complex::Complex64;
use rustfft::FftPlanner;

pub fn is_power_of_two(n: usize) -> bool {
    n != 0 && n & (n - 1) == 0
}

/// Frequency represented by bucket `idx` of a length-`len` coefficient vector.
pub fn signed_freq(idx: usize, len: usize) -> i64 {
    if idx <= len / 2 {
        idx as i64
    } else {
        idx as i64 - len as i64
    }
}

/// Fourier coefficients c_k with g(ζ_j) = Σ_k c_k ζ_j^k (bucket k mod L).
pub fn coeffs_of_samples(samples: &[Complex64]) -> Vec<Complex64> {
    let n = samples.len();
    let mut buf = samples.to_vec();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    for c in &mut buf {
        *c *= scale;
    }
    buf
}

/// Inverse of [`coeffs_of_samples`].
pub fn samples_of_coeffs(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len();
    let mut buf = coeffs.to_vec();
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    buf
}

/// h(ζ) = g(e^{2πi·angle}·ζ), computed by phase-shifting the coefficients.
pub fn rotate_samples(samples: &[Complex64], angle: f64) -> Vec<Complex64> {
    let n = samples.len();
    let mut coeffs = coeffs_of_samples(samples);
    for (idx, c) in coeffs.iter_mut().enumerate() {
        let k = signed_freq(idx, n) as f64;
        *c *= Complex64::from_polar(1.0, std::f64::consts::TAU * k * angle);
    }
    samples_of_coeffs(&coeffs)
}

/// Rotation of a real-valued sample vector; realness is preserved exactly for
/// band-limited data, so the imaginary rounding residue is discarded.
pub fn rotate_real_samples(samples: &[f64], angle: f64) -> Vec<f64> {
    let complex: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    rotate_samples(&complex, angle).iter().map(|z| z.re).collect()
}
