//! Hermite-Gaussian mode functions.
//!
//! `hermite_mode` uses `u_n(x) = (2ⁿ n!)^{-1/2} H_n(x) e^{−x²/2}`, which is
//! missing the `π^{-1/4}` factor needed for unit L2 norm.
//! `hermite_mode_orthonormal` includes it. Both come from the normalized
//! three-term recurrence, so nothing overflows at large `n`.

const PI_QUARTER: f64 = 1.331_335_363_800_389_7; // π^{1/4}

/// Orthonormal `ψ_0..=ψ_nmax` at `x`.
pub fn hermite_modes_orthonormal(n_max: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    let p0 = (-0.5 * x * x).exp() / PI_QUARTER;
    out.push(p0);
    if n_max == 0 {
        return out;
    }
    out.push(std::f64::consts::SQRT_2 * x * p0);
    for n in 1..n_max {
        let nf = n as f64;
        let next = (2.0 / (nf + 1.0)).sqrt() * x * out[n] - (nf / (nf + 1.0)).sqrt() * out[n - 1];
        out.push(next);
    }
    out
}

pub fn hermite_mode_orthonormal(n: usize, x: f64) -> f64 {
    hermite_modes_orthonormal(n, x)[n]
}

/// `u_n(x)` without the `π^{-1/4}` factor, so `u_0(0) = 1`.
pub fn hermite_mode(n: usize, x: f64) -> f64 {
    PI_QUARTER * hermite_mode_orthonormal(n, x)
}
