use num_complex::Complex64;

use super::hermite::hermite_modes_orthonormal;
use crate::spectra::{FrequencyGrid, GaussianSourceModel, JointSpectralAmplitude};
use crate::{Error, Result};

/// `μ = 1 + x − √(2x + x²)` with `x = (σ/σF)²`. Zero without correlation,
/// approaching one as the filter opens.
pub fn analytic_mu(model: &GaussianSourceModel) -> f64 {
    let x = (model.sigma / model.sigma_f).powi(2);
    // 1 + x − √(2x + x²) rewritten as 1/(1 + x + √(2x + x²)) to avoid cancellation
    1.0 / (1.0 + x + (2.0 * x + x * x).sqrt())
}

fn check_mu(mu: f64) -> Result<()> {
    if !(0.0..1.0).contains(&mu) {
        return Err(Error::Invalid(format!("μ must lie in [0, 1), got {mu}")));
    }
    Ok(())
}

/// `λn = (1 − μ²)μ²ⁿ` for `n = 0..=n_max` and the tail mass `μ^{2(n_max+1)}`.
pub fn analytic_eigenvalues(mu: f64, n_max: usize) -> Result<(Vec<f64>, f64)> {
    check_mu(mu)?;
    let m2 = mu * mu;
    let mut out = Vec::with_capacity(n_max + 1);
    let mut p = 1.0;
    for _ in 0..=n_max {
        out.push((1.0 - m2) * p);
        p *= m2;
    }
    Ok((out, p))
}

/// `K = (1 + μ²)/(1 − μ²)`.
pub fn analytic_k(mu: f64) -> Result<f64> {
    check_mu(mu)?;
    Ok((1.0 + mu * mu) / (1.0 - mu * mu))
}

/// Parameters of the bilinear Hermite expansion
/// `√(1−μ²)·Σ μⁿ u_n(α1 x1) u_n(α2 x2)`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct MehlerParams {
    pub mu: f64,
    /// s/rad
    pub alpha1: f64,
    /// s/rad
    pub alpha2: f64,
}

impl MehlerParams {
    pub fn new(mu: f64, alpha1: f64, alpha2: f64) -> Result<Self> {
        check_mu(mu)?;
        Ok(MehlerParams { mu, alpha1, alpha2 })
    }
}

/// Maps the Gaussian model onto the expansion. Matching exponents gives
/// `(1+μ²)/(4μ) = dσ²/4` with `d = 2/σF² + 2/σ²`, and
/// `α² = 2d(1−μ²)/(1+μ²)`. The idler scale carries the sign of the
/// anticorrelation, `α2 = −α1`.
pub fn mehler_params_for_model(model: &GaussianSourceModel) -> Result<MehlerParams> {
    let mu = analytic_mu(model);
    check_mu(mu)?;
    let d = 2.0 / model.sigma_f.powi(2) + 2.0 / model.sigma.powi(2);
    let alpha = (2.0 * d * (1.0 - mu * mu) / (1.0 + mu * mu)).sqrt();
    Ok(MehlerParams {
        mu,
        alpha1: alpha,
        alpha2: -alpha,
    })
}

/// `exp[−(1+μ²)(x1²+x2²)/(2(1−μ²)) + 2μ x1 x2/(1−μ²)]`.
pub fn mehler_closed_form(mu: f64, x1: f64, x2: f64) -> f64 {
    let q = 1.0 - mu * mu;
    (-(1.0 + mu * mu) * (x1 * x1 + x2 * x2) / (2.0 * q) + 2.0 * mu * x1 * x2 / q).exp()
}

/// Truncated series next to the closed form it approximates.
#[derive(Debug, Clone)]
pub struct MehlerComparison {
    pub series: JointSpectralAmplitude,
    pub closed_form: JointSpectralAmplitude,
    pub max_abs_deviation: f64,
    pub peak: f64,
}

/// Evaluates the series with `n_terms` = N (terms 0..=N) on the grid pair.
/// The `u_n` here lack the `π^{-1/4}` factor, so the identity holds as
/// written.
pub fn mehler_reconstruct(
    params: &MehlerParams,
    grid_s: &FrequencyGrid,
    grid_i: &FrequencyGrid,
    n_terms: usize,
) -> Result<MehlerComparison> {
    check_mu(params.mu)?;
    let pi_half = std::f64::consts::PI.sqrt();
    let table = |g: &FrequencyGrid, alpha: f64| -> Vec<Vec<f64>> {
        g.detunings()
            .iter()
            .map(|&nu| {
                hermite_modes_orthonormal(n_terms, alpha * nu)
                    .into_iter()
                    .map(|v| v * pi_half.sqrt())
                    .collect()
            })
            .collect()
    };
    let ts = table(grid_s, params.alpha1);
    let ti = table(grid_i, params.alpha2);
    let pref = (1.0 - params.mu * params.mu).sqrt();
    let mut powers = Vec::with_capacity(n_terms + 1);
    let mut p = 1.0;
    for _ in 0..=n_terms {
        powers.push(p);
        p *= params.mu;
    }
    let ds = grid_s.detunings();
    let di = grid_i.detunings();
    let series = JointSpectralAmplitude::new(
        *grid_s,
        *grid_i,
        nalgebra::DMatrix::from_fn(ds.len(), di.len(), |a, b| {
            let s: f64 = (0..=n_terms).map(|n| powers[n] * ts[a][n] * ti[b][n]).sum();
            Complex64::new(pref * s, 0.0)
        }),
    )?;
    let closed_form = JointSpectralAmplitude::from_real_fn(*grid_s, *grid_i, |x, y| {
        mehler_closed_form(params.mu, params.alpha1 * x, params.alpha2 * y)
    })?;
    let max_abs_deviation = (&series.values - &closed_form.values)
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    let peak = closed_form.values.iter().map(|z| z.norm()).fold(0.0, f64::max);
    Ok(MehlerComparison {
        series,
        closed_form,
        max_abs_deviation,
        peak,
    })
}
