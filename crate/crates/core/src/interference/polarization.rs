use nalgebra::DVector;
use num_complex::Complex64;

use crate::schmidt::schmidt_svd_with_threshold;
use crate::spectra::JointSpectralAmplitude;
use crate::{Error, Result};

/// Which pair of polarization terms the amplitudes `f` and `g` multiply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairFamily {
    /// `f|H,V⟩ ± g|V,H⟩` (type-II crossed cones).
    Psi,
    /// `f|H,H⟩ ± g|V,V⟩` (cascaded type-I crystals).
    Phi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairSign {
    Plus,
    Minus,
}

impl PairSign {
    fn value(self) -> f64 {
        match self {
            PairSign::Plus => 1.0,
            PairSign::Minus => -1.0,
        }
    }
}

/// Polarization-entangled pair with spectral amplitudes `f` and `g`.
#[derive(Debug, Clone)]
pub struct PolarizedPairState {
    pub f: JointSpectralAmplitude,
    pub g: JointSpectralAmplitude,
    pub sign: PairSign,
    pub family: PairFamily,
}

impl PolarizedPairState {
    pub fn new(
        f: JointSpectralAmplitude,
        g: JointSpectralAmplitude,
        sign: PairSign,
        family: PairFamily,
    ) -> Result<Self> {
        if !f.same_grids(&g) {
            return Err(Error::GridMismatch("f and g must share grids".into()));
        }
        f.ensure_normalized()?;
        g.ensure_normalized()?;
        Ok(PolarizedPairState { f, g, sign, family })
    }

    fn require_square(&self) -> Result<()> {
        if !self.f.grid_s.same_as(&self.f.grid_i) {
            return Err(Error::GridMismatch(
                "exchanging photons needs identical signal and idler grids".into(),
            ));
        }
        Ok(())
    }
}

fn l2(jsa: &JointSpectralAmplitude, m: &nalgebra::DMatrix<Complex64>) -> f64 {
    (m.iter().map(|z| z.norm_sqr()).sum::<f64>() * jsa.cell()).sqrt()
}

/// Coincidence rates behind a beamsplitter Bell analyzer for the `+` and
/// `−` inputs, `Rc± = ¼ Σ |f(ω1,ω2) ∓ e^{i(ω1−ω2)τ} g(ω2,ω1)|²`. The delay
/// multiplies the exchanged term, as written.
pub fn bell_analyzer_rates(pair: &PolarizedPairState, tau: f64) -> Result<(f64, f64)> {
    pair.require_square()?;
    let w = pair.f.grid_s.omegas();
    let n = w.len();
    let (mut plus, mut minus) = (0.0, 0.0);
    for a in 0..n {
        for b in 0..n {
            let f = pair.f.values[(a, b)];
            let g = Complex64::from_polar(1.0, (w[a] - w[b]) * tau) * pair.g.values[(b, a)];
            plus += (f - g).norm_sqr();
            minus += (f + g).norm_sqr();
        }
    }
    let c = 0.25 * pair.f.cell();
    Ok((c * plus, c * minus))
}

/// `‖g − fᵀ‖`; zero when the Bell analyzer separates the two inputs perfectly.
pub fn bell_condition_residual(pair: &PolarizedPairState) -> Result<f64> {
    pair.require_square()?;
    Ok(l2(&pair.f, &(&pair.g.values - pair.f.values.transpose())))
}

/// `‖f − g‖`; zero when polarization fringes reach full visibility.
pub fn polarization_condition_residual(pair: &PolarizedPairState) -> f64 {
    l2(&pair.f, &(&pair.f.values - &pair.g.values))
}

/// Half-wave plate on one arm: `g(ω1, ω2) → g(ω2, ω1)`. Swaps the Bell and
/// polarization residuals.
pub fn half_wave_transform(pair: &PolarizedPairState) -> Result<PolarizedPairState> {
    pair.require_square()?;
    let mut g = pair.g.clone();
    g.values = pair.g.values.transpose();
    Ok(PolarizedPairState {
        f: pair.f.clone(),
        g,
        sign: pair.sign,
        family: pair.family,
    })
}

/// Coincidence rate behind polarizers at `θa`, `θb`:
/// `Σ|cosθa sinθb f ± sinθa cosθb g|²` for the psi family and
/// `Σ|cosθa cosθb f ± sinθa sinθb g|²` for the phi family.
pub fn polarization_fringe(pair: &PolarizedPairState, theta_a: f64, theta_b: f64) -> f64 {
    let (ca, sa) = (theta_a.cos(), theta_a.sin());
    let (cb, sb) = (theta_b.cos(), theta_b.sin());
    let (p, q) = match pair.family {
        PairFamily::Psi => (ca * sb, sa * cb),
        PairFamily::Phi => (ca * cb, sa * sb),
    };
    let q = q * pair.sign.value();
    let s: f64 = pair
        .f
        .values
        .iter()
        .zip(pair.g.values.iter())
        .map(|(f, g)| (f * p + g * q).norm_sqr())
        .sum();
    s * pair.f.cell()
}

/// `(max − min)/(max + min)` of the fringe over θa ∈ [0, π) with θb = π/4.
pub fn fringe_visibility(pair: &PolarizedPairState) -> f64 {
    let rates: Vec<f64> = (0..360)
        .map(|k| {
            polarization_fringe(
                pair,
                std::f64::consts::PI * k as f64 / 360.0,
                std::f64::consts::FRAC_PI_4,
            )
        })
        .collect();
    let max = rates.iter().copied().fold(f64::MIN, f64::max);
    let min = rates.iter().copied().fold(f64::MAX, f64::min);
    (max - min) / (max + min)
}

/// Rank-one factors `S ≈ p(νs)·q(νi)` with `‖p‖ = 1` and `‖q‖² = λ0`.
#[derive(Debug, Clone)]
pub struct EffectiveModes {
    pub p: DVector<Complex64>,
    pub q: DVector<Complex64>,
    /// `1 − λ0`
    pub residual: f64,
}

/// Leading Schmidt pair of `jsa`. A residual below 1e-6 means the pair is
/// created by a single effective operator product.
pub fn effective_mode_factorization(jsa: &JointSpectralAmplitude) -> Result<EffectiveModes> {
    let d = schmidt_svd_with_threshold(jsa, 0.0)?;
    let l0 = d.eigenvalues[0];
    Ok(EffectiveModes {
        p: d.signal_modes.column(0).into_owned(),
        q: d.idler_modes.column(0) * Complex64::new(l0.sqrt(), 0.0),
        residual: (1.0 - l0).max(0.0),
    })
}
