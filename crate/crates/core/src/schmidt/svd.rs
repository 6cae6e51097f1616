use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::spectra::{FrequencyGrid, JointSpectralAmplitude};
use crate::{Error, Result};

/// Modes with eigenvalue below this are dropped and counted as truncated mass.
pub const DEFAULT_THRESHOLD: f64 = 1e-12;

/// `S(νs, νi) = Σ √λn ψn(νs) φn(νi)`.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    /// Descending.
    pub eigenvalues: Vec<f64>,
    /// Columns are ψn sampled on `grid_s`, unit norm under `Σ|ψ|²·dνs`.
    pub signal_modes: DMatrix<Complex64>,
    /// Columns are φn sampled on `grid_i`.
    pub idler_modes: DMatrix<Complex64>,
    pub k: f64,
    pub truncated_mass: f64,
    pub grid_s: FrequencyGrid,
    pub grid_i: FrequencyGrid,
}

impl SchmidtDecomposition {
    pub fn n_modes(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `Σ √λn ψn ⊗ φn` over the kept modes.
    pub fn reconstruct(&self) -> DMatrix<Complex64> {
        let mut out = DMatrix::zeros(self.grid_s.n_points, self.grid_i.n_points);
        for (n, &l) in self.eigenvalues.iter().enumerate() {
            let w = Complex64::new(l.sqrt(), 0.0);
            out += (self.signal_modes.column(n) * w) * self.idler_modes.column(n).transpose();
        }
        out
    }
}

/// `K = 1/Σλ²` for eigenvalues summing to one.
pub fn cooperativity(eigenvalues: &[f64]) -> Result<f64> {
    if eigenvalues.is_empty() {
        return Err(Error::Invalid("cooperativity of an empty spectrum".into()));
    }
    if eigenvalues.iter().any(|&l| l < 0.0 || !l.is_finite()) {
        return Err(Error::Invalid("eigenvalues must be finite and nonnegative".into()));
    }
    let p: f64 = eigenvalues.iter().map(|l| l * l).sum();
    if p == 0.0 {
        return Err(Error::Invalid("all eigenvalues vanish".into()));
    }
    Ok(1.0 / p)
}

pub fn schmidt_svd(jsa: &JointSpectralAmplitude) -> Result<SchmidtDecomposition> {
    schmidt_svd_with_threshold(jsa, DEFAULT_THRESHOLD)
}

pub fn schmidt_svd_with_threshold(
    jsa: &JointSpectralAmplitude,
    threshold: f64,
) -> Result<SchmidtDecomposition> {
    jsa.ensure_normalized()?;
    let hs = jsa.grid_s.spacing();
    let hi = jsa.grid_i.spacing();
    let (u, singular, v) = dense_svd(&jsa.values, (hs * hi).sqrt())?;
    let mut order: Vec<usize> = (0..singular.len()).collect();
    order.sort_by(|&a, &b| singular[b].total_cmp(&singular[a]));

    let mut eigenvalues = Vec::new();
    let mut truncated_mass = 0.0;
    let mut kept = Vec::new();
    for &n in &order {
        let l = singular[n].powi(2);
        if l >= threshold {
            eigenvalues.push(l);
            kept.push(n);
        } else {
            truncated_mass += l;
        }
    }
    if kept.is_empty() {
        return Err(Error::Invalid("no Schmidt mode above the threshold".into()));
    }

    let ns = jsa.grid_s.n_points;
    let ni = jsa.grid_i.n_points;
    let mut signal_modes = DMatrix::zeros(ns, kept.len());
    let mut idler_modes = DMatrix::zeros(ni, kept.len());
    for (c, &n) in kept.iter().enumerate() {
        let psi = u.column(n) / Complex64::new(hs.sqrt(), 0.0);
        let phi = v.column(n).map(|z| z.conj()) / Complex64::new(hi.sqrt(), 0.0);
        // fix the phase so the largest signal sample is positive real
        let big = psi
            .iter()
            .copied()
            .max_by(|a, b| a.norm().total_cmp(&b.norm()))
            .unwrap_or(Complex64::new(1.0, 0.0));
        let rot = if big.norm() > 0.0 {
            big.conj() / big.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        signal_modes.set_column(c, &(psi * rot));
        idler_modes.set_column(c, &(phi * rot.conj()));
    }
    let k = cooperativity(&eigenvalues)?;
    Ok(SchmidtDecomposition {
        eigenvalues,
        signal_modes,
        idler_modes,
        k,
        truncated_mass,
        grid_s: jsa.grid_s,
        grid_i: jsa.grid_i,
    })
}

/// Thin SVD of `scale·values` as `(U, σ, V)` with `values·scale = U·diag(σ)·Vᴴ`.
fn dense_svd(
    values: &DMatrix<Complex64>,
    scale: f64,
) -> Result<(DMatrix<Complex64>, Vec<f64>, DMatrix<Complex64>)> {
    let (r, c) = values.shape();
    let m = faer::Mat::<faer::c64>::from_fn(r, c, |a, b| {
        let z = values[(a, b)] * scale;
        faer::c64::new(z.re, z.im)
    });
    let svd = m
        .thin_svd()
        .map_err(|e| Error::NoRoot(format!("SVD did not converge: {e:?}")))?;
    let (fu, fs, fv) = (svd.U(), svd.S().column_vector(), svd.V());
    let k = fs.nrows();
    let u = DMatrix::from_fn(r, k, |a, n| Complex64::new(fu[(a, n)].re, fu[(a, n)].im));
    let v = DMatrix::from_fn(c, k, |b, n| Complex64::new(fv[(b, n)].re, fv[(b, n)].im));
    Ok((u, (0..k).map(|n| fs[n].re).collect(), v))
}

/// Reduced signal kernel `ρ(ω, ω′) = Σν f(ω, ν) f*(ω′, ν)·dν`.
pub fn reduced_kernel(jsa: &JointSpectralAmplitude) -> DMatrix<Complex64> {
    &jsa.values * jsa.values.adjoint() * Complex64::new(jsa.grid_i.spacing(), 0.0)
}

/// `Tr ρ² = Σ |ρ(ω, ω′)|²·dω²` from the reduced kernel.
pub fn purity_from_kernel(jsa: &JointSpectralAmplitude) -> f64 {
    let rho = reduced_kernel(jsa);
    let h = jsa.grid_s.spacing();
    rho.iter().map(|z| z.norm_sqr()).sum::<f64>() * h * h
}
