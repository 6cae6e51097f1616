use nalgebra::DMatrix;
use num_complex::Complex64;

use super::grid::FrequencyGrid;
use crate::{Error, Result};

/// Complex amplitude `S(νs, νi)` sampled on `grid_s × grid_i`; rows index
/// the signal, columns the idler.
#[derive(Debug, Clone, PartialEq)]
pub struct JointSpectralAmplitude {
    pub grid_s: FrequencyGrid,
    pub grid_i: FrequencyGrid,
    pub values: DMatrix<Complex64>,
    pub normalized: bool,
}

impl JointSpectralAmplitude {
    pub fn new(
        grid_s: FrequencyGrid,
        grid_i: FrequencyGrid,
        values: DMatrix<Complex64>,
    ) -> Result<Self> {
        if values.nrows() != grid_s.n_points || values.ncols() != grid_i.n_points {
            return Err(Error::GridMismatch(format!(
                "{}x{} values on a {}x{} grid",
                values.nrows(),
                values.ncols(),
                grid_s.n_points,
                grid_i.n_points
            )));
        }
        if values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Invalid("amplitude has non-finite entries".into()));
        }
        Ok(JointSpectralAmplitude {
            grid_s,
            grid_i,
            values,
            normalized: false,
        })
    }

    /// Samples `f(νs, νi)` on the grid pair (not normalized).
    pub fn from_fn(
        grid_s: FrequencyGrid,
        grid_i: FrequencyGrid,
        mut f: impl FnMut(f64, f64) -> Complex64,
    ) -> Result<Self> {
        let ds = grid_s.detunings();
        let di = grid_i.detunings();
        let values = DMatrix::from_fn(ds.len(), di.len(), |a, b| f(ds[a], di[b]));
        Self::new(grid_s, grid_i, values)
    }

    pub fn from_real_fn(
        grid_s: FrequencyGrid,
        grid_i: FrequencyGrid,
        mut f: impl FnMut(f64, f64) -> f64,
    ) -> Result<Self> {
        Self::from_fn(grid_s, grid_i, |a, b| Complex64::new(f(a, b), 0.0))
    }

    /// Integration weight `dνs·dνi` of one sample.
    pub fn cell(&self) -> f64 {
        self.grid_s.spacing() * self.grid_i.spacing()
    }

    /// `Σ|S|²·dνs·dνi`.
    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.cell()
    }

    pub fn normalize(mut self) -> Result<Self> {
        let n2 = self.norm_sq();
        if !(n2 > 0.0 && n2.is_finite()) {
            return Err(Error::Invalid(format!("cannot normalize amplitude with norm² {n2}")));
        }
        self.values /= Complex64::new(n2.sqrt(), 0.0);
        self.normalized = true;
        Ok(self)
    }

    /// Errors unless the amplitude is flagged normalized and its norm is 1 to 1e-10.
    pub fn ensure_normalized(&self) -> Result<()> {
        let n2 = self.norm_sq();
        if !self.normalized || (n2 - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized(n2));
        }
        Ok(())
    }

    pub fn transpose(&self) -> Self {
        JointSpectralAmplitude {
            grid_s: self.grid_i,
            grid_i: self.grid_s,
            values: self.values.transpose(),
            normalized: self.normalized,
        }
    }

    pub fn same_grids(&self, other: &Self) -> bool {
        self.grid_s.same_as(&other.grid_s) && self.grid_i.same_as(&other.grid_i)
    }

    pub fn intensity(&self) -> DMatrix<f64> {
        self.values.map(|z| z.norm_sqr())
    }

    /// Largest boundary magnitude relative to the peak magnitude.
    pub fn boundary_ratio(&self) -> f64 {
        let (r, c) = self.values.shape();
        let peak = self.values.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let mut edge = 0.0f64;
        for a in 0..r {
            edge = edge.max(self.values[(a, 0)].norm()).max(self.values[(a, c - 1)].norm());
        }
        for b in 0..c {
            edge = edge.max(self.values[(0, b)].norm()).max(self.values[(r - 1, b)].norm());
        }
        if peak == 0.0 {
            0.0
        } else {
            edge / peak
        }
    }

    /// True when the boundary still carries more than 1e-3 of the peak.
    pub fn grid_too_narrow(&self) -> bool {
        self.boundary_ratio() > 1e-3
    }

    /// Pearson correlation of (νs, νi) under the weight `|S|²`.
    pub fn intensity_correlation(&self) -> f64 {
        let ds = self.grid_s.detunings();
        let di = self.grid_i.detunings();
        crate::numerics::weighted_correlation(&ds, &di, |a, b| self.values[(a, b)].norm_sqr())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> FrequencyGrid {
        FrequencyGrid::new(2e15, 4e13, 64).unwrap()
    }

    #[test]
    fn normalize_is_idempotent() {
        let j = JointSpectralAmplitude::from_real_fn(grid(), grid(), |a, b| {
            (-(a * a + 0.3 * a * b + b * b) / 1e26).exp()
        })
        .unwrap()
        .normalize()
        .unwrap();
        assert!((j.norm_sq() - 1.0).abs() < 1e-12);
        let again = j.clone().normalize().unwrap();
        let diff = (&again.values - &j.values).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(diff < 1e-12 * j.values.iter().map(|z| z.norm()).fold(0.0, f64::max));
        j.ensure_normalized().unwrap();
    }

    #[test]
    fn rejects_unnormalized_and_mismatched() {
        let j = JointSpectralAmplitude::from_real_fn(grid(), grid(), |_, _| 1.0).unwrap();
        assert!(matches!(j.ensure_normalized(), Err(Error::NotNormalized(_))));
        let bad = JointSpectralAmplitude::new(grid(), grid(), DMatrix::zeros(3, 3));
        assert!(matches!(bad, Err(Error::GridMismatch(_))));
        let zero = JointSpectralAmplitude::new(grid(), grid(), DMatrix::zeros(64, 64)).unwrap();
        assert!(zero.normalize().is_err());
    }

    #[test]
    fn boundary_flag() {
        let wide = JointSpectralAmplitude::from_real_fn(grid(), grid(), |a, b| {
            (-(a * a + b * b) / (1e13f64).powi(2)).exp()
        })
        .unwrap();
        assert!(!wide.grid_too_narrow());
        let flat = JointSpectralAmplitude::from_real_fn(grid(), grid(), |_, _| 1.0).unwrap();
        assert!(flat.grid_too_narrow());
    }
}
