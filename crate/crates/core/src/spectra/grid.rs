use crate::{Error, Result};

/// Uniform detuning grid centred on `omega0`, symmetric about zero detuning.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FrequencyGrid {
    /// rad/s
    pub omega0: f64,
    /// rad/s
    pub half_span: f64,
    pub n_points: usize,
}

impl FrequencyGrid {
    pub fn new(omega0: f64, half_span: f64, n_points: usize) -> Result<Self> {
        if n_points < 2 {
            return Err(Error::Invalid(format!("grid needs at least 2 points, got {n_points}")));
        }
        if !(half_span > 0.0 && half_span.is_finite()) {
            return Err(Error::Invalid(format!("grid half span must be positive, got {half_span}")));
        }
        if !(omega0 >= 0.0 && omega0.is_finite()) {
            return Err(Error::Invalid(format!("bad centre frequency {omega0}")));
        }
        Ok(FrequencyGrid {
            omega0,
            half_span,
            n_points,
        })
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_span / (self.n_points - 1) as f64
    }

    pub fn nu(&self, j: usize) -> f64 {
        // written symmetrically so ν(j) = −ν(n−1−j) exactly
        let n = (self.n_points - 1) as f64;
        self.half_span * (2.0 * j as f64 - n) / n
    }

    pub fn detunings(&self) -> Vec<f64> {
        (0..self.n_points).map(|j| self.nu(j)).collect()
    }

    pub fn omegas(&self) -> Vec<f64> {
        (0..self.n_points).map(|j| self.omega0 + self.nu(j)).collect()
    }

    pub fn same_as(&self, other: &FrequencyGrid) -> bool {
        let tol = 1e-12 * self.half_span.max(other.half_span);
        self.n_points == other.n_points
            && (self.half_span - other.half_span).abs() <= tol
            && (self.omega0 - other.omega0).abs() <= 1e-12 * self.omega0.max(other.omega0).max(1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_and_uniform() {
        let g = FrequencyGrid::new(1e15, 3e13, 7).unwrap();
        let d = g.detunings();
        for j in 0..7 {
            assert_eq!(d[j], -d[6 - j]);
        }
        assert_eq!(d[3], 0.0);
        assert!((d[1] - d[0] - g.spacing()).abs() < 1e-3);
        assert!(FrequencyGrid::new(1e15, 1e13, 1).is_err());
        assert!(FrequencyGrid::new(1e15, 0.0, 8).is_err());
    }
}
