//! Gaussian perturbations `e = y + z A`, quantized to the `2^-f` grid.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{param, KemError, Result};

/// Largest accepted `|e_i| * 2^f`.
const MAX_NUMERATOR: f64 = (1u64 << 62) as f64;

/// `e = y + z A` with `z` a standard normal row vector of dimension `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationSpec {
    /// `k x n`.
    a_matrix: DMatrix<f64>,
    y: Vec<f64>,
}

impl PerturbationSpec {
    pub fn new(a_matrix: DMatrix<f64>, y: Vec<f64>) -> Result<Self> {
        if a_matrix.ncols() != y.len() {
            return Err(param(format!(
                "A has {} columns but y has length {}",
                a_matrix.ncols(),
                y.len()
            )));
        }
        if a_matrix.iter().chain(&y).any(|v| !v.is_finite()) {
            return Err(param("perturbation spec has a non-finite entry"));
        }
        Ok(Self { a_matrix, y })
    }

    /// `A = sigma * I`, `y = 0`.
    pub fn isotropic(n: usize, sigma: f64) -> Result<Self> {
        Self::new(DMatrix::from_diagonal_element(n, n, sigma), vec![0.0; n])
    }

    pub fn k(&self) -> usize {
        self.a_matrix.nrows()
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    pub fn a_matrix(&self) -> &DMatrix<f64> {
        &self.a_matrix
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    /// Largest diagonal entry of the covariance `A^T A`.
    pub fn max_variance(&self) -> f64 {
        self.a_matrix
            .column_iter()
            .map(|c| c.norm_squared())
            .fold(0.0, f64::max)
    }

    /// Every coordinate variance must stay strictly below `sigma_max^2`.
    pub fn check_budget(&self, sigma_max: f64) -> Result<()> {
        let v = self.max_variance();
        if v >= sigma_max * sigma_max {
            return Err(param(format!(
                "perturbation variance {v:.6} reaches the limit {:.6}",
                sigma_max * sigma_max
            )));
        }
        Ok(())
    }
}

/// Draws `e` and returns the numerators `round(e_i * 2^f)`.
pub fn sample_perturbation<R: Rng + ?Sized>(
    spec: &PerturbationSpec,
    n: usize,
    f: u32,
    sigma_max: f64,
    rng: &mut R,
) -> Result<Vec<i64>> {
    if spec.n() != n {
        return Err(param(format!(
            "perturbation spec of length {} for n = {n}",
            spec.n()
        )));
    }
    spec.check_budget(sigma_max)?;
    let z: Vec<f64> = (0..spec.k()).map(|_| rng.sample(StandardNormal)).collect();
    let scale = (f as f64).exp2();
    let mut out = Vec::with_capacity(n);
    for (j, col) in spec.a_matrix.column_iter().enumerate() {
        let e = spec.y[j] + col.iter().zip(&z).map(|(a, z)| a * z).sum::<f64>();
        out.push(quantize(e, scale)?);
    }
    Ok(out)
}

fn quantize(e: f64, scale: f64) -> Result<i64> {
    let v = (e * scale).round_ties_even();
    if !v.is_finite() || v.abs() >= MAX_NUMERATOR {
        return Err(KemError::Input(format!(
            "perturbation value {e} does not fit the fixed-point grid"
        )));
    }
    Ok(v as i64)
}

/// `e_i = num_i / 2^f` in double precision.
pub fn perturbation_to_f64(numerators: &[i64], f: u32) -> Vec<f64> {
    let inv = (-(f as f64)).exp2();
    numerators.iter().map(|&v| v as f64 * inv).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn degenerate_gaussian_returns_offset() {
        let spec = PerturbationSpec::new(DMatrix::zeros(3, 4), vec![0.25, -0.5, 0.0, 1.0]).unwrap();
        let e = sample_perturbation(&spec, 4, 24, 1.0, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        assert_eq!(perturbation_to_f64(&e, 24), vec![0.25, -0.5, 0.0, 1.0]);
    }

    #[test]
    fn budget_is_enforced() {
        let spec = PerturbationSpec::isotropic(4, 1.0).unwrap();
        assert!(spec.check_budget(1.0).is_err());
        assert!(spec.check_budget(1.01).is_ok());
        assert!(sample_perturbation(&spec, 4, 24, 0.5, &mut ChaCha8Rng::seed_from_u64(1)).is_err());
    }

    #[test]
    fn shape_is_checked() {
        assert!(PerturbationSpec::new(DMatrix::zeros(2, 3), vec![0.0; 2]).is_err());
        let spec = PerturbationSpec::isotropic(3, 0.1).unwrap();
        assert!(sample_perturbation(&spec, 4, 24, 1.0, &mut ChaCha8Rng::seed_from_u64(1)).is_err());
    }
}
