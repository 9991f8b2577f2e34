//! Round-off decoding `m = round(c B^{-1})` with a chosen basis.

use ldlc_ratmath::rational::to_f64;
use ldlc_ratmath::{Rational, RationalMatrix};

use super::{Attack, AttackOutcome};
use crate::decoder::BabaiRounder;
use crate::error::{param, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RoundOffAttack {
    /// Largest accepted `|c - m B|^2`; `None` accepts any residual.
    pub noise_bound2: Option<f64>,
}

impl Attack for RoundOffAttack {
    fn name(&self) -> &'static str {
        "roundoff"
    }

    fn run(&self, c: &[Rational], basis: &RationalMatrix) -> Result<AttackOutcome> {
        round_off_attack(c, basis, self.noise_bound2)
    }
}

pub fn round_off_attack(
    c: &[Rational],
    basis: &RationalMatrix,
    noise_bound2: Option<f64>,
) -> Result<AttackOutcome> {
    if c.len() != basis.rows() {
        return Err(param("ciphertext length must match the basis"));
    }
    round_off_with(&BabaiRounder::new(basis)?, c, basis, noise_bound2)
}

/// Same as [`round_off_attack`] with a precomputed rounder, for repeated use
/// of one basis.
pub fn round_off_with(
    rounder: &BabaiRounder,
    c: &[Rational],
    basis: &RationalMatrix,
    noise_bound2: Option<f64>,
) -> Result<AttackOutcome> {
    let m = rounder.round(c)?;
    let m_rat: Vec<Rational> = m.iter().cloned().map(Rational::from_integer).collect();
    let point = basis.vec_mul(&m_rat)?;
    let residual2: f64 = c
        .iter()
        .zip(&point)
        .map(|(x, p)| to_f64(&(x - p)).powi(2))
        .sum();
    let success = noise_bound2.is_none_or(|b| residual2 <= b);
    Ok(AttackOutcome {
        recovered: Some(m),
        success,
        work_metric: c.len() as u64,
        notes: vec![format!("residual squared norm {residual2:.6}")],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ldlc_ratmath::rational::rat;
    use num_bigint::BigInt;

    #[test]
    fn orthogonal_basis_rounds_exactly() {
        let basis =
            RationalMatrix::from_rows(vec![vec![rat(2, 1), rat(0, 1)], vec![rat(0, 1), rat(3, 1)]])
                .unwrap();
        let c = vec![rat(41, 10), rat(-59, 10)];
        let out = round_off_attack(&c, &basis, Some(0.5)).unwrap();
        assert_eq!(
            out.recovered.unwrap(),
            vec![BigInt::from(2), BigInt::from(-2)]
        );
        assert!(out.success);
        let strict = round_off_attack(&c, &basis, Some(0.01)).unwrap();
        assert!(!strict.success);
    }
}
