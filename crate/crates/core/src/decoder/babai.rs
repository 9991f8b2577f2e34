//! Babai round-off: `round(c * B^{-1})` for a basis `B`.

use ldlc_ratmath::rational::{round_f64_half_even, round_half_even};
use ldlc_ratmath::{rat_inverse, Rational, RationalMatrix};
use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::DecodeResult;
use crate::error::{KemError, Result};
use crate::ldlc::LdlcCode;

/// Componentwise nearest integer (ties to even) of `c * basis^{-1}`.
pub fn babai_round(c: &[Rational], basis: &RationalMatrix) -> Result<Vec<BigInt>> {
    BabaiRounder::new(basis)?.round(c)
}

/// Babai rounding with a cached exact inverse, for repeated use on one basis.
#[derive(Debug, Clone)]
pub struct BabaiRounder {
    inverse: RationalMatrix,
}

impl BabaiRounder {
    pub fn new(basis: &RationalMatrix) -> Result<Self> {
        Ok(Self {
            inverse: rat_inverse(basis)?,
        })
    }

    pub fn from_inverse(inverse: RationalMatrix) -> Self {
        Self { inverse }
    }

    pub fn inverse(&self) -> &RationalMatrix {
        &self.inverse
    }

    pub fn round(&self, c: &[Rational]) -> Result<Vec<BigInt>> {
        let y = self.inverse.vec_mul(c)?;
        Ok(y.iter().map(round_half_even).collect())
    }
}

/// Rounds `c * H` on the secret basis `G = H^{-1}` in floating point.
pub fn secret_basis_round(c: &[f64], code: &LdlcCode) -> Result<DecodeResult> {
    if c.len() != code.n() {
        return Err(KemError::Input(format!(
            "observation of length {} for n = {}",
            c.len(),
            code.n()
        )));
    }
    if c.iter().any(|v| !v.is_finite()) {
        return Err(KemError::Input(
            "observation contains a non-finite value".into(),
        ));
    }
    let y = code.h_matrix().vec_mul_f64(c);
    let m_hat = y
        .iter()
        .map(|v| {
            round_f64_half_even(*v)
                .to_i64()
                .ok_or_else(|| KemError::Input("rounded coordinate does not fit in 64 bits".into()))
        })
        .collect::<Result<Vec<i64>>>()?;
    let x_hat = code.encode_f64(&m_hat)?;
    Ok(DecodeResult {
        x_hat,
        m_hat,
        converged: true,
        iterations_used: 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ldlc_ratmath::rational::rat;

    #[test]
    fn lattice_points_round_to_themselves() {
        let b = RationalMatrix::from_rows(vec![
            vec![rat(3, 2), rat(-1, 3)],
            vec![rat(1, 5), rat(2, 1)],
        ])
        .unwrap();
        let m = vec![rat(4, 1), rat(-7, 1)];
        let c = b.vec_mul(&m).unwrap();
        assert_eq!(
            babai_round(&c, &b).unwrap(),
            vec![BigInt::from(4), BigInt::from(-7)]
        );
    }

    #[test]
    fn ties_go_to_even() {
        let b = RationalMatrix::identity(3);
        let c = vec![rat(1, 2), rat(3, 2), rat(-5, 2)];
        assert_eq!(
            babai_round(&c, &b).unwrap(),
            vec![BigInt::from(0), BigInt::from(2), BigInt::from(-2)]
        );
    }

    #[test]
    fn singular_basis_is_rejected() {
        let b = RationalMatrix::from_i64_rows(&[&[1, 2], &[2, 4]]).unwrap();
        assert!(babai_round(&[rat(0, 1), rat(0, 1)], &b).is_err());
    }
}
