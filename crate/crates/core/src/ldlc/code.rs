//! An instantiated code: H, its floating and exact inverses, and encoding.

use std::sync::OnceLock;

use ldlc_ratmath::rational::log2_abs;
use ldlc_ratmath::{rat_inverse, Rational, RationalMatrix};
use nalgebra::DMatrix;
use num_bigint::BigInt;

use super::SparseParityCheck;
use crate::error::{KemError, Result};

/// `sqrt(2 pi e)`.
pub const SQRT_TWO_PI_E: f64 = 4.132_731_354_122_493;

/// Poltyrev limit `|det G|^{1/n} / sqrt(2 pi e)` from `log2 |det G|`.
pub fn sigma_max_from_log2_det(log2_abs_det_g: f64, n: usize) -> f64 {
    (log2_abs_det_g / n as f64).exp2() / SQRT_TWO_PI_E
}

#[derive(Debug)]
pub struct LdlcCode {
    h: SparseParityCheck,
    g_float: DMatrix<f64>,
    g_exact: OnceLock<RationalMatrix>,
}

/// Result of [`encode`].
#[derive(Debug, Clone, PartialEq)]
pub enum Codeword {
    Exact(Vec<Rational>),
    Float(Vec<f64>),
}

impl LdlcCode {
    pub fn new(h: SparseParityCheck) -> Result<Self> {
        let n = h.n();
        let dense = DMatrix::from_row_slice(n, n, &h.to_dense_f64());
        let g_float = dense
            .try_inverse()
            .ok_or_else(|| KemError::Singular("floating-point inverse of H failed".into()))?;
        Ok(Self {
            h,
            g_float,
            g_exact: OnceLock::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.h.n()
    }

    pub fn h_matrix(&self) -> &SparseParityCheck {
        &self.h
    }

    pub fn g_float(&self) -> &DMatrix<f64> {
        &self.g_float
    }

    /// `G = H^{-1}` exactly, computed on first use.
    pub fn g_exact(&self) -> &RationalMatrix {
        self.g_exact.get_or_init(|| {
            rat_inverse(&self.h.to_rational()).expect("H is nonsingular by construction")
        })
    }

    /// Supplies a precomputed exact inverse.
    pub fn with_g_exact(self, g: RationalMatrix) -> Self {
        let _ = self.g_exact.set(g);
        self
    }

    pub fn det_g(&self) -> Rational {
        self.h.det().recip()
    }

    pub fn log2_abs_det_g(&self) -> f64 {
        -log2_abs(self.h.det())
    }

    pub fn sigma_max(&self) -> f64 {
        sigma_max_from_log2_det(self.log2_abs_det_g(), self.n())
    }

    /// `m * G` in double precision.
    pub fn encode_f64(&self, m: &[i64]) -> Result<Vec<f64>> {
        self.check_len(m.len())?;
        let n = self.n();
        let mut x = vec![0.0; n];
        for (i, &mi) in m.iter().enumerate() {
            if mi != 0 {
                let mf = mi as f64;
                for (j, xj) in x.iter_mut().enumerate() {
                    *xj += mf * self.g_float[(i, j)];
                }
            }
        }
        Ok(x)
    }

    /// `m * G` exactly.
    pub fn encode_exact(&self, m: &[BigInt]) -> Result<Vec<Rational>> {
        self.check_len(m.len())?;
        let mr: Vec<Rational> = m
            .iter()
            .map(|v| Rational::from_integer(v.clone()))
            .collect();
        Ok(self.g_exact().vec_mul(&mr)?)
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n() {
            return Err(KemError::Input(format!(
                "message of length {len} for n = {}",
                self.n()
            )));
        }
        Ok(())
    }
}

/// `x = m * G`, exact or in double precision.
pub fn encode(m: &[BigInt], code: &LdlcCode, exact: bool) -> Result<Codeword> {
    if exact {
        return code.encode_exact(m).map(Codeword::Exact);
    }
    let small: Vec<i64> = m
        .iter()
        .map(|v| {
            i64::try_from(v).map_err(|_| KemError::Input("message entry exceeds 64 bits".into()))
        })
        .collect::<Result<_>>()?;
    code.encode_f64(&small).map(Codeword::Float)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ldlc::{build_parity_check_with_signs, GeneratingSequence, ShiftSet};
    use ldlc_ratmath::rational::rat;

    fn circulant_code() -> LdlcCode {
        let seq = GeneratingSequence::new(&[rat(1, 1), rat(1, 2)], 1).unwrap();
        let shifts = ShiftSet::new(vec![1, 2], 5).unwrap();
        LdlcCode::new(build_parity_check_with_signs(&seq, &shifts, &[false; 10], 5).unwrap())
            .unwrap()
    }

    #[test]
    fn zero_message_encodes_to_zero() {
        let code = circulant_code();
        let m = vec![BigInt::from(0); 5];
        assert_eq!(
            encode(&m, &code, true).unwrap(),
            Codeword::Exact(vec![rat(0, 1); 5])
        );
    }

    #[test]
    fn unit_message_gives_first_row_of_inverse() {
        let code = circulant_code();
        let mut m = vec![BigInt::from(0); 5];
        m[0] = BigInt::from(1);
        let Codeword::Exact(x) = encode(&m, &code, true).unwrap() else {
            panic!()
        };
        assert_eq!(x, code.g_exact().row(0).to_vec());
        let back = code.h_matrix().vec_mul_exact(&x).unwrap();
        assert_eq!(
            back,
            m.iter()
                .map(|v| Rational::from_integer(v.clone()))
                .collect::<Vec<_>>()
        );
    }

    #[test]
    fn float_and_exact_inverse_agree() {
        let code = circulant_code();
        let g = code.g_exact();
        for i in 0..5 {
            for j in 0..5 {
                let exact = ldlc_ratmath::rational::to_f64(&g[(i, j)]);
                assert!((code.g_float()[(i, j)] - exact).abs() < 1e-12);
            }
        }
        assert_eq!(code.det_g(), rat(32, 33));
    }

    #[test]
    fn identity_code_is_transparent() {
        let seq = GeneratingSequence::new(&[rat(1, 1)], 1).unwrap();
        let shifts = ShiftSet::new(vec![1], 4).unwrap();
        let code =
            LdlcCode::new(build_parity_check_with_signs(&seq, &shifts, &[false; 4], 4).unwrap())
                .unwrap();
        let m: Vec<BigInt> = [3, -1, 0, 7].iter().map(|&v| BigInt::from(v)).collect();
        let Codeword::Exact(x) = encode(&m, &code, true).unwrap() else {
            panic!()
        };
        assert_eq!(
            x,
            m.iter()
                .map(|v| Rational::from_integer(v.clone()))
                .collect::<Vec<_>>()
        );
        assert!((code.sigma_max() - 1.0 / SQRT_TWO_PI_E).abs() < 1e-15);
    }
}
