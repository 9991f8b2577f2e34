//! Sparse Latin-square parity-check matrices.

use ldlc_ratmath::{det_multimodular, IntMatrix, Rational, RationalMatrix};
use num_bigint::BigInt;
use num_traits::Zero;
use sha3::digest::XofReader;

use super::{GeneratingSequence, ShiftSet};
use crate::error::{param, KemError, Result};
use crate::kem::kdf::tagged_reader;

/// One nonzero of H: `value = num / 2^r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Entry {
    pub row: usize,
    pub col: usize,
    pub num: i64,
}

/// Sparse `n x n` parity-check matrix with exactly `d` nonzeros per row and
/// column, all on the `2^-r` grid, and its exact nonzero determinant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseParityCheck {
    n: usize,
    d: usize,
    r: u32,
    entries: Vec<Entry>,
    det: Rational,
}

/// Sign bits for every `(column, sequence index)` pair, read from a SHAKE-256
/// stream keyed by the seed; bit `i * d + j` set means a negative entry.
pub fn sign_bits(sign_seed: &[u8], n: usize, d: usize) -> Vec<bool> {
    let mut reader = tagged_reader("LDLC-sign", &[sign_seed, &(n as u64).to_le_bytes()]);
    let mut bytes = vec![0u8; (n * d).div_ceil(8)];
    reader.read(&mut bytes);
    (0..n * d)
        .map(|k| (bytes[k / 8] >> (k % 8)) & 1 == 1)
        .collect()
}

/// Builds H from the secret data. The result is a pure function of its
/// arguments.
pub fn build_parity_check(
    seq: &GeneratingSequence,
    shifts: &ShiftSet,
    sign_seed: &[u8],
    n: usize,
) -> Result<SparseParityCheck> {
    build_parity_check_with_signs(seq, shifts, &sign_bits(sign_seed, n, seq.d()), n)
}

/// Same as [`build_parity_check`] with explicit sign bits (`true` = negative),
/// indexed `column * d + j`.
pub fn build_parity_check_with_signs(
    seq: &GeneratingSequence,
    shifts: &ShiftSet,
    negative: &[bool],
    n: usize,
) -> Result<SparseParityCheck> {
    let d = seq.d();
    if shifts.d() != d {
        return Err(param(format!(
            "{} shifts for a sequence of length {d}",
            shifts.d()
        )));
    }
    // Revalidate against this n.
    ShiftSet::new(shifts.shifts().to_vec(), n)?;
    if negative.len() != n * d {
        return Err(param(format!(
            "{} sign bits for {} entries",
            negative.len(),
            n * d
        )));
    }
    let mut entries = Vec::with_capacity(n * d);
    for col in 0..n {
        for (j, (&k, &p)) in seq.numerators().iter().zip(shifts.shifts()).enumerate() {
            let row = (col + p - 1) % n;
            let num = if negative[col * d + j] {
                -(k as i64)
            } else {
                k as i64
            };
            entries.push(Entry { row, col, num });
        }
    }
    let r = seq.r();
    let mut h = SparseParityCheck {
        n,
        d,
        r,
        entries,
        det: Rational::zero(),
    };
    let det_num = det_multimodular(&h.to_scaled_integer())?;
    if det_num.is_zero() {
        return Err(KemError::Singular(
            "parity-check matrix has determinant zero".into(),
        ));
    }
    h.det = Rational::new(det_num, BigInt::from(1u8) << (r as usize * n));
    Ok(h)
}

impl SparseParityCheck {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn det(&self) -> &Rational {
        &self.det
    }

    pub fn value(&self, e: &Entry) -> Rational {
        Rational::new(BigInt::from(e.num), BigInt::from(1u8) << self.r as usize)
    }

    pub fn value_f64(&self, e: &Entry) -> f64 {
        e.num as f64 / (1u64 << self.r) as f64
    }

    /// `(row, col, value)` in construction order.
    pub fn triplets(&self) -> Vec<(usize, usize, Rational)> {
        self.entries
            .iter()
            .map(|e| (e.row, e.col, self.value(e)))
            .collect()
    }

    /// `2^r * H` as an integer matrix.
    pub fn to_scaled_integer(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.n, self.n);
        for e in &self.entries {
            m[(e.row, e.col)] = BigInt::from(e.num);
        }
        m
    }

    pub fn to_rational(&self) -> RationalMatrix {
        self.to_scaled_integer()
            .div_scalar(&(BigInt::from(1u8) << self.r as usize))
    }

    /// Row-major dense copy in double precision.
    pub fn to_dense_f64(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.n * self.n];
        for e in &self.entries {
            out[e.row * self.n + e.col] = self.value_f64(e);
        }
        out
    }

    /// For each column, its `(row, value)` pairs: the check equations of
    /// `x * H`.
    pub fn columns_f64(&self) -> Vec<Vec<(usize, f64)>> {
        let mut cols = vec![Vec::with_capacity(self.d); self.n];
        for e in &self.entries {
            cols[e.col].push((e.row, self.value_f64(e)));
        }
        cols
    }

    /// `x * H` in double precision.
    pub fn vec_mul_f64(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for e in &self.entries {
            out[e.col] += x[e.row] * self.value_f64(e);
        }
        out
    }

    /// `x * H` exactly.
    pub fn vec_mul_exact(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        if x.len() != self.n {
            return Err(KemError::Input(format!(
                "vector of length {} for n = {}",
                x.len(),
                self.n
            )));
        }
        let mut out = vec![Rational::zero(); self.n];
        for e in &self.entries {
            if !x[e.row].is_zero() {
                out[e.col] += &x[e.row] * self.value(e);
            }
        }
        Ok(out)
    }

    /// `x * H` for an integer row vector, as integers scaled by `2^r`.
    pub fn vec_mul_scaled_int(&self, x: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.n];
        for e in &self.entries {
            if !x[e.row].is_zero() {
                out[e.col] += &x[e.row] * e.num;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ldlc_ratmath::rat_determinant;
    use ldlc_ratmath::rational::rat;

    #[test]
    fn single_value_gives_identity() {
        let seq = GeneratingSequence::new(&[rat(1, 1)], 1).unwrap();
        let shifts = ShiftSet::new(vec![1], 3).unwrap();
        let h = build_parity_check_with_signs(&seq, &shifts, &[false; 3], 3).unwrap();
        assert_eq!(h.to_rational(), RationalMatrix::identity(3));
        assert_eq!(h.det(), &rat(1, 1));
    }

    #[test]
    fn circulant_example() {
        let seq = GeneratingSequence::new(&[rat(1, 1), rat(1, 2)], 1).unwrap();
        let shifts = ShiftSet::new(vec![1, 2], 5).unwrap();
        let h = build_parity_check_with_signs(&seq, &shifts, &[false; 10], 5).unwrap();
        let dense = h.to_rational();
        for j in 0..5 {
            assert_eq!(dense[(j, j)], rat(1, 1));
            assert_eq!(dense[((j + 1) % 5, j)], rat(1, 2));
        }
        assert_eq!(h.det(), &rat(33, 32));
        assert_eq!(rat_determinant(&dense).unwrap(), rat(33, 32));
    }

    #[test]
    fn duplicate_or_mismatched_shifts_fail() {
        let seq = GeneratingSequence::new(&[rat(1, 1), rat(1, 2)], 1).unwrap();
        let shifts = ShiftSet::new(vec![1], 5).unwrap();
        assert!(build_parity_check(&seq, &shifts, b"seed", 5).is_err());
        let far = ShiftSet::new(vec![1, 9], 9).unwrap();
        assert!(build_parity_check(&seq, &far, b"seed", 5).is_err());
    }

    #[test]
    fn singular_construction_is_reported() {
        // Two equal magnitudes with opposite signs in every column of a 2x2.
        let seq = GeneratingSequence::new(&[rat(1, 2), rat(1, 2)], 1).unwrap();
        let shifts = ShiftSet::new(vec![1, 2], 2).unwrap();
        let h = build_parity_check_with_signs(&seq, &shifts, &[false; 4], 2);
        assert!(matches!(h, Err(KemError::Singular(_))));
    }

    #[test]
    fn signs_depend_on_seed() {
        assert_ne!(sign_bits(b"a", 50, 7), sign_bits(b"b", 50, 7));
        assert_eq!(sign_bits(b"a", 50, 7), sign_bits(b"a", 50, 7));
    }
}
