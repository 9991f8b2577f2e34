//! Multi-modular determinant: Gaussian elimination modulo word-sized primes,
//! recombined by the Chinese remainder theorem up to the Hadamard bound.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{IntMatrix, Result};

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn det_mod_p(rows: &[Vec<u64>], p: u64) -> u64 {
    let n = rows.len();
    let mut a = rows.to_vec();
    let mut det = 1u64;
    for k in 0..n {
        let Some(piv) = (k..n).find(|&i| a[i][k] != 0) else {
            return 0;
        };
        if piv != k {
            a.swap(piv, k);
            det = (p - det) % p;
        }
        let pk = a[k][k];
        det = mul_mod(det, pk, p);
        let inv = pow_mod(pk, p - 2, p);
        let (top, bottom) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in bottom.iter_mut() {
            if row[k] == 0 {
                continue;
            }
            let f = mul_mod(row[k], inv, p);
            for j in k..n {
                if pivot_row[j] != 0 {
                    row[j] = (row[j] + p - mul_mod(f, pivot_row[j], p)) % p;
                }
            }
        }
    }
    det
}

/// log2 of the Hadamard bound on `|det(m)|`.
fn hadamard_bits(m: &IntMatrix) -> f64 {
    (0..m.rows())
        .map(|i| {
            let sq: BigInt = m.row(i).iter().map(|v| v * v).sum();
            if sq.is_zero() {
                0.0
            } else {
                crate::rational::log2_abs_int(&sq) / 2.0
            }
        })
        .sum()
}

/// Exact determinant of a square integer matrix by CRT over 62-bit primes.
///
/// Much faster than Bareiss for sparse or small-entry matrices of moderate
/// dimension because all elimination happens on machine words.
pub fn det_multimodular(m: &IntMatrix) -> Result<BigInt> {
    m.ensure_square("determinant")?;
    let n = m.rows();
    if n == 0 {
        return Ok(BigInt::one());
    }
    let needed_bits = hadamard_bits(m) + 2.0;
    let mut modulus = BigInt::one();
    let mut residue = BigInt::zero();
    let mut candidate = (1u64 << 62) - 57;
    while crate::rational::log2_abs_int(&modulus) < needed_bits {
        while !is_prime(candidate) {
            candidate -= 2;
        }
        let p = candidate;
        candidate -= 2;
        let pb = BigInt::from(p);
        let rows: Vec<Vec<u64>> = (0..n)
            .map(|i| {
                m.row(i)
                    .iter()
                    .map(|v| v.mod_floor(&pb).to_u64().unwrap())
                    .collect()
            })
            .collect();
        let r = BigInt::from(det_mod_p(&rows, p));
        // Garner step: residue + modulus * t with t chosen to match r mod p.
        let cur = residue.mod_floor(&pb);
        let m_inv = BigInt::from(pow_mod(modulus.mod_floor(&pb).to_u64().unwrap(), p - 2, p));
        let t = ((r - cur) * m_inv).mod_floor(&pb);
        residue += &modulus * t;
        modulus *= pb;
    }
    // Symmetric representative.
    let half = &modulus >> 1usize;
    if residue > half {
        residue -= &modulus;
    }
    debug_assert!(residue.abs() <= modulus);
    Ok(residue)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::int_determinant;

    #[test]
    fn primes_are_found() {
        assert!(is_prime((1u64 << 61) - 1));
        assert!(!is_prime((1u64 << 62) - 1));
    }

    #[test]
    fn agrees_with_bareiss() {
        let m = IntMatrix::from_i64_rows(&[
            &[65536, -3, 7, 0],
            &[12, 99999, -4, 5],
            &[-1, 2, 3, 400000],
            &[8, 0, -6, 1],
        ])
        .unwrap();
        assert_eq!(det_multimodular(&m).unwrap(), int_determinant(&m).unwrap());
        let singular = IntMatrix::from_i64_rows(&[&[2, 4], &[1, 2]]).unwrap();
        assert!(det_multimodular(&singular).unwrap().is_zero());
        let neg = IntMatrix::from_i64_rows(&[&[0, 1], &[1, 0]]).unwrap();
        assert_eq!(det_multimodular(&neg).unwrap(), BigInt::from(-1));
    }
}
