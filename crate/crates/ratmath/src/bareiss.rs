//! Fraction-free (Bareiss) elimination.
//!
//! Every intermediate value is a minor of the input, so entry sizes grow
//! linearly with the dimension instead of exponentially, and all divisions
//! are exact.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::rational::{lcm_denominators, Rational};
use crate::{IntMatrix, MathError, RationalMatrix, Result};

fn pick_pivot(rows: &[Vec<BigInt>], k: usize) -> Option<usize> {
    (k..rows.len())
        .filter(|&i| !rows[i][k].is_zero())
        .min_by_key(|&i| rows[i][k].bits())
}

/// Exact determinant of an integer matrix.
pub fn int_determinant(m: &IntMatrix) -> Result<BigInt> {
    m.ensure_square("determinant")?;
    let n = m.rows();
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = m.row_vecs();
    let mut prev = BigInt::one();
    let mut negate = false;
    for k in 0..n {
        let Some(p) = pick_pivot(&a, k) else {
            return Ok(BigInt::zero());
        };
        if p != k {
            a.swap(p, k);
            negate = !negate;
        }
        let (top, bottom) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        let pk = &pivot_row[k];
        for row in bottom.iter_mut() {
            let aik = std::mem::take(&mut row[k]);
            for j in k + 1..n {
                let mut v = pk * &row[j];
                if !aik.is_zero() && !pivot_row[j].is_zero() {
                    v -= &aik * &pivot_row[j];
                }
                row[j] = if prev.is_one() { v } else { v / &prev };
            }
        }
        prev = a[k][k].clone();
    }
    Ok(if negate { -prev } else { prev })
}

/// Exact determinant of a rational matrix.
pub fn rat_determinant(m: &RationalMatrix) -> Result<Rational> {
    m.ensure_square("determinant")?;
    let (scaled, row_scales) = scale_rows(m);
    let det = int_determinant(&scaled)?;
    let denom = row_scales.iter().fold(BigInt::one(), |acc, s| acc * s);
    Ok(Rational::new(det, denom))
}

/// Multiplies each row by the lcm of its denominators.
fn scale_rows(m: &RationalMatrix) -> (IntMatrix, Vec<BigInt>) {
    let mut scales = Vec::with_capacity(m.rows());
    let mut data = Vec::with_capacity(m.rows() * m.cols());
    for i in 0..m.rows() {
        let l = lcm_denominators(m.row(i).iter());
        data.extend(m.row(i).iter().map(|v| v.numer() * (&l / v.denom())));
        scales.push(l);
    }
    (
        IntMatrix::new(m.rows(), m.cols(), data).expect("shape preserved"),
        scales,
    )
}

/// Fraction-free Gauss-Jordan on `n` rows whose first `n` columns form a
/// square block. On success the block becomes `p * I` and `p` is returned
/// together with the sign of the row permutation used.
fn gauss_jordan(rows: &mut [Vec<BigInt>], n: usize) -> std::result::Result<(BigInt, bool), ()> {
    let width = rows.first().map_or(0, |r| r.len());
    let mut prev = BigInt::one();
    let mut negate = false;
    for k in 0..n {
        let p = pick_pivot(rows, k).ok_or(())?;
        if p != k {
            rows.swap(p, k);
            negate = !negate;
        }
        let pivot_row = rows[k].clone();
        let pk = &pivot_row[k];
        for (i, row) in rows.iter_mut().enumerate() {
            if i == k {
                continue;
            }
            let aik = std::mem::take(&mut row[k]);
            for j in k + 1..width {
                let mut v = pk * &row[j];
                if !aik.is_zero() && !pivot_row[j].is_zero() {
                    v -= &aik * &pivot_row[j];
                }
                row[j] = if prev.is_one() { v } else { v / &prev };
            }
            if i < k {
                row[i] = pk.clone();
            }
        }
        prev = pk.clone();
    }
    Ok((prev, negate))
}

/// Scaled inverse of an integer matrix: returns `(R, p)` with `m^{-1} = R / p`
/// and `p = ±det(m)`.
pub fn int_inverse(m: &IntMatrix) -> Result<(IntMatrix, BigInt)> {
    m.ensure_square("inverse")?;
    let n = m.rows();
    let mut rows: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let mut r = m.row(i).to_vec();
            r.extend((0..n).map(|j| {
                if i == j {
                    BigInt::one()
                } else {
                    BigInt::zero()
                }
            }));
            r
        })
        .collect();
    let (p, _) = gauss_jordan(&mut rows, n).map_err(|_| MathError::Singular {
        det: Rational::zero(),
    })?;
    let data = rows
        .into_iter()
        .flat_map(|r| r.into_iter().skip(n))
        .collect();
    Ok((IntMatrix::new(n, n, data)?, p))
}

/// Exact inverse of a rational matrix.
pub fn rat_inverse(m: &RationalMatrix) -> Result<RationalMatrix> {
    m.ensure_square("inverse")?;
    let n = m.rows();
    // m = D^{-1} A with D the diagonal of row scales, so m^{-1} = A^{-1} D.
    let (a, scales) = scale_rows(m);
    let (r, p) = int_inverse(&a)?;
    let mut out = RationalMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            out[(i, j)] = Rational::new(&r[(i, j)] * &scales[j], p.clone());
        }
    }
    Ok(out)
}

/// Solves `y * m = b` for the row vector `y`.
pub fn solve_left(m: &RationalMatrix, b: &[Rational]) -> Result<Vec<Rational>> {
    m.ensure_square("solve")?;
    let n = m.rows();
    if b.len() != n {
        return Err(MathError::Dimension(format!(
            "right-hand side of length {} for n = {n}",
            b.len()
        )));
    }
    // Transposed system: row i reads sum_j m[j][i] y_j = b_i.
    let mut rows: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let col: Vec<&Rational> = (0..n)
                .map(|j| &m[(j, i)])
                .chain(std::iter::once(&b[i]))
                .collect();
            let l = lcm_denominators(col.iter().copied());
            col.into_iter()
                .map(|v| v.numer() * (&l / v.denom()))
                .collect()
        })
        .collect();
    let (p, _) = gauss_jordan(&mut rows, n).map_err(|_| MathError::Singular {
        det: Rational::zero(),
    })?;
    Ok(rows
        .into_iter()
        .map(|r| Rational::new(r[n].clone(), p.clone()))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn cofactor_det(m: &[Vec<Rational>]) -> Rational {
        let n = m.len();
        if n == 1 {
            return m[0][0].clone();
        }
        let mut total = Rational::zero();
        for c in 0..n {
            let minor: Vec<Vec<Rational>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|(j, _)| *j != c)
                        .map(|(_, v)| v.clone())
                        .collect()
                })
                .collect();
            let term = &m[0][c] * cofactor_det(&minor);
            if c % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        total
    }

    fn circulant(first_col: &[Rational]) -> RationalMatrix {
        let n = first_col.len();
        let mut m = RationalMatrix::zeros(n, n);
        for j in 0..n {
            for (k, v) in first_col.iter().enumerate() {
                m[((j + k) % n, j)] = v.clone();
            }
        }
        m
    }

    #[test]
    fn identity_determinant_is_one() {
        assert_eq!(
            rat_determinant(&RationalMatrix::identity(4)).unwrap(),
            rat(1, 1)
        );
    }

    #[test]
    fn circulant_determinant_matches_cofactor_expansion() {
        let col = [rat(1, 1), rat(1, 2), rat(0, 1), rat(0, 1), rat(0, 1)];
        let m = circulant(&col);
        let oracle = cofactor_det(&m.row_vecs());
        assert_eq!(oracle, rat(33, 32));
        assert_eq!(rat_determinant(&m).unwrap(), oracle);
    }

    #[test]
    fn repeated_row_is_singular() {
        let m = RationalMatrix::from_i64_rows(&[&[1, 2, 3], &[4, 5, 6], &[1, 2, 3]]).unwrap();
        assert_eq!(rat_determinant(&m).unwrap(), rat(0, 1));
        assert!(matches!(rat_inverse(&m), Err(MathError::Singular { .. })));
    }

    #[test]
    fn non_square_is_rejected() {
        let m = RationalMatrix::zeros(2, 3);
        assert!(matches!(rat_determinant(&m), Err(MathError::Dimension(_))));
    }

    #[test]
    fn inverse_small_cases() {
        let m = RationalMatrix::from_i64_rows(&[&[2, 1], &[1, 1]]).unwrap();
        let inv = rat_inverse(&m).unwrap();
        assert_eq!(
            inv,
            RationalMatrix::from_i64_rows(&[&[1, -1], &[-1, 2]]).unwrap()
        );
        assert_eq!(m.mul(&inv).unwrap(), RationalMatrix::identity(2));
        assert_eq!(
            rat_inverse(&RationalMatrix::identity(3)).unwrap(),
            RationalMatrix::identity(3)
        );
        let singular = RationalMatrix::from_i64_rows(&[&[1, 2], &[2, 4]]).unwrap();
        assert!(matches!(
            rat_inverse(&singular),
            Err(MathError::Singular { .. })
        ));
    }

    #[test]
    fn rational_inverse_and_solve() {
        let col = [rat(1, 1), rat(1, 2), rat(0, 1), rat(0, 1), rat(0, 1)];
        let m = circulant(&col);
        let inv = rat_inverse(&m).unwrap();
        assert_eq!(m.mul(&inv).unwrap(), RationalMatrix::identity(5));
        assert_eq!(inv.mul(&m).unwrap(), RationalMatrix::identity(5));
        let b = vec![rat(1, 3), rat(-2, 1), rat(0, 1), rat(5, 7), rat(1, 1)];
        let y = solve_left(&m, &b).unwrap();
        assert_eq!(m.vec_mul(&y).unwrap(), b);
    }

    #[test]
    fn integer_determinant_with_row_swaps() {
        let m = IntMatrix::from_i64_rows(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 3]]).unwrap();
        assert_eq!(int_determinant(&m).unwrap(), BigInt::from(-3));
        let (r, p) = int_inverse(&m).unwrap();
        let prod = m.mul(&r).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { p.clone() } else { BigInt::zero() };
                assert_eq!(prod[(i, j)], expect);
            }
        }
    }
}
