//! Exact LLL reduction with integer Gram-Schmidt data.
//!
//! Works on `d_i` (Gram determinants of the leading rows) and
//! `lambda_ij = d_j * mu_ij`, which stay integral for an integer basis, so
//! no rational arithmetic is needed inside the main loop. Rational input is
//! scaled to an integer basis first; scaling does not change reducedness.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::Rational;
use crate::{IntMatrix, MathError, RationalMatrix, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LllStats {
    pub swaps: u64,
    pub size_reductions: u64,
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .map(|(x, y)| x * y)
        .sum()
}

/// Nearest integer to `num / den` for `den > 0`, ties toward +infinity.
fn round_div(num: &BigInt, den: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    (num * &two + den).div_floor(&(den * two))
}

fn check_delta(delta: &Rational) -> Result<(BigInt, BigInt)> {
    let quarter = Rational::new(BigInt::one(), BigInt::from(4));
    if delta <= &quarter || delta >= &Rational::one() {
        return Err(MathError::InvalidParameter(format!(
            "LLL delta {delta} outside (1/4, 1)"
        )));
    }
    Ok((delta.numer().clone(), delta.denom().clone()))
}

struct Gram {
    d: Vec<BigInt>,
    lambda: Vec<Vec<BigInt>>,
}

impl Gram {
    fn d(&self, i: usize) -> &BigInt {
        &self.d[i + 1]
    }
}

/// Integral Gram-Schmidt data for rows `0..rows.len()`. `d[0] = 1` and
/// `d[i + 1]` is the Gram determinant of the first `i + 1` rows.
fn gram_row(b: &[Vec<BigInt>], g: &mut Gram, k: usize) -> Result<()> {
    for j in 0..=k {
        let mut u = dot(&b[k], &b[j]);
        for i in 0..j {
            u = (g.d(i) * u - &g.lambda[k][i] * &g.lambda[j][i]) / &g.d[i];
        }
        if j < k {
            g.lambda[k][j] = u;
        } else {
            if u.is_zero() {
                return Err(MathError::RankDeficient { row: k });
            }
            g.d[k + 1] = u;
        }
    }
    Ok(())
}

fn size_reduce(b: &mut [Vec<BigInt>], g: &mut Gram, k: usize, l: usize, stats: &mut LllStats) {
    let two_lambda: BigInt = &g.lambda[k][l] * 2;
    if two_lambda.abs() <= *g.d(l) {
        return;
    }
    let q = round_div(&g.lambda[k][l], g.d(l));
    let (head, tail) = b.split_at_mut(k);
    for (x, y) in tail[0].iter_mut().zip(&head[l]) {
        if !y.is_zero() {
            *x -= &q * y;
        }
    }
    let dl = g.d(l).clone();
    g.lambda[k][l] -= &q * dl;
    for i in 0..l {
        let t = &q * &g.lambda[l][i];
        g.lambda[k][i] -= t;
    }
    stats.size_reductions += 1;
}

fn swap(b: &mut [Vec<BigInt>], g: &mut Gram, k: usize, k_max: usize) {
    b.swap(k, k - 1);
    for j in 0..k - 1 {
        let t = std::mem::take(&mut g.lambda[k][j]);
        g.lambda[k][j] = std::mem::replace(&mut g.lambda[k - 1][j], t);
    }
    let lam = g.lambda[k][k - 1].clone();
    let dk = g.d(k).clone();
    let dk1 = g.d(k - 1).clone();
    let dk2 = g.d[k - 1].clone();
    let new_b = (&dk2 * &dk + &lam * &lam) / &dk1;
    for i in k + 1..=k_max {
        let t = g.lambda[i][k].clone();
        let new_ik = (&dk * &g.lambda[i][k - 1] - &lam * &t) / &dk1;
        let new_ik1 = (&new_b * &t + &lam * &new_ik) / &dk;
        g.lambda[i][k] = new_ik;
        g.lambda[i][k - 1] = new_ik1;
    }
    g.d[k] = new_b;
}

fn integral_lll(b: &mut [Vec<BigInt>], p: &BigInt, q: &BigInt) -> Result<LllStats> {
    let n = b.len();
    let mut stats = LllStats::default();
    let mut g = Gram {
        d: vec![BigInt::one(); n + 1],
        lambda: vec![vec![BigInt::zero(); n]; n],
    };
    if n == 0 {
        return Ok(stats);
    }
    gram_row(b, &mut g, 0)?;
    let mut k = 1;
    let mut k_max = 0;
    while k < n {
        if k > k_max {
            k_max = k;
            gram_row(b, &mut g, k)?;
        }
        loop {
            size_reduce(b, &mut g, k, k - 1, &mut stats);
            let lam = &g.lambda[k][k - 1];
            let lhs = q * (g.d(k) * &g.d[k - 1] + lam * lam);
            let rhs = p * g.d(k - 1) * g.d(k - 1);
            if lhs < rhs {
                swap(b, &mut g, k, k_max);
                stats.swaps += 1;
                k = k.saturating_sub(1).max(1);
            } else {
                for l in (0..k - 1).rev() {
                    size_reduce(b, &mut g, k, l, &mut stats);
                }
                k += 1;
                break;
            }
        }
    }
    Ok(stats)
}

/// LLL-reduces the rows of `basis` with Lovász parameter `delta`.
pub fn lll_reduce(basis: &RationalMatrix, delta: &Rational) -> Result<RationalMatrix> {
    lll_reduce_with_stats(basis, delta).map(|(m, _)| m)
}

/// Same as [`lll_reduce`], also reporting how much work was done.
pub fn lll_reduce_with_stats(
    basis: &RationalMatrix,
    delta: &Rational,
) -> Result<(RationalMatrix, LllStats)> {
    let (p, q) = check_delta(delta)?;
    if basis.rows() > basis.cols() {
        return Err(MathError::RankDeficient { row: basis.cols() });
    }
    let (scaled, l) = basis.to_scaled_integer();
    let mut rows = scaled.row_vecs();
    let stats = integral_lll(&mut rows, &p, &q)?;
    Ok((IntMatrix::from_rows(rows)?.div_scalar(&l), stats))
}

/// Whether the rows are size-reduced (`|mu_ij| <= 1/2`) and satisfy the
/// Lovász condition with parameter `delta` for every consecutive pair.
pub fn is_lll_reduced(basis: &RationalMatrix, delta: &Rational) -> Result<bool> {
    let (p, q) = check_delta(delta)?;
    let (scaled, _) = basis.to_scaled_integer();
    let b = scaled.row_vecs();
    let n = b.len();
    let mut g = Gram {
        d: vec![BigInt::one(); n + 1],
        lambda: vec![vec![BigInt::zero(); n]; n],
    };
    for k in 0..n {
        gram_row(&b, &mut g, k)?;
    }
    for k in 1..n {
        for l in 0..k {
            if (&g.lambda[k][l] * BigInt::from(2)).abs() > *g.d(l) {
                return Ok(false);
            }
        }
        let lam = &g.lambda[k][k - 1];
        if &q * (g.d(k) * &g.d[k - 1] + lam * lam) < &p * g.d(k - 1) * g.d(k - 1) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integer_coordinates;
    use crate::rational::rat;

    fn three_quarters() -> Rational {
        rat(3, 4)
    }

    #[test]
    fn diagonal_basis_is_unchanged() {
        let b = RationalMatrix::from_i64_rows(&[&[1, 0, 0], &[0, 2, 0], &[0, 0, 3]]).unwrap();
        let (r, stats) = lll_reduce_with_stats(&b, &three_quarters()).unwrap();
        assert_eq!(r, b);
        assert_eq!(stats.swaps, 0);
        assert!(is_lll_reduced(&b, &three_quarters()).unwrap());
    }

    #[test]
    fn two_dimensional_shortest_vector() {
        let b = RationalMatrix::from_i64_rows(&[&[201, 37], &[1648, 297]]).unwrap();
        let mut best = i128::MAX;
        for x in -2000i128..=2000 {
            for y in -2000i128..=2000 {
                if x == 0 && y == 0 {
                    continue;
                }
                let v0 = 201 * x + 1648 * y;
                let v1 = 37 * x + 297 * y;
                best = best.min(v0 * v0 + v1 * v1);
            }
        }
        let r = lll_reduce(&b, &three_quarters()).unwrap();
        assert!(is_lll_reduced(&r, &three_quarters()).unwrap());
        let first: Rational = r.row(0).iter().map(|v| v * v).sum();
        assert_eq!(first, Rational::from_integer(BigInt::from(best)));
    }

    #[test]
    fn reduced_basis_spans_same_lattice() {
        let b = RationalMatrix::from_i64_rows(&[&[1, 1, 1], &[-1, 0, 2], &[3, 5, 6]]).unwrap();
        let v = RationalMatrix::from_i64_rows(&[&[1, 4, 0], &[0, 1, 0], &[2, 9, 1]]).unwrap();
        let vb = v.mul(&b).unwrap();
        let r1 = lll_reduce(&b, &three_quarters()).unwrap();
        let r2 = lll_reduce(&vb, &three_quarters()).unwrap();
        for i in 0..3 {
            assert!(integer_coordinates(r1.row(i), &r2).unwrap().is_some());
            assert!(integer_coordinates(r2.row(i), &r1).unwrap().is_some());
        }
    }

    #[test]
    fn dependent_rows_are_rejected() {
        let b = RationalMatrix::from_i64_rows(&[&[1, 2, 3], &[2, 4, 6]]).unwrap();
        assert!(matches!(
            lll_reduce(&b, &three_quarters()),
            Err(MathError::RankDeficient { .. })
        ));
        assert!(matches!(
            lll_reduce(&b, &rat(1, 4)),
            Err(MathError::InvalidParameter(_))
        ));
    }

    #[test]
    fn rational_rows_are_scaled_back() {
        let b = RationalMatrix::from_rows(vec![
            vec![rat(201, 7), rat(37, 7)],
            vec![rat(1648, 7), rat(297, 7)],
        ])
        .unwrap();
        let r = lll_reduce(&b, &rat(99, 100)).unwrap();
        assert!(is_lll_reduced(&r, &rat(99, 100)).unwrap());
        assert_eq!(r.common_denominator(), BigInt::from(7));
    }
}
