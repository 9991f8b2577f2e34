//! Lattice membership: integer coordinates of a vector in a given basis.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::rational::Rational;
use crate::{solve_left, MathError, RationalMatrix, Result};

/// Integer `y` with `y * basis = v`, or `None` when `v` is not in the lattice
/// spanned by the rows of `basis`. The basis must have full row rank; it may
/// have more columns than rows.
pub fn integer_coordinates(v: &[Rational], basis: &RationalMatrix) -> Result<Option<Vec<BigInt>>> {
    if v.len() != basis.cols() {
        return Err(MathError::Dimension(format!(
            "vector of length {} against {} columns",
            v.len(),
            basis.cols()
        )));
    }
    let y = if basis.is_square() {
        solve_left(basis, v)?
    } else {
        // y (B B^T) = v B^T, then confirm that v lies in the row span.
        let bt = basis.transpose();
        let gram = basis.mul(&bt)?;
        let rhs = bt.vec_mul(v)?;
        let y = solve_left(&gram, &rhs)?;
        if basis.vec_mul(&y)? != v {
            return Ok(None);
        }
        y
    };
    if y.iter().all(|c| c.is_integer()) {
        Ok(Some(y.iter().map(|c| c.to_integer()).collect()))
    } else {
        Ok(None)
    }
}

/// Same as [`integer_coordinates`] for an upper-triangular basis with nonzero
/// diagonal, by forward substitution. Stops at the first fractional
/// coordinate.
pub fn triangular_coordinates(
    v: &[Rational],
    basis: &RationalMatrix,
) -> Result<Option<Vec<BigInt>>> {
    let n = basis.rows();
    if !basis.is_square() || v.len() != n {
        return Err(MathError::Dimension(
            "triangular solve needs a square basis of matching size".into(),
        ));
    }
    if !basis.is_upper_triangular() || (0..n).any(|i| basis[(i, i)].is_zero()) {
        return Err(MathError::InvalidParameter(
            "basis is not upper triangular with nonzero diagonal".into(),
        ));
    }
    let mut y: Vec<BigInt> = Vec::with_capacity(n);
    for j in 0..n {
        let mut acc = v[j].clone();
        for (i, yi) in y.iter().enumerate() {
            let g = &basis[(i, j)];
            if !g.is_zero() && !yi.is_zero() {
                acc -= g * Rational::from_integer(yi.clone());
            }
        }
        let c = acc / &basis[(j, j)];
        if !c.is_integer() {
            return Ok(None);
        }
        y.push(c.to_integer());
    }
    Ok(Some(y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn square_membership() {
        let b = RationalMatrix::from_i64_rows(&[&[2, 0], &[1, 3]]).unwrap();
        let v = vec![rat(5, 1), rat(9, 1)];
        assert_eq!(
            integer_coordinates(&v, &b).unwrap(),
            Some(vec![BigInt::from(1), BigInt::from(3)])
        );
        let w = vec![rat(1, 1), rat(0, 1)];
        assert_eq!(integer_coordinates(&w, &b).unwrap(), None);
        assert_eq!(
            triangular_coordinates(
                &w,
                &RationalMatrix::from_i64_rows(&[&[2, 1], &[0, 3]]).unwrap()
            )
            .unwrap(),
            None
        );
    }

    #[test]
    fn rectangular_membership() {
        let b = RationalMatrix::from_i64_rows(&[&[1, 0, 1], &[0, 2, 0]]).unwrap();
        let inside = vec![rat(3, 1), rat(-4, 1), rat(3, 1)];
        assert_eq!(
            integer_coordinates(&inside, &b).unwrap(),
            Some(vec![BigInt::from(3), BigInt::from(-2)])
        );
        let off_span = vec![rat(1, 1), rat(0, 1), rat(0, 1)];
        assert_eq!(integer_coordinates(&off_span, &b).unwrap(), None);
    }

    #[test]
    fn triangular_matches_general() {
        let b = RationalMatrix::from_rows(vec![
            vec![rat(1, 2), rat(-1, 3), rat(0, 1)],
            vec![rat(0, 1), rat(2, 1), rat(-1, 1)],
            vec![rat(0, 1), rat(0, 1), rat(5, 4)],
        ])
        .unwrap();
        let y = vec![rat(3, 1), rat(-2, 1), rat(7, 1)];
        let v = b.vec_mul(&y).unwrap();
        let expect = Some(vec![BigInt::from(3), BigInt::from(-2), BigInt::from(7)]);
        assert_eq!(triangular_coordinates(&v, &b).unwrap(), expect);
        assert_eq!(integer_coordinates(&v, &b).unwrap(), expect);
    }
}
