use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::rational::{lcm_denominators, Rational};
use crate::{MathError, Result};

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

macro_rules! dense_common {
    ($ty:ident, $elem:ty) => {
        impl $ty {
            pub fn new(rows: usize, cols: usize, data: Vec<$elem>) -> Result<Self> {
                if data.len() != rows * cols {
                    return Err(MathError::Dimension(format!(
                        "{} entries supplied for a {rows}x{cols} matrix",
                        data.len()
                    )));
                }
                Ok(Self { rows, cols, data })
            }

            pub fn zeros(rows: usize, cols: usize) -> Self {
                Self {
                    rows,
                    cols,
                    data: vec![<$elem>::zero(); rows * cols],
                }
            }

            pub fn identity(n: usize) -> Self {
                let mut m = Self::zeros(n, n);
                for i in 0..n {
                    m[(i, i)] = <$elem>::one();
                }
                m
            }

            pub fn from_rows(rows: Vec<Vec<$elem>>) -> Result<Self> {
                let r = rows.len();
                let c = rows.first().map_or(0, |row| row.len());
                if rows.iter().any(|row| row.len() != c) {
                    return Err(MathError::Dimension("ragged rows".into()));
                }
                Ok(Self {
                    rows: r,
                    cols: c,
                    data: rows.into_iter().flatten().collect(),
                })
            }

            pub fn rows(&self) -> usize {
                self.rows
            }

            pub fn cols(&self) -> usize {
                self.cols
            }

            pub fn is_square(&self) -> bool {
                self.rows == self.cols
            }

            pub fn row(&self, i: usize) -> &[$elem] {
                &self.data[i * self.cols..(i + 1) * self.cols]
            }

            pub fn row_mut(&mut self, i: usize) -> &mut [$elem] {
                &mut self.data[i * self.cols..(i + 1) * self.cols]
            }

            pub fn row_vecs(&self) -> Vec<Vec<$elem>> {
                (0..self.rows).map(|i| self.row(i).to_vec()).collect()
            }

            pub fn entries(&self) -> &[$elem] {
                &self.data
            }

            pub fn into_entries(self) -> Vec<$elem> {
                self.data
            }

            pub fn swap_rows(&mut self, a: usize, b: usize) {
                if a != b {
                    for j in 0..self.cols {
                        self.data.swap(a * self.cols + j, b * self.cols + j);
                    }
                }
            }

            pub fn transpose(&self) -> Self {
                let mut t = Self::zeros(self.cols, self.rows);
                for i in 0..self.rows {
                    for j in 0..self.cols {
                        t[(j, i)] = self[(i, j)].clone();
                    }
                }
                t
            }

            pub fn is_upper_triangular(&self) -> bool {
                (0..self.rows).all(|i| (0..i.min(self.cols)).all(|j| self[(i, j)].is_zero()))
            }

            pub(crate) fn ensure_square(&self, what: &str) -> Result<()> {
                if self.is_square() {
                    Ok(())
                } else {
                    Err(MathError::Dimension(format!(
                        "{what} needs a square matrix, got {}x{}",
                        self.rows, self.cols
                    )))
                }
            }
        }

        impl Index<(usize, usize)> for $ty {
            type Output = $elem;
            fn index(&self, (i, j): (usize, usize)) -> &$elem {
                &self.data[i * self.cols + j]
            }
        }

        impl IndexMut<(usize, usize)> for $ty {
            fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut $elem {
                &mut self.data[i * self.cols + j]
            }
        }

        impl fmt::Debug for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                writeln!(f, "{}x{} [", self.rows, self.cols)?;
                for i in 0..self.rows {
                    let row: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
                    writeln!(f, "  [{}]", row.join(", "))?;
                }
                write!(f, "]")
            }
        }
    };
}

dense_common!(RationalMatrix, Rational);
dense_common!(IntMatrix, BigInt);

impl RationalMatrix {
    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| {
                    r.iter()
                        .map(|&v| Rational::from_integer(v.into()))
                        .collect()
                })
                .collect(),
        )
    }

    /// Least common multiple of every entry's denominator.
    pub fn common_denominator(&self) -> BigInt {
        lcm_denominators(self.data.iter())
    }

    /// Splits the matrix into `(N, L)` with `self = N / L`, `N` integral.
    pub fn to_scaled_integer(&self) -> (IntMatrix, BigInt) {
        let l = self.common_denominator();
        let data = self
            .data
            .iter()
            .map(|v| v.numer() * (&l / v.denom()))
            .collect();
        (
            IntMatrix {
                rows: self.rows,
                cols: self.cols,
                data,
            },
            l,
        )
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|v| v.is_integer())
    }

    /// The integer matrix with the same entries, if every entry is integral.
    pub fn to_integer(&self) -> Result<IntMatrix> {
        if !self.is_integral() {
            return Err(MathError::NotIntegral(
                "matrix has fractional entries".into(),
            ));
        }
        Ok(IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v.to_integer()).collect(),
        })
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * factor).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(MathError::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let (a, da) = self.to_scaled_integer();
        let (b, db) = other.to_scaled_integer();
        let prod = a.mul(&b)?;
        Ok(prod.div_scalar(&(da * db)))
    }

    /// Row vector times matrix: `v * self`.
    pub fn vec_mul(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.rows {
            return Err(MathError::Dimension(format!(
                "vector of length {} against {} rows",
                v.len(),
                self.rows
            )));
        }
        let (m, dm) = self.to_scaled_integer();
        let dv = lcm_denominators(v.iter());
        let vi: Vec<BigInt> = v.iter().map(|x| x.numer() * (&dv / x.denom())).collect();
        let prod = m.vec_mul(&vi)?;
        let den = dm * dv;
        Ok(prod
            .into_iter()
            .map(|x| Rational::new(x, den.clone()))
            .collect())
    }

    pub fn map_f64(&self) -> Vec<f64> {
        self.data.iter().map(crate::rational::to_f64).collect()
    }
}

impl IntMatrix {
    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
                .collect(),
        )
    }

    pub fn to_rational(&self) -> RationalMatrix {
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|v| Rational::from_integer(v.clone()))
                .collect(),
        }
    }

    /// `self / den` as a rational matrix, each entry in lowest terms.
    pub fn div_scalar(&self, den: &BigInt) -> RationalMatrix {
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|v| Rational::new(v.clone(), den.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(MathError::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.rows {
            return Err(MathError::Dimension(format!(
                "vector of length {} against {} rows",
                v.len(),
                self.rows
            )));
        }
        let mut out = vec![BigInt::zero(); self.cols];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                if !a.is_zero() {
                    *o += vi * a;
                }
            }
        }
        Ok(out)
    }

    /// Greatest common divisor of all entries (0 for the zero matrix).
    pub fn content(&self) -> BigInt {
        self.data.iter().fold(BigInt::zero(), |g, v| g.gcd(v))
    }
}
