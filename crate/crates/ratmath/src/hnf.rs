//! Hermite normal form of full-rank square lattices.
//!
//! Conventions: rows are basis vectors and the form is upper triangular.
//! For `G' = HNF(G)`:
//!
//! 1. `g'[i][j] = 0` for `j < i`,
//! 2. `g'[i][i] > 0`,
//! 3. `g'[i][j] <= 0` and `|g'[i][j]| < g'[j][j]` for `j > i`.
//!
//! The third rule bounds each entry by the pivot of its own column: that is
//! the only pivot a unimodular row operation can reduce against without
//! disturbing the triangular shape, and it makes the form unique. Entries
//! are kept nonpositive, i.e. in `(-g'[j][j], 0]`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::Rational;
use crate::{rat_inverse, IntMatrix, MathError, RationalMatrix, Result};

/// `hnf = transform * input` with `transform` integral and unimodular.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HnfResult {
    pub hnf: RationalMatrix,
    pub transform: RationalMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HnfViolation {
    NotSquare,
    BelowDiagonal { row: usize, col: usize },
    NonPositiveDiagonal { row: usize },
    AboveDiagonal { row: usize, col: usize },
}

impl fmt::Display for HnfViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NotSquare => write!(f, "matrix is not square"),
            Self::BelowDiagonal { row, col } => {
                write!(f, "entry ({row},{col}) below the diagonal is nonzero")
            }
            Self::NonPositiveDiagonal { row } => write!(f, "diagonal entry {row} is not positive"),
            Self::AboveDiagonal { row, col } => {
                write!(f, "entry ({row},{col}) is not in (-pivot, 0]")
            }
        }
    }
}

/// Checks the three entry rules listed in the module docs.
pub fn check_hnf_properties(m: &RationalMatrix) -> std::result::Result<(), HnfViolation> {
    if !m.is_square() {
        return Err(HnfViolation::NotSquare);
    }
    let n = m.rows();
    for i in 0..n {
        for j in 0..i {
            if !m[(i, j)].is_zero() {
                return Err(HnfViolation::BelowDiagonal { row: i, col: j });
            }
        }
        if !m[(i, i)].is_positive() {
            return Err(HnfViolation::NonPositiveDiagonal { row: i });
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let v = &m[(i, j)];
            if v.is_positive() || v.abs() >= m[(j, j)] {
                return Err(HnfViolation::AboveDiagonal { row: i, col: j });
            }
        }
    }
    Ok(())
}

fn reduce_tail(row: &mut [BigInt], from: usize, modulus: &BigInt) {
    for v in &mut row[from..] {
        if v.is_negative() || &*v >= modulus {
            *v = v.mod_floor(modulus);
        }
    }
}

/// HNF of the integer lattice spanned by `generators` (vectors of length
/// `n`), given a positive `modulus` with `modulus * Z^n` inside the lattice.
///
/// All entries are kept reduced modulo `modulus` during elimination, so
/// intermediate sizes never exceed the size of `modulus`.
pub fn integer_hnf(generators: &[Vec<BigInt>], n: usize, modulus: &BigInt) -> Result<IntMatrix> {
    if !modulus.is_positive() {
        return Err(MathError::InvalidParameter(
            "HNF modulus must be positive".into(),
        ));
    }
    if generators.iter().any(|g| g.len() != n) {
        return Err(MathError::Dimension(
            "generator length differs from n".into(),
        ));
    }
    let e = modulus;
    let mut active: Vec<Vec<BigInt>> = generators
        .iter()
        .map(|g| {
            let mut g = g.clone();
            reduce_tail(&mut g, 0, e);
            g
        })
        .filter(|g| g.iter().any(|v| !v.is_zero()))
        .collect();
    let mut out: Vec<Vec<BigInt>> = Vec::with_capacity(n);

    for col in 0..n {
        let mut pivot: Option<Vec<BigInt>> = None;
        let mut next = Vec::with_capacity(active.len() + 1);
        for row in active.drain(..) {
            if row[col].is_zero() {
                next.push(row);
                continue;
            }
            let Some(p) = pivot.take() else {
                pivot = Some(row);
                continue;
            };
            // 2x2 unimodular step putting gcd(p[col], row[col]) in the pivot.
            let ext = p[col].extended_gcd(&row[col]);
            let (g, u, v) = (ext.gcd, ext.x, ext.y);
            let pa = &p[col] / &g;
            let ra = &row[col] / &g;
            let mut new_p = vec![BigInt::zero(); n];
            let mut new_r = vec![BigInt::zero(); n];
            for j in col..n {
                new_p[j] = &u * &p[j] + &v * &row[j];
                new_r[j] = &ra * &p[j] - &pa * &row[j];
            }
            debug_assert!(new_r[col].is_zero());
            reduce_tail(&mut new_p, col + 1, e);
            reduce_tail(&mut new_r, col + 1, e);
            if new_p[col].is_negative() {
                new_p.iter_mut().for_each(|x| *x = -&*x);
                reduce_tail(&mut new_p, col + 1, e);
            }
            if new_r.iter().any(|x| !x.is_zero()) {
                next.push(new_r);
            }
            pivot = Some(new_p);
        }

        // Fold in the implicit generator e * e_col.
        let pivot_row = match pivot {
            None => {
                let mut r = vec![BigInt::zero(); n];
                r[col] = e.clone();
                r
            }
            Some(p) => {
                let a = p[col].clone();
                let ext = a.extended_gcd(e);
                let d = ext.gcd;
                let mut r: Vec<BigInt> = p.iter().map(|x| &ext.x * x).collect();
                r[col] = d.clone();
                reduce_tail(&mut r, col + 1, e);
                // Kernel combination -(e/d) p + (a/d) e e_col, zero in column `col`.
                let f = e / &d;
                let mut w: Vec<BigInt> = p.iter().map(|x| -(&f * x)).collect();
                w[col] = BigInt::zero();
                reduce_tail(&mut w, col + 1, e);
                if w.iter().any(|x| !x.is_zero()) {
                    next.push(w);
                }
                r
            }
        };
        out.push(pivot_row);
        active = next;
    }

    // Bring each above-diagonal entry into (-g[j][j], 0].
    for i in (0..n).rev() {
        for j in i + 1..n {
            let gjj = out[j][j].clone();
            let q = -(-&out[i][j]).div_floor(&gjj); // ceil(out[i][j] / gjj)
            if !q.is_zero() {
                let (head, tail) = out.split_at_mut(j);
                let row_j = &tail[0];
                for k in j..n {
                    head[i][k] -= &q * &row_j[k];
                }
            }
        }
    }
    IntMatrix::from_rows(out)
}

/// HNF of a nonsingular rational matrix with its unimodular transform.
pub fn hnf(m: &RationalMatrix) -> Result<HnfResult> {
    m.ensure_square("HNF")?;
    let inv = rat_inverse(m)?;
    hnf_with_inverse(m, &inv)
}

/// Same as [`hnf`] when the inverse of `m` is already known, which skips the
/// most expensive step.
///
/// Denominators are cleared with `L = lcm(denominators of m)`. The integer
/// lattice `L * m` contains `e * Z^n` where `e` clears the denominators of
/// `m^{-1} / L`, so the modular HNF runs with modulus `e`; the result is
/// divided back by `L`.
pub fn hnf_with_inverse(m: &RationalMatrix, inverse: &RationalMatrix) -> Result<HnfResult> {
    m.ensure_square("HNF")?;
    let n = m.rows();
    if inverse.rows() != n || inverse.cols() != n {
        return Err(MathError::Dimension("inverse has the wrong shape".into()));
    }
    let (scaled, l) = m.to_scaled_integer();
    let mut e = BigInt::one();
    for v in inverse.entries() {
        let q = Rational::new(v.numer().clone(), v.denom() * &l);
        if !q.denom().is_one() {
            e = e.lcm(q.denom());
        }
    }
    let h_int = integer_hnf(&scaled.row_vecs(), n, &e)?;
    let hnf = h_int.div_scalar(&l);
    let transform = hnf.mul(inverse)?;
    if !transform.is_integral() {
        return Err(MathError::InvalidParameter(
            "supplied inverse does not match the matrix".into(),
        ));
    }
    Ok(HnfResult { hnf, transform })
}
