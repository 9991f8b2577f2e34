//! Modular attack for noise in `{-beta, +beta}^n`: with `s = (beta, .., beta)`,
//! `c + s = m G + (e + s)` and `e + s` is `0` modulo `2 beta`, so
//! `m mod 2 beta` solves `m G = c + s (mod 2 beta Z^n)`.

use ldlc_ratmath::rational::from_int;
use ldlc_ratmath::{Rational, RationalMatrix};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::{Attack, AttackOutcome};
use crate::error::{param, Result};

/// Search nodes visited before the attack gives up.
pub const NGUYEN_MAX_NODES: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NguyenAttack {
    beta: u64,
}

impl NguyenAttack {
    pub fn new(beta: u64) -> Result<Self> {
        if beta == 0 {
            return Err(param("beta must be positive"));
        }
        Ok(Self { beta })
    }
}

impl Attack for NguyenAttack {
    fn name(&self) -> &'static str {
        "nguyen"
    }

    fn run(&self, c: &[Rational], basis: &RationalMatrix) -> Result<AttackOutcome> {
        nguyen_attack(c, basis, self.beta)
    }
}

struct Search<'a> {
    basis: &'a RationalMatrix,
    target: Vec<Rational>,
    modulus: Rational,
    modulus_int: u64,
    nodes: u64,
}

impl Search<'_> {
    fn is_multiple(&self, v: &Rational) -> bool {
        (v / &self.modulus).is_integer()
    }

    /// Assigns `m_j` for `j >= col`; `acc` holds `sum_{i < col} m_i G_i`.
    fn descend(
        &mut self,
        col: usize,
        acc: &mut Vec<Rational>,
        m: &mut Vec<BigInt>,
    ) -> Option<bool> {
        let n = self.target.len();
        if col == n {
            return Some(true);
        }
        for digit in 0..self.modulus_int {
            self.nodes += 1;
            if self.nodes > NGUYEN_MAX_NODES {
                return None;
            }
            let mj = from_int(digit);
            let diag = &acc[col] + &mj * &self.basis[(col, col)] - &self.target[col];
            if !self.is_multiple(&diag) {
                continue;
            }
            let saved: Vec<Rational> = acc[col..].to_vec();
            if digit != 0 {
                for (k, a) in acc.iter_mut().enumerate().skip(col) {
                    let g = &self.basis[(col, k)];
                    if !g.is_zero() {
                        *a += &mj * g;
                    }
                }
            }
            m.push(BigInt::from(digit));
            match self.descend(col + 1, acc, m) {
                Some(true) => return Some(true),
                None => return None,
                Some(false) => {}
            }
            m.pop();
            acc[col..].clone_from_slice(&saved);
        }
        Some(false)
    }
}

/// Recovers `m mod 2 beta` by a column-by-column search over the
/// upper-triangular `basis`, then verifies the congruence exactly. For an
/// integer basis the search is complete; for a rational one it only tries
/// digits in `[0, 2 beta)`.
pub fn nguyen_attack(c: &[Rational], basis: &RationalMatrix, beta: u64) -> Result<AttackOutcome> {
    let n = basis.rows();
    if !basis.is_square() || c.len() != n {
        return Err(param("ciphertext length must match the square basis"));
    }
    if beta == 0 {
        return Err(param("beta must be positive"));
    }
    if !basis.is_upper_triangular() || (0..n).any(|i| basis[(i, i)].is_zero()) {
        return Err(param("the modular attack needs an upper-triangular basis"));
    }
    let modulus_int = 2 * beta;
    let shift = from_int(beta);
    let mut search = Search {
        basis,
        target: c.iter().map(|v| v + &shift).collect(),
        modulus: from_int(modulus_int),
        modulus_int,
        nodes: 0,
    };
    let mut acc = vec![Rational::zero(); n];
    let mut m = Vec::with_capacity(n);
    let found = search.descend(0, &mut acc, &mut m);
    let nodes = search.nodes;
    match found {
        None => return Ok(AttackOutcome::failure(nodes, "search budget exhausted")),
        Some(false) => {
            return Ok(AttackOutcome::failure(
                nodes,
                "no residue class matches c + s modulo 2 beta",
            ))
        }
        Some(true) => {}
    }
    let m_rat: Vec<Rational> = m.iter().cloned().map(Rational::from_integer).collect();
    let lattice_point = basis.vec_mul(&m_rat)?;
    let residual: Vec<Rational> = search
        .target
        .iter()
        .zip(&lattice_point)
        .map(|(t, p)| (t - p) / &search.modulus)
        .collect();
    if !residual.iter().all(|v| v.is_integer()) {
        return Ok(AttackOutcome::failure(nodes, "verification failed"));
    }
    let norm2: BigInt = residual.iter().map(|v| v.to_integer().pow(2)).sum();
    Ok(AttackOutcome {
        recovered: Some(m),
        success: true,
        work_metric: nodes,
        notes: vec![format!(
            "reduced problem: residual (c + s - m G) / 2beta has squared norm {}",
            norm2.to_f64().unwrap_or(f64::INFINITY)
        )],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ldlc_ratmath::rational::rat;

    fn basis() -> RationalMatrix {
        RationalMatrix::from_rows(vec![
            vec![rat(3, 1), rat(1, 1), rat(4, 1)],
            vec![rat(0, 1), rat(5, 1), rat(2, 1)],
            vec![rat(0, 1), rat(0, 1), rat(7, 1)],
        ])
        .unwrap()
    }

    #[test]
    fn recovers_message_parity() {
        let b = basis();
        let m = [rat(4, 1), rat(-3, 1), rat(9, 1)];
        let e = [rat(1, 1), rat(-1, 1), rat(-1, 1)];
        let c: Vec<Rational> = b
            .vec_mul(&m)
            .unwrap()
            .iter()
            .zip(&e)
            .map(|(x, y)| x + y)
            .collect();
        let out = nguyen_attack(&c, &b, 1).unwrap();
        assert!(out.success);
        assert_eq!(
            out.recovered.unwrap(),
            vec![BigInt::from(0), BigInt::from(1), BigInt::from(1)]
        );
    }

    #[test]
    fn fractional_noise_is_not_matched() {
        let b = basis();
        let c = vec![rat(1, 3), rat(2, 1), rat(5, 1)];
        let out = nguyen_attack(&c, &b, 1).unwrap();
        assert!(!out.success);
        assert!(out.recovered.is_none());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(nguyen_attack(&[rat(1, 1)], &basis(), 1).is_err());
        assert!(NguyenAttack::new(0).is_err());
    }
}
