//! Embedding attack: LLL on `[[G, 0], [c, 1]]` looking for the short row
//! `(+-e, +-1)`.

use ldlc_ratmath::rational::{rat, round_half_even};
use ldlc_ratmath::{lll_reduce_with_stats, Rational, RationalMatrix};
use num_traits::{One, Signed, Zero};

use super::{Attack, AttackOutcome};
use crate::decoder::babai_round;
use crate::error::{param, KemError, Result};

/// Largest basis dimension accepted by the embedding attack.
pub const EMBEDDING_MAX_N: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddingAttack {
    delta: Rational,
}

impl EmbeddingAttack {
    pub fn new(delta: Rational) -> Result<Self> {
        if delta <= rat(1, 4) || delta >= rat(1, 1) {
            return Err(param(format!("LLL delta {delta} outside (1/4, 1)")));
        }
        Ok(Self { delta })
    }
}

impl Attack for EmbeddingAttack {
    fn name(&self) -> &'static str {
        "embed"
    }

    fn run(&self, c: &[Rational], basis: &RationalMatrix) -> Result<AttackOutcome> {
        embedding_attack(c, basis, &self.delta)
    }
}

fn norm2(v: &[Rational]) -> Rational {
    v.iter().map(|x| x * x).sum()
}

pub fn embedding_attack(
    c: &[Rational],
    basis: &RationalMatrix,
    delta: &Rational,
) -> Result<AttackOutcome> {
    let n = basis.rows();
    if !basis.is_square() || c.len() != n {
        return Err(param("ciphertext length must match the square basis"));
    }
    if n > EMBEDDING_MAX_N {
        return Err(KemError::Scale {
            what: "embedding attack",
            n,
            limit: EMBEDDING_MAX_N,
        });
    }
    let mut rows: Vec<Vec<Rational>> = basis
        .row_vecs()
        .into_iter()
        .map(|mut r| {
            r.push(Rational::zero());
            r
        })
        .collect();
    let mut last = c.to_vec();
    last.push(Rational::one());
    rows.push(last);
    let embedded = RationalMatrix::from_rows(rows)?;
    let (reduced, stats) = lll_reduce_with_stats(&embedded, delta)?;
    let work = stats.swaps + stats.size_reductions;

    let candidate = reduced
        .row_vecs()
        .into_iter()
        .filter(|r| r[n].abs().is_one())
        .map(|mut r| {
            if r[n].is_negative() {
                r.iter_mut().for_each(|v| *v = -v.clone());
            }
            r.truncate(n);
            r
        })
        .min_by(|a, b| norm2(a).cmp(&norm2(b)));
    let Some(e) = candidate else {
        return Ok(AttackOutcome::failure(work, "no reduced row ends in +-1"));
    };
    let target: Vec<Rational> = c.iter().zip(&e).map(|(x, y)| x - y).collect();
    let m = babai_round(&target, basis)?;
    let m_rat: Vec<Rational> = m.iter().cloned().map(Rational::from_integer).collect();
    if basis.vec_mul(&m_rat)? != target {
        return Ok(AttackOutcome::failure(work, "c - e is not a lattice point"));
    }
    let e_norm = round_half_even(&norm2(&e));
    Ok(AttackOutcome {
        recovered: Some(m),
        success: true,
        work_metric: work,
        notes: vec![
            format!(
                "LLL swaps {}, size reductions {}",
                stats.swaps, stats.size_reductions
            ),
            format!("recovered noise squared norm ~ {e_norm}"),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn finds_small_noise_in_a_skewed_basis() {
        let basis = RationalMatrix::from_rows(vec![
            vec![rat(1, 1), rat(97, 1), rat(31, 1)],
            vec![rat(0, 1), rat(101, 1), rat(55, 1)],
            vec![rat(0, 1), rat(0, 1), rat(103, 1)],
        ])
        .unwrap();
        let m = [rat(7, 1), rat(-2, 1), rat(5, 1)];
        let e = [rat(1, 10), rat(-1, 20), rat(1, 40)];
        let c: Vec<Rational> = basis
            .vec_mul(&m)
            .unwrap()
            .iter()
            .zip(&e)
            .map(|(x, y)| x + y)
            .collect();
        let out = embedding_attack(&c, &basis, &rat(99, 100)).unwrap();
        assert!(out.success);
        assert_eq!(
            out.recovered.unwrap(),
            vec![BigInt::from(7), BigInt::from(-2), BigInt::from(5)]
        );
    }

    #[test]
    fn oversized_basis_is_refused() {
        let n = EMBEDDING_MAX_N + 1;
        let basis = RationalMatrix::identity(n);
        let c = vec![Rational::zero(); n];
        assert!(matches!(
            embedding_attack(&c, &basis, &rat(3, 4)),
            Err(KemError::Scale { .. })
        ));
    }

    #[test]
    fn delta_is_validated() {
        assert!(EmbeddingAttack::new(rat(1, 4)).is_err());
        assert!(EmbeddingAttack::new(rat(3, 4)).is_ok());
    }
}
