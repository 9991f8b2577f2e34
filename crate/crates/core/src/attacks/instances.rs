//! Attack targets with known ground truth.

use ldlc_ratmath::rational::from_int;
use ldlc_ratmath::{hnf, Rational, RationalMatrix};
use num_bigint::BigInt;
use num_integer::Integer;
use rand::Rng;

use crate::error::{param, KemError, Result};
use crate::kem::{draw_message, encaps_with, sample_perturbation, PerturbationSpec, PublicKey};

/// A ciphertext `c = m B + e` for the public basis `B`, with the truth.
#[derive(Debug, Clone, PartialEq)]
pub struct AttackInstance {
    pub c: Vec<Rational>,
    pub basis: RationalMatrix,
    pub m: Vec<BigInt>,
    pub e: Vec<Rational>,
    /// The short basis the public one was derived from, when known.
    pub secret_basis: Option<RationalMatrix>,
}

/// Redraws allowed when the toy basis has an even determinant.
const TOY_REDRAWS: usize = 64;

/// Integer toy instance: secret basis `k I + R` with `R` uniform in
/// `[-4, 4]`, public basis its HNF, noise uniform in `{-1, +1}^n` and an odd
/// determinant so that `m mod 2` is unique.
pub fn toy_ggh_instance<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<AttackInstance> {
    if n == 0 {
        return Err(param("dimension must be positive"));
    }
    let k = 4 * (n as f64).sqrt().ceil() as i64;
    for _ in 0..TOY_REDRAWS {
        let rows: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| from_int(rng.random_range(-4..=4i64) + if i == j { k } else { 0 }))
                    .collect()
            })
            .collect();
        let secret = RationalMatrix::from_rows(rows)?;
        let public = match hnf(&secret) {
            Ok(r) => r.hnf,
            Err(_) => continue,
        };
        let det: BigInt = (0..n).map(|i| public[(i, i)].to_integer()).product();
        if det.is_even() {
            continue;
        }
        let m: Vec<BigInt> = (0..n)
            .map(|_| BigInt::from(rng.random_range(-128..128i64)))
            .collect();
        let e: Vec<Rational> = (0..n)
            .map(|_| from_int(if rng.random_bool(0.5) { 1 } else { -1 }))
            .collect();
        let m_rat: Vec<Rational> = m.iter().cloned().map(Rational::from_integer).collect();
        let c = public
            .vec_mul(&m_rat)?
            .into_iter()
            .zip(&e)
            .map(|(x, y)| x + y)
            .collect();
        return Ok(AttackInstance {
            c,
            basis: public,
            m,
            e,
            secret_basis: Some(secret),
        });
    }
    Err(KemError::KeyGen(format!(
        "no odd-determinant toy basis in {TOY_REDRAWS} draws"
    )))
}

/// Encapsulation-shaped instance under `pk` with isotropic noise of deviation
/// `sigma`, which may differ from the key's own setting.
pub fn kem_instance<R: Rng + ?Sized>(
    pk: &PublicKey,
    sigma: f64,
    rng: &mut R,
) -> Result<AttackInstance> {
    let params = pk.params();
    let spec = PerturbationSpec::isotropic(pk.n(), sigma)?;
    let m = draw_message(pk.n(), params.message_bits, rng);
    let e_num = sample_perturbation(&spec, pk.n(), params.f, pk.sigma_max(), rng)?;
    let (_, value) = encaps_with(pk, &m, &e_num)?;
    let scale = BigInt::from(1u8) << params.f as usize;
    Ok(AttackInstance {
        c: value.to_rational(pk),
        basis: pk.g_prime().clone(),
        m: m.iter().map(|&v| BigInt::from(v)).collect(),
        e: e_num
            .iter()
            .map(|&v| Rational::new(BigInt::from(v), scale.clone()))
            .collect(),
        secret_basis: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn toy_instance_is_consistent() {
        let inst = toy_ggh_instance(6, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        let m_rat: Vec<Rational> = inst.m.iter().cloned().map(Rational::from_integer).collect();
        let point = inst.basis.vec_mul(&m_rat).unwrap();
        for ((c, p), e) in inst.c.iter().zip(&point).zip(&inst.e) {
            assert_eq!(&(c - p), e);
        }
        assert!(inst.basis.is_upper_triangular());
    }
}
