//! Secret and public keys and key generation.

use ldlc_ratmath::rational::log2_abs;
use ldlc_ratmath::{
    check_hnf_properties, hnf_with_inverse, rat_inverse, IntMatrix, RationalMatrix,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use rand::RngCore;

use crate::error::{KemError, Result};
use crate::ldlc::{
    build_parity_check, sigma_max_from_log2_det, GeneratingSequence, LdlcCode, RandomSequence,
    ReferenceSequence, SequenceSource, ShiftSet, SparseParityCheck, REFERENCE_SEQUENCE,
};
use crate::params::CodeParams;
use crate::rng::derive_rng;

/// Largest dimension accepted by key generation; the exact inverse and HNF
/// grow roughly cubically in `n` with entries of `O(n r)` bits.
pub const KEYGEN_MAX_N: usize = 256;

pub const SIGN_SEED_BYTES: usize = 32;

/// Fresh sign seeds tried before giving up on a singular H.
pub const SIGN_REDRAWS: usize = 16;

/// The compact secret: generating sequence, shifts and the sign seed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecretKey {
    params: CodeParams,
    seq: GeneratingSequence,
    shifts: ShiftSet,
    sign_seed: [u8; SIGN_SEED_BYTES],
}

impl SecretKey {
    pub fn new(
        params: CodeParams,
        seq: GeneratingSequence,
        shifts: ShiftSet,
        sign_seed: [u8; SIGN_SEED_BYTES],
    ) -> Result<Self> {
        params.validate()?;
        if seq.d() != params.d || shifts.d() != params.d {
            return Err(KemError::Param(format!(
                "sequence of length {} and {} shifts for d = {}",
                seq.d(),
                shifts.d(),
                params.d
            )));
        }
        if seq.r() != params.r {
            return Err(KemError::Param(format!(
                "sequence has r = {}, parameters r = {}",
                seq.r(),
                params.r
            )));
        }
        let shifts = ShiftSet::new(shifts.shifts().to_vec(), params.n)?;
        Ok(Self {
            params,
            seq,
            shifts,
            sign_seed,
        })
    }

    pub fn params(&self) -> &CodeParams {
        &self.params
    }

    pub fn sequence(&self) -> &GeneratingSequence {
        &self.seq
    }

    pub fn shifts(&self) -> &ShiftSet {
        &self.shifts
    }

    pub fn sign_seed(&self) -> &[u8; SIGN_SEED_BYTES] {
        &self.sign_seed
    }

    /// Rebuilds H.
    pub fn parity_check(&self) -> Result<SparseParityCheck> {
        build_parity_check(&self.seq, &self.shifts, &self.sign_seed, self.params.n)
    }

    pub fn code(&self) -> Result<LdlcCode> {
        LdlcCode::new(self.parity_check()?)
    }
}

/// The public basis `G' = HNF(G)`, kept both as rationals and as the integer
/// matrix `G' * L` over the common denominator `L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublicKey {
    params: CodeParams,
    g_prime: RationalMatrix,
    denom: BigInt,
    scaled: IntMatrix,
}

impl PublicKey {
    /// Validates the HNF shape of `g_prime`.
    pub fn new(params: CodeParams, g_prime: RationalMatrix) -> Result<Self> {
        let (scaled, denom) = g_prime.to_scaled_integer();
        Self::build(params, g_prime, denom, scaled)
    }

    /// From `G' * L` and `L`; `L` must be the least common denominator.
    pub fn from_scaled(params: CodeParams, denom: BigInt, scaled: IntMatrix) -> Result<Self> {
        if !denom.is_positive() {
            return Err(KemError::Input("denominator must be positive".into()));
        }
        if !scaled.content().gcd(&denom).is_one() {
            return Err(KemError::Input("denominator is not reduced".into()));
        }
        let g_prime = scaled.div_scalar(&denom);
        Self::build(params, g_prime, denom, scaled)
    }

    fn build(
        params: CodeParams,
        g_prime: RationalMatrix,
        denom: BigInt,
        scaled: IntMatrix,
    ) -> Result<Self> {
        params.validate()?;
        if g_prime.rows() != params.n || !g_prime.is_square() {
            return Err(KemError::Input(format!(
                "public basis is {}x{}, expected {n}x{n}",
                g_prime.rows(),
                g_prime.cols(),
                n = params.n
            )));
        }
        check_hnf_properties(&g_prime)
            .map_err(|v| KemError::Input(format!("public basis is not in HNF: {v}")))?;
        Ok(Self {
            params,
            g_prime,
            denom,
            scaled,
        })
    }

    pub fn params(&self) -> &CodeParams {
        &self.params
    }

    pub fn n(&self) -> usize {
        self.params.n
    }

    pub fn g_prime(&self) -> &RationalMatrix {
        &self.g_prime
    }

    /// Common denominator `L` of `G'`.
    pub fn denom(&self) -> &BigInt {
        &self.denom
    }

    /// `G' * L`.
    pub fn scaled(&self) -> &IntMatrix {
        &self.scaled
    }

    /// `log2 |det G'|` from the diagonal.
    pub fn log2_abs_det(&self) -> f64 {
        (0..self.n()).map(|i| log2_abs(&self.g_prime[(i, i)])).sum()
    }

    pub fn sigma_max(&self) -> f64 {
        sigma_max_from_log2_det(self.log2_abs_det(), self.n())
    }

    /// Noise deviation used by encapsulation, `sigma_ratio * sigma_max`.
    pub fn sigma(&self) -> f64 {
        self.params.sigma_ratio_f64() * self.sigma_max()
    }
}

/// The sequence source used by [`keygen`]: the fixed degree-7 sequence when
/// `d = 7`, a random one otherwise.
pub fn default_sequence_source(d: usize) -> Box<dyn SequenceSource> {
    if d == REFERENCE_SEQUENCE.len() {
        Box::new(ReferenceSequence)
    } else {
        Box::new(RandomSequence)
    }
}

/// Computes `G = H^{-1}` and its HNF.
pub fn derive_public_key(sk: &SecretKey) -> Result<PublicKey> {
    let h = sk.parity_check()?.to_rational();
    let g = rat_inverse(&h)?;
    let r = hnf_with_inverse(&g, &h)?;
    PublicKey::new(sk.params.clone(), r.hnf)
}

/// Deterministic key generation from `seed`.
pub fn keygen(params: &CodeParams, seed: &[u8]) -> Result<(SecretKey, PublicKey)> {
    keygen_with_source(params, default_sequence_source(params.d).as_ref(), seed)
}

pub fn keygen_with_source(
    params: &CodeParams,
    source: &dyn SequenceSource,
    seed: &[u8],
) -> Result<(SecretKey, PublicKey)> {
    params.validate()?;
    if params.n > KEYGEN_MAX_N {
        return Err(KemError::Scale {
            what: "key generation",
            n: params.n,
            limit: KEYGEN_MAX_N,
        });
    }
    let mut rng = derive_rng(seed, "keygen", 0);
    let seq = source.generate(params.d, params.r, &mut rng)?;
    let shifts = ShiftSet::sample(params.d, params.n, &mut rng)?;
    for _ in 0..SIGN_REDRAWS {
        let mut sign_seed = [0u8; SIGN_SEED_BYTES];
        rng.fill_bytes(&mut sign_seed);
        let sk = SecretKey::new(params.clone(), seq.clone(), shifts.clone(), sign_seed)?;
        match derive_public_key(&sk) {
            Ok(pk) => return Ok((sk, pk)),
            Err(KemError::Singular(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(KemError::KeyGen(format!(
        "H was singular for {SIGN_REDRAWS} consecutive sign seeds"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ldlc_ratmath::rational::rat;
    use ldlc_ratmath::{int_determinant, RationalMatrix};

    fn small_params(n: usize, d: usize) -> CodeParams {
        CodeParams::new(n, d, 8, 24, 32, rat(1, 2)).unwrap()
    }

    #[test]
    fn unit_sequence_gives_identity_public_key() {
        let params = CodeParams::new(6, 1, 4, 24, 32, rat(1, 2)).unwrap();
        let seq = GeneratingSequence::new(&[rat(1, 1)], 4).unwrap();
        let sk = SecretKey::new(params, seq, ShiftSet::new(vec![3], 6).unwrap(), [9; 32]).unwrap();
        let pk = derive_public_key(&sk).unwrap();
        assert_eq!(pk.g_prime(), &RationalMatrix::identity(6));
        assert_eq!(pk.denom(), &BigInt::one());
    }

    #[test]
    fn transform_is_unimodular() {
        let (sk, pk) = keygen(&small_params(8, 3), b"fixed").unwrap();
        let h = sk.parity_check().unwrap().to_rational();
        let u = pk.g_prime().mul(&h).unwrap();
        assert!(u.is_integral());
        assert_eq!(
            int_determinant(&u.to_integer().unwrap()).unwrap().abs(),
            BigInt::one()
        );
    }

    #[test]
    fn keygen_is_deterministic() {
        let a = keygen(&small_params(12, 3), b"seed").unwrap();
        let b = keygen(&small_params(12, 3), b"seed").unwrap();
        let c = keygen(&small_params(12, 3), b"other").unwrap();
        assert_eq!(a, b);
        assert_ne!(a.0, c.0);
    }

    #[test]
    fn oversized_keygen_is_refused() {
        let params = CodeParams::new(KEYGEN_MAX_N + 1, 7, 16, 24, 32, rat(1, 2)).unwrap();
        assert!(matches!(keygen(&params, b"x"), Err(KemError::Scale { .. })));
    }

    #[test]
    fn scaled_constructor_rejects_unreduced_denominator() {
        let params = CodeParams::new(2, 1, 4, 24, 32, rat(1, 2)).unwrap();
        let scaled = IntMatrix::from_i64_rows(&[&[2, 0], &[0, 2]]).unwrap();
        assert!(PublicKey::from_scaled(params.clone(), BigInt::from(2), scaled.clone()).is_err());
        assert!(PublicKey::from_scaled(params, BigInt::from(1), scaled).is_ok());
    }
}
