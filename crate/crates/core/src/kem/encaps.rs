//! Encapsulation and decapsulation.
//!
//! Encaps draws `m` uniform on `[0, 2^b)^n` and a quantized Gaussian `e`,
//! publishes `c = m G' + e` exactly on the `2^-f L^-1` grid and derives
//! `K = KDF(bytes(m) || bytes(e))`. Decaps decodes `c` with the secret
//! sparse H, maps the secret-basis coordinates back through `U = G' H`,
//! recovers `e = c - m G'` exactly and rederives `K`.

use std::fmt;

use ldlc_ratmath::rational::ratio_to_f64;
use ldlc_ratmath::{int_inverse, IntMatrix, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use super::encoding::key_material;
use super::kdf::{kdf, SharedKey};
use super::keys::{PublicKey, SecretKey};
use super::perturbation::{perturbation_to_f64, sample_perturbation, PerturbationSpec};
use crate::decoder::{BpDecoder, Decoder};
use crate::error::{KemError, Result};
use crate::ldlc::LdlcCode;
use crate::params::CodeParams;

/// Noise-ball radius factor: decapsulation rejects `|e|^2 > 9 n sigma^2`.
pub const NOISE_BALL_FACTOR: f64 = 9.0;

/// `c` as integer numerators over the implied denominator `2^f L`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EncapsulatedValue {
    numerators: Vec<BigInt>,
}

impl EncapsulatedValue {
    pub fn new(numerators: Vec<BigInt>) -> Self {
        Self { numerators }
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.numerators
    }

    pub fn numerators_mut(&mut self) -> &mut [BigInt] {
        &mut self.numerators
    }

    pub fn n(&self) -> usize {
        self.numerators.len()
    }

    /// Denominator `2^f L` for the key `pk`.
    pub fn denominator(pk: &PublicKey) -> BigInt {
        pk.denom() << pk.params().f as usize
    }

    pub fn to_rational(&self, pk: &PublicKey) -> Vec<Rational> {
        let den = Self::denominator(pk);
        self.numerators
            .iter()
            .map(|v| Rational::new(v.clone(), den.clone()))
            .collect()
    }

    pub fn to_f64(&self, pk: &PublicKey) -> Vec<f64> {
        let den = Self::denominator(pk);
        self.numerators
            .iter()
            .map(|v| ratio_to_f64(v, &den))
            .collect()
    }
}

/// Why decapsulation returned the failure symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rejection {
    /// The decoder did not settle within its iteration budget.
    NotConverged,
    /// A recovered message symbol lies outside `[0, 2^b)`.
    MessageOutOfRange,
    /// The recovered perturbation is not on the `2^-f` grid.
    OffGrid,
    /// The recovered perturbation lies outside the noise ball.
    NoiseTooLarge,
    /// The symmetric part has the wrong length or nonzero padding.
    MalformedPayload,
    /// Re-encryption does not reproduce the ciphertext.
    ReencryptionMismatch,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::NotConverged => "decoder did not converge",
            Self::MessageOutOfRange => "recovered message out of range",
            Self::OffGrid => "recovered perturbation off the fixed-point grid",
            Self::NoiseTooLarge => "recovered perturbation outside the noise ball",
            Self::MalformedPayload => "malformed symmetric ciphertext",
            Self::ReencryptionMismatch => "re-encryption check failed",
        };
        f.write_str(s)
    }
}

/// A key or the failure symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decapsulated {
    Key(SharedKey),
    Rejected(Rejection),
}

impl Decapsulated {
    pub fn key(&self) -> Option<&SharedKey> {
        match self {
            Self::Key(k) => Some(k),
            Self::Rejected(_) => None,
        }
    }

    pub fn is_rejected(&self) -> bool {
        matches!(self, Self::Rejected(_))
    }
}

/// Uniform message on `[0, 2^b)^n`.
pub fn draw_message<R: Rng + ?Sized>(n: usize, b: u32, rng: &mut R) -> Vec<u16> {
    let top = 1u32 << b;
    (0..n).map(|_| rng.random_range(0..top) as u16).collect()
}

/// The isotropic perturbation of `pk`: `sigma = sigma_ratio * sigma_max`.
pub fn default_perturbation(pk: &PublicKey) -> Result<PerturbationSpec> {
    PerturbationSpec::isotropic(pk.n(), pk.sigma())
}

pub(crate) fn derive_key(params: &CodeParams, m: &[u16], e: &[i64]) -> Result<SharedKey> {
    kdf(&key_material(m, e, params.message_bits)?, params.l_k)
}

fn check_message(params: &CodeParams, m: &[u16]) -> Result<()> {
    if m.len() != params.n {
        return Err(KemError::Input(format!(
            "message of length {} for n = {}",
            m.len(),
            params.n
        )));
    }
    if params.message_bits < 16 && m.iter().any(|&s| s as u32 >> params.message_bits != 0) {
        return Err(KemError::Input(format!(
            "message symbol outside [0, 2^{})",
            params.message_bits
        )));
    }
    Ok(())
}

/// `m G' L` as integers.
fn lattice_point_scaled(pk: &PublicKey, m: &[BigInt]) -> Result<Vec<BigInt>> {
    Ok(pk.scaled().vec_mul(m)?)
}

/// Numerators of `m G' + e` over `2^f L`.
pub(crate) fn encapsulate_scaled(pk: &PublicKey, m: &[u16], e: &[i64]) -> Result<Vec<BigInt>> {
    let mb: Vec<BigInt> = m.iter().map(|&v| BigInt::from(v)).collect();
    let x = lattice_point_scaled(pk, &mb)?;
    let f = pk.params().f as usize;
    Ok(x.into_iter()
        .zip(e)
        .map(|(xi, &ei)| (xi << f) + BigInt::from(ei) * pk.denom())
        .collect())
}

/// Deterministic core of [`encaps`] for a given message and perturbation
/// (numerators over `2^f`).
pub fn encaps_with(pk: &PublicKey, m: &[u16], e: &[i64]) -> Result<(SharedKey, EncapsulatedValue)> {
    check_message(pk.params(), m)?;
    if e.len() != pk.n() {
        return Err(KemError::Input(format!(
            "perturbation of length {} for n = {}",
            e.len(),
            pk.n()
        )));
    }
    let c = EncapsulatedValue::new(encapsulate_scaled(pk, m, e)?);
    Ok((derive_key(pk.params(), m, e)?, c))
}

pub fn encaps<R: Rng + ?Sized>(
    pk: &PublicKey,
    rng: &mut R,
) -> Result<(SharedKey, EncapsulatedValue)> {
    let spec = default_perturbation(pk)?;
    encaps_with_spec(pk, &spec, rng)
}

pub fn encaps_with_spec<R: Rng + ?Sized>(
    pk: &PublicKey,
    spec: &PerturbationSpec,
    rng: &mut R,
) -> Result<(SharedKey, EncapsulatedValue)> {
    let m = draw_message(pk.n(), pk.params().message_bits, rng);
    let e = sample_perturbation(spec, pk.n(), pk.params().f, pk.sigma_max(), rng)?;
    encaps_with(pk, &m, &e)
}

/// Message and perturbation recovered from an encapsulated value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Recovered {
    pub m: Vec<u16>,
    /// Numerators of `e` over `2^f`.
    pub e: Vec<i64>,
}

/// Everything decapsulation derives from a key pair, computed once.
pub struct DecapsContext {
    pk: PublicKey,
    code: LdlcCode,
    u_inverse: IntMatrix,
    sigma: f64,
    decoder: Box<dyn Decoder>,
}

impl fmt::Debug for DecapsContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DecapsContext")
            .field("n", &self.pk.n())
            .field("decoder", &self.decoder.name())
            .finish()
    }
}

impl DecapsContext {
    /// Uses belief propagation with the default configuration.
    pub fn new(sk: &SecretKey, pk: &PublicKey) -> Result<Self> {
        Self::with_decoder(sk, pk, Box::new(BpDecoder::default()))
    }

    pub fn with_decoder(sk: &SecretKey, pk: &PublicKey, decoder: Box<dyn Decoder>) -> Result<Self> {
        if sk.params() != pk.params() {
            return Err(KemError::KeyMismatch("parameter sets differ".into()));
        }
        let code = sk.code()?;
        let u = unimodular_transform(&code, pk)?;
        let (adj, det) = int_inverse(&u)?;
        if !det.abs().is_one() {
            return Err(KemError::KeyMismatch(format!(
                "G' H has determinant {det}, not +-1"
            )));
        }
        let u_inverse = if det.is_negative() {
            IntMatrix::new(
                u.rows(),
                u.cols(),
                adj.into_entries().into_iter().map(|v| -v).collect(),
            )?
        } else {
            adj
        };
        let sigma = pk.sigma();
        Ok(Self {
            pk: pk.clone(),
            code,
            u_inverse,
            sigma,
            decoder,
        })
    }

    pub fn public_key(&self) -> &PublicKey {
        &self.pk
    }

    pub fn code(&self) -> &LdlcCode {
        &self.code
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// `U^{-1}` with `U = G' H`.
    pub fn u_inverse(&self) -> &IntMatrix {
        &self.u_inverse
    }

    /// Decodes `c` and recovers `(m, e)`, or the reason for rejecting it.
    pub fn recover(
        &self,
        c: &EncapsulatedValue,
    ) -> Result<std::result::Result<Recovered, Rejection>> {
        let params = self.pk.params();
        if c.n() != params.n {
            return Err(KemError::Input(format!(
                "ciphertext of length {} for n = {}",
                c.n(),
                params.n
            )));
        }
        let decoded = self
            .decoder
            .decode(&c.to_f64(&self.pk), &self.code, self.sigma)?;
        if !decoded.converged {
            return Ok(Err(Rejection::NotConverged));
        }
        let m_secret: Vec<BigInt> = decoded.m_hat.iter().map(|&v| BigInt::from(v)).collect();
        let m_public = self.u_inverse.vec_mul(&m_secret)?;
        let top = 1u32 << params.message_bits;
        let mut m = Vec::with_capacity(params.n);
        for v in &m_public {
            match v.to_u32() {
                Some(s) if s < top => m.push(s as u16),
                _ => return Ok(Err(Rejection::MessageOutOfRange)),
            }
        }
        let x = lattice_point_scaled(&self.pk, &m_public)?;
        let f = params.f as usize;
        let mut e = Vec::with_capacity(params.n);
        for (ci, xi) in c.numerators().iter().zip(x) {
            let (q, rem) = (ci - (xi << f)).div_rem(self.pk.denom());
            if !rem.is_zero() {
                return Ok(Err(Rejection::OffGrid));
            }
            match q.to_i64() {
                Some(v) => e.push(v),
                None => return Ok(Err(Rejection::NoiseTooLarge)),
            }
        }
        let norm2: f64 = perturbation_to_f64(&e, params.f)
            .iter()
            .map(|v| v * v)
            .sum();
        if norm2 > NOISE_BALL_FACTOR * params.n as f64 * self.sigma * self.sigma {
            return Ok(Err(Rejection::NoiseTooLarge));
        }
        Ok(Ok(Recovered { m, e }))
    }

    pub fn decaps(&self, c: &EncapsulatedValue) -> Result<Decapsulated> {
        Ok(match self.recover(c)? {
            Ok(r) => Decapsulated::Key(derive_key(self.pk.params(), &r.m, &r.e)?),
            Err(why) => Decapsulated::Rejected(why),
        })
    }
}

/// `U = G' H`, which must be an integer matrix.
fn unimodular_transform(code: &LdlcCode, pk: &PublicKey) -> Result<IntMatrix> {
    let h = code.h_matrix();
    if h.n() != pk.n() {
        return Err(KemError::KeyMismatch("dimensions differ".into()));
    }
    let scale = pk.denom() << h.r() as usize;
    let mut rows = Vec::with_capacity(pk.n());
    for i in 0..pk.n() {
        let row = h.vec_mul_scaled_int(pk.scaled().row(i));
        let mut out = Vec::with_capacity(row.len());
        for v in row {
            let (q, rem) = v.div_rem(&scale);
            if !rem.is_zero() {
                return Err(KemError::KeyMismatch("G' H is not integral".into()));
            }
            out.push(q);
        }
        rows.push(out);
    }
    Ok(IntMatrix::from_rows(rows)?)
}

/// One-shot decapsulation; prefer [`DecapsContext`] for repeated use.
pub fn decaps(sk: &SecretKey, pk: &PublicKey, c: &EncapsulatedValue) -> Result<Decapsulated> {
    DecapsContext::new(sk, pk)?.decaps(c)
}
