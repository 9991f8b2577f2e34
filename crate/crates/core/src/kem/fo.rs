//! Fujisaki-Okamoto variant: the lattice message is derandomized as
//! `m' = h(m, e)`, the real message travels as `c2 = bytes(m) xor g(e)`, and
//! decapsulation accepts only if re-encryption reproduces `c1` exactly.

use rand::Rng;
use sha3::digest::XofReader;

use super::encaps::{
    default_perturbation, derive_key, draw_message, encapsulate_scaled, DecapsContext,
    Decapsulated, EncapsulatedValue, Rejection,
};
use super::encoding::{pack_message, perturbation_bytes, unpack_message};
use super::kdf::{tagged_reader, tagged_xof, SharedKey};
use super::keys::{PublicKey, SecretKey};
use super::perturbation::sample_perturbation;
use crate::error::{KemError, Result};
use crate::params::CodeParams;

const TAG_H: &str = "LDLC-FO-h";
const TAG_G: &str = "LDLC-FO-g";

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FoCiphertext {
    pub c1: EncapsulatedValue,
    pub c2: Vec<u8>,
}

/// `h(m, e)`: a vector in the message space.
fn oracle_h(params: &CodeParams, m_bytes: &[u8], e_bytes: &[u8]) -> Vec<u16> {
    let mut reader = tagged_reader(TAG_H, &[m_bytes, e_bytes]);
    let mask = if params.message_bits == 16 {
        u16::MAX
    } else {
        (1u16 << params.message_bits) - 1
    };
    let mut buf = [0u8; 2];
    (0..params.n)
        .map(|_| {
            reader.read(&mut buf);
            u16::from_le_bytes(buf) & mask
        })
        .collect()
}

/// `g(e)`: keystream of `len` bytes.
fn oracle_g(e_bytes: &[u8], len: usize) -> Vec<u8> {
    tagged_xof(TAG_G, &[e_bytes], len)
}

fn xor(a: &[u8], b: &[u8]) -> Vec<u8> {
    a.iter().zip(b).map(|(x, y)| x ^ y).collect()
}

/// Deterministic core of [`fo_encaps`].
pub fn fo_encaps_with(pk: &PublicKey, m: &[u16], e: &[i64]) -> Result<(SharedKey, FoCiphertext)> {
    let params = pk.params();
    if m.len() != params.n || e.len() != params.n {
        return Err(KemError::Input(
            "message and perturbation must have length n".into(),
        ));
    }
    let m_bytes = pack_message(m, params.message_bits)?;
    let e_bytes = perturbation_bytes(e);
    let m_prime = oracle_h(params, &m_bytes, &e_bytes);
    let c1 = EncapsulatedValue::new(encapsulate_scaled(pk, &m_prime, e)?);
    let c2 = xor(&m_bytes, &oracle_g(&e_bytes, m_bytes.len()));
    Ok((derive_key(params, m, e)?, FoCiphertext { c1, c2 }))
}

pub fn fo_encaps<R: Rng + ?Sized>(
    pk: &PublicKey,
    rng: &mut R,
) -> Result<(SharedKey, FoCiphertext)> {
    let spec = default_perturbation(pk)?;
    let m = draw_message(pk.n(), pk.params().message_bits, rng);
    let e = sample_perturbation(&spec, pk.n(), pk.params().f, pk.sigma_max(), rng)?;
    fo_encaps_with(pk, &m, &e)
}

impl DecapsContext {
    pub fn fo_decaps(&self, ct: &FoCiphertext) -> Result<Decapsulated> {
        let pk = self.public_key();
        let params = pk.params();
        let rec = match self.recover(&ct.c1)? {
            Ok(r) => r,
            Err(why) => return Ok(Decapsulated::Rejected(why)),
        };
        let e_bytes = perturbation_bytes(&rec.e);
        let plain = xor(&ct.c2, &oracle_g(&e_bytes, ct.c2.len()));
        let Some(m) = unpack_message(&plain, params.n, params.message_bits) else {
            return Ok(Decapsulated::Rejected(Rejection::MalformedPayload));
        };
        let m_prime = oracle_h(params, &plain, &e_bytes);
        if encapsulate_scaled(pk, &m_prime, &rec.e)? != ct.c1.numerators() {
            return Ok(Decapsulated::Rejected(Rejection::ReencryptionMismatch));
        }
        Ok(Decapsulated::Key(derive_key(params, &m, &rec.e)?))
    }
}

/// One-shot FO decapsulation.
pub fn fo_decaps(sk: &SecretKey, pk: &PublicKey, ct: &FoCiphertext) -> Result<Decapsulated> {
    DecapsContext::new(sk, pk)?.fo_decaps(ct)
}
