//! Byte formats of keys and ciphertexts.
//!
//! All integers are little-endian. Big integers are a 4-byte length followed
//! by minimal two's-complement bytes.
//!
//! Key file: `"LDLCKEM1"`, kind byte (`'S'` or `'P'`), params block, the
//! 8-byte params hash, payload.
//! The params block is `n: u32, d: u32, r: u8, f: u8, l_K: u32, b: u8`
//! followed by the numerator and denominator of `sigma_ratio` as big
//! integers. The secret payload is a 4-byte length and a bit string holding
//! `d` values `k_i - 1` in `r` bits (descending `h_i = k_i / 2^r`) and `d`
//! shifts in `ceil(log2 n) + 1` bits, then the 32-byte sign seed. The public
//! payload is `L`, then the `n^2` numerators of `G' L` row by row.
//!
//! Ciphertext file: `"LDLCCT1"`, kind byte (`'C'` plain, `'F'` with the FO
//! part), the first 8 bytes of SHAKE-256 over the params block, `n: u32`,
//! `n` numerators over `2^f L`; the FO kind then appends `|c2|: u32` and
//! `c2`.

use ldlc_ratmath::{IntMatrix, Rational};
use num_bigint::BigInt;
use num_traits::Signed;

use super::encaps::EncapsulatedValue;
use super::encoding::{packed_len, BitReader, BitWriter};
use super::fo::FoCiphertext;
use super::kdf::shake256;
use super::keys::{PublicKey, SecretKey, SIGN_SEED_BYTES};
use crate::error::{KemError, Result};
use crate::ldlc::{GeneratingSequence, ShiftSet};
use crate::params::CodeParams;

pub const KEY_MAGIC: &[u8; 8] = b"LDLCKEM1";
pub const CT_MAGIC: &[u8; 7] = b"LDLCCT1";
const KIND_SECRET: u8 = b'S';
const KIND_PUBLIC: u8 = b'P';
const KIND_PLAIN: u8 = b'C';
const KIND_FO: u8 = b'F';

/// Sanity bound on length prefixes so corrupt input cannot trigger huge
/// allocations.
const MAX_FIELD: usize = 1 << 28;

fn format_err(offset: usize, reason: impl Into<String>) -> KemError {
    KemError::Format {
        offset,
        reason: reason.into(),
    }
}

#[derive(Debug, Default)]
struct Writer(Vec<u8>);

impl Writer {
    fn bytes(&mut self, b: &[u8]) {
        self.0.extend_from_slice(b);
    }

    fn u8(&mut self, v: u8) {
        self.0.push(v);
    }

    fn u32(&mut self, v: u32) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }

    fn len(&mut self, v: usize) {
        self.u32(u32::try_from(v).expect("field length fits in 32 bits"));
    }

    fn bigint(&mut self, v: &BigInt) {
        let b = v.to_signed_bytes_le();
        self.len(b.len());
        self.bytes(&b);
    }
}

struct Reader<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn new(data: &'a [u8]) -> Self {
        Self { data, pos: 0 }
    }

    fn take(&mut self, n: usize, what: &str) -> Result<&'a [u8]> {
        if self.data.len() - self.pos < n {
            return Err(format_err(
                self.pos,
                format!("truncated {what}: need {n} bytes"),
            ));
        }
        let s = &self.data[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u8(&mut self, what: &str) -> Result<u8> {
        Ok(self.take(1, what)?[0])
    }

    fn u32(&mut self, what: &str) -> Result<u32> {
        Ok(u32::from_le_bytes(
            self.take(4, what)?.try_into().expect("4 bytes"),
        ))
    }

    fn len(&mut self, what: &str) -> Result<usize> {
        let at = self.pos;
        let v = self.u32(what)? as usize;
        if v > MAX_FIELD {
            return Err(format_err(at, format!("{what} length {v} is implausible")));
        }
        Ok(v)
    }

    fn bigint(&mut self, what: &str) -> Result<BigInt> {
        let len = self.len(what)?;
        let at = self.pos;
        let bytes = self.take(len, what)?;
        let v = BigInt::from_signed_bytes_le(bytes);
        if v.to_signed_bytes_le() != bytes {
            return Err(format_err(at, format!("{what} is not minimally encoded")));
        }
        Ok(v)
    }

    fn finish(&self) -> Result<()> {
        if self.pos != self.data.len() {
            return Err(format_err(
                self.pos,
                format!("{} trailing bytes", self.data.len() - self.pos),
            ));
        }
        Ok(())
    }
}

/// Serialized params block.
pub fn params_block(p: &CodeParams) -> Vec<u8> {
    let mut w = Writer::default();
    write_params(&mut w, p);
    w.0
}

/// First 8 bytes of SHAKE-256 over the params block.
pub fn params_hash(p: &CodeParams) -> [u8; 8] {
    shake256(&params_block(p), 8)
        .try_into()
        .expect("8 bytes requested")
}

fn write_params(w: &mut Writer, p: &CodeParams) {
    w.u32(p.n as u32);
    w.u32(p.d as u32);
    w.u8(p.r as u8);
    w.u8(p.f as u8);
    w.u32(p.l_k as u32);
    w.u8(p.message_bits as u8);
    w.bigint(p.sigma_ratio.numer());
    w.bigint(p.sigma_ratio.denom());
}

fn read_params(r: &mut Reader<'_>) -> Result<CodeParams> {
    let start = r.pos;
    let n = r.u32("n")? as usize;
    let d = r.u32("d")? as usize;
    let rb = r.u8("r")? as u32;
    let f = r.u8("f")? as u32;
    let l_k = r.u32("l_K")? as usize;
    let message_bits = r.u8("message bits")? as u32;
    let num = r.bigint("sigma numerator")?;
    let at = r.pos;
    let den = r.bigint("sigma denominator")?;
    if !den.is_positive() {
        return Err(format_err(at, "sigma denominator must be positive"));
    }
    let sigma_ratio = Rational::new(num.clone(), den.clone());
    if sigma_ratio.numer() != &num || sigma_ratio.denom() != &den {
        return Err(format_err(at, "sigma ratio is not in lowest terms"));
    }
    let p = CodeParams {
        n,
        d,
        r: rb,
        f,
        l_k,
        sigma_ratio,
        message_bits,
    };
    p.validate()
        .map_err(|e| format_err(start, format!("invalid parameters: {e}")))?;
    Ok(p)
}

/// Bits of the packed secret payload: `d (r + ceil(log2 n) + 1)`.
pub fn secret_payload_bits(p: &CodeParams) -> usize {
    p.d * (p.r + p.q_plus()) as usize
}

pub fn serialize_secret_key(sk: &SecretKey) -> Vec<u8> {
    let p = sk.params();
    let mut w = Writer::default();
    w.bytes(KEY_MAGIC);
    w.u8(KIND_SECRET);
    write_params(&mut w, p);
    w.bytes(&params_hash(p));
    let mut bits = BitWriter::new();
    for &k in sk.sequence().numerators() {
        bits.write(k - 1, p.r);
    }
    for &s in sk.shifts().shifts() {
        bits.write(s as u64, p.q_plus());
    }
    let payload = bits.finish();
    w.len(payload.len());
    w.bytes(&payload);
    w.bytes(sk.sign_seed());
    w.0
}

pub fn serialize_public_key(pk: &PublicKey) -> Vec<u8> {
    let mut w = Writer::default();
    w.bytes(KEY_MAGIC);
    w.u8(KIND_PUBLIC);
    write_params(&mut w, pk.params());
    w.bytes(&params_hash(pk.params()));
    w.bigint(pk.denom());
    for v in pk.scaled().entries() {
        w.bigint(v);
    }
    w.0
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KeyFile {
    Secret(SecretKey),
    Public(PublicKey),
}

pub fn deserialize_key(bytes: &[u8]) -> Result<KeyFile> {
    let mut r = Reader::new(bytes);
    if r.take(KEY_MAGIC.len(), "magic")? != KEY_MAGIC {
        return Err(format_err(0, "bad key magic"));
    }
    let kind_at = r.pos;
    let kind = r.u8("kind")?;
    if kind != KIND_SECRET && kind != KIND_PUBLIC {
        return Err(format_err(kind_at, format!("unknown key kind {kind:#04x}")));
    }
    let params = read_params(&mut r)?;
    let at = r.pos;
    if r.take(8, "params hash")? != params_hash(&params) {
        return Err(format_err(
            at,
            "params hash does not match the params block",
        ));
    }
    let key = if kind == KIND_SECRET {
        KeyFile::Secret(read_secret(&mut r, params)?)
    } else {
        KeyFile::Public(read_public(&mut r, params)?)
    };
    r.finish()?;
    Ok(key)
}

fn read_secret(r: &mut Reader<'_>, p: CodeParams) -> Result<SecretKey> {
    let at = r.pos;
    let len = r.len("secret payload")?;
    let bits = secret_payload_bits(&p);
    if len != packed_len(bits, 1) {
        return Err(format_err(
            at,
            format!(
                "secret payload of {len} bytes, expected {}",
                packed_len(bits, 1)
            ),
        ));
    }
    let at = r.pos;
    let payload = r.take(len, "secret payload")?;
    let mut br = BitReader::new(payload);
    let ks = (0..p.d)
        .map(|_| br.read(p.r).map(|v| v + 1))
        .collect::<Option<Vec<u64>>>();
    let shifts = (0..p.d)
        .map(|_| br.read(p.q_plus()).map(|v| v as usize))
        .collect::<Option<Vec<usize>>>();
    let (Some(ks), Some(shifts)) = (ks, shifts) else {
        return Err(format_err(at, "secret payload too short"));
    };
    if !br.rest_is_zero() {
        return Err(format_err(
            at + br.position() / 8,
            "nonzero padding in secret payload",
        ));
    }
    let seq =
        GeneratingSequence::from_numerators(ks, p.r).map_err(|e| format_err(at, e.to_string()))?;
    let shifts = ShiftSet::new(shifts, p.n).map_err(|e| format_err(at, e.to_string()))?;
    let seed: [u8; SIGN_SEED_BYTES] = r
        .take(SIGN_SEED_BYTES, "sign seed")?
        .try_into()
        .expect("sized take");
    SecretKey::new(p, seq, shifts, seed).map_err(|e| format_err(at, e.to_string()))
}

fn read_public(r: &mut Reader<'_>, p: CodeParams) -> Result<PublicKey> {
    let at = r.pos;
    let denom = r.bigint("denominator")?;
    let n = p.n;
    let mut entries = Vec::with_capacity(n * n);
    for _ in 0..n * n {
        entries.push(r.bigint("basis entry")?);
    }
    let scaled = IntMatrix::new(n, n, entries)?;
    PublicKey::from_scaled(p, denom, scaled).map_err(|e| format_err(at, e.to_string()))
}

pub fn deserialize_secret_key(bytes: &[u8]) -> Result<SecretKey> {
    match deserialize_key(bytes)? {
        KeyFile::Secret(sk) => Ok(sk),
        KeyFile::Public(_) => Err(format_err(
            KEY_MAGIC.len(),
            "expected a secret key, found a public key",
        )),
    }
}

pub fn deserialize_public_key(bytes: &[u8]) -> Result<PublicKey> {
    match deserialize_key(bytes)? {
        KeyFile::Public(pk) => Ok(pk),
        KeyFile::Secret(_) => Err(format_err(
            KEY_MAGIC.len(),
            "expected a public key, found a secret key",
        )),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CiphertextFile {
    Plain(EncapsulatedValue),
    Fo(FoCiphertext),
}

fn write_ct_head(w: &mut Writer, params: &CodeParams, kind: u8, c: &EncapsulatedValue) {
    w.bytes(CT_MAGIC);
    w.u8(kind);
    w.bytes(&params_hash(params));
    w.len(c.n());
    for v in c.numerators() {
        w.bigint(v);
    }
}

pub fn serialize_ct(params: &CodeParams, c: &EncapsulatedValue) -> Vec<u8> {
    let mut w = Writer::default();
    write_ct_head(&mut w, params, KIND_PLAIN, c);
    w.0
}

pub fn serialize_fo_ct(params: &CodeParams, ct: &FoCiphertext) -> Vec<u8> {
    let mut w = Writer::default();
    write_ct_head(&mut w, params, KIND_FO, &ct.c1);
    w.len(ct.c2.len());
    w.bytes(&ct.c2);
    w.0
}

/// Parses a ciphertext meant for keys with parameters `params`.
pub fn deserialize_ct(bytes: &[u8], params: &CodeParams) -> Result<CiphertextFile> {
    let mut r = Reader::new(bytes);
    if r.take(CT_MAGIC.len(), "magic")? != CT_MAGIC {
        return Err(format_err(0, "bad ciphertext magic"));
    }
    let kind_at = r.pos;
    let kind = r.u8("kind")?;
    if kind != KIND_PLAIN && kind != KIND_FO {
        return Err(format_err(
            kind_at,
            format!("unknown ciphertext kind {kind:#04x}"),
        ));
    }
    let at = r.pos;
    if r.take(8, "params hash")? != params_hash(params) {
        return Err(format_err(
            at,
            "ciphertext was made for different parameters",
        ));
    }
    let at = r.pos;
    let n = r.len("symbol count")?;
    if n != params.n {
        return Err(format_err(
            at,
            format!("{n} symbols, expected {}", params.n),
        ));
    }
    let mut nums = Vec::with_capacity(n);
    for _ in 0..n {
        nums.push(r.bigint("symbol")?);
    }
    let c1 = EncapsulatedValue::new(nums);
    let out = if kind == KIND_FO {
        let at = r.pos;
        let len = r.len("symmetric part")?;
        let expected = packed_len(params.n, params.message_bits);
        if len != expected {
            return Err(format_err(
                at,
                format!("symmetric part of {len} bytes, expected {expected}"),
            ));
        }
        let c2 = r.take(len, "symmetric part")?.to_vec();
        CiphertextFile::Fo(FoCiphertext { c1, c2 })
    } else {
        CiphertextFile::Plain(c1)
    };
    r.finish()?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kem::keygen;
    use ldlc_ratmath::rational::rat;

    fn keys() -> (SecretKey, PublicKey) {
        keygen(
            &CodeParams::new(12, 3, 8, 24, 32, rat(1, 2)).unwrap(),
            b"ser",
        )
        .unwrap()
    }

    #[test]
    fn every_header_byte_is_covered() {
        let (sk, pk) = keys();
        let header = KEY_MAGIC.len() + 1 + params_block(sk.params()).len() + 8;
        for bytes in [serialize_secret_key(&sk), serialize_public_key(&pk)] {
            for i in 0..header {
                for mask in [0x01u8, 0x80, 0xff] {
                    let mut bad = bytes.clone();
                    bad[i] ^= mask;
                    assert!(deserialize_key(&bad).is_err(), "byte {i} mask {mask:#x}");
                }
            }
        }
    }

    #[test]
    fn kinds_are_not_interchangeable() {
        let (sk, pk) = keys();
        assert!(deserialize_public_key(&serialize_secret_key(&sk)).is_err());
        assert!(deserialize_secret_key(&serialize_public_key(&pk)).is_err());
    }

    #[test]
    fn secret_payload_has_formula_width() {
        let (sk, _) = keys();
        // d (r + ceil(log2 n) + 1) = 3 * (8 + 4 + 1) bits.
        assert_eq!(secret_payload_bits(sk.params()), 39);
    }
}
