//! SHAKE-256 key derivation and domain-separated extendable output.

use std::fmt;

use sha3::digest::{ExtendableOutput, Update, XofReader};
use sha3::Shake256;

use crate::error::{param, Result};

/// Shared key of `l_K` bytes.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SharedKey(Vec<u8>);

impl SharedKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.0
    }

    pub fn to_hex(&self) -> String {
        to_hex(&self.0)
    }
}

impl fmt::Debug for SharedKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SharedKey({})", self.to_hex())
    }
}

pub fn to_hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Raw SHAKE-256 output of `len` bytes.
pub fn shake256(input: &[u8], len: usize) -> Vec<u8> {
    let mut h = Shake256::default();
    h.update(input);
    let mut out = vec![0u8; len];
    h.finalize_xof().read(&mut out);
    out
}

/// The key derivation function: SHAKE-256 truncated to `l_k >= 16` bytes.
pub fn kdf(input: &[u8], l_k: usize) -> Result<SharedKey> {
    if l_k < 16 {
        return Err(param(format!("shared-key length {l_k} below 16 bytes")));
    }
    Ok(SharedKey(shake256(input, l_k)))
}

/// SHAKE-256 reader over a tag and a list of length-prefixed parts. Distinct
/// tags give independent functions.
pub fn tagged_reader(tag: &str, parts: &[&[u8]]) -> impl XofReader {
    let mut h = Shake256::default();
    h.update(&(tag.len() as u32).to_le_bytes());
    h.update(tag.as_bytes());
    for p in parts {
        h.update(&(p.len() as u64).to_le_bytes());
        h.update(p);
    }
    h.finalize_xof()
}

pub fn tagged_xof(tag: &str, parts: &[&[u8]], len: usize) -> Vec<u8> {
    let mut out = vec![0u8; len];
    tagged_reader(tag, parts).read(&mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_message_known_answer() {
        assert_eq!(
            to_hex(&shake256(b"", 32)),
            "46b9dd2b0ba88d13233b3feb743eeb243fcd52ea62b81b82b50c27646ed5762f"
        );
    }

    #[test]
    fn short_keys_are_rejected() {
        assert!(kdf(b"x", 15).is_err());
        assert_eq!(kdf(b"x", 16).unwrap().as_bytes().len(), 16);
    }

    #[test]
    fn tags_separate_outputs() {
        assert_ne!(tagged_xof("a", &[b"x"], 16), tagged_xof("b", &[b"x"], 16));
        assert_ne!(
            tagged_xof("a", &[b"xy"], 16),
            tagged_xof("a", &[b"x", b"y"], 16)
        );
    }
}
