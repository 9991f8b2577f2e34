//! Lattice decoders: sampled-pdf belief propagation on H and Babai round-off.

mod babai;
mod bp;
mod config;

pub use babai::{babai_round, secret_basis_round, BabaiRounder};
pub use bp::{bp_decode, bp_decode_observed, MarginalObserver};
pub use config::{DecodeResult, DecoderConfig};

use crate::error::{unknown, Result};
use crate::ldlc::LdlcCode;

/// A strategy recovering the secret-basis coordinates of a noisy codeword.
pub trait Decoder: Send + Sync {
    fn name(&self) -> &'static str;
    fn decode(&self, c: &[f64], code: &LdlcCode, sigma: f64) -> Result<DecodeResult>;
}

/// Belief propagation on the sparse parity-check graph.
#[derive(Debug, Clone, Default)]
pub struct BpDecoder {
    pub config: DecoderConfig,
}

impl Decoder for BpDecoder {
    fn name(&self) -> &'static str {
        "bp"
    }

    fn decode(&self, c: &[f64], code: &LdlcCode, sigma: f64) -> Result<DecodeResult> {
        bp_decode(c, code.h_matrix(), sigma, &self.config)
    }
}

/// Babai round-off on the secret basis; ignores the noise level.
#[derive(Debug, Clone, Copy, Default)]
pub struct BabaiDecoder;

impl Decoder for BabaiDecoder {
    fn name(&self) -> &'static str {
        "babai"
    }

    fn decode(&self, c: &[f64], code: &LdlcCode, _sigma: f64) -> Result<DecodeResult> {
        secret_basis_round(c, code)
    }
}

pub const DECODER_NAMES: &[&str] = &["bp", "babai"];

/// Looks up a decoder by name; `config` applies to decoders that take one.
pub fn decoder_by_name(name: &str, config: &DecoderConfig) -> Result<Box<dyn Decoder>> {
    match name {
        "bp" => {
            config.validate()?;
            Ok(Box::new(BpDecoder {
                config: config.clone(),
            }))
        }
        "babai" => Ok(Box::new(BabaiDecoder)),
        _ => Err(unknown("decoder", name, DECODER_NAMES)),
    }
}
