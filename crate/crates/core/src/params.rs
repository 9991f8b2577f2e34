//! Code and KEM parameters, plus the named parameter presets.

use ldlc_ratmath::rational::rat;
use ldlc_ratmath::Rational;
use num_traits::{One, Zero};

use crate::error::{param, Result};

/// Parameters shared by key generation, encapsulation and decapsulation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CodeParams {
    /// Code dimension.
    pub n: usize,
    /// Row and column degree of the parity-check matrix.
    pub d: usize,
    /// Fixed-point bits per generating-sequence value.
    pub r: u32,
    /// Fraction bits of the ciphertext grid.
    pub f: u32,
    /// Shared-key length in bytes.
    pub l_k: usize,
    /// Noise standard deviation as a fraction of the Poltyrev limit.
    pub sigma_ratio: Rational,
    /// Bits per message symbol; messages are uniform on `[0, 2^b)^n`.
    pub message_bits: u32,
}

pub const DEFAULT_F: u32 = 24;
pub const DEFAULT_MESSAGE_BITS: u32 = 4;
pub const DEFAULT_LK: usize = 32;

impl CodeParams {
    pub fn new(
        n: usize,
        d: usize,
        r: u32,
        f: u32,
        l_k: usize,
        sigma_ratio: Rational,
    ) -> Result<Self> {
        let p = Self {
            n,
            d,
            r,
            f,
            l_k,
            sigma_ratio,
            message_bits: DEFAULT_MESSAGE_BITS,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_message_bits(mut self, b: u32) -> Result<Self> {
        self.message_bits = b;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.d == 0 || self.n < self.d {
            return Err(param(format!(
                "need n >= d >= 1, got n = {}, d = {}",
                self.n, self.d
            )));
        }
        if self.n > u32::MAX as usize {
            return Err(param("n does not fit in 32 bits"));
        }
        if self.r == 0 || self.r > 32 {
            return Err(param(format!("r = {} outside 1..=32", self.r)));
        }
        if self.f < self.r || self.f > 40 {
            return Err(param(format!("f = {} must satisfy r <= f <= 40", self.f)));
        }
        if self.l_k < 16 {
            return Err(param(format!(
                "shared-key length {} below 16 bytes",
                self.l_k
            )));
        }
        if self.sigma_ratio <= Rational::zero() || self.sigma_ratio >= Rational::one() {
            return Err(param(format!(
                "sigma ratio {} outside (0, 1)",
                self.sigma_ratio
            )));
        }
        if self.message_bits == 0 || self.message_bits > 16 {
            return Err(param(format!(
                "message bits {} outside 1..=16",
                self.message_bits
            )));
        }
        Ok(())
    }

    /// `ceil(log2 n) + 1`, the per-shift storage width.
    pub fn q_plus(&self) -> u32 {
        ceil_log2(self.n) + 1
    }

    /// `ceil(log2 n)`.
    pub fn q_plain(&self) -> u32 {
        ceil_log2(self.n)
    }

    pub fn sigma_ratio_f64(&self) -> f64 {
        ldlc_ratmath::rational::to_f64(&self.sigma_ratio)
    }
}

/// `ceil(log2 n)` for `n >= 1`.
pub fn ceil_log2(n: usize) -> u32 {
    if n <= 1 {
        0
    } else {
        usize::BITS - (n - 1).leading_zeros()
    }
}

/// A named parameter set together with the generating-sequence source used
/// at key generation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Preset {
    pub name: String,
    pub params: CodeParams,
    pub sequence: String,
}

fn reference_params(n: usize) -> CodeParams {
    CodeParams::new(n, 7, 16, DEFAULT_F, DEFAULT_LK, rat(1, 2)).expect("built-in preset is valid")
}

/// Built-in presets: `I`..`IV` are the large reference sets, the `desk-*`
/// sets are small enough for interactive use.
pub fn builtin_presets() -> Vec<Preset> {
    let mut out = Vec::new();
    for (name, n) in [("I", 1000), ("II", 2000), ("III", 5000), ("IV", 10000)] {
        out.push(Preset {
            name: name.into(),
            params: reference_params(n),
            sequence: "reference".into(),
        });
    }
    for n in [64, 100, 256] {
        out.push(Preset {
            name: format!("desk-{n}"),
            params: reference_params(n),
            sequence: "reference".into(),
        });
    }
    out
}

pub fn builtin_preset(name: &str) -> Option<Preset> {
    builtin_presets().into_iter().find(|p| p.name == name)
}
