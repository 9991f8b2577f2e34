//! Executable adversaries: search-space counting, the modular attack, the
//! embedding attack and round-off decoding with a chosen basis.

mod embedding;
mod harness;
mod instances;
mod nguyen;
mod roundoff;
mod space;

pub use embedding::{embedding_attack, EmbeddingAttack, EMBEDDING_MAX_N};
pub use harness::{
    default_delta, embedding_trials, nguyen_kem_trials, nguyen_toy_trials, round_off_trials,
    TrialReport,
};
pub use instances::{kem_instance, toy_ggh_instance, AttackInstance};
pub use nguyen::{nguyen_attack, NguyenAttack, NGUYEN_MAX_NODES};
pub use roundoff::{round_off_attack, round_off_with, RoundOffAttack};
pub use space::{brute_force_space, SearchSpace};

use ldlc_ratmath::rational::rat;
use ldlc_ratmath::{Rational, RationalMatrix};
use num_bigint::BigInt;

use crate::error::{unknown, Result};

/// Result of one attack run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttackOutcome {
    /// Recovered message coordinates (for the modular attack, reduced
    /// modulo `2 beta`).
    pub recovered: Option<Vec<BigInt>>,
    pub success: bool,
    /// Attack-specific work count: search nodes, LLL steps or roundings.
    pub work_metric: u64,
    pub notes: Vec<String>,
}

impl AttackOutcome {
    pub fn failure(work_metric: u64, note: impl Into<String>) -> Self {
        Self {
            recovered: None,
            success: false,
            work_metric,
            notes: vec![note.into()],
        }
    }
}

/// An attack on a ciphertext `c` given a basis of the code lattice.
pub trait Attack: Send + Sync {
    fn name(&self) -> &'static str;
    fn run(&self, c: &[Rational], basis: &RationalMatrix) -> Result<AttackOutcome>;
}

/// Tunables for [`attack_by_name`].
#[derive(Debug, Clone, PartialEq)]
pub struct AttackOptions {
    /// Half-width of the modular attack's noise alphabet.
    pub beta: u64,
    /// LLL parameter for the embedding attack.
    pub delta: Rational,
    /// Squared residual norm accepted by round-off; `None` accepts any.
    pub noise_bound2: Option<f64>,
}

impl Default for AttackOptions {
    fn default() -> Self {
        Self {
            beta: 1,
            delta: rat(3, 4),
            noise_bound2: None,
        }
    }
}

pub const ATTACK_NAMES: &[&str] = &["nguyen", "embed", "roundoff"];

pub fn attack_by_name(name: &str, options: &AttackOptions) -> Result<Box<dyn Attack>> {
    match name {
        "nguyen" => Ok(Box::new(NguyenAttack::new(options.beta)?)),
        "embed" => Ok(Box::new(EmbeddingAttack::new(options.delta.clone())?)),
        "roundoff" => Ok(Box::new(RoundOffAttack {
            noise_bound2: options.noise_bound2,
        })),
        _ => Err(unknown("attack", name, ATTACK_NAMES)),
    }
}
