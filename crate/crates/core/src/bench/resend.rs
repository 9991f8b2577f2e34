//! Message-resend detection: given two encapsulations under one public key,
//! decide whether they carry the same message. Report only.

use ldlc_ratmath::rational::to_f64;
use ldlc_ratmath::Rational;
use num_traits::Zero;

use super::stats::wilson95;
use crate::decoder::BabaiRounder;
use crate::error::{param, Result};
use crate::kem::{
    default_perturbation, draw_message, encaps_with, keygen, sample_perturbation, PublicKey,
};
use crate::params::CodeParams;
use crate::rng::derive_rng;

/// Accuracy of one detector over paired trials.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectorScore {
    pub name: &'static str,
    pub correct: u64,
    pub trials: u64,
    pub ci95: (f64, f64),
}

impl DetectorScore {
    pub fn accuracy(&self) -> f64 {
        self.correct as f64 / self.trials.max(1) as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResendReport {
    pub n: usize,
    pub trials: u64,
    pub same_message_trials: u64,
    /// Round-off with the public basis: "same" iff `round((c1 - c2) G'^{-1}) = 0`.
    pub round_off: DetectorScore,
    /// Reference detector: "same" iff `|c1 - c2|^2 <= 2 * 9 n sigma^2`.
    pub norm: DetectorScore,
}

impl ResendReport {
    pub fn key_values(&self) -> Vec<(String, String)> {
        let mut out = vec![
            ("n".into(), self.n.to_string()),
            ("trials".into(), self.trials.to_string()),
            (
                "same_message_trials".into(),
                self.same_message_trials.to_string(),
            ),
        ];
        for d in [&self.round_off, &self.norm] {
            out.push((format!("{}_correct", d.name), d.correct.to_string()));
            out.push((
                format!("{}_accuracy", d.name),
                format!("{:.4}", d.accuracy()),
            ));
            out.push((format!("{}_ci95_lo", d.name), format!("{:.4}", d.ci95.0)));
            out.push((format!("{}_ci95_hi", d.name), format!("{:.4}", d.ci95.1)));
        }
        out
    }
}

/// Round-off verdict on a ciphertext difference.
pub fn round_off_says_same(rounder: &BabaiRounder, diff: &[Rational]) -> Result<bool> {
    Ok(rounder.round(diff)?.iter().all(|v| v.is_zero()))
}

/// Norm verdict on a ciphertext difference.
pub fn norm_says_same(diff: &[Rational], sigma: f64) -> bool {
    let norm2: f64 = diff.iter().map(|v| to_f64(v).powi(2)).sum();
    norm2 <= 2.0 * 9.0 * diff.len() as f64 * sigma * sigma
}

/// Runs `trials` pairs under one key from `seed`; even-numbered trials reuse
/// the message.
pub fn resend_experiment(params: &CodeParams, trials: u64, seed: &[u8]) -> Result<ResendReport> {
    if trials < 100 {
        return Err(param(format!(
            "resend experiment needs at least 100 trials, got {trials}"
        )));
    }
    let (_, pk) = keygen(params, seed)?;
    resend_with_key(&pk, trials, seed)
}

pub fn resend_with_key(pk: &PublicKey, trials: u64, seed: &[u8]) -> Result<ResendReport> {
    let params = pk.params();
    let spec = default_perturbation(pk)?;
    let rounder = BabaiRounder::new(pk.g_prime())?;
    let sigma = pk.sigma();
    let (mut ro, mut nm, mut same_count) = (0u64, 0u64, 0u64);
    for t in 0..trials {
        let mut rng = derive_rng(seed, "resend", t);
        let same = t % 2 == 0;
        let m1 = draw_message(pk.n(), params.message_bits, &mut rng);
        let m2 = if same {
            m1.clone()
        } else {
            draw_message(pk.n(), params.message_bits, &mut rng)
        };
        let e1 = sample_perturbation(&spec, pk.n(), params.f, pk.sigma_max(), &mut rng)?;
        let e2 = sample_perturbation(&spec, pk.n(), params.f, pk.sigma_max(), &mut rng)?;
        let c1 = encaps_with(pk, &m1, &e1)?.1.to_rational(pk);
        let c2 = encaps_with(pk, &m2, &e2)?.1.to_rational(pk);
        let diff: Vec<Rational> = c1.iter().zip(&c2).map(|(a, b)| a - b).collect();
        let truth = m1 == m2;
        same_count += truth as u64;
        ro += (round_off_says_same(&rounder, &diff)? == truth) as u64;
        nm += (norm_says_same(&diff, sigma) == truth) as u64;
    }
    Ok(ResendReport {
        n: pk.n(),
        trials,
        same_message_trials: same_count,
        round_off: DetectorScore {
            name: "roundoff",
            correct: ro,
            trials,
            ci95: wilson95(ro, trials),
        },
        norm: DetectorScore {
            name: "norm",
            correct: nm,
            trials,
            ci95: wilson95(nm, trials),
        },
    })
}
