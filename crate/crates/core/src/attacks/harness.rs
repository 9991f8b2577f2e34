//! Monte-Carlo trial runners with ground truth. Trial `i` draws everything
//! from the stream `(seed, label, i)`, so results do not depend on the
//! worker schedule.

use ldlc_ratmath::rational::rat;
use ldlc_ratmath::{rat_inverse, triangular_coordinates, Rational};
use num_bigint::BigInt;
use rayon::prelude::*;

use super::{
    embedding_attack, kem_instance, nguyen_attack, round_off_with, toy_ggh_instance,
    AttackInstance, AttackOutcome,
};
use crate::bench::stats::wilson95;
use crate::decoder::BabaiRounder;
use crate::error::Result;
use crate::kem::{keygen, SecretKey};
use crate::params::CodeParams;
use crate::rng::{derive_rng, derive_seed};

/// Aggregate over independent trials.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialReport {
    pub label: String,
    pub trials: u64,
    /// Trials reported as successful by the attack itself.
    pub claimed: u64,
    /// Trials whose recovered message equals the ground truth.
    pub correct: u64,
    pub mean_work: f64,
    pub ci95: (f64, f64),
}

impl TrialReport {
    fn from_outcomes(label: String, outcomes: &[(bool, bool, u64)]) -> Self {
        let trials = outcomes.len() as u64;
        let claimed = outcomes.iter().filter(|o| o.0).count() as u64;
        let correct = outcomes.iter().filter(|o| o.1).count() as u64;
        let mean_work = outcomes.iter().map(|o| o.2 as f64).sum::<f64>() / trials.max(1) as f64;
        Self {
            label,
            trials,
            claimed,
            correct,
            mean_work,
            ci95: wilson95(correct, trials),
        }
    }

    pub fn rate(&self) -> f64 {
        self.correct as f64 / self.trials.max(1) as f64
    }
}

impl std::fmt::Display for TrialReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}: trials={} claimed={} correct={} rate={:.4} ci95=[{:.4}, {:.4}] mean_work={:.1}",
            self.label,
            self.trials,
            self.claimed,
            self.correct,
            self.rate(),
            self.ci95.0,
            self.ci95.1,
            self.mean_work
        )
    }
}

fn reduce_mod(v: &BigInt, modulus: u64) -> BigInt {
    let m = BigInt::from(modulus);
    ((v % &m) + &m) % &m
}

/// `(claimed, correct, work)` of one trial.
type Score = (bool, bool, u64);

fn score(outcome: &AttackOutcome, truth: &[BigInt], modulus: Option<u64>) -> Score {
    let correct = outcome.success
        && outcome.recovered.as_ref().is_some_and(|r| match modulus {
            Some(q) => r
                .iter()
                .zip(truth)
                .all(|(a, b)| reduce_mod(a, q) == reduce_mod(b, q)),
            None => r == truth,
        });
    (outcome.success, correct, outcome.work_metric)
}

/// Key pair and instance for trial `index`, with noise `sigma_ratio * sigma_max`.
fn kem_trial(
    params: &CodeParams,
    sigma_ratio: f64,
    seed: &[u8],
    label: &str,
    index: u64,
) -> Result<(SecretKey, AttackInstance)> {
    let key_seed = derive_seed(seed, &format!("{label}-key"), index);
    let (sk, pk) = keygen(params, &key_seed)?;
    let mut rng = derive_rng(seed, &format!("{label}-instance"), index);
    let inst = kem_instance(&pk, sigma_ratio * pk.sigma_max(), &mut rng)?;
    Ok((sk, inst))
}

fn run_parallel<F>(trials: u64, f: F) -> Result<Vec<(bool, bool, u64)>>
where
    F: Fn(u64) -> Result<(bool, bool, u64)> + Sync + Send,
{
    (0..trials).into_par_iter().map(f).collect()
}

/// Modular attack with `beta = 1` on integer toy instances with `e` in `{-1, 1}^n`.
pub fn nguyen_toy_trials(n: usize, trials: u64, seed: &[u8]) -> Result<TrialReport> {
    let out = run_parallel(trials, |i| {
        let inst = toy_ggh_instance(n, &mut derive_rng(seed, "nguyen-toy", i))?;
        Ok(score(
            &nguyen_attack(&inst.c, &inst.basis, 1)?,
            &inst.m,
            Some(2),
        ))
    })?;
    Ok(TrialReport::from_outcomes(
        format!("nguyen toy n={n} beta=1"),
        &out,
    ))
}

/// Modular attack with `beta = 1` on Gaussian-perturbed encapsulations.
pub fn nguyen_kem_trials(params: &CodeParams, trials: u64, seed: &[u8]) -> Result<TrialReport> {
    let ratio = params.sigma_ratio_f64();
    let out = run_parallel(trials, |i| {
        let (_, inst) = kem_trial(params, ratio, seed, "nguyen-kem", i)?;
        Ok(score(
            &nguyen_attack(&inst.c, &inst.basis, 1)?,
            &inst.m,
            Some(2),
        ))
    })?;
    Ok(TrialReport::from_outcomes(
        format!("nguyen kem n={} sigma_ratio={ratio}", params.n),
        &out,
    ))
}

/// Embedding attack on encapsulations with noise `sigma_ratio * sigma_max`.
pub fn embedding_trials(
    params: &CodeParams,
    sigma_ratio: f64,
    delta: &Rational,
    trials: u64,
    seed: &[u8],
) -> Result<TrialReport> {
    let out = run_parallel(trials, |i| {
        let (_, inst) = kem_trial(params, sigma_ratio, seed, "embed", i)?;
        Ok(score(
            &embedding_attack(&inst.c, &inst.basis, delta)?,
            &inst.m,
            None,
        ))
    })?;
    Ok(TrialReport::from_outcomes(
        format!("embed n={} sigma_ratio={sigma_ratio}", params.n),
        &out,
    ))
}

/// Paired round-off trials: the secret basis `H^{-1}` and the public HNF
/// basis decode the same ciphertexts. Returns `(secret, public)`.
pub fn round_off_trials(
    params: &CodeParams,
    sigma_ratio: f64,
    trials: u64,
    seed: &[u8],
) -> Result<(TrialReport, TrialReport)> {
    let pairs: Vec<(Score, Score)> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let (sk, inst) = kem_trial(params, sigma_ratio, seed, "roundoff", i)?;
            let h = sk.parity_check()?.to_rational();
            let g = rat_inverse(&h)?;
            let secret = round_off_with(&BabaiRounder::from_inverse(h), &inst.c, &g, None)?;
            let secret_m = match &secret.recovered {
                Some(coords) => {
                    let coords: Vec<Rational> =
                        coords.iter().cloned().map(Rational::from_integer).collect();
                    triangular_coordinates(&g.vec_mul(&coords)?, &inst.basis)?
                }
                None => None,
            };
            let secret = AttackOutcome {
                recovered: secret_m,
                ..secret
            };
            let public =
                round_off_with(&BabaiRounder::new(&inst.basis)?, &inst.c, &inst.basis, None)?;
            Ok((score(&secret, &inst.m, None), score(&public, &inst.m, None)))
        })
        .collect::<Result<_>>()?;
    let (s, p): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
    Ok((
        TrialReport::from_outcomes(
            format!("roundoff secret n={} sigma_ratio={sigma_ratio}", params.n),
            &s,
        ),
        TrialReport::from_outcomes(
            format!("roundoff public n={} sigma_ratio={sigma_ratio}", params.n),
            &p,
        ),
    ))
}

/// Default LLL parameter for the harness.
pub fn default_delta() -> Rational {
    rat(99, 100)
}
