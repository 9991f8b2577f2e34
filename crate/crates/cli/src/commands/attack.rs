use std::fmt::Write as _;

use kem_ldlc::attacks::{
    attack_by_name, brute_force_space, embedding_trials, nguyen_kem_trials, nguyen_toy_trials,
    round_off_trials, AttackOptions, AttackOutcome, TrialReport,
};
use kem_ldlc::kem::serialize::{deserialize_ct, deserialize_public_key, CiphertextFile};

use super::{resolve_params, resolve_seed};
use crate::args::{AttackCommand, TargetArgs};
use crate::error::{CliError, CliResult};
use crate::fsio::{emit, read};
use crate::presets::parse_ratio;
use crate::Outcome;

/// Runs the named attack on the ciphertext file of `target`, if one is given.
fn attack_file(
    name: &str,
    target: &TargetArgs,
    options: &AttackOptions,
) -> CliResult<Option<String>> {
    let (Some(pk_path), Some(ct_path)) = (&target.pk, &target.ct) else {
        return Ok(None);
    };
    let pk = deserialize_public_key(&read(pk_path)?).map_err(|source| CliError::Format {
        path: pk_path.clone(),
        source,
    })?;
    let c =
        match deserialize_ct(&read(ct_path)?, pk.params()).map_err(|source| CliError::Format {
            path: ct_path.clone(),
            source,
        })? {
            CiphertextFile::Plain(c) => c,
            CiphertextFile::Fo(ct) => ct.c1,
        };
    let attack = attack_by_name(name, options)?;
    Ok(Some(outcome_text(
        attack.name(),
        &attack.run(&c.to_rational(&pk), pk.g_prime())?,
    )))
}

fn outcome_text(name: &str, o: &AttackOutcome) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "attack={name}");
    let _ = writeln!(s, "success={}", o.success);
    let _ = writeln!(s, "work={}", o.work_metric);
    if let Some(m) = &o.recovered {
        let joined: Vec<String> = m.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(s, "recovered={}", joined.join(","));
    }
    for note in &o.notes {
        let _ = writeln!(s, "note={note}");
    }
    s
}

fn reports_text(reports: &[TrialReport]) -> String {
    reports.iter().map(|r| format!("{r}\n")).collect()
}

pub fn run(command: AttackCommand) -> CliResult<Outcome> {
    let text = match command {
        AttackCommand::Space { r, d, n } => {
            let s = brute_force_space(r, d, n)?;
            format!(
                "N_H={}\nlog2_N_H={:.4}\nN_P={}\nlog2_N_P={:.4}\n",
                s.n_h, s.log2_h, s.n_p, s.log2_p
            )
        }
        AttackCommand::Nguyen { target, beta, toy } => {
            let options = AttackOptions {
                beta,
                ..AttackOptions::default()
            };
            match attack_file("nguyen", &target, &options)? {
                Some(t) => t,
                None => {
                    let seed = resolve_seed(&target.seed)?;
                    if toy {
                        reports_text(&[nguyen_toy_trials(
                            target.params.n.unwrap_or(10),
                            target.trials,
                            &seed,
                        )?])
                    } else {
                        let (params, _) = resolve_params(&target.params)?;
                        reports_text(&[nguyen_kem_trials(&params, target.trials, &seed)?])
                    }
                }
            }
        }
        AttackCommand::Embed { target, delta } => {
            let delta = parse_ratio(&delta)?;
            let options = AttackOptions {
                delta: delta.clone(),
                ..AttackOptions::default()
            };
            match attack_file("embed", &target, &options)? {
                Some(t) => t,
                None => {
                    let (params, _) = resolve_params(&target.params)?;
                    let seed = resolve_seed(&target.seed)?;
                    let ratio = target.noise_ratio.unwrap_or(0.01);
                    reports_text(&[embedding_trials(
                        &params,
                        ratio,
                        &delta,
                        target.trials,
                        &seed,
                    )?])
                }
            }
        }
        AttackCommand::Roundoff {
            target,
            noise_bound2,
        } => {
            let options = AttackOptions {
                noise_bound2,
                ..AttackOptions::default()
            };
            match attack_file("roundoff", &target, &options)? {
                Some(t) => t,
                None => {
                    let (params, _) = resolve_params(&target.params)?;
                    let seed = resolve_seed(&target.seed)?;
                    let ratio = target.noise_ratio.unwrap_or(0.1);
                    let (secret, public) = round_off_trials(&params, ratio, target.trials, &seed)?;
                    reports_text(&[secret, public])
                }
            }
        }
    };
    emit(None, text.as_bytes())?;
    Ok(Outcome::Done)
}
