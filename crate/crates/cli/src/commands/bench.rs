use kem_ldlc::bench::{
    complexity_report, key_size_report, measure_operations, resend_experiment,
    ser_sweep_with_source, size_formulas, write_key_values, write_ser_csv, Provenance,
    REFERENCE_ROWS,
};
use kem_ldlc::decoder::DecoderConfig;
use kem_ldlc::kem::serialize::{deserialize_ct, deserialize_public_key, CiphertextFile};
use kem_ldlc::ldlc::sequence_source;
use kem_ldlc::rng::seed_to_hex;

use super::{resolve_params, resolve_seed};
use crate::args::{BenchCommand, DecoderArgs};
use crate::error::{usage, CliError, CliResult};
use crate::fsio::{emit, read};
use crate::Outcome;

fn decoder_config(a: &DecoderArgs) -> CliResult<DecoderConfig> {
    let config = DecoderConfig {
        iterations: a.iterations,
        grid_step: a.grid_step,
        grid_halfwidth_sigmas: a.halfwidth_sigmas,
        integer_replicas: a.replicas,
        damping: a.damping,
        residual_tolerance: a.residual_tolerance,
    };
    config.validate()?;
    Ok(config)
}

fn render(write: impl FnOnce(&mut Vec<u8>) -> std::io::Result<()>) -> CliResult<Vec<u8>> {
    let mut buf = Vec::new();
    write(&mut buf).map_err(|source| CliError::Io {
        path: "<buffer>".into(),
        source,
    })?;
    Ok(buf)
}

pub fn run(command: BenchCommand) -> CliResult<Outcome> {
    match command {
        BenchCommand::Ser {
            params,
            seed,
            decoder,
            snr,
            min_errors,
            max_symbols,
            out,
        } => {
            let (params, sequence) = resolve_params(&params)?;
            let seed = resolve_seed(&seed)?;
            let config = decoder_config(&decoder)?;
            let source = sequence_source(&sequence)?;
            let points = ser_sweep_with_source(
                &params,
                source.as_ref(),
                &snr,
                min_errors,
                max_symbols,
                &config,
                &seed,
            )?;
            let prov = Provenance::new("bench ser", &params, seed_to_hex(&seed))
                .with_decoder(&config)
                .with("sequence", &sequence)
                .with("min_errors", min_errors)
                .with("max_symbols", max_symbols);
            for p in &points {
                eprintln!(
                    "snr {:>6.2} dB: {} errors / {} symbols, ser {:.3e}",
                    p.snr_db, p.symbol_errors, p.symbols_tested, p.ser
                );
            }
            emit(
                out.as_deref(),
                &render(|b| write_ser_csv(b, &prov, &points))?,
            )?;
        }
        BenchCommand::Sizes {
            params,
            pk,
            ct,
            out,
        } => {
            let (params, _) = resolve_params(&params)?;
            let report = match (pk, ct) {
                (Some(pk_path), Some(ct_path)) => {
                    let pk = deserialize_public_key(&read(&pk_path)?).map_err(|source| {
                        CliError::Format {
                            path: pk_path.clone(),
                            source,
                        }
                    })?;
                    if pk.params() != &params {
                        return Err(usage("the public key was made with different parameters"));
                    }
                    let c = match deserialize_ct(&read(&ct_path)?, &params).map_err(|source| {
                        CliError::Format {
                            path: ct_path.clone(),
                            source,
                        }
                    })? {
                        CiphertextFile::Plain(c) => c,
                        CiphertextFile::Fo(ct) => ct.c1,
                    };
                    key_size_report(&params, &pk, &c)?
                }
                _ => size_formulas(&params)?,
            };
            let mut pairs = report.key_values();
            for row in REFERENCE_ROWS {
                pairs.push((
                    "reference_row".into(),
                    format!(
                        "{} | {} | sk {} kB | pk {} kB | ct {} B",
                        row.scheme, row.code, row.sk_kbytes, row.pk_kbytes, row.ct_bytes
                    ),
                ));
            }
            let prov = Provenance::new("bench sizes", &params, "-").with(
                "units",
                "kbytes are 1024-byte units; reference rows are published values, not measured",
            );
            emit(
                out.as_deref(),
                &render(|b| write_key_values(b, &prov, &pairs))?,
            )?;
        }
        BenchCommand::Complexity {
            params,
            seed,
            m_bits,
            q_bits,
            l_bits,
            measure,
            round_trips,
            out,
        } => {
            let (params, _) = resolve_params(&params)?;
            let seed = resolve_seed(&seed)?;
            let measured = if measure {
                Some(measure_operations(&params, round_trips, &seed)?)
            } else {
                None
            };
            let pick = |given: Option<u64>, from: Option<u64>, what: &str| {
                given
                    .or(from)
                    .ok_or_else(|| usage(format!("--{what} is required without --measure")))
            };
            let estimate = complexity_report(
                &params,
                pick(m_bits, measured.as_ref().map(|m| m.pk_entry_bits), "m-bits")?,
                pick(
                    q_bits,
                    measured.as_ref().map(|m| m.perturbation_bits),
                    "q-bits",
                )?,
                pick(
                    l_bits,
                    measured.as_ref().map(|m| m.u_inverse_entry_bits),
                    "l-bits",
                )?,
            )?;
            let mut pairs = estimate.key_values();
            if let Some(m) = &measured {
                pairs.extend(m.key_values());
            }
            let prov = Provenance::new("bench complexity", &params, seed_to_hex(&seed));
            emit(
                out.as_deref(),
                &render(|b| write_key_values(b, &prov, &pairs))?,
            )?;
        }
        BenchCommand::Resend {
            params,
            seed,
            trials,
            out,
        } => {
            let (params, _) = resolve_params(&params)?;
            let seed = resolve_seed(&seed)?;
            let report = resend_experiment(&params, trials, &seed)?;
            let prov = Provenance::new("bench resend", &params, seed_to_hex(&seed)).with(
                "detectors",
                "roundoff: round((c1 - c2) G'^-1) = 0; norm: |c1 - c2|^2 <= 18 n sigma^2",
            );
            emit(
                out.as_deref(),
                &render(|b| write_key_values(b, &prov, &report.key_values()))?,
            )?;
        }
    }
    Ok(Outcome::Done)
}
