mod attack;
mod bench;
mod keys;

use kem_ldlc::params::DEFAULT_MESSAGE_BITS;
use kem_ldlc::params::{DEFAULT_F, DEFAULT_LK};
use kem_ldlc::rng::{parse_seed_hex, seed_to_hex, Seed};
use kem_ldlc::CodeParams;
use rand::RngCore;

use crate::args::{Command, ParamArgs, SeedArg};
use crate::error::{usage, CliResult};
use crate::presets::{default_sequence_name, find_preset, parse_ratio};
use crate::Outcome;

pub fn dispatch(command: Command) -> CliResult<Outcome> {
    match command {
        Command::Keygen(a) => keys::keygen(a),
        Command::Encaps(a) => keys::encaps(a),
        Command::Decaps(a) => keys::decaps(a),
        Command::Bench(b) => bench::run(b),
        Command::Attack(a) => attack::run(a),
    }
}

/// Parameters and generating-sequence source name.
pub(crate) fn resolve_params(a: &ParamArgs) -> CliResult<(CodeParams, String)> {
    if let Some(name) = &a.preset {
        let p = find_preset(name)?;
        let mut params = p.params;
        if let Some(f) = a.f {
            params.f = f;
        }
        if let Some(lk) = a.lk {
            params.l_k = lk;
        }
        if let Some(s) = &a.sigma_ratio {
            params.sigma_ratio = parse_ratio(s)?;
        }
        if let Some(b) = a.message_bits {
            params.message_bits = b;
        }
        params.validate()?;
        return Ok((params, a.sequence.clone().unwrap_or(p.sequence)));
    }
    let (Some(n), Some(d), Some(r)) = (a.n, a.d, a.r) else {
        return Err(usage("give either --preset or all of --n, --d and --r"));
    };
    let ratio = match &a.sigma_ratio {
        Some(s) => parse_ratio(s)?,
        None => parse_ratio("1/2")?,
    };
    let params = CodeParams::new(
        n,
        d,
        r,
        a.f.unwrap_or(DEFAULT_F),
        a.lk.unwrap_or(DEFAULT_LK),
        ratio,
    )?
    .with_message_bits(a.message_bits.unwrap_or(DEFAULT_MESSAGE_BITS))?;
    let sequence = a
        .sequence
        .clone()
        .unwrap_or_else(|| default_sequence_name(d).to_string());
    Ok((params, sequence))
}

/// The given seed, or a fresh one that is echoed to standard error.
pub(crate) fn resolve_seed(a: &SeedArg) -> CliResult<Seed> {
    match &a.seed {
        Some(s) => Ok(parse_seed_hex(s)?),
        None => {
            let mut seed = [0u8; 32];
            rand::rng().fill_bytes(&mut seed);
            eprintln!("seed: {}", seed_to_hex(&seed));
            Ok(seed)
        }
    }
}
