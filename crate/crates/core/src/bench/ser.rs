//! Symbol-error-rate sweeps of the belief-propagation decoder.
//!
//! Codewords are grouped in blocks of [`CODEWORDS_PER_CODE`], each block
//! decoded under its own freshly drawn code. Block `k` draws its code from
//! stream `(seed, "ser-code", k)` and codeword `j` of the sweep draws its
//! message and unit-variance noise from `(seed, "ser-word", j)`, so every SNR
//! point sees the same codes, messages and noise directions.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::stats::wilson95;
use crate::decoder::{bp_decode, DecoderConfig};
use crate::error::{param, KemError, Result};
use crate::kem::{default_sequence_source, SIGN_REDRAWS, SIGN_SEED_BYTES};
use crate::ldlc::{build_parity_check, LdlcCode, SequenceSource, ShiftSet};
use crate::params::CodeParams;
use crate::rng::derive_rng;

pub const CODEWORDS_PER_CODE: u64 = 100;

/// Blocks decoded per round before the stopping rule is checked.
const ROUND_BLOCKS: [u64; 4] = [1, 1, 2, 4];
const MAX_ROUND_BLOCKS: u64 = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct SerPoint {
    pub snr_db: f64,
    pub sigma: f64,
    pub symbols_tested: u64,
    pub symbol_errors: u64,
    pub ser: f64,
    pub wilson_ci95: (f64, f64),
}

impl SerPoint {
    fn new(snr_db: f64, sigma: f64, symbols_tested: u64, symbol_errors: u64) -> Self {
        Self {
            snr_db,
            sigma,
            symbols_tested,
            symbol_errors,
            ser: symbol_errors as f64 / symbols_tested.max(1) as f64,
            wilson_ci95: wilson95(symbol_errors, symbols_tested),
        }
    }
}

/// Noise deviation at `snr_db` below the Poltyrev limit.
pub fn sigma_for_snr(sigma_max: f64, snr_db: f64) -> f64 {
    sigma_max * 10f64.powf(-snr_db / 20.0)
}

/// SNR in dB for `sigma = sigma_ratio * sigma_max`.
pub fn snr_for_ratio(sigma_ratio: f64) -> f64 {
    -20.0 * sigma_ratio.log10()
}

/// A code drawn like a secret key, without the public-key computation;
/// sign seeds are redrawn while H is singular.
pub fn random_code<R: Rng>(
    params: &CodeParams,
    source: &dyn SequenceSource,
    rng: &mut R,
) -> Result<LdlcCode> {
    let seq = source.generate(params.d, params.r, rng)?;
    let shifts = ShiftSet::sample(params.d, params.n, rng)?;
    for _ in 0..SIGN_REDRAWS {
        let mut sign_seed = [0u8; SIGN_SEED_BYTES];
        rng.fill(&mut sign_seed);
        match build_parity_check(&seq, &shifts, &sign_seed, params.n).and_then(LdlcCode::new) {
            Err(KemError::Singular(_)) => continue,
            other => return other,
        }
    }
    Err(KemError::KeyGen(format!(
        "H was singular for {SIGN_REDRAWS} consecutive sign seeds"
    )))
}

fn block_code(
    params: &CodeParams,
    source: &dyn SequenceSource,
    seed: &[u8],
    block: u64,
) -> Result<LdlcCode> {
    random_code(params, source, &mut derive_rng(seed, "ser-code", block))
}

/// Symbol errors in codewords `[start, end)` of block `block`.
fn run_block(
    params: &CodeParams,
    source: &dyn SequenceSource,
    snr_db: f64,
    config: &DecoderConfig,
    seed: &[u8],
    block: u64,
    end: u64,
) -> Result<(u64, u64)> {
    let code = block_code(params, source, seed, block)?;
    let sigma = sigma_for_snr(code.sigma_max(), snr_db);
    let n = params.n;
    let top = 1i64 << params.message_bits;
    let start = block * CODEWORDS_PER_CODE;
    let mut errors = 0u64;
    for word in start..end {
        let mut rng = derive_rng(seed, "ser-word", word);
        let m: Vec<i64> = (0..n).map(|_| rng.random_range(0..top)).collect();
        let mut c = code.encode_f64(&m)?;
        for v in c.iter_mut() {
            *v += sigma * rng.sample::<f64, _>(StandardNormal);
        }
        let out = bp_decode(&c, code.h_matrix(), sigma, config)?;
        errors += out.m_hat.iter().zip(&m).filter(|(a, b)| a != b).count() as u64;
    }
    Ok(((end - start) * n as u64, errors))
}

/// One sweep point; the reported `sigma` is that of the first code.
fn ser_point(
    params: &CodeParams,
    source: &dyn SequenceSource,
    snr_db: f64,
    min_errors: u64,
    max_symbols: u64,
    config: &DecoderConfig,
    seed: &[u8],
) -> Result<SerPoint> {
    let max_words = max_symbols.div_ceil(params.n as u64);
    let total_blocks = max_words.div_ceil(CODEWORDS_PER_CODE);
    let (mut symbols, mut errors, mut next_block, mut round) = (0u64, 0u64, 0u64, 0usize);
    while next_block < total_blocks && errors < min_errors {
        let size = ROUND_BLOCKS.get(round).copied().unwrap_or(MAX_ROUND_BLOCKS);
        let blocks: Vec<u64> = (next_block..(next_block + size).min(total_blocks)).collect();
        let results: Vec<(u64, u64)> = blocks
            .par_iter()
            .map(|&b| {
                let end = ((b + 1) * CODEWORDS_PER_CODE).min(max_words);
                run_block(params, source, snr_db, config, seed, b, end)
            })
            .collect::<Result<_>>()?;
        for (s, e) in results {
            symbols += s;
            errors += e;
        }
        next_block += blocks.len() as u64;
        round += 1;
    }
    let sigma = sigma_for_snr(block_code(params, source, seed, 0)?.sigma_max(), snr_db);
    Ok(SerPoint::new(snr_db, sigma, symbols, errors))
}

/// SER at each SNR (dB relative to the Poltyrev limit). Each point stops once
/// it has seen `min_errors` symbol errors or tested `max_symbols` symbols,
/// checked after each round of blocks.
pub fn ser_sweep(
    params: &CodeParams,
    snr_list_db: &[f64],
    min_errors: u64,
    max_symbols: u64,
    config: &DecoderConfig,
    seed: &[u8],
) -> Result<Vec<SerPoint>> {
    ser_sweep_with_source(
        params,
        default_sequence_source(params.d).as_ref(),
        snr_list_db,
        min_errors,
        max_symbols,
        config,
        seed,
    )
}

pub fn ser_sweep_with_source(
    params: &CodeParams,
    source: &dyn SequenceSource,
    snr_list_db: &[f64],
    min_errors: u64,
    max_symbols: u64,
    config: &DecoderConfig,
    seed: &[u8],
) -> Result<Vec<SerPoint>> {
    params.validate()?;
    config.validate()?;
    if snr_list_db.is_empty() {
        return Err(param("SNR list is empty"));
    }
    if snr_list_db.iter().any(|s| !s.is_finite()) {
        return Err(param("SNR values must be finite"));
    }
    if min_errors < 20 {
        return Err(param(format!("min_errors = {min_errors} is below 20")));
    }
    if max_symbols == 0 {
        return Err(param("max_symbols must be positive"));
    }
    snr_list_db
        .iter()
        .map(|&snr| ser_point(params, source, snr, min_errors, max_symbols, config, seed))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use ldlc_ratmath::rational::rat;

    #[test]
    fn snr_conversions_are_inverse() {
        assert!((snr_for_ratio(0.5) - 6.0206).abs() < 1e-4);
        assert!((sigma_for_snr(2.0, snr_for_ratio(0.25)) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn preconditions_are_checked() {
        let p = CodeParams::new(16, 3, 8, 24, 32, rat(1, 2)).unwrap();
        let cfg = DecoderConfig::default();
        assert!(ser_sweep(&p, &[], 50, 100, &cfg, b"s").is_err());
        assert!(ser_sweep(&p, &[3.0], 19, 100, &cfg, b"s").is_err());
    }

    #[test]
    fn small_sweep_is_reproducible() {
        let p = CodeParams::new(16, 3, 8, 24, 32, rat(1, 2)).unwrap();
        let cfg = DecoderConfig::default();
        let a = ser_sweep(&p, &[30.0], 20, 800, &cfg, b"s").unwrap();
        let b = ser_sweep(&p, &[30.0], 20, 800, &cfg, b"s").unwrap();
        assert_eq!(a, b);
        assert_eq!(a[0].symbols_tested, 800);
        assert_eq!(a[0].symbol_errors, 0);
    }
}
