//! Dominant-term operation counts for encapsulation and decapsulation, and
//! measured counters from an instrumented run.

use std::time::Instant;

use num_bigint::BigInt;
use rand::Rng;
use rand_distr::StandardNormal;

use super::ser::{random_code, sigma_for_snr};
use crate::decoder::{bp_decode, DecoderConfig};
use crate::error::{param, Result};
use crate::kem::{default_sequence_source, encaps, keygen, DecapsContext};
use crate::params::CodeParams;
use crate::rng::derive_rng;

/// Bit-operation estimates. Encapsulation: `n^2 m` (encode), `n q` (add
/// perturbation), `2n + l_K` (key derivation). Decapsulation: `n` (decode),
/// `n^2 l` (multiply by `U^{-1}`), `2n + l_K`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexityEstimate {
    pub n: u64,
    pub m_bits: u64,
    pub q_bits: u64,
    pub l_bits: u64,
    /// Shared-key length in bits.
    pub l_k_bits: u64,
    pub encode: f64,
    pub add: f64,
    pub kdf: f64,
    pub decode: f64,
    pub mul_u_inverse: f64,
    pub encaps_total: f64,
    pub decaps_total: f64,
}

impl ComplexityEstimate {
    pub fn key_values(&self) -> Vec<(String, String)> {
        vec![
            ("n".into(), self.n.to_string()),
            ("m_bits".into(), self.m_bits.to_string()),
            ("q_bits".into(), self.q_bits.to_string()),
            ("l_bits".into(), self.l_bits.to_string()),
            ("l_k_bits".into(), self.l_k_bits.to_string()),
            ("encaps_encode".into(), format!("{:e}", self.encode)),
            ("encaps_add".into(), format!("{:e}", self.add)),
            ("encaps_kdf".into(), format!("{:e}", self.kdf)),
            ("encaps_total".into(), format!("{:e}", self.encaps_total)),
            ("decaps_decode".into(), format!("{:e}", self.decode)),
            (
                "decaps_mul_u_inverse".into(),
                format!("{:e}", self.mul_u_inverse),
            ),
            ("decaps_kdf".into(), format!("{:e}", self.kdf)),
            ("decaps_total".into(), format!("{:e}", self.decaps_total)),
        ]
    }
}

pub fn complexity_report(
    params: &CodeParams,
    m_bits: u64,
    q_bits: u64,
    l_bits: u64,
) -> Result<ComplexityEstimate> {
    params.validate()?;
    if m_bits == 0 || q_bits == 0 || l_bits == 0 {
        return Err(param("bit widths must be positive"));
    }
    let n = params.n as f64;
    let l_k_bits = 8 * params.l_k as u64;
    let encode = n * n * m_bits as f64;
    let add = n * q_bits as f64;
    let kdf = 2.0 * n + l_k_bits as f64;
    let decode = n;
    let mul_u_inverse = n * n * l_bits as f64;
    Ok(ComplexityEstimate {
        n: params.n as u64,
        m_bits,
        q_bits,
        l_bits,
        l_k_bits,
        encode,
        add,
        kdf,
        decode,
        mul_u_inverse,
        encaps_total: encode + add + kdf,
        decaps_total: decode + mul_u_inverse + kdf,
    })
}

/// Counters and timings from one key generation and a few round trips.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasuredCounters {
    pub n: usize,
    /// Largest bit length of an entry of `G' L` (numerators) and of `L`.
    pub pk_entry_bits: u64,
    /// Largest bit length of an entry of `U^{-1}`.
    pub u_inverse_entry_bits: u64,
    /// Largest bit length of a perturbation numerator on the `2^-f` grid.
    pub perturbation_bits: u64,
    pub keygen_secs: f64,
    pub context_secs: f64,
    pub encaps_secs: f64,
    pub decaps_secs: f64,
    pub round_trips: usize,
    pub agreements: usize,
}

impl MeasuredCounters {
    pub fn key_values(&self) -> Vec<(String, String)> {
        vec![
            ("measured_n".into(), self.n.to_string()),
            (
                "measured_pk_entry_bits".into(),
                self.pk_entry_bits.to_string(),
            ),
            (
                "measured_u_inverse_entry_bits".into(),
                self.u_inverse_entry_bits.to_string(),
            ),
            (
                "measured_perturbation_bits".into(),
                self.perturbation_bits.to_string(),
            ),
            (
                "measured_keygen_secs".into(),
                format!("{:.4}", self.keygen_secs),
            ),
            (
                "measured_context_secs".into(),
                format!("{:.4}", self.context_secs),
            ),
            (
                "measured_encaps_secs".into(),
                format!("{:.6}", self.encaps_secs),
            ),
            (
                "measured_decaps_secs".into(),
                format!("{:.6}", self.decaps_secs),
            ),
            ("measured_round_trips".into(), self.round_trips.to_string()),
            ("measured_agreements".into(), self.agreements.to_string()),
        ]
    }
}

fn max_bits<'a>(values: impl IntoIterator<Item = &'a BigInt>) -> u64 {
    values.into_iter().map(|v| v.bits()).max().unwrap_or(0)
}

/// Runs key generation and `round_trips` encapsulations and
/// decapsulations; times are means per operation.
pub fn measure_operations(
    params: &CodeParams,
    round_trips: usize,
    seed: &[u8],
) -> Result<MeasuredCounters> {
    if round_trips == 0 {
        return Err(param("need at least one round trip"));
    }
    let t = Instant::now();
    let (sk, pk) = keygen(params, seed)?;
    let keygen_secs = t.elapsed().as_secs_f64();
    let t = Instant::now();
    let ctx = DecapsContext::new(&sk, &pk)?;
    let context_secs = t.elapsed().as_secs_f64();
    let mut rng = derive_rng(seed, "complexity", 0);
    let (mut encaps_secs, mut decaps_secs, mut agreements, mut perturbation_bits) =
        (0.0, 0.0, 0, 0);
    for _ in 0..round_trips {
        let t = Instant::now();
        let (key, c) = encaps(&pk, &mut rng)?;
        encaps_secs += t.elapsed().as_secs_f64();
        let t = Instant::now();
        let out = ctx.decaps(&c)?;
        decaps_secs += t.elapsed().as_secs_f64();
        if out.key() == Some(&key) {
            agreements += 1;
        }
        if let Ok(rec) = ctx.recover(&c)? {
            let bits = rec
                .e
                .iter()
                .map(|v| 64 - v.unsigned_abs().leading_zeros() as u64)
                .max()
                .unwrap_or(0);
            perturbation_bits = perturbation_bits.max(bits + 1);
        }
    }
    let k = round_trips as f64;
    Ok(MeasuredCounters {
        n: params.n,
        pk_entry_bits: max_bits(
            pk.scaled()
                .entries()
                .iter()
                .chain(std::iter::once(pk.denom())),
        ),
        u_inverse_entry_bits: max_bits(ctx.u_inverse().entries()),
        perturbation_bits,
        keygen_secs,
        context_secs,
        encaps_secs: encaps_secs / k,
        decaps_secs: decaps_secs / k,
        round_trips,
        agreements,
    })
}

/// Mean wall time of one BP decode at each dimension, at `snr_db` above the
/// limit, over `words` codewords of one random code.
pub fn bp_timing(
    base: &CodeParams,
    n_list: &[usize],
    snr_db: f64,
    words: usize,
    config: &DecoderConfig,
    seed: &[u8],
) -> Result<Vec<(usize, f64)>> {
    if words == 0 {
        return Err(param("need at least one codeword"));
    }
    n_list
        .iter()
        .map(|&n| {
            let params = CodeParams { n, ..base.clone() };
            params.validate()?;
            let source = default_sequence_source(params.d);
            let code = random_code(
                &params,
                source.as_ref(),
                &mut derive_rng(seed, "bp-timing-code", n as u64),
            )?;
            let sigma = sigma_for_snr(code.sigma_max(), snr_db);
            let mut rng = derive_rng(seed, "bp-timing", n as u64);
            let mut total = 0.0;
            for _ in 0..words {
                let m: Vec<i64> = (0..n).map(|_| rng.random_range(0..16)).collect();
                let mut c = code.encode_f64(&m)?;
                for v in c.iter_mut() {
                    *v += sigma * rng.sample::<f64, _>(StandardNormal);
                }
                let t = Instant::now();
                bp_decode(&c, code.h_matrix(), sigma, config)?;
                total += t.elapsed().as_secs_f64();
            }
            Ok((n, total / words as f64))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use ldlc_ratmath::rational::rat;

    #[test]
    fn encode_term_is_direct_substitution() {
        let p = CodeParams::new(1000, 7, 16, 24, 32, rat(1, 2)).unwrap();
        let r = complexity_report(&p, 64, 24, 8).unwrap();
        assert_eq!(r.encode, 6.4e7);
        assert_eq!(r.add, 24_000.0);
        assert_eq!(r.kdf, 2000.0 + 256.0);
    }

    #[test]
    fn decode_term_is_linear() {
        let a = complexity_report(
            &CodeParams::new(500, 7, 16, 24, 32, rat(1, 2)).unwrap(),
            8,
            8,
            8,
        )
        .unwrap();
        let b = complexity_report(
            &CodeParams::new(1000, 7, 16, 24, 32, rat(1, 2)).unwrap(),
            8,
            8,
            8,
        )
        .unwrap();
        assert_eq!(b.decode, 2.0 * a.decode);
        assert_eq!(b.mul_u_inverse, 4.0 * a.mul_u_inverse);
    }

    #[test]
    fn zero_width_is_rejected() {
        let p = CodeParams::new(10, 3, 8, 24, 32, rat(1, 2)).unwrap();
        assert!(complexity_report(&p, 0, 1, 1).is_err());
    }
}
