use kem_ldlc::bench::{random_code, sigma_for_snr};
use kem_ldlc::decoder::{
    bp_decode, decoder_by_name, secret_basis_round, DecoderConfig, DECODER_NAMES,
};
use kem_ldlc::kem::default_sequence_source;
use kem_ldlc::ldlc::LdlcCode;
use kem_ldlc::CodeParams;
use ldlc_ratmath::rational::rat;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn code(n: usize, d: usize, seed: u64) -> LdlcCode {
    let params = CodeParams::new(n, d, 16, 24, 32, rat(1, 2)).unwrap();
    random_code(
        &params,
        default_sequence_source(d).as_ref(),
        &mut ChaCha8Rng::seed_from_u64(seed),
    )
    .unwrap()
}

fn noisy(code: &LdlcCode, sigma: f64, rng: &mut ChaCha8Rng) -> (Vec<i64>, Vec<f64>) {
    let m: Vec<i64> = (0..code.n()).map(|_| rng.random_range(-8..8)).collect();
    let mut c = code.encode_f64(&m).unwrap();
    for v in c.iter_mut() {
        *v += sigma * rng.sample::<f64, _>(StandardNormal);
    }
    (m, c)
}

#[test]
fn bp_recovers_codewords_at_high_snr() {
    let code = code(100, 7, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let sigma = sigma_for_snr(code.sigma_max(), 20.0);
    for _ in 0..10 {
        let (m, c) = noisy(&code, sigma, &mut rng);
        let out = bp_decode(&c, code.h_matrix(), sigma, &DecoderConfig::default()).unwrap();
        assert!(out.converged);
        assert_eq!(out.m_hat, m);
        assert!(out.iterations_used < 20);
    }
}

/// Far above the Poltyrev limit most symbols are wrong.
#[test]
fn bp_fails_grossly_above_the_limit() {
    let code = code(100, 7, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let sigma = 2.0 * code.sigma_max();
    let (m, c) = noisy(&code, sigma, &mut rng);
    let out = bp_decode(&c, code.h_matrix(), sigma, &DecoderConfig::default()).unwrap();
    let errors = out.m_hat.iter().zip(&m).filter(|(a, b)| a != b).count();
    assert!(errors > 10, "only {errors} symbol errors");
}

#[test]
fn rounding_agrees_with_bp_when_noise_is_tiny() {
    let code = code(50, 7, 5);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let sigma = sigma_for_snr(code.sigma_max(), 40.0);
    let (m, c) = noisy(&code, sigma, &mut rng);
    assert_eq!(secret_basis_round(&c, &code).unwrap().m_hat, m);
    for name in DECODER_NAMES {
        let d = decoder_by_name(name, &DecoderConfig::default()).unwrap();
        assert_eq!(
            d.decode(&c, &code, sigma).unwrap().m_hat,
            m,
            "decoder {name}"
        );
    }
    assert!(decoder_by_name("nope", &DecoderConfig::default()).is_err());
}

#[test]
fn invalid_configs_are_refused() {
    let code = code(20, 3, 7);
    let c = vec![0.0; 20];
    let bad = DecoderConfig {
        grid_step: 0.0,
        ..DecoderConfig::default()
    };
    assert!(bp_decode(&c, code.h_matrix(), 0.1, &bad).is_err());
    let bad = DecoderConfig {
        residual_tolerance: 0.9,
        ..DecoderConfig::default()
    };
    assert!(bp_decode(&c, code.h_matrix(), 0.1, &bad).is_err());
    assert!(bp_decode(&c[..5], code.h_matrix(), 0.1, &DecoderConfig::default()).is_err());
}

/// A word on which undamped BP oscillates at 4.7 dB; damping the check
/// messages lets it settle on the transmitted point.
#[test]
fn damping_settles_an_oscillating_word() {
    use kem_ldlc::rng::derive_rng;
    let params = kem_ldlc::params::builtin_preset("desk-100").unwrap().params;
    let source = default_sequence_source(params.d);
    let code = random_code(
        &params,
        source.as_ref(),
        &mut derive_rng(b"acceptance", "ser-code", 4),
    )
    .unwrap();
    let sigma = sigma_for_snr(code.sigma_max(), 4.7);
    let mut rng = derive_rng(b"acceptance", "ser-word", 433);
    let m: Vec<i64> = (0..100).map(|_| rng.random_range(0..16)).collect();
    let mut c = code.encode_f64(&m).unwrap();
    for v in c.iter_mut() {
        *v += sigma * rng.sample::<f64, _>(StandardNormal);
    }
    let plain = bp_decode(&c, code.h_matrix(), sigma, &DecoderConfig::default()).unwrap();
    assert!(!plain.converged && plain.m_hat != m);
    let damped = DecoderConfig {
        damping: 0.2,
        ..DecoderConfig::default()
    };
    let out = bp_decode(&c, code.h_matrix(), sigma, &damped).unwrap();
    assert!(out.converged);
    assert_eq!(out.m_hat, m);
}
