use kem_ldlc::bench::{
    key_size_report, read_ser_csv, resend_experiment, ser_sweep, size_formulas, write_ser_csv,
    Provenance,
};
use kem_ldlc::decoder::DecoderConfig;
use kem_ldlc::kem::{encaps, keygen};
use kem_ldlc::CodeParams;
use ldlc_ratmath::rational::rat;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn noiseless_limit_has_no_errors() {
    let params = CodeParams::new(100, 7, 16, 24, 32, rat(1, 2)).unwrap();
    let pts = ser_sweep(
        &params,
        &[40.0],
        50,
        100_000,
        &DecoderConfig::default(),
        b"noiseless",
    )
    .unwrap();
    assert_eq!(pts[0].symbols_tested, 100_000);
    assert_eq!(pts[0].symbol_errors, 0);
}

#[test]
fn sweep_output_is_reproducible_csv() {
    let params = CodeParams::new(32, 3, 8, 24, 32, rat(1, 2)).unwrap();
    let cfg = DecoderConfig::default();
    let a = ser_sweep(&params, &[0.0, 6.0], 20, 3200, &cfg, b"csv").unwrap();
    let b = ser_sweep(&params, &[0.0, 6.0], 20, 3200, &cfg, b"csv").unwrap();
    assert_eq!(a, b);
    let mut buf = Vec::new();
    write_ser_csv(
        &mut buf,
        &Provenance::new("t", &params, "ab").with_decoder(&cfg),
        &a,
    )
    .unwrap();
    let back = read_ser_csv(&String::from_utf8(buf).unwrap()).unwrap();
    assert_eq!(back.len(), a.len());
    for (x, y) in back.iter().zip(&a) {
        assert_eq!(
            (x.symbols_tested, x.symbol_errors),
            (y.symbols_tested, y.symbol_errors)
        );
        assert!((x.sigma - y.sigma).abs() < 1e-9 && (x.ser - y.ser).abs() < 1e-9);
    }
    for p in &a {
        assert_eq!(p.ser, p.symbol_errors as f64 / p.symbols_tested as f64);
        assert!(p.wilson_ci95.0 <= p.ser && p.ser <= p.wilson_ci95.1);
    }
}

#[test]
fn measured_sizes_match_encodings() {
    let params = CodeParams::new(16, 3, 8, 24, 32, rat(1, 2)).unwrap();
    let (_, pk) = keygen(&params, b"sizes").unwrap();
    let (_, c) = encaps(&pk, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
    let r = key_size_report(&params, &pk, &c).unwrap();
    assert!(r.pk_bytes_measured.unwrap() > 16 * 16);
    assert!(r.ct_bytes_measured.unwrap() > 16);
    assert_eq!(r.ct_bytes_6bit_hypothetical, 12);
    assert_eq!(
        size_formulas(&params).unwrap().total_bits_plus,
        r.total_bits_plus
    );
}

#[test]
fn resend_report_is_well_formed() {
    let params = CodeParams::new(16, 3, 8, 24, 32, rat(1, 2)).unwrap();
    let r = resend_experiment(&params, 100, b"resend").unwrap();
    assert_eq!(r.same_message_trials, 50);
    assert!(r.round_off.correct <= 100 && r.norm.correct <= 100);
    assert!(
        r.round_off.ci95.0 <= r.round_off.accuracy()
            && r.round_off.accuracy() <= r.round_off.ci95.1
    );
}
