use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const SEED: &str = "00112233445566778899aabbccddeeff00112233445566778899aabbccddeeff";

fn kem(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kem-ldlc"))
        .args(args)
        .output()
        .unwrap()
}

fn p(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

fn keygen(dir: &Path) {
    let out = kem(&[
        "keygen",
        "--n",
        "16",
        "--d",
        "3",
        "--r",
        "8",
        "--seed",
        SEED,
        "--sk-out",
        &p(dir, "sk"),
        "--pk-out",
        &p(dir, "pk"),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

fn encaps(dir: &Path, fo: bool) {
    let (pk, ct, key) = (p(dir, "pk"), p(dir, "ct"), p(dir, "k1"));
    let mut args = vec![
        "encaps",
        "--pk",
        &pk,
        "--ct-out",
        &ct,
        "--key-out",
        &key,
        "--seed",
        SEED,
    ];
    if fo {
        args.push("--fo");
    }
    let out = kem(&args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

fn decaps(dir: &Path, fo: bool) -> Output {
    let (sk, pk, ct, key) = (p(dir, "sk"), p(dir, "pk"), p(dir, "ct"), p(dir, "k2"));
    let mut args = vec![
        "decaps",
        "--sk",
        &sk,
        "--pk",
        &pk,
        "--ct",
        &ct,
        "--key-out",
        &key,
    ];
    if fo {
        args.push("--fo");
    }
    kem(&args)
}

#[test]
fn plain_and_fo_sessions_agree() {
    for fo in [false, true] {
        let dir = tempfile::tempdir().unwrap();
        keygen(dir.path());
        encaps(dir.path(), fo);
        let out = decaps(dir.path(), fo);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert_eq!(
            fs::read(dir.path().join("k1")).unwrap(),
            fs::read(dir.path().join("k2")).unwrap()
        );
    }
}

#[test]
fn seeded_runs_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [a.path(), b.path()] {
        keygen(dir);
        encaps(dir, false);
        assert!(decaps(dir, false).status.success());
    }
    for name in ["sk", "pk", "ct", "k1", "k2"] {
        assert_eq!(
            fs::read(a.path().join(name)).unwrap(),
            fs::read(b.path().join(name)).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn exit_codes_separate_rejection_from_errors() {
    let dir = tempfile::tempdir().unwrap();
    keygen(dir.path());
    encaps(dir.path(), true);
    let ct_path = dir.path().join("ct");
    let good = fs::read(&ct_path).unwrap();

    let mut flipped = good.clone();
    *flipped.last_mut().unwrap() ^= 1;
    fs::write(&ct_path, &flipped).unwrap();
    let out = decaps(dir.path(), true);
    assert_eq!(out.status.code(), Some(2));
    assert!(!dir.path().join("k2").exists());

    fs::write(&ct_path, &good[..good.len() / 2]).unwrap();
    let out = decaps(dir.path(), true);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("format error"));

    fs::write(&ct_path, &good).unwrap();
    assert_eq!(decaps(dir.path(), false).status.code(), Some(1));
    assert_eq!(
        kem(&["decaps", "--sk", "/nonexistent/sk"]).status.code(),
        Some(1)
    );
    assert_eq!(kem(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(kem(&["--help"]).status.code(), Some(0));
}

#[test]
fn search_space_is_printed() {
    let out = kem(&["attack", "space", "--r", "16", "--d", "7", "--n", "10000"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("111.99"), "{text}");
    assert!(text.contains("93.01"), "{text}");
}

#[test]
fn presets_load_from_directory() {
    let presets = tempfile::tempdir().unwrap();
    fs::write(
        presets.path().join("tiny.toml"),
        "name = \"tiny\"\nn = 12\nd = 3\nr = 8\nsigma_ratio = \"1/3\"\n",
    )
    .unwrap();
    let dir = tempfile::tempdir().unwrap();
    let run = |preset: &str| {
        Command::new(env!("CARGO_BIN_EXE_kem-ldlc"))
            .env("LDLC_PRESET_DIR", presets.path())
            .args([
                "keygen",
                "--preset",
                preset,
                "--seed",
                SEED,
                "--sk-out",
                &p(dir.path(), "sk"),
                "--pk-out",
            ])
            .arg(p(dir.path(), "pk"))
            .output()
            .unwrap()
    };
    let out = run("tiny");
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(run("missing").status.code(), Some(1));
}
