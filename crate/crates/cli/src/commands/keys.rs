use std::path::Path;

use kem_ldlc::decoder::{decoder_by_name, DecoderConfig};
use kem_ldlc::kem::serialize::{
    deserialize_ct, deserialize_public_key, deserialize_secret_key, serialize_ct, serialize_fo_ct,
    serialize_public_key, serialize_secret_key, CiphertextFile,
};
use kem_ldlc::kem::{
    encaps as kem_encaps, fo_encaps, keygen_with_source, DecapsContext, Decapsulated,
};
use kem_ldlc::ldlc::sequence_source;
use kem_ldlc::rng::derive_rng;
use kem_ldlc::KemError;

use super::{resolve_params, resolve_seed};
use crate::args::{DecapsArgs, EncapsArgs, KeygenArgs};
use crate::error::{usage, CliError, CliResult};
use crate::fsio::{read, write_atomic};
use crate::Outcome;

fn format_error(path: &Path) -> impl FnOnce(KemError) -> CliError + '_ {
    move |source| CliError::Format {
        path: path.to_path_buf(),
        source,
    }
}

pub fn keygen(a: KeygenArgs) -> CliResult<Outcome> {
    let (params, sequence) = resolve_params(&a.params)?;
    let seed = resolve_seed(&a.seed)?;
    let source = sequence_source(&sequence)?;
    let (sk, pk) = keygen_with_source(&params, source.as_ref(), &seed)?;
    write_atomic(&a.sk_out, &serialize_secret_key(&sk))?;
    write_atomic(&a.pk_out, &serialize_public_key(&pk))?;
    eprintln!(
        "keygen: n={} log2|det G'|={:.3} sigma_max={:.6e}",
        pk.n(),
        pk.log2_abs_det(),
        pk.sigma_max()
    );
    Ok(Outcome::Done)
}

pub fn encaps(a: EncapsArgs) -> CliResult<Outcome> {
    let pk = deserialize_public_key(&read(&a.pk)?).map_err(format_error(&a.pk))?;
    let seed = resolve_seed(&a.seed)?;
    let mut rng = derive_rng(&seed, "encaps", 0);
    let (key, bytes) = if a.fo {
        let (key, ct) = fo_encaps(&pk, &mut rng)?;
        (key, serialize_fo_ct(pk.params(), &ct))
    } else {
        let (key, c) = kem_encaps(&pk, &mut rng)?;
        (key, serialize_ct(pk.params(), &c))
    };
    write_atomic(&a.ct_out, &bytes)?;
    write_atomic(&a.key_out, key.as_bytes())?;
    Ok(Outcome::Done)
}

pub fn decaps(a: DecapsArgs) -> CliResult<Outcome> {
    let sk = deserialize_secret_key(&read(&a.sk)?).map_err(format_error(&a.sk))?;
    let pk = deserialize_public_key(&read(&a.pk)?).map_err(format_error(&a.pk))?;
    let ct = deserialize_ct(&read(&a.ct)?, pk.params()).map_err(format_error(&a.ct))?;
    let decoder = decoder_by_name(&a.decoder, &DecoderConfig::default())?;
    let ctx = DecapsContext::with_decoder(&sk, &pk, decoder)?;
    let out = match (ct, a.fo) {
        (CiphertextFile::Plain(c), false) => ctx.decaps(&c)?,
        (CiphertextFile::Fo(ct), true) => ctx.fo_decaps(&ct)?,
        (CiphertextFile::Plain(_), true) => {
            return Err(usage("--fo given but the ciphertext is plain"))
        }
        (CiphertextFile::Fo(_), false) => {
            return Err(usage("ciphertext is of the FO kind; pass --fo"))
        }
    };
    match out {
        Decapsulated::Key(key) => {
            write_atomic(&a.key_out, key.as_bytes())?;
            Ok(Outcome::Done)
        }
        Decapsulated::Rejected(why) => {
            eprintln!("decaps: rejected ({why})");
            Ok(Outcome::Rejected)
        }
    }
}
