//! The key encapsulation mechanism: key generation, encapsulation,
//! decapsulation, the Fujisaki-Okamoto variant and the byte formats.

mod encaps;
pub mod encoding;
mod fo;
pub mod kdf;
mod keys;
mod perturbation;
pub mod serialize;

pub use encaps::{
    decaps, default_perturbation, draw_message, encaps, encaps_with, encaps_with_spec,
    DecapsContext, Decapsulated, EncapsulatedValue, Recovered, Rejection, NOISE_BALL_FACTOR,
};
pub use fo::{fo_decaps, fo_encaps, fo_encaps_with, FoCiphertext};
pub use kdf::{kdf, SharedKey};
pub use keys::{
    default_sequence_source, derive_public_key, keygen, keygen_with_source, PublicKey, SecretKey,
    KEYGEN_MAX_N, SIGN_REDRAWS, SIGN_SEED_BYTES,
};
pub use perturbation::{perturbation_to_f64, sample_perturbation, PerturbationSpec};
