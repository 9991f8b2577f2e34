//! Latin-square low-density lattice codes: secret generating data, the sparse
//! parity-check matrix built from it, and encoding.

mod code;
mod parity;
mod sequence;
mod shifts;

pub use code::{encode, sigma_max_from_log2_det, Codeword, LdlcCode, SQRT_TWO_PI_E};
pub use parity::{
    build_parity_check, build_parity_check_with_signs, sign_bits, Entry, SparseParityCheck,
};
pub use sequence::{
    sequence_source, GeneratingSequence, RandomSequence, ReferenceSequence, SequenceSource,
    REFERENCE_SEQUENCE, SEQUENCE_SOURCES,
};
pub use shifts::ShiftSet;
