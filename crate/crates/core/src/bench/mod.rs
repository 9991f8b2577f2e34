//! Monte-Carlo sweeps and size, complexity and resend reports.

mod complexity;
mod report;
mod resend;
mod ser;
mod sizes;
pub mod stats;

pub use complexity::{
    bp_timing, complexity_report, measure_operations, ComplexityEstimate, MeasuredCounters,
};
pub use report::{
    git_describe, read_ser_csv, write_key_values, write_ser_csv, Provenance, SER_CSV_COLUMNS,
    SNR_CONVENTION,
};
pub use resend::{
    norm_says_same, resend_experiment, resend_with_key, round_off_says_same, DetectorScore,
    ResendReport,
};
pub use ser::{
    random_code, ser_sweep, ser_sweep_with_source, sigma_for_snr, snr_for_ratio, SerPoint,
    CODEWORDS_PER_CODE,
};
pub use sizes::{
    key_size_report, milli_kbytes, size_formulas, ReferenceRow, SizeReport, HYPOTHETICAL_CT_BITS,
    REFERENCE_ROWS,
};
pub use stats::{wilson95, wilson_interval};
