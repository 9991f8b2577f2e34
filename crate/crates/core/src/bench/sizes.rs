//! Key and ciphertext sizes: storage formulas and measured encodings.

use crate::error::Result;
use crate::kem::serialize::{serialize_ct, serialize_public_key};
use crate::kem::{EncapsulatedValue, PublicKey};
use crate::params::CodeParams;

/// Bits per symbol of the hypothetical quantized ciphertext.
pub const HYPOTHETICAL_CT_BITS: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SizeReport {
    pub n: usize,
    pub d: usize,
    pub r: u32,
    /// `ceil(log2 n) + 1`.
    pub q_plus: u32,
    /// `ceil(log2 n)`.
    pub q_plain: u32,
    /// `r d`.
    pub m_h_bits: u64,
    pub m_p_bits_plus: u64,
    pub m_p_bits_plain: u64,
    pub total_bits_plus: u64,
    pub total_bits_plain: u64,
    pub pk_bytes_measured: Option<usize>,
    pub ct_bytes_measured: Option<usize>,
    pub ct_bytes_6bit_hypothetical: usize,
}

/// `round(bits / 8 / 1024, 3)` scaled by 1000, rounding halves up.
pub fn milli_kbytes(bits: u64) -> u64 {
    (bits * 1000 * 2 + 8192) / (2 * 8192)
}

impl SizeReport {
    /// Secret-key size in 1024-byte kbytes with the plain shift width, to
    /// three decimals.
    pub fn sk_kbytes_plain(&self) -> String {
        let mk = milli_kbytes(self.total_bits_plain);
        format!("{}.{:03}", mk / 1000, mk % 1000)
    }

    pub fn key_values(&self) -> Vec<(String, String)> {
        let opt = |v: Option<usize>| v.map_or("n/a".to_string(), |b| b.to_string());
        vec![
            ("n".into(), self.n.to_string()),
            ("d".into(), self.d.to_string()),
            ("r".into(), self.r.to_string()),
            ("q_plus".into(), self.q_plus.to_string()),
            ("q_plain".into(), self.q_plain.to_string()),
            ("m_h_bits".into(), self.m_h_bits.to_string()),
            ("m_p_bits_plus".into(), self.m_p_bits_plus.to_string()),
            ("m_p_bits_plain".into(), self.m_p_bits_plain.to_string()),
            ("total_bits_plus".into(), self.total_bits_plus.to_string()),
            ("total_bits_plain".into(), self.total_bits_plain.to_string()),
            ("sk_kbytes_plain".into(), self.sk_kbytes_plain()),
            ("pk_bytes_measured".into(), opt(self.pk_bytes_measured)),
            ("ct_bytes_measured".into(), opt(self.ct_bytes_measured)),
            (
                "ct_bytes_6bit_hypothetical".into(),
                self.ct_bytes_6bit_hypothetical.to_string(),
            ),
        ]
    }
}

/// Storage formulas only; the measured fields are `None`.
pub fn size_formulas(params: &CodeParams) -> Result<SizeReport> {
    params.validate()?;
    let d = params.d as u64;
    let (q_plus, q_plain) = (params.q_plus(), params.q_plain());
    let m_h_bits = params.r as u64 * d;
    let m_p_bits_plus = q_plus as u64 * d;
    let m_p_bits_plain = q_plain as u64 * d;
    Ok(SizeReport {
        n: params.n,
        d: params.d,
        r: params.r,
        q_plus,
        q_plain,
        m_h_bits,
        m_p_bits_plus,
        m_p_bits_plain,
        total_bits_plus: m_h_bits + m_p_bits_plus,
        total_bits_plain: m_h_bits + m_p_bits_plain,
        pk_bytes_measured: None,
        ct_bytes_measured: None,
        ct_bytes_6bit_hypothetical: (params.n * HYPOTHETICAL_CT_BITS).div_ceil(8),
    })
}

/// Formulas plus the serialized sizes of `pk` and `sample_ct`.
pub fn key_size_report(
    params: &CodeParams,
    pk: &PublicKey,
    sample_ct: &EncapsulatedValue,
) -> Result<SizeReport> {
    let mut report = size_formulas(params)?;
    report.pk_bytes_measured = Some(serialize_public_key(pk).len());
    report.ct_bytes_measured = Some(serialize_ct(params, sample_ct).len());
    Ok(report)
}

/// A published comparison row, echoed verbatim as reference data; none of
/// these schemes is implemented here.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceRow {
    pub scheme: &'static str,
    pub code: &'static str,
    pub sk_kbytes: &'static str,
    pub pk_kbytes: &'static str,
    pub ct_bytes: &'static str,
}

const fn row(
    scheme: &'static str,
    code: &'static str,
    sk_kbytes: &'static str,
    pk_kbytes: &'static str,
    ct_bytes: &'static str,
) -> ReferenceRow {
    ReferenceRow {
        scheme,
        code,
        sk_kbytes,
        pk_kbytes,
        ct_bytes,
    }
}

pub const REFERENCE_ROWS: &[ReferenceRow] = &[
    row("KEM-LDLC I", "n=1000, d=7", "<= 0.022", "61", "750"),
    row("KEM-LDLC II", "n=2000, d=7", "<= 0.023", "244.1", "1500"),
    row("KEM-LDLC III", "n=5000, d=7", "<= 0.025", "1525.85", "3750"),
    row("KEM-LDLC IV", "n=10000, d=7", "<= 0.026", "6103.5", "7500"),
    row("KEM-PC I", "n=1024, k=816", "0.253", "20.718", "128"),
    row("KEM-PC II", "n=2048, k=1632", "0.559", "82.875", "256"),
    row("KEM-PC III", "n=4096, k=3264", "1.219", "331.5", "512"),
    row("KEM-PC IV", "n=8192, k=6528", "2.64", "1326", "1024"),
    row("McEliece348864", "n=3488, k=2790", "6.3", "255", "128"),
    row(
        "McEliece460896",
        "n=4608, k=3686",
        "13.25",
        "511.875",
        "188",
    ),
    row(
        "McEliece6960119",
        "n=6960, k=5568",
        "13.58",
        "1022.77",
        "226",
    ),
    row("McEliece6960119", "n=8192, k=6554", "13.75", "1326", "240"),
    row("BIKE-128", "n=12323, k=256", "0.274", "1.5", "1572"),
    row("BIKE-128", "n=40973, k=256", "0.566", "5", "5154"),
    row("HQC-128", "n=23869, k=256", "0.313", "2.953", "6017"),
    row("HQC-256", "n=69259, k=256", "0.313", "8.494", "17379"),
];

#[cfg(test)]
mod tests {
    use super::*;
    use ldlc_ratmath::rational::rat;

    fn params(n: usize, d: usize, r: u32) -> CodeParams {
        CodeParams::new(n, d, r, 24, 32, rat(1, 2)).unwrap()
    }

    #[test]
    fn minimal_case() {
        let s = size_formulas(&params(2, 1, 1)).unwrap();
        assert_eq!((s.m_h_bits, s.m_p_bits_plain, s.m_p_bits_plus), (1, 1, 2));
    }

    #[test]
    fn invariants_hold() {
        let s = size_formulas(&params(1000, 7, 16)).unwrap();
        assert_eq!(s.m_h_bits, 16 * 7);
        assert_eq!(s.m_p_bits_plus, s.q_plus as u64 * 7);
        assert_eq!(s.total_bits_plain, 182);
        assert_eq!(s.ct_bytes_6bit_hypothetical, 750);
        assert_eq!(s.sk_kbytes_plain(), "0.022");
    }

    #[test]
    fn milli_kbytes_rounds_half_up() {
        assert_eq!(milli_kbytes(0), 0);
        // 4.096 bits per milli-kbyte: 2 bits is below half, 5 bits above.
        assert_eq!(milli_kbytes(2), 0);
        assert_eq!(milli_kbytes(5), 1);
    }
}
