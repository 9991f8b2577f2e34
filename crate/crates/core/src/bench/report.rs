//! Output files: a commented provenance header followed by CSV rows or flat
//! `key=value` lines.

use std::fmt::Write as _;
use std::io::{self, Write};

use super::ser::SerPoint;
use crate::decoder::DecoderConfig;
use crate::params::CodeParams;

/// `git describe` of the build, or `unknown`.
pub fn git_describe() -> &'static str {
    env!("LDLC_GIT_DESCRIBE")
}

pub const SNR_CONVENTION: &str =
    "snr_db = 10*log10(sigma_max^2 / sigma^2), sigma_max^2 = |det G|^(2/n) / (2 pi e)";

/// Run context recorded at the top of every output file.
#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    pub tool: String,
    pub params: CodeParams,
    pub seed_hex: String,
    pub decoder: Option<DecoderConfig>,
    pub extra: Vec<(String, String)>,
}

impl Provenance {
    pub fn new(tool: impl Into<String>, params: &CodeParams, seed_hex: impl Into<String>) -> Self {
        Self {
            tool: tool.into(),
            params: params.clone(),
            seed_hex: seed_hex.into(),
            decoder: None,
            extra: Vec::new(),
        }
    }

    pub fn with_decoder(mut self, config: &DecoderConfig) -> Self {
        self.decoder = Some(config.clone());
        self
    }

    pub fn with(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.extra.push((key.into(), value.to_string()));
        self
    }

    /// `# key: value` lines.
    pub fn header(&self) -> String {
        let p = &self.params;
        let mut s = String::new();
        let _ = writeln!(s, "# tool: {}", self.tool);
        let _ = writeln!(s, "# build: {}", git_describe());
        let _ = writeln!(
            s,
            "# params: n={} d={} r={} f={} l_k={} sigma_ratio={} message_bits={}",
            p.n, p.d, p.r, p.f, p.l_k, p.sigma_ratio, p.message_bits
        );
        let _ = writeln!(s, "# seed: {}", self.seed_hex);
        if let Some(c) = &self.decoder {
            let _ = writeln!(
                s,
                "# decoder: iterations={} grid_step={} halfwidth_sigmas={} replicas={} damping={} residual_tolerance={}",
                c.iterations,
                c.grid_step,
                c.grid_halfwidth_sigmas,
                c.integer_replicas,
                c.damping,
                c.residual_tolerance
            );
        }
        let _ = writeln!(s, "# snr convention: {SNR_CONVENTION}");
        for (k, v) in &self.extra {
            let _ = writeln!(s, "# {k}: {v}");
        }
        s
    }
}

pub const SER_CSV_COLUMNS: &str = "snr_db,sigma,symbols,errors,ser,ci_lo,ci_hi";

pub fn write_ser_csv<W: Write>(
    out: &mut W,
    provenance: &Provenance,
    points: &[SerPoint],
) -> io::Result<()> {
    out.write_all(provenance.header().as_bytes())?;
    writeln!(out, "{SER_CSV_COLUMNS}")?;
    for p in points {
        writeln!(
            out,
            "{},{:.9e},{},{},{:.6e},{:.6e},{:.6e}",
            p.snr_db,
            p.sigma,
            p.symbols_tested,
            p.symbol_errors,
            p.ser,
            p.wilson_ci95.0,
            p.wilson_ci95.1
        )?;
    }
    Ok(())
}

/// Parses the rows written by [`write_ser_csv`], skipping comments.
pub fn read_ser_csv(text: &str) -> Option<Vec<SerPoint>> {
    let mut lines = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty());
    if lines.next()? != SER_CSV_COLUMNS {
        return None;
    }
    lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            if f.len() != 7 {
                return None;
            }
            Some(SerPoint {
                snr_db: f[0].parse().ok()?,
                sigma: f[1].parse().ok()?,
                symbols_tested: f[2].parse().ok()?,
                symbol_errors: f[3].parse().ok()?,
                ser: f[4].parse().ok()?,
                wilson_ci95: (f[5].parse().ok()?, f[6].parse().ok()?),
            })
        })
        .collect()
}

/// Writes `key=value` lines after the provenance header.
pub fn write_key_values<W: Write>(
    out: &mut W,
    provenance: &Provenance,
    pairs: &[(String, String)],
) -> io::Result<()> {
    out.write_all(provenance.header().as_bytes())?;
    for (k, v) in pairs {
        writeln!(out, "{k}={v}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use ldlc_ratmath::rational::rat;

    #[test]
    fn csv_round_trip() {
        let params = CodeParams::new(16, 3, 8, 24, 32, rat(1, 2)).unwrap();
        let prov = Provenance::new("test", &params, "00")
            .with_decoder(&DecoderConfig::default())
            .with("note", 1);
        let pts = vec![SerPoint {
            snr_db: 3.0,
            sigma: 0.125,
            symbols_tested: 1000,
            symbol_errors: 3,
            ser: 0.003,
            wilson_ci95: (0.001, 0.009),
        }];
        let mut buf = Vec::new();
        write_ser_csv(&mut buf, &prov, &pts).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("# snr convention:"));
        assert!(text.contains("# decoder: iterations=100"));
        assert!(text.contains("# note: 1"));
        assert_eq!(read_ser_csv(&text).unwrap(), pts);
    }
}
