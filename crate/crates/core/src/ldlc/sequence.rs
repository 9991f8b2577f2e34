//! Generating sequences and the sources that draw them at key generation.

use ldlc_ratmath::Rational;
use num_bigint::BigInt;
use rand::{Rng, RngCore};

use crate::error::{param, unknown, Result};

/// Generating sequence quantized to the Latin-square LDLC literature values
/// for degree 7.
pub const REFERENCE_SEQUENCE: [f64; 7] = [0.433, 0.315, 0.196, 0.136, 0.085, 0.076, 0.057];

/// The magnitudes `h_1 >= ... >= h_d` of every row and column of H.
///
/// Each value is `k / 2^r` with `1 <= k <= 2^r`, so zero is excluded (a zero
/// magnitude would leave a row with fewer than `d` nonzeros) and the value
/// fits in `r` bits when stored as `k - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeneratingSequence {
    r: u32,
    numerators: Vec<u64>,
}

impl GeneratingSequence {
    /// From the integer numerators `k_i` of `k_i / 2^r`.
    pub fn from_numerators(numerators: Vec<u64>, r: u32) -> Result<Self> {
        if r == 0 || r > 32 {
            return Err(param(format!("r = {r} outside 1..=32")));
        }
        if numerators.is_empty() {
            return Err(param("generating sequence is empty"));
        }
        let top = 1u64 << r;
        if numerators.iter().any(|&k| k == 0 || k > top) {
            return Err(param(format!(
                "sequence values must lie in (0, 1] on the 2^-{r} grid"
            )));
        }
        if numerators.windows(2).any(|w| w[0] < w[1]) {
            return Err(param("sequence must be nonincreasing"));
        }
        Ok(Self { r, numerators })
    }

    /// Exact rational values; each must be a multiple of `2^-r` in `(0, 1]`.
    pub fn new(values: &[Rational], r: u32) -> Result<Self> {
        let scale = Rational::from_integer(BigInt::from(1u64) << r);
        let mut ks = Vec::with_capacity(values.len());
        for v in values {
            let k = v * &scale;
            if !k.is_integer() {
                return Err(param(format!("value {v} is not a multiple of 2^-{r}")));
            }
            let k: u64 = k
                .to_integer()
                .try_into()
                .map_err(|_| param(format!("value {v} out of range")))?;
            ks.push(k);
        }
        Self::from_numerators(ks, r)
    }

    /// Rounds each value to the nearest nonzero multiple of `2^-r`.
    pub fn quantize(values: &[f64], r: u32) -> Result<Self> {
        if r == 0 || r > 32 {
            return Err(param(format!("r = {r} outside 1..=32")));
        }
        let top = 1u64 << r;
        let ks = values
            .iter()
            .map(|&v| {
                if !(v > 0.0 && v <= 1.0) {
                    return Err(param(format!("value {v} outside (0, 1]")));
                }
                Ok(((v * top as f64).round() as u64).clamp(1, top))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_numerators(ks, r)
    }

    pub fn d(&self) -> usize {
        self.numerators.len()
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// `k_i` such that `h_i = k_i / 2^r`.
    pub fn numerators(&self) -> &[u64] {
        &self.numerators
    }

    pub fn values(&self) -> Vec<Rational> {
        let den = BigInt::from(1u64) << self.r;
        self.numerators
            .iter()
            .map(|&k| Rational::new(BigInt::from(k), den.clone()))
            .collect()
    }

    pub fn values_f64(&self) -> Vec<f64> {
        let den = (1u64 << self.r) as f64;
        self.numerators.iter().map(|&k| k as f64 / den).collect()
    }

    /// `sum_{i >= 2} h_i^2 / h_1^2`; belief propagation converges for values below 1.
    pub fn alpha(&self) -> f64 {
        let v = self.values_f64();
        v[1..].iter().map(|x| x * x).sum::<f64>() / (v[0] * v[0])
    }
}

/// Strategy for drawing the generating sequence at key generation.
pub trait SequenceSource: Send + Sync {
    fn name(&self) -> &'static str;
    fn generate(&self, d: usize, r: u32, rng: &mut dyn RngCore) -> Result<GeneratingSequence>;
}

/// The fixed degree-7 sequence [`REFERENCE_SEQUENCE`], quantized to `r` bits.
pub struct ReferenceSequence;

impl SequenceSource for ReferenceSequence {
    fn name(&self) -> &'static str {
        "reference"
    }

    fn generate(&self, d: usize, r: u32, _rng: &mut dyn RngCore) -> Result<GeneratingSequence> {
        if d != REFERENCE_SEQUENCE.len() {
            return Err(param(format!(
                "the reference sequence has degree 7, not {d}"
            )));
        }
        GeneratingSequence::quantize(&REFERENCE_SEQUENCE, r)
    }
}

/// Random sequence: `h_1` uniform in `[1/2, 1)`, the tail drawn uniformly and
/// rescaled so that `alpha` is uniform in `[0.5, 0.9]`.
pub struct RandomSequence;

impl SequenceSource for RandomSequence {
    fn name(&self) -> &'static str {
        "random"
    }

    fn generate(&self, d: usize, r: u32, rng: &mut dyn RngCore) -> Result<GeneratingSequence> {
        if d == 0 {
            return Err(param("degree must be positive"));
        }
        let h1: f64 = rng.random_range(0.5..1.0);
        let mut tail: Vec<f64> = (1..d).map(|_| rng.random_range(0.05..1.0)).collect();
        tail.sort_by(|a, b| b.total_cmp(a));
        let alpha: f64 = rng.random_range(0.5..=0.9);
        let energy: f64 = tail.iter().map(|x| x * x).sum();
        let mut values = vec![h1];
        if energy > 0.0 {
            let scale = (alpha * h1 * h1 / energy).sqrt();
            values.extend(tail.iter().map(|x| (x * scale).min(h1)));
        }
        GeneratingSequence::quantize(&values, r)
    }
}

pub const SEQUENCE_SOURCES: &[&str] = &["reference", "random"];

pub fn sequence_source(name: &str) -> Result<Box<dyn SequenceSource>> {
    match name {
        "reference" => Ok(Box::new(ReferenceSequence)),
        "random" => Ok(Box::new(RandomSequence)),
        _ => Err(unknown("sequence source", name, SEQUENCE_SOURCES)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ldlc_ratmath::rational::rat;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn quantized_reference_sequence() {
        let s = ReferenceSequence
            .generate(7, 16, &mut ChaCha8Rng::seed_from_u64(0))
            .unwrap();
        assert_eq!(s.numerators()[0], (0.433f64 * 65536.0).round() as u64);
        assert!(s.numerators().windows(2).all(|w| w[0] >= w[1]));
        assert!(s.alpha() < 1.0);
        assert!(ReferenceSequence
            .generate(5, 16, &mut ChaCha8Rng::seed_from_u64(0))
            .is_err());
    }

    #[test]
    fn validation() {
        assert!(GeneratingSequence::new(&[rat(1, 1)], 1).is_ok());
        assert!(GeneratingSequence::new(&[rat(1, 3)], 8).is_err());
        assert!(GeneratingSequence::new(&[rat(1, 4), rat(1, 2)], 8).is_err());
        assert!(GeneratingSequence::new(&[rat(1, 2), rat(0, 1)], 8).is_err());
        let s = GeneratingSequence::new(&[rat(1, 1), rat(1, 2)], 4).unwrap();
        assert_eq!(s.values(), vec![rat(1, 1), rat(1, 2)]);
    }

    #[test]
    fn random_sequences_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for d in 1..=10 {
            let s = RandomSequence.generate(d, 16, &mut rng).unwrap();
            assert_eq!(s.d(), d);
            if d > 1 {
                assert!(s.alpha() > 0.45 && s.alpha() < 0.95, "alpha {}", s.alpha());
            }
        }
    }

    #[test]
    fn registry_lookup() {
        for name in SEQUENCE_SOURCES {
            assert_eq!(sequence_source(name).unwrap().name(), *name);
        }
        assert!(sequence_source("bogus").is_err());
    }
}
