//! Sizes of the brute-force search spaces for the secret sequence and shifts.

use ldlc_ratmath::rational::log2_abs_int;
use num_bigint::BigInt;
use num_traits::One;

use crate::error::{param, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SearchSpace {
    /// `prod_{i < d} (2^r - i)`.
    pub n_h: BigInt,
    /// `prod_{i < d} (n - i)`.
    pub n_p: BigInt,
    pub log2_h: f64,
    pub log2_p: f64,
}

fn falling_factorial(top: &BigInt, d: usize) -> BigInt {
    (0..d).fold(BigInt::one(), |acc, i| acc * (top - BigInt::from(i)))
}

pub fn brute_force_space(r: u32, d: usize, n: usize) -> Result<SearchSpace> {
    if d == 0 {
        return Err(param("degree must be positive"));
    }
    let top = BigInt::one() << r as usize;
    if BigInt::from(d) > top || d > n {
        return Err(param(format!("d = {d} exceeds min(2^{r}, {n})")));
    }
    let n_h = falling_factorial(&top, d);
    let n_p = falling_factorial(&BigInt::from(n), d);
    Ok(SearchSpace {
        log2_h: log2_abs_int(&n_h),
        log2_p: log2_abs_int(&n_p),
        n_h,
        n_p,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_factor() {
        let s = brute_force_space(5, 1, 9).unwrap();
        assert_eq!(s.n_h, BigInt::from(32));
        assert_eq!(s.n_p, BigInt::from(9));
    }

    #[test]
    fn small_products_match_direct_evaluation() {
        let s = brute_force_space(3, 3, 5).unwrap();
        assert_eq!(s.n_h, BigInt::from(8 * 7 * 6));
        assert_eq!(s.n_p, BigInt::from(5 * 4 * 3));
        assert!((s.log2_h - (336f64).log2()).abs() < 1e-12);
    }

    #[test]
    fn oversized_degree_is_rejected() {
        assert!(brute_force_space(2, 5, 100).is_err());
        assert!(brute_force_space(16, 5, 4).is_err());
        assert!(brute_force_space(16, 0, 4).is_err());
    }
}
