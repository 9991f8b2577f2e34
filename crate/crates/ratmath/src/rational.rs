//! Helpers for working with [`BigRational`] values.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational number, always stored in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Builds `num / den` from machine integers.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn from_int(v: impl Into<BigInt>) -> Rational {
    Rational::from_integer(v.into())
}

/// `x * 2^exp` without overflowing intermediate powers.
pub fn ldexp(mut x: f64, mut exp: i64) -> f64 {
    while exp > 1000 {
        x *= 2f64.powi(1000);
        exp -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while exp < -1000 {
        x *= 2f64.powi(-1000);
        exp += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(exp as i32)
}

/// Nearest double to `num / den`, correct to within one ulp even when both
/// parts are far outside the `f64` range.
pub fn ratio_to_f64(num: &BigInt, den: &BigInt) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let shift = den.bits() as i64 - num.bits() as i64 + 66;
    let q = if shift >= 0 {
        (num << shift as usize) / den
    } else {
        num / (den << (-shift) as usize)
    };
    ldexp(q.to_f64().unwrap_or(f64::NAN), -shift)
}

pub fn to_f64(r: &Rational) -> f64 {
    ratio_to_f64(r.numer(), r.denom())
}

/// Exact rational equal to the double `x`.
pub fn from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

/// `log2 |v|` for a nonzero integer.
pub fn log2_abs_int(v: &BigInt) -> f64 {
    let bits = v.bits() as i64;
    if bits <= 64 {
        return v.abs().to_f64().unwrap().log2();
    }
    let top = (v.abs() >> (bits - 64) as usize).to_f64().unwrap();
    top.log2() + (bits - 64) as f64
}

/// `log2 |r|` for a nonzero rational.
pub fn log2_abs(r: &Rational) -> f64 {
    log2_abs_int(r.numer()) - log2_abs_int(r.denom())
}

/// Nearest integer, ties to even.
pub fn round_half_even(r: &Rational) -> BigInt {
    let floor = r.floor().to_integer();
    let frac = r - Rational::from_integer(floor.clone());
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    match frac.cmp(&half) {
        std::cmp::Ordering::Less => floor,
        std::cmp::Ordering::Greater => floor + 1,
        std::cmp::Ordering::Equal => {
            if floor.is_even() {
                floor
            } else {
                floor + 1
            }
        }
    }
}

/// Nearest integer to an `f64`, ties to even, as a big integer.
pub fn round_f64_half_even(x: f64) -> BigInt {
    let r = x.round_ties_even();
    if r.abs() < 9.0e15 {
        BigInt::from(r as i64)
    } else {
        Rational::from_float(r)
            .map(|q| q.to_integer())
            .unwrap_or_default()
    }
}

/// Least common multiple of the denominators of `values` (1 for an empty slice).
pub fn lcm_denominators<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values.into_iter().fold(BigInt::one(), |acc, v| {
        if v.denom().is_one() {
            acc
        } else {
            acc.lcm(v.denom())
        }
    })
}

/// Converts `value` into an exact integer, assuming it is integral.
pub fn expect_integer(value: &Rational) -> Option<BigInt> {
    value.is_integer().then(|| value.to_integer())
}

pub fn is_negative(r: &Rational) -> bool {
    r.numer().sign() == Sign::Minus
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn to_f64_handles_huge_parts() {
        let big = BigInt::one() << 3000usize;
        let r = Rational::new(big.clone() * 3, big * 4);
        assert_eq!(to_f64(&r), 0.75);
        let tiny = Rational::new(BigInt::one(), BigInt::one() << 1100usize);
        assert_eq!(to_f64(&tiny), 0.0);
        assert_eq!(to_f64(&rat(-7, 2)), -3.5);
    }

    #[test]
    fn rounding_ties_to_even() {
        assert_eq!(round_half_even(&rat(5, 2)), BigInt::from(2));
        assert_eq!(round_half_even(&rat(7, 2)), BigInt::from(4));
        assert_eq!(round_half_even(&rat(-5, 2)), BigInt::from(-2));
        assert_eq!(round_half_even(&rat(-7, 3)), BigInt::from(-2));
        assert_eq!(round_half_even(&rat(8, 3)), BigInt::from(3));
    }

    #[test]
    fn log2_of_products() {
        let v = BigInt::from(65536u32).pow(7);
        assert!((log2_abs_int(&v) - 112.0).abs() < 1e-12);
        assert!((log2_abs(&rat(1, 1024)) + 10.0).abs() < 1e-12);
    }
}
