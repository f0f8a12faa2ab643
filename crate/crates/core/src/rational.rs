//! Exact rational helpers.
//!
//! [`ExactRational`] is `num_rational::BigRational`, which keeps every value
//! gcd-reduced with a positive denominator, so structural equality is exact
//! equality.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type ExactRational = BigRational;

/// `num / den` from machine integers. Panics on a zero denominator.
pub fn frac(num: i64, den: i64) -> ExactRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn from_uint(n: &BigUint) -> ExactRational {
    BigRational::from_integer(BigInt::from(n.clone()))
}

/// `num / den` for unsigned big integers. Panics on a zero denominator.
pub fn ratio_of(num: &BigUint, den: &BigUint) -> ExactRational {
    BigRational::new(BigInt::from(num.clone()), BigInt::from(den.clone()))
}

/// `2 / (1 + d)`, the ratio value attached to an alternating sum `d`.
pub fn two_over_one_plus(d: &ExactRational) -> ExactRational {
    let two = BigRational::from_integer(BigInt::from(2));
    two / (BigRational::one() + d)
}

/// `"num/den"`, or just `"num"` for integers.
pub fn format_exact(r: &ExactRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Decimal rendering with exactly `sig` significant digits, rounded half away
/// from zero. Computed with integer arithmetic only, so the output is
/// byte-identical across platforms.
pub fn to_decimal(r: &ExactRational, sig: usize) -> String {
    assert!(sig >= 1);
    if r.is_zero() {
        return "0".to_string();
    }
    let negative = r.is_negative();
    let num = r.numer().abs().to_biguint().expect("abs is non-negative");
    let den = r.denom().to_biguint().expect("denominator is positive");

    // exponent e with 10^e <= num/den < 10^(e+1)
    let mut exp = num.to_string().len() as i64 - den.to_string().len() as i64;
    let ten = BigUint::from(10u32);
    let pow10 = |e: i64| ten.pow(e.unsigned_abs() as u32);
    let at_least = |e: i64| -> bool {
        if e >= 0 {
            num >= &den * pow10(e)
        } else {
            &num * pow10(e) >= den
        }
    };
    while !at_least(exp) {
        exp -= 1;
    }
    while at_least(exp + 1) {
        exp += 1;
    }

    // scaled = round(num/den * 10^(sig-1-exp))
    let shift = sig as i64 - 1 - exp;
    let (n, d) = if shift >= 0 {
        (&num * pow10(shift), den.clone())
    } else {
        (num.clone(), &den * pow10(shift))
    };
    let (q, rem) = n.div_rem(&d);
    let mut scaled = if rem * 2u32 >= d { q + 1u32 } else { q };
    if scaled == pow10(sig as i64) {
        scaled /= 10u32;
        exp += 1;
    }
    let digits = scaled.to_string();
    debug_assert_eq!(digits.len(), sig);

    let body = if (0..sig as i64).contains(&exp) {
        let split = exp as usize + 1;
        if split == sig {
            digits
        } else {
            format!("{}.{}", &digits[..split], &digits[split..])
        }
    } else if (-6..0).contains(&exp) {
        format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits)
    } else if sig == 1 {
        format!("{digits}e{exp}")
    } else {
        format!("{}.{}e{}", &digits[..1], &digits[1..], exp)
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let r = frac(6, -8);
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(4));
        assert_eq!(frac(0, 5), frac(0, 1));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(to_decimal(&frac(8, 5), 12), "1.60000000000");
        assert_eq!(to_decimal(&frac(1, 3), 12), "0.333333333333");
        assert_eq!(to_decimal(&frac(2, 3), 12), "0.666666666667");
        assert_eq!(to_decimal(&frac(-7, 4), 3), "-1.75");
        assert_eq!(to_decimal(&frac(1, 7), 4), "0.1429");
        assert_eq!(to_decimal(&frac(123, 1), 3), "123");
        assert_eq!(to_decimal(&frac(1235, 1), 3), "1.24e3");
        assert_eq!(to_decimal(&frac(1, 1000), 2), "0.0010");
        assert_eq!(to_decimal(&frac(1, 100_000_000), 2), "1.0e-8");
        // rounding carries into a new leading digit
        assert_eq!(to_decimal(&frac(9999, 1000), 3), "10.0");
        assert_eq!(to_decimal(&frac(0, 1), 12), "0");
    }

    #[test]
    fn exact_formatting() {
        assert_eq!(format_exact(&frac(16, 10)), "8/5");
        assert_eq!(format_exact(&frac(4, 2)), "2");
        assert_eq!(format_exact(&two_over_one_plus(&frac(1, 4))), "8/5");
    }
}
