//! Fixed-point decimal rendering of exact values.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

fn ten_pow(places: u32) -> BigInt {
    num_traits::pow(BigInt::from(10), places as usize)
}

/// `r * 10^places` rounded to the nearest integer, ties to even.
pub fn round_half_even(r: &BigRational, places: u32) -> BigInt {
    let scaled = r * BigRational::from_integer(ten_pow(places));
    let (q, rem) = scaled.numer().div_mod_floor(scaled.denom());
    let twice: BigInt = &rem * 2;
    match twice.cmp(scaled.denom()) {
        std::cmp::Ordering::Less => q,
        std::cmp::Ordering::Greater => q + 1,
        std::cmp::Ordering::Equal => {
            if q.is_even() {
                q
            } else {
                q + 1
            }
        }
    }
}

/// Formats an integer holding `value * 10^places`.
pub fn format_scaled(n: &BigInt, places: u32) -> String {
    let neg = n.is_negative() && !n.is_zero();
    let digits = n.abs().to_string();
    let p = places as usize;
    let padded = if digits.len() <= p {
        format!("{}{}", "0".repeat(p + 1 - digits.len()), digits)
    } else {
        digits
    };
    let (int, frac) = padded.split_at(padded.len() - p);
    let mut s = String::new();
    if neg {
        s.push('-');
    }
    s.push_str(int);
    if p > 0 {
        s.push('.');
        s.push_str(frac);
    }
    s
}

/// Rational rendered with `places` fractional digits.
pub fn fixed(r: &BigRational, places: u32) -> String {
    format_scaled(&round_half_even(r, places), places)
}
