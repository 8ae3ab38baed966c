use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{PairError, Result};

/// Parses `p`, `-p`, `p/q` into a reduced rational with positive denominator.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || PairError::Parse(format!("not a rational: `{s}`"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

/// `p` for integers, `p/q` otherwise.
pub fn render_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn trailing_zeros(n: &BigInt) -> i64 {
    n.magnitude().trailing_zeros().map(|z| z as i64).unwrap_or(0)
}

/// 2-adic valuation of a nonzero rational.
pub fn two_adic_valuation(q: &BigRational) -> Option<i64> {
    if q.is_zero() {
        return None;
    }
    Some(trailing_zeros(q.numer()) - trailing_zeros(q.denom()))
}

/// Decimal rendering with `digits` significant digits (truncated, not rounded).
pub fn decimal_digits(q: &BigRational, digits: usize) -> String {
    if q.is_zero() {
        return "0".to_string();
    }
    let neg = q.is_negative();
    let num = q.numer().abs();
    let den = q.denom().clone();
    let int_part = &num / &den;
    let mut rem = &num % &den;
    let ten = BigInt::from(10);

    let mut out = String::new();
    if neg {
        out.push('-');
    }
    let int_str = int_part.to_string();
    let mut significant = if int_part.is_zero() { 0 } else { int_str.len() };
    out.push_str(&int_str);
    if significant >= digits || rem.is_zero() {
        return out;
    }
    out.push('.');
    while significant < digits && !rem.is_zero() {
        rem *= &ten;
        let d = &rem / &den;
        rem = &rem % &den;
        let digit = d.to_string();
        if significant > 0 || digit != "0" {
            significant += 1;
        }
        out.push_str(&digit);
    }
    out
}
