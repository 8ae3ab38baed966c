use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::rational::{parse_rational, render_rational};
use crate::error::{PairError, Result};

/// Gaussian rational `re + im·i` with exact field arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ComplexRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl ComplexRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        Self { re, im: BigRational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::real(BigRational::from_integer(n.into()))
    }

    pub fn i() -> Self {
        Self { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -self.im.clone() }
    }

    /// |z|² = re² + im².
    pub fn norm_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }
}

impl Add for &ComplexRational {
    type Output = ComplexRational;
    fn add(self, rhs: &ComplexRational) -> ComplexRational {
        ComplexRational { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl Add for ComplexRational {
    type Output = ComplexRational;
    fn add(self, rhs: ComplexRational) -> ComplexRational {
        &self + &rhs
    }
}

impl AddAssign<&ComplexRational> for ComplexRational {
    fn add_assign(&mut self, rhs: &ComplexRational) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl Sub for &ComplexRational {
    type Output = ComplexRational;
    fn sub(self, rhs: &ComplexRational) -> ComplexRational {
        ComplexRational { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl Mul for &ComplexRational {
    type Output = ComplexRational;
    fn mul(self, rhs: &ComplexRational) -> ComplexRational {
        ComplexRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Mul for ComplexRational {
    type Output = ComplexRational;
    fn mul(self, rhs: ComplexRational) -> ComplexRational {
        &self * &rhs
    }
}

impl Neg for ComplexRational {
    type Output = ComplexRational;
    fn neg(self) -> ComplexRational {
        ComplexRational { re: -self.re, im: -self.im }
    }
}

impl fmt::Display for ComplexRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", render_rational(&self.re));
        }
        let im_abs = self.im.abs();
        let im_text = if im_abs.is_one() { String::new() } else { render_rational(&im_abs) };
        let sign = if self.im.is_negative() { "-" } else { "+" };
        if self.re.is_zero() {
            let lead = if self.im.is_negative() { "-" } else { "" };
            write!(f, "{lead}{im_text}i")
        } else {
            write!(f, "{}{sign}{im_text}i", render_rational(&self.re))
        }
    }
}

impl FromStr for ComplexRational {
    type Err = PairError;

    /// Accepts `p/q`, `r/si`, `p/q+r/si`, `p/q-r/si`, `i`, `-i`.
    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(PairError::Parse("empty coefficient".into()));
        }
        let Some(body) = s.strip_suffix('i') else {
            return Ok(Self::real(parse_rational(&s)?));
        };
        let split = body
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(i, _)| i)
            .last();
        let (re_text, im_text) = match split {
            Some(i) => (&body[..i], &body[i..]),
            None => ("0", body),
        };
        let im = match im_text {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            t => parse_rational(t.strip_prefix('+').unwrap_or(t))?,
        };
        Ok(Self { re: parse_rational(re_text)?, im })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> ComplexRational {
        s.parse().unwrap()
    }

    #[test]
    fn parse_forms() {
        assert_eq!(c("1/2+1/3i").to_string(), "1/2+1/3i");
        assert_eq!(c("i"), ComplexRational::i());
        assert_eq!(c("-i"), -ComplexRational::i());
        assert_eq!(c("2-3i").to_string(), "2-3i");
        assert_eq!(c("-2/4").to_string(), "-1/2");
        assert_eq!(c("-5/7i").to_string(), "-5/7i");
        assert!("1/2+xi".parse::<ComplexRational>().is_err());
    }

    #[test]
    fn field_ops() {
        let z = c("1+2i");
        assert_eq!((&z * &z.conj()).to_string(), "5");
        assert_eq!(render_rational(&z.norm_sq()), "5");
        assert_eq!((&c("i") * &c("i")).to_string(), "-1");
        assert_eq!((&z - &z), ComplexRational::zero());
    }
}
