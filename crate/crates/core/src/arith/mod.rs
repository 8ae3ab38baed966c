//! Exact scalar arithmetic: rationals, Gaussian rationals and integer matrices.

mod complex;
mod intmat;
mod rational;

pub use complex::ComplexRational;
pub use intmat::IntMatrix;
pub use rational::{decimal_digits, parse_rational, render_rational, two_adic_valuation};
