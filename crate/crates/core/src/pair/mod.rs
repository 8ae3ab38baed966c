//! Group families, canonical elements, exact arithmetic, Γ₀ membership and balls.

mod context;
mod element;
mod family;
mod word;

pub use context::{enumerate_ball, enumerate_box, Ball, BallSide, Caps, PairContext};
pub use element::{Element, FpSyllable, RationalMatrix};
pub use family::{in_f_n, lift, render_matrix, AmalgamGamma0, Family, SemidirectSpec};
pub use word::{Letter, RawWord, Token};
