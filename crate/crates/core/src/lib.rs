//! Exact verification workbench for pairs (Γ, Γ₀) of a countable group and a
//! distinguished infinite abelian subgroup.
//!
//! * [`pair`]: group families, canonical elements, Γ₀ membership, balls.
//! * [`normal_forms`]: amalgam and HNN normal-form engines, domain chains.
//! * [`conditions`]: exceptional sets, (SS)/(ST) scans, malnormality, certificates.
//! * [`fourier`]: finitely supported group-algebra elements and mixing defects.
//! * [`config`], [`report`], [`cli`]: the batch front-end.

pub mod arith;
pub mod cli;
pub mod conditions;
pub mod config;
pub mod error;
pub mod fourier;
pub mod groups;
pub mod lattice;
pub mod normal_forms;
pub mod pair;
pub mod report;

pub use error::{PairError, Result};
pub use pair::{enumerate_ball, Ball, BallSide, Element, Family, PairContext};
