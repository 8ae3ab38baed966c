//! Canonical-form engines for amalgamated free products and HNN extensions.

pub mod amalgam;
pub mod hnn;

pub use amalgam::{AmalgamForm, AmalgamStructure, Factor, FactorElem, Side, Syllable};
pub use hnn::{DomChain, HnnForm, HnnLetter, HnnStructure};
