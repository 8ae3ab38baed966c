//! Building-block groups: finitely generated abelian groups and finite tables.

mod abelian;
mod finite;

pub use abelian::{AbelianElem, FGAbelianSpec};
pub use finite::FiniteGroupTable;
