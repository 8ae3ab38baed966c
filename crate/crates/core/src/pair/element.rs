use num_bigint::BigInt;
use num_rational::BigRational;

use crate::normal_forms::{AmalgamForm, HnnForm};

/// A group element in the canonical form of its family. Equality of payloads
/// is equality in the group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    /// Freely reduced `(generator, exponent)` syllables; adjacent generators differ.
    Free(Vec<(usize, i64)>),
    Amalgam(AmalgamForm),
    Hnn(HnnForm),
    /// `(v, k)` in ℤ^d ⋊ ℤ with `(v,k)(v',k') = (v + gᵏv', k + k')`.
    Semidirect { v: Vec<BigInt>, k: i64 },
    Matrix(RationalMatrix),
    /// Alternating syllables of Γ ∗ G.
    FreeProduct(Vec<FpSyllable>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FpSyllable {
    Base(Element),
    Factor(usize),
}

/// Square matrix of reduced fractions, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalMatrix {
    pub dim: usize,
    pub entries: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i * self.dim + j]
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let d = self.dim;
        let entries = (0..d * d)
            .map(|idx| {
                let (i, j) = (idx / d, idx % d);
                (0..d).map(|k| self.get(i, k) * rhs.get(k, j)).sum()
            })
            .collect();
        Self { dim: d, entries }
    }

    pub fn is_diagonal(&self) -> bool {
        use num_traits::Zero;
        (0..self.dim * self.dim).all(|idx| idx / self.dim == idx % self.dim || self.entries[idx].is_zero())
    }
}
