//! Sublattices of ℤ^r in Hermite normal form, and homomorphisms between them.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{PairError, Result};

pub type IntVec = Vec<BigInt>;

/// A sublattice of ℤ^dim stored as HNF rows: pivot columns strictly increase,
/// pivots are positive and entries above a pivot lie in `[0, pivot)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lattice {
    dim: usize,
    basis: Vec<IntVec>,
}

/// Row-reduces `rows` (each paired with a payload that follows the same row
/// operations) into HNF. Returns the nonzero rows with payloads, then the
/// payloads of rows that reduced to zero.
fn hnf_with_payload(dim: usize, mut rows: Vec<(IntVec, IntVec)>) -> (Vec<(IntVec, IntVec)>, Vec<IntVec>) {
    let mut top = 0;
    let mut pivots = Vec::new();
    for col in 0..dim {
        loop {
            let smallest = (top..rows.len())
                .filter(|&r| !rows[r].0[col].is_zero())
                .min_by(|&a, &b| rows[a].0[col].abs().cmp(&rows[b].0[col].abs()));
            let Some(p) = smallest else { break };
            rows.swap(top, p);
            let mut done = true;
            for r in top + 1..rows.len() {
                if rows[r].0[col].is_zero() {
                    continue;
                }
                let q = rows[r].0[col].div_floor(&rows[top].0[col]);
                let (pivot_row, pivot_payload) = rows[top].clone();
                axpy(&mut rows[r].0, &q, &pivot_row);
                axpy(&mut rows[r].1, &q, &pivot_payload);
                if !rows[r].0[col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if top < rows.len() && !rows[top].0[col].is_zero() {
            if rows[top].0[col].is_negative() {
                negate(&mut rows[top].0);
                negate(&mut rows[top].1);
            }
            pivots.push(col);
            top += 1;
        }
    }
    // reduce entries above each pivot
    for (i, &col) in pivots.iter().enumerate() {
        let (pivot_row, pivot_payload) = rows[i].clone();
        for r in 0..i {
            let q = rows[r].0[col].div_floor(&pivot_row[col]);
            if !q.is_zero() {
                axpy(&mut rows[r].0, &q, &pivot_row);
                axpy(&mut rows[r].1, &q, &pivot_payload);
            }
        }
    }
    let kernel = rows.split_off(top).into_iter().map(|(_, payload)| payload).collect();
    (rows, kernel)
}

/// `target -= q * row`
fn axpy(target: &mut [BigInt], q: &BigInt, row: &[BigInt]) {
    for (t, x) in target.iter_mut().zip(row) {
        *t -= q * x;
    }
}

fn negate(v: &mut [BigInt]) {
    for x in v.iter_mut() {
        *x = -x.clone();
    }
}

impl Lattice {
    pub fn from_generators(dim: usize, gens: &[IntVec]) -> Self {
        let rows = gens.iter().map(|g| (g.clone(), Vec::new())).collect();
        let (basis, _) = hnf_with_payload(dim, rows);
        Self { dim, basis: basis.into_iter().map(|(b, _)| b).collect() }
    }

    pub fn zero(dim: usize) -> Self {
        Self { dim, basis: Vec::new() }
    }

    pub fn full(dim: usize) -> Self {
        let gens: Vec<IntVec> = (0..dim)
            .map(|i| (0..dim).map(|j| BigInt::from((i == j) as i64)).collect())
            .collect();
        Self::from_generators(dim, &gens)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &[IntVec] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    fn pivot(row: &IntVec) -> usize {
        row.iter().position(|x| !x.is_zero()).expect("HNF rows are nonzero")
    }

    /// Splits `v = rep + Σ cᵢ·bᵢ` with `rep` the canonical coset representative.
    pub fn reduce(&self, v: &[BigInt]) -> (IntVec, IntVec) {
        let mut rep = v.to_vec();
        let mut coeffs = Vec::with_capacity(self.basis.len());
        for row in &self.basis {
            let p = Self::pivot(row);
            let q = rep[p].div_floor(&row[p]);
            axpy(&mut rep, &q, row);
            coeffs.push(q);
        }
        (rep, coeffs)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.reduce(v).0.iter().all(Zero::is_zero)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let rows = self
            .basis
            .iter()
            .map(|b| (b.clone(), b.clone()))
            .chain(other.basis.iter().map(|b| (b.clone(), vec![BigInt::zero(); self.dim])))
            .collect();
        let (_, kernel) = hnf_with_payload(self.dim, rows);
        Self::from_generators(self.dim, &kernel)
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.basis.iter().all(|b| other.contains(b))
    }

    /// For rank-one lattices of ℤ: the positive generator d of dℤ (0 for {0}).
    pub fn cyclic_modulus(&self) -> Option<BigInt> {
        if self.dim != 1 {
            return None;
        }
        Some(self.basis.first().map(|b| b[0].clone()).unwrap_or_else(BigInt::zero))
    }
}

/// A homomorphism defined on a sublattice, stored by the images of its HNF basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticeMap {
    domain: Lattice,
    images: Vec<IntVec>,
}

impl LatticeMap {
    /// Builds the map sending `gens[i] ↦ images[i]`; fails if that is not well defined.
    pub fn from_generator_images(dim: usize, gens: &[IntVec], images: &[IntVec]) -> Result<Self> {
        if gens.len() != images.len() {
            return Err(PairError::Config("generator and image lists differ in length".into()));
        }
        let rows = gens.iter().cloned().zip(images.iter().cloned()).collect();
        let (basis, kernel) = hnf_with_payload(dim, rows);
        if kernel.iter().any(|k| k.iter().any(|x| !x.is_zero())) {
            return Err(PairError::Config("map is not well defined on the generated subgroup".into()));
        }
        let (basis, images): (Vec<_>, Vec<_>) = basis.into_iter().unzip();
        Ok(Self { domain: Lattice { dim, basis }, images })
    }

    pub fn domain(&self) -> &Lattice {
        &self.domain
    }

    pub fn image(&self) -> Lattice {
        Lattice::from_generators(self.domain.dim, &self.images)
    }

    /// None when `v` is outside the domain.
    pub fn apply(&self, v: &[BigInt]) -> Option<IntVec> {
        let (rep, coeffs) = self.domain.reduce(v);
        if rep.iter().any(|x| !x.is_zero()) {
            return None;
        }
        let mut out = vec![BigInt::zero(); self.domain.dim];
        for (c, img) in coeffs.iter().zip(&self.images) {
            for (o, x) in out.iter_mut().zip(img) {
                *o += c * x;
            }
        }
        Some(out)
    }

    pub fn is_injective(&self) -> bool {
        self.image().rank() == self.domain.rank()
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_injective() {
            return Err(PairError::Config("map is not injective".into()));
        }
        Self::from_generator_images(self.domain.dim, &self.images, &self.domain.basis)
    }

    /// The preimage of `target ∩ image` under this map.
    pub fn preimage(&self, target: &Lattice) -> Result<Lattice> {
        let inv = self.inverse()?;
        let meet = target.intersect(&self.image());
        let gens: Vec<IntVec> = meet
            .basis
            .iter()
            .map(|b| inv.apply(b).expect("intersection lies in the image"))
            .collect();
        Ok(Lattice::from_generators(self.domain.dim, &gens))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> IntVec {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn cyclic_lattices() {
        let l = Lattice::from_generators(1, &[v(&[6]), v(&[-9])]);
        assert_eq!(l.cyclic_modulus(), Some(BigInt::from(3)));
        assert_eq!(l.reduce(&v(&[-7])).0, v(&[2]));
        let m = Lattice::from_generators(1, &[v(&[2])]);
        assert_eq!(l.intersect(&m).cyclic_modulus(), Some(BigInt::from(6)));
        assert_eq!(Lattice::zero(1).cyclic_modulus(), Some(BigInt::from(0)));
    }

    #[test]
    fn rank_two_coset_representatives() {
        let l = Lattice::from_generators(2, &[v(&[2, 1]), v(&[0, 3])]);
        assert!(l.contains(&v(&[2, 4])));
        assert!(!l.contains(&v(&[1, 0])));
        // every vector in a small box maps to a rep with 0 ≤ x < 2, 0 ≤ y < 3
        for x in -5..5 {
            for y in -5..5 {
                let (rep, _) = l.reduce(&v(&[x, y]));
                assert!(rep[0] >= BigInt::from(0) && rep[0] < BigInt::from(2));
                assert!(rep[1] >= BigInt::from(0) && rep[1] < BigInt::from(3));
                let diff: IntVec = v(&[x, y]).iter().zip(&rep).map(|(a, b)| a - b).collect();
                assert!(l.contains(&diff));
            }
        }
    }

    #[test]
    fn map_checks_and_preimage() {
        let phi = LatticeMap::from_generator_images(1, &[v(&[3])], &[v(&[2])]).unwrap();
        assert_eq!(phi.apply(&v(&[9])), Some(v(&[6])));
        assert_eq!(phi.apply(&v(&[4])), None);
        let six = Lattice::from_generators(1, &[v(&[3])]);
        assert_eq!(phi.preimage(&six).unwrap().cyclic_modulus(), Some(BigInt::from(9)));
        assert!(LatticeMap::from_generator_images(1, &[v(&[2]), v(&[3])], &[v(&[2]), v(&[2])]).is_err());
        let degenerate = LatticeMap::from_generator_images(2, &[v(&[1, 0]), v(&[0, 1])], &[v(&[1, 1]), v(&[2, 2])]).unwrap();
        assert!(!degenerate.is_injective());
    }
}
