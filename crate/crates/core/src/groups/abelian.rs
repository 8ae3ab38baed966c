use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{PairError, Result};

/// ℤ^r × ℤ/t₁ × … × ℤ/tₛ with named generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FGAbelianSpec {
    pub free_rank: usize,
    pub torsion: Vec<u64>,
    pub names: Vec<String>,
}

/// Element of an [`FGAbelianSpec`]: free coordinates plus least nonnegative residues.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbelianElem {
    pub free: Vec<BigInt>,
    pub torsion: Vec<u64>,
}

impl FGAbelianSpec {
    pub fn new(free_rank: usize, torsion: Vec<u64>, names: Vec<String>) -> Result<Self> {
        if torsion.iter().any(|&t| t < 2) {
            return Err(PairError::Config("torsion orders must be at least 2".into()));
        }
        if names.len() != free_rank + torsion.len() {
            return Err(PairError::Config(format!(
                "abelian group needs {} generator names, got {}",
                free_rank + torsion.len(),
                names.len()
            )));
        }
        Ok(Self { free_rank, torsion, names })
    }

    pub fn is_infinite(&self) -> bool {
        self.free_rank > 0
    }

    pub fn identity(&self) -> AbelianElem {
        AbelianElem { free: vec![BigInt::zero(); self.free_rank], torsion: vec![0; self.torsion.len()] }
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// `k`-th power of generator `index`.
    pub fn generator_power(&self, index: usize, k: i64) -> AbelianElem {
        let mut e = self.identity();
        if index < self.free_rank {
            e.free[index] = BigInt::from(k);
        } else {
            let t = index - self.free_rank;
            e.torsion[t] = k.rem_euclid(self.torsion[t] as i64) as u64;
        }
        e
    }

    pub fn from_coords(&self, coords: &[i64]) -> Result<AbelianElem> {
        if coords.len() != self.free_rank + self.torsion.len() {
            return Err(PairError::Config("abelian coordinate vector has wrong length".into()));
        }
        let mut e = self.identity();
        for (i, &c) in coords.iter().enumerate() {
            e = self.add(&e, &self.generator_power(i, c));
        }
        Ok(e)
    }

    pub fn add(&self, x: &AbelianElem, y: &AbelianElem) -> AbelianElem {
        AbelianElem {
            free: x.free.iter().zip(&y.free).map(|(a, b)| a + b).collect(),
            torsion: x
                .torsion
                .iter()
                .zip(&y.torsion)
                .zip(&self.torsion)
                .map(|((a, b), t)| (a + b) % t)
                .collect(),
        }
    }

    pub fn neg(&self, x: &AbelianElem) -> AbelianElem {
        AbelianElem {
            free: x.free.iter().map(|a| -a).collect(),
            torsion: x.torsion.iter().zip(&self.torsion).map(|(a, t)| (t - a) % t).collect(),
        }
    }

    pub fn is_identity(&self, x: &AbelianElem) -> bool {
        x.free.iter().all(Zero::is_zero) && x.torsion.iter().all(|&a| a == 0)
    }

    /// Whitespace-separated word such as `c^2 z`; empty for the identity.
    pub fn render(&self, x: &AbelianElem) -> String {
        let free = x.free.iter().map(|a| a.clone());
        let torsion = x.torsion.iter().map(|&a| BigInt::from(a));
        free.chain(torsion)
            .zip(&self.names)
            .filter(|(a, _)| !a.is_zero())
            .map(|(a, name)| if a.is_one() { name.clone() } else { format!("{name}^{a}") })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_rendering() {
        let g = FGAbelianSpec::new(1, vec![2], vec!["c".into(), "z".into()]).unwrap();
        let x = g.from_coords(&[3, 1]).unwrap();
        assert_eq!(g.render(&x), "c^3 z");
        assert!(g.is_identity(&g.add(&x, &g.neg(&x))));
        assert_eq!(g.render(&g.add(&x, &x)), "c^6");
        assert_eq!(g.generator_power(1, -3).torsion, vec![1]);
        assert!(FGAbelianSpec::new(1, vec![1], vec!["a".into(), "b".into()]).is_err());
    }
}
