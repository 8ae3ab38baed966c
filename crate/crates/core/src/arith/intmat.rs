use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{PairError, Result};

/// Square integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    dim: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return Err(PairError::Config("matrix must be square and nonempty".into()));
        }
        Ok(Self { dim, entries: rows.iter().flatten().map(|&x| BigInt::from(x)).collect() })
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![BigInt::zero(); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = BigInt::one();
        }
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.dim + j]
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let d = self.dim;
        let mut entries = vec![BigInt::zero(); d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    entries[i * d + j] += a * rhs.get(k, j);
                }
            }
        }
        Self { dim: d, entries }
    }

    /// Matrix–column-vector product.
    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j) * &v[j]).sum())
            .collect()
    }

    pub fn trace(&self) -> BigInt {
        (0..self.dim).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn sub_identity(&self) -> Self {
        let mut m = self.clone();
        for i in 0..self.dim {
            m.entries[i * self.dim + i] -= 1;
        }
        m
    }

    /// Fraction-free (Bareiss) determinant.
    pub fn det(&self) -> BigInt {
        let d = self.dim;
        let mut a = self.entries.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..d {
            if a[k * d + k].is_zero() {
                let Some(p) = (k + 1..d).find(|&r| !a[r * d + k].is_zero()) else {
                    return BigInt::zero();
                };
                for j in 0..d {
                    a.swap(k * d + j, p * d + j);
                }
                sign = -sign;
            }
            for i in k + 1..d {
                for j in k + 1..d {
                    let v = &a[i * d + j] * &a[k * d + k] - &a[i * d + k] * &a[k * d + j];
                    a[i * d + j] = v / &prev;
                }
            }
            prev = a[k * d + k].clone();
        }
        sign * &a[d * d - 1]
    }

    /// Inverse of a matrix with determinant ±1.
    pub fn inverse_unimodular(&self) -> Result<Self> {
        let det = self.det();
        if det.abs() != BigInt::one() {
            return Err(PairError::Config(format!("matrix determinant is {det}, expected ±1")));
        }
        let d = self.dim;
        let mut a: Vec<BigRational> =
            self.entries.iter().map(|x| BigRational::from_integer(x.clone())).collect();
        let mut inv: Vec<BigRational> = Self::identity(d)
            .entries
            .into_iter()
            .map(BigRational::from_integer)
            .collect();
        for col in 0..d {
            let pivot = (col..d).find(|&r| !a[r * d + col].is_zero()).expect("nonsingular");
            for j in 0..d {
                a.swap(col * d + j, pivot * d + j);
                inv.swap(col * d + j, pivot * d + j);
            }
            let p = a[col * d + col].clone();
            for j in 0..d {
                a[col * d + j] /= &p;
                inv[col * d + j] /= &p;
            }
            for r in 0..d {
                if r == col || a[r * d + col].is_zero() {
                    continue;
                }
                let f = a[r * d + col].clone();
                for j in 0..d {
                    let (x, y) = (a[col * d + j].clone(), inv[col * d + j].clone());
                    a[r * d + j] -= &f * x;
                    inv[r * d + j] -= &f * y;
                }
            }
        }
        Ok(Self { dim: d, entries: inv.into_iter().map(|q| q.to_integer()).collect() })
    }

    /// `self^k` for k ≥ 0; callers handle negative powers through the inverse.
    pub fn pow(&self, mut k: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.dim);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.dim {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for j in 0..self.dim {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}
