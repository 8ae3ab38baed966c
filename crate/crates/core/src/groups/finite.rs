use crate::error::{PairError, Result};

/// A finite group given by its full multiplication table over named elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupTable {
    names: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroupTable {
    /// Validates closure, associativity, identity and inverses.
    pub fn new(names: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = names.len();
        let bad = |msg: &str| Err(PairError::Config(format!("finite group table: {msg}")));
        if n == 0 || table.len() != n || table.iter().any(|r| r.len() != n) {
            return bad("table must be n×n over the named elements");
        }
        if table.iter().flatten().any(|&x| x >= n) {
            return bad("entry out of range");
        }
        let Some(identity) = (0..n).find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x)) else {
            return bad("no identity element");
        };
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return bad("not associative");
                    }
                }
            }
        }
        let mut inverse = Vec::with_capacity(n);
        for a in 0..n {
            match (0..n).find(|&b| table[a][b] == identity) {
                Some(b) => inverse.push(b),
                None => return bad("missing inverse"),
            }
        }
        Ok(Self { names, table, identity, inverse })
    }

    /// ℤ/n with elements named `prefix^k`, `prefix` for k = 1 and `1` for the identity.
    pub fn cyclic(n: usize, generator: &str) -> Self {
        let names = (0..n)
            .map(|k| match k {
                0 => "1".to_string(),
                1 => generator.to_string(),
                _ => format!("{generator}^{k}"),
            })
            .collect();
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::new(names, table).expect("cyclic table is a group")
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn pow(&self, a: usize, k: i64) -> usize {
        let base = if k < 0 { self.inv(a) } else { a };
        (0..k.unsigned_abs()).fold(self.identity, |acc, _| self.mul(acc, base))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn lookup(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> {
        0..self.names.len()
    }

    pub fn commutes(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_group() {
        let g = FiniteGroupTable::cyclic(4, "y");
        assert_eq!(g.lookup("y^3"), Some(3));
        assert_eq!(g.inv(1), 3);
        assert_eq!(g.pow(1, -2), 2);
        assert_eq!(g.element_order(2), 2);
        assert_eq!(g.element_order(1), 4);
    }

    #[test]
    fn rejects_non_groups() {
        let names = vec!["e".to_string(), "x".to_string()];
        assert!(FiniteGroupTable::new(names.clone(), vec![vec![0, 1], vec![1, 1]]).is_err());
        assert!(FiniteGroupTable::new(names, vec![vec![0, 1]]).is_err());
    }
}
