//! Normal forms in Γ₀ ∗_Z Γ₁ over fixed left transversals of the finite subgroup Z.
//!
//! A form is an alternating list of nontrivial coset representatives followed
//! by a tail in Z. Right multiplication pushes the current tail into the
//! incoming syllable and refactors, so Z-elements always travel to the right.

use std::collections::HashMap;

use crate::error::{PairError, Result};
use crate::groups::{AbelianElem, FGAbelianSpec, FiniteGroupTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn other(self) -> Self {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Factor {
    Abelian(FGAbelianSpec),
    Finite(FiniteGroupTable),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FactorElem {
    Abelian(AbelianElem),
    Finite(usize),
}

impl Factor {
    pub fn identity(&self) -> FactorElem {
        match self {
            Factor::Abelian(a) => FactorElem::Abelian(a.identity()),
            Factor::Finite(t) => FactorElem::Finite(t.identity()),
        }
    }

    pub fn mul(&self, x: &FactorElem, y: &FactorElem) -> FactorElem {
        match (self, x, y) {
            (Factor::Abelian(a), FactorElem::Abelian(x), FactorElem::Abelian(y)) => FactorElem::Abelian(a.add(x, y)),
            (Factor::Finite(t), FactorElem::Finite(x), FactorElem::Finite(y)) => FactorElem::Finite(t.mul(*x, *y)),
            _ => panic!("factor element kind does not match its factor"),
        }
    }

    pub fn inv(&self, x: &FactorElem) -> FactorElem {
        match (self, x) {
            (Factor::Abelian(a), FactorElem::Abelian(x)) => FactorElem::Abelian(a.neg(x)),
            (Factor::Finite(t), FactorElem::Finite(x)) => FactorElem::Finite(t.inv(*x)),
            _ => panic!("factor element kind does not match its factor"),
        }
    }

    pub fn is_identity(&self, x: &FactorElem) -> bool {
        *x == self.identity()
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Factor::Abelian(a) if a.is_infinite())
    }

    pub fn is_abelian(&self) -> bool {
        match self {
            Factor::Abelian(_) => true,
            Factor::Finite(t) => t.elements().all(|a| t.elements().all(|b| t.commutes(a, b))),
        }
    }

    pub fn render(&self, x: &FactorElem) -> String {
        match (self, x) {
            (Factor::Abelian(a), FactorElem::Abelian(x)) => a.render(x),
            (Factor::Finite(t), FactorElem::Finite(x)) if *x == t.identity() => String::new(),
            (Factor::Finite(t), FactorElem::Finite(x)) => t.name(*x).to_string(),
            _ => panic!("factor element kind does not match its factor"),
        }
    }

    /// Resolves a token `name^k` to an element of this factor.
    pub fn token(&self, name: &str, k: i64) -> Option<FactorElem> {
        match self {
            Factor::Abelian(a) => a.generator_index(name).map(|i| FactorElem::Abelian(a.generator_power(i, k))),
            Factor::Finite(t) => t.lookup(name).map(|x| FactorElem::Finite(t.pow(x, k))),
        }
    }

    /// Nontrivial generators used for default ball enumeration.
    pub fn default_generators(&self) -> Vec<FactorElem> {
        match self {
            Factor::Abelian(a) => (0..a.names.len()).map(|i| FactorElem::Abelian(a.generator_power(i, 1))).collect(),
            Factor::Finite(t) => t.elements().filter(|&x| x != t.identity()).map(FactorElem::Finite).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Syllable {
    pub side: Side,
    pub rep: FactorElem,
}

/// `r₁s₁…r_l s_l z` stored as alternating nontrivial representatives plus the
/// index of the tail in Z (index 0 is the identity).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AmalgamForm {
    pub syllables: Vec<Syllable>,
    pub tail: usize,
}

impl AmalgamForm {
    pub fn identity() -> Self {
        Self { syllables: Vec::new(), tail: 0 }
    }

    /// Number of syllables (the free-product length).
    pub fn len(&self) -> usize {
        self.syllables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }
}

/// Factors, the identification of Z inside both, and the transversal tables.
#[derive(Debug, Clone)]
pub struct AmalgamStructure {
    left: Factor,
    right: Factor,
    z: Vec<(FactorElem, FactorElem)>,
    z_index: [HashMap<FactorElem, usize>; 2],
}

fn slot(side: Side) -> usize {
    match side {
        Side::Left => 0,
        Side::Right => 1,
    }
}

impl AmalgamStructure {
    /// `z` lists the identified pairs; it must contain the identity pair and be
    /// closed under multiplication on both sides with a consistent pairing.
    pub fn new(left: Factor, right: Factor, z: Vec<(FactorElem, FactorElem)>) -> Result<Self> {
        let bad = |msg: String| Err(PairError::Config(format!("amalgamated subgroup: {msg}")));
        let mut pairs = vec![(left.identity(), right.identity())];
        for p in z {
            if !pairs.contains(&p) {
                pairs.push(p);
            }
        }
        let mut z_index = [HashMap::new(), HashMap::new()];
        for (i, (a, b)) in pairs.iter().enumerate() {
            if z_index[0].insert(a.clone(), i).is_some() || z_index[1].insert(b.clone(), i).is_some() {
                return bad("identification is not a bijection".into());
            }
        }
        for (a1, b1) in &pairs {
            for (a2, b2) in &pairs {
                let a = left.mul(a1, a2);
                let b = right.mul(b1, b2);
                match (z_index[0].get(&a), z_index[1].get(&b)) {
                    (Some(i), Some(j)) if i == j => {}
                    _ => return bad("not a common subgroup (products do not match)".into()),
                }
            }
        }
        Ok(Self { left, right, z: pairs, z_index })
    }

    pub fn factor(&self, side: Side) -> &Factor {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    pub fn z_order(&self) -> usize {
        self.z.len()
    }

    pub fn z_elem(&self, side: Side, index: usize) -> &FactorElem {
        match side {
            Side::Left => &self.z[index].0,
            Side::Right => &self.z[index].1,
        }
    }

    pub fn z_lookup(&self, side: Side, x: &FactorElem) -> Option<usize> {
        self.z_index[slot(side)].get(x).copied()
    }

    /// `x = rep·z` with `rep` the least element of the left coset `xZ`, except
    /// that Z itself is represented by the identity.
    pub fn factorize(&self, side: Side, x: &FactorElem) -> (FactorElem, usize) {
        if let Some(index) = self.z_lookup(side, x) {
            return (self.factor(side).identity(), index);
        }
        let f = self.factor(side);
        let rep = (0..self.z.len())
            .map(|i| f.mul(x, self.z_elem(side, i)))
            .min()
            .expect("Z contains the identity");
        let z = f.mul(&f.inv(&rep), x);
        let index = self.z_lookup(side, &z).expect("rep⁻¹x lies in Z");
        (rep, index)
    }

    /// Right-multiplies a form by one factor element.
    pub fn push(&self, form: &mut AmalgamForm, side: Side, x: &FactorElem) {
        let f = self.factor(side);
        let zx = f.mul(self.z_elem(side, form.tail), x);
        let y = match form.syllables.last() {
            Some(last) if last.side == side => {
                let y = f.mul(&last.rep, &zx);
                form.syllables.pop();
                y
            }
            _ => zx,
        };
        let (rep, z) = self.factorize(side, &y);
        if !f.is_identity(&rep) {
            form.syllables.push(Syllable { side, rep });
        }
        form.tail = z;
    }

    /// Canonical form of an arbitrary product of factor elements.
    pub fn normalize(&self, raw: &[(Side, FactorElem)]) -> AmalgamForm {
        let mut form = AmalgamForm::identity();
        for (side, x) in raw {
            self.push(&mut form, *side, x);
        }
        form
    }

    fn push_form(&self, form: &mut AmalgamForm, y: &AmalgamForm) {
        for s in &y.syllables {
            self.push(form, s.side, &s.rep);
        }
        if y.tail != 0 {
            self.push(form, Side::Left, self.z_elem(Side::Left, y.tail));
        }
    }

    pub fn mul(&self, x: &AmalgamForm, y: &AmalgamForm) -> AmalgamForm {
        let mut out = x.clone();
        self.push_form(&mut out, y);
        out
    }

    pub fn inv(&self, x: &AmalgamForm) -> AmalgamForm {
        let mut out = AmalgamForm::identity();
        let tail_inv = self.left.inv(self.z_elem(Side::Left, x.tail));
        self.push(&mut out, Side::Left, &tail_inv);
        for s in x.syllables.iter().rev() {
            let f = self.factor(s.side);
            self.push(&mut out, s.side, &f.inv(&s.rep));
        }
        out
    }

    /// The single-syllable form of a factor element.
    pub fn embed(&self, side: Side, x: &FactorElem) -> AmalgamForm {
        self.normalize(&[(side, x.clone())])
    }

    /// Pair view `(rᵢ, sᵢ)`: r₁ is the identity when the form starts on the
    /// right, s_l is the identity when it ends on the left.
    pub fn pairs(&self, form: &AmalgamForm) -> Vec<(FactorElem, FactorElem)> {
        let mut out = Vec::new();
        let mut pending: Option<FactorElem> = None;
        for s in &form.syllables {
            match s.side {
                Side::Left => pending = Some(s.rep.clone()),
                Side::Right => {
                    let r = pending.take().unwrap_or_else(|| self.left.identity());
                    out.push((r, s.rep.clone()));
                }
            }
        }
        if let Some(r) = pending {
            out.push((r, self.right.identity()));
        }
        out
    }

    pub fn render(&self, form: &AmalgamForm) -> String {
        let mut parts: Vec<String> = form
            .syllables
            .iter()
            .map(|s| self.factor(s.side).render(&s.rep))
            .collect();
        if form.tail != 0 {
            parts.push(self.left.render(self.z_elem(Side::Left, form.tail)));
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join(" ")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Γ₀ = ℤ × ℤ/2 (generators c, z), Γ₁ = ℤ/4 (generator y), Z = ℤ/2 ↪ {0, y²}.
    fn z4_amalgam() -> AmalgamStructure {
        let left = FGAbelianSpec::new(1, vec![2], vec!["c".into(), "z".into()]).unwrap();
        let zl = FactorElem::Abelian(left.from_coords(&[0, 1]).unwrap());
        AmalgamStructure::new(
            Factor::Abelian(left),
            Factor::Finite(FiniteGroupTable::cyclic(4, "y")),
            vec![(zl, FactorElem::Finite(2))],
        )
        .unwrap()
    }

    fn left(s: &AmalgamStructure, coords: &[i64]) -> FactorElem {
        match s.factor(Side::Left) {
            Factor::Abelian(a) => FactorElem::Abelian(a.from_coords(coords).unwrap()),
            _ => unreachable!(),
        }
    }

    #[test]
    fn left_factor_element_folds_into_tail() {
        let s = z4_amalgam();
        let form = s.normalize(&[(Side::Left, left(&s, &[1, 1]))]);
        // coset {(1,0),(1,1)}: least representative (1,0), tail z̄
        assert_eq!(form.syllables.len(), 1);
        assert_eq!(form.syllables[0].rep, left(&s, &[1, 0]));
        assert_eq!(form.tail, 1);
        assert_eq!(s.render(&form), "c z");
    }

    #[test]
    fn z_passes_through_right_syllables() {
        let s = z4_amalgam();
        // y · z̄ · y = y · y² · y = y⁴ = 1
        let form = s.normalize(&[
            (Side::Right, FactorElem::Finite(1)),
            (Side::Left, left(&s, &[0, 1])),
            (Side::Right, FactorElem::Finite(1)),
        ]);
        assert_eq!(form, AmalgamForm::identity());
        // y · y = y², which lies in Z
        let form = s.normalize(&[(Side::Right, FactorElem::Finite(1)), (Side::Right, FactorElem::Finite(1))]);
        assert!(form.syllables.is_empty());
        assert_eq!(form.tail, 1);
    }

    #[test]
    fn free_product_involution_cancels() {
        let s = AmalgamStructure::new(
            Factor::Abelian(FGAbelianSpec::new(1, vec![], vec!["a".into()]).unwrap()),
            Factor::Finite(FiniteGroupTable::cyclic(2, "s")),
            vec![],
        )
        .unwrap();
        let inv = FactorElem::Finite(1);
        assert_eq!(s.normalize(&[(Side::Right, inv.clone()), (Side::Right, inv)]), AmalgamForm::identity());
    }

    #[test]
    fn pair_view_and_inverse() {
        let s = z4_amalgam();
        let g = s.normalize(&[
            (Side::Right, FactorElem::Finite(1)),
            (Side::Left, left(&s, &[2, 0])),
        ]);
        let pairs = s.pairs(&g);
        assert_eq!(pairs.len(), 2);
        assert_eq!(pairs[0].0, left(&s, &[0, 0]));
        assert_eq!(pairs[1].1, FactorElem::Finite(0));
        assert_eq!(s.mul(&g, &s.inv(&g)), AmalgamForm::identity());
    }

    #[test]
    fn rejects_inconsistent_identification() {
        let left = FGAbelianSpec::new(1, vec![2], vec!["c".into(), "z".into()]).unwrap();
        let zl = FactorElem::Abelian(left.from_coords(&[0, 1]).unwrap());
        // y has order 4, so {1, y} is not a subgroup
        let r = AmalgamStructure::new(
            Factor::Abelian(left),
            Factor::Finite(FiniteGroupTable::cyclic(4, "y")),
            vec![(zl, FactorElem::Finite(1))],
        );
        assert!(r.is_err());
    }
}
