//! Britton-reduced, transversal-normalized forms in HNN(Λ, H, K, φ) with Λ = ℤ^r.
//!
//! Convention: `t⁻¹ h t = φ(h)` for `h ∈ H`, so `h t = t φ(h)` and
//! `k t⁻¹ = t⁻¹ φ⁻¹(k)` for `k ∈ K`. In a normal form every base letter in
//! front of `t` is the canonical representative of its coset modulo H, and
//! every base letter in front of `t⁻¹` is reduced modulo K.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{PairError, Result};
use crate::lattice::{IntVec, Lattice, LatticeMap};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HnnLetter {
    pub eps: i8,
    pub base: IntVec,
}

/// `g₀ t^{ε₁} g₁ … t^{εₙ} gₙ`: `head` is g₀, each letter carries εᵢ and gᵢ.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HnnForm {
    pub head: IntVec,
    pub letters: Vec<HnnLetter>,
}

impl HnnForm {
    /// ℓ(g), the number of stable letters.
    pub fn length(&self) -> usize {
        self.letters.len()
    }

    pub fn signs(&self) -> Vec<i8> {
        self.letters.iter().map(|l| l.eps).collect()
    }

    fn last_base_mut(&mut self) -> &mut IntVec {
        match self.letters.last_mut() {
            Some(l) => &mut l.base,
            None => &mut self.head,
        }
    }
}

/// A raw letter: a base element or a single stable letter `t^{±1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RawLetter {
    Base(IntVec),
    Stable(i8),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HnnStructure {
    rank: usize,
    base_names: Vec<String>,
    stable_name: String,
    h: Lattice,
    k: Lattice,
    phi: LatticeMap,
    phi_inv: LatticeMap,
}

fn add_into(target: &mut IntVec, x: &[BigInt]) {
    for (t, v) in target.iter_mut().zip(x) {
        *t += v;
    }
}

fn sub(x: &[BigInt], y: &[BigInt]) -> IntVec {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

fn is_zero(v: &[BigInt]) -> bool {
    v.iter().all(Zero::is_zero)
}

impl HnnStructure {
    /// `phi` sends `h_gens[i] ↦ phi_images[i]`; `k_gens`, when given, must span the image.
    pub fn new(
        base_names: Vec<String>,
        stable_name: String,
        h_gens: &[IntVec],
        phi_images: &[IntVec],
        k_gens: Option<&[IntVec]>,
    ) -> Result<Self> {
        let rank = base_names.len();
        if rank == 0 {
            return Err(PairError::Config("HNN base needs at least one generator".into()));
        }
        if h_gens.iter().chain(phi_images).any(|v| v.len() != rank) {
            return Err(PairError::Config("subgroup generator has the wrong dimension".into()));
        }
        let phi = LatticeMap::from_generator_images(rank, h_gens, phi_images)?;
        let phi_inv = phi.inverse().map_err(|_| PairError::Config("phi is not injective".into()))?;
        let h = phi.domain().clone();
        let k = phi.image();
        if let Some(k_gens) = k_gens {
            if Lattice::from_generators(rank, k_gens) != k {
                return Err(PairError::Config("phi does not map H onto the declared K".into()));
            }
        }
        Ok(Self { rank, base_names, stable_name, h, k, phi, phi_inv })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn h(&self) -> &Lattice {
        &self.h
    }

    pub fn k(&self) -> &Lattice {
        &self.k
    }

    pub fn phi(&self) -> &LatticeMap {
        &self.phi
    }

    pub fn base_names(&self) -> &[String] {
        &self.base_names
    }

    pub fn stable_name(&self) -> &str {
        &self.stable_name
    }

    /// The same group presented with stable letter t⁻¹: H and K swap, φ inverts.
    pub fn inverted(&self) -> Self {
        Self {
            rank: self.rank,
            base_names: self.base_names.clone(),
            stable_name: format!("{}^-1", self.stable_name),
            h: self.k.clone(),
            k: self.h.clone(),
            phi: self.phi_inv.clone(),
            phi_inv: self.phi.clone(),
        }
    }

    pub fn zero(&self) -> IntVec {
        vec![BigInt::zero(); self.rank]
    }

    pub fn identity(&self) -> HnnForm {
        HnnForm { head: self.zero(), letters: Vec::new() }
    }

    pub fn base_generator(&self, index: usize, k: i64) -> IntVec {
        let mut v = self.zero();
        v[index] = BigInt::from(k);
        v
    }

    pub fn push_base(&self, form: &mut HnnForm, b: &[BigInt]) {
        add_into(form.last_base_mut(), b);
    }

    /// Right-multiplies by `t^eps`, pinching when possible.
    pub fn push_stable(&self, form: &mut HnnForm, eps: i8) {
        let prev = form.letters.last().map(|l| l.eps);
        let last = match form.letters.last() {
            Some(l) => l.base.clone(),
            None => form.head.clone(),
        };
        if prev == Some(-eps) {
            let pinched = if eps == 1 { self.phi.apply(&last) } else { self.phi_inv.apply(&last) };
            if let Some(image) = pinched {
                form.letters.pop();
                add_into(form.last_base_mut(), &image);
                return;
            }
        }
        let (lattice, map) = if eps == 1 { (&self.h, &self.phi) } else { (&self.k, &self.phi_inv) };
        let (rep, _) = lattice.reduce(&last);
        let moved = map.apply(&sub(&last, &rep)).expect("difference lies in the subgroup");
        *form.last_base_mut() = rep;
        form.letters.push(HnnLetter { eps, base: moved });
    }

    pub fn mul(&self, x: &HnnForm, y: &HnnForm) -> HnnForm {
        let mut out = x.clone();
        self.push_base(&mut out, &y.head);
        for l in &y.letters {
            self.push_stable(&mut out, l.eps);
            self.push_base(&mut out, &l.base);
        }
        out
    }

    pub fn inv(&self, x: &HnnForm) -> HnnForm {
        let mut out = self.identity();
        let neg = |v: &IntVec| v.iter().map(|a| -a).collect::<IntVec>();
        for l in x.letters.iter().rev() {
            self.push_base(&mut out, &neg(&l.base));
            self.push_stable(&mut out, -l.eps);
        }
        self.push_base(&mut out, &neg(&x.head));
        out
    }

    /// Britton reduction by leftmost pinching to a fixpoint, followed by a
    /// left-to-right transversal pass.
    pub fn britton_reduce(&self, raw: &[RawLetter]) -> HnnForm {
        // phase 1: alternating base/stable list with merged base letters
        let mut bases: Vec<IntVec> = vec![self.zero()];
        let mut signs: Vec<i8> = Vec::new();
        for letter in raw {
            match letter {
                RawLetter::Base(b) => add_into(bases.last_mut().expect("nonempty"), b),
                RawLetter::Stable(e) => {
                    signs.push(*e);
                    bases.push(self.zero());
                }
            }
        }
        loop {
            let pinch = (1..signs.len()).find_map(|i| {
                let g = &bases[i];
                match (signs[i - 1], signs[i]) {
                    (-1, 1) => self.phi.apply(g).map(|img| (i, img)),
                    (1, -1) => self.phi_inv.apply(g).map(|img| (i, img)),
                    _ => None,
                }
            });
            let Some((i, image)) = pinch else { break };
            // t^{ε_{i-1}} g_i t^{ε_i} collapses into g_{i-1} + image + g_{i+1}
            let right = bases.remove(i + 1);
            bases.remove(i);
            signs.drain(i - 1..=i);
            let target = &mut bases[i - 1];
            add_into(target, &image);
            add_into(target, &right);
        }
        // phase 2: transversal normalization
        for i in 0..signs.len() {
            let (lattice, map) = if signs[i] == 1 { (&self.h, &self.phi) } else { (&self.k, &self.phi_inv) };
            let (rep, _) = lattice.reduce(&bases[i]);
            let moved = map.apply(&sub(&bases[i], &rep)).expect("difference lies in the subgroup");
            bases[i] = rep;
            add_into(&mut bases[i + 1], &moved);
        }
        let mut it = bases.into_iter();
        let head = it.next().expect("nonempty");
        HnnForm {
            head,
            letters: signs.into_iter().zip(it).map(|(eps, base)| HnnLetter { eps, base }).collect(),
        }
    }

    /// `Some(k)` when the form is `t^k`.
    pub fn stable_power(&self, form: &HnnForm) -> Option<i64> {
        if !is_zero(&form.head) || form.letters.iter().any(|l| !is_zero(&l.base)) {
            return None;
        }
        let first = form.letters.first().map(|l| l.eps).unwrap_or(1);
        form.letters
            .iter()
            .all(|l| l.eps == first)
            .then(|| first as i64 * form.letters.len() as i64)
    }

    pub fn render_base(&self, v: &[BigInt]) -> Vec<String> {
        v.iter()
            .zip(&self.base_names)
            .filter(|(a, _)| !a.is_zero())
            .map(|(a, name)| if a.is_one() { name.clone() } else { format!("{name}^{a}") })
            .collect()
    }

    pub fn render(&self, form: &HnnForm) -> String {
        let mut parts = self.render_base(&form.head);
        // runs of stable letters with trivial base letters in between collapse to a power
        let mut run = 0i64;
        for l in &form.letters {
            run += l.eps as i64;
            if is_zero(&l.base) {
                continue;
            }
            parts.push(self.stable_power_token(run));
            run = 0;
            parts.extend(self.render_base(&l.base));
        }
        if run != 0 {
            parts.push(self.stable_power_token(run));
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" ")
        }
    }

    fn stable_power_token(&self, k: i64) -> String {
        if k == 1 {
            self.stable_name.clone()
        } else {
            format!("{}^{k}", self.stable_name)
        }
    }

    /// `φʲ(h)`, or None when h ∉ Dom(φʲ).
    pub fn phi_power(&self, h: &[BigInt], j: usize) -> Option<IntVec> {
        let mut x = h.to_vec();
        for _ in 0..j {
            x = self.phi.apply(&x)?;
        }
        Some(x)
    }

    pub fn dom_chain(&self, jmax: usize) -> Result<DomChain> {
        let mut levels = Vec::with_capacity(jmax);
        if jmax == 0 {
            return Ok(DomChain { levels });
        }
        levels.push(self.h.clone());
        for _ in 1..jmax {
            let prev = levels.last().expect("nonempty");
            levels.push(self.phi.preimage(&prev.intersect(&self.k))?);
        }
        Ok(DomChain { levels })
    }
}

/// Dom(φʲ) for j = 1..=jmax; `levels[j-1]` is Dom(φʲ).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomChain {
    pub levels: Vec<Lattice>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Escape {
    At(usize),
    NoEscape(usize),
}

impl DomChain {
    pub fn jmax(&self) -> usize {
        self.levels.len()
    }

    /// Least j with λ ∉ Dom(φʲ).
    pub fn escape_index(&self, lambda: &[BigInt]) -> Result<Escape> {
        if is_zero(lambda) {
            return Err(PairError::IdentityInput);
        }
        Ok(self
            .levels
            .iter()
            .position(|l| !l.contains(lambda))
            .map(|j| Escape::At(j + 1))
            .unwrap_or(Escape::NoEscape(self.levels.len())))
    }

    /// For a rank-one base, the moduli dⱼ with Dom(φʲ) = dⱼℤ.
    pub fn moduli(&self) -> Option<Vec<BigInt>> {
        self.levels.iter().map(Lattice::cyclic_modulus).collect()
    }

    pub fn is_descending(&self) -> bool {
        self.levels.windows(2).all(|w| w[1].is_subset_of(&w[0]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: i64) -> IntVec {
        vec![BigInt::from(x)]
    }

    /// BS(m,n) = ⟨a, b | a b^m a⁻¹ b⁻ⁿ⟩ = HNN(ℤ, nℤ, mℤ, nk ↦ mk), stable letter a.
    pub(crate) fn bs(m: i64, n: i64) -> HnnStructure {
        HnnStructure::new(vec!["b".into()], "a".into(), &[v(n)], &[v(m)], None).unwrap()
    }

    fn word(h: &HnnStructure, letters: &[(char, i64)]) -> Vec<RawLetter> {
        let mut out = Vec::new();
        for &(c, k) in letters {
            match c {
                'a' => out.extend((0..k.abs()).map(|_| RawLetter::Stable(k.signum() as i8))),
                _ => out.push(RawLetter::Base(h.base_generator(0, k))),
            }
        }
        out
    }

    fn fold(h: &HnnStructure, raw: &[RawLetter]) -> HnnForm {
        let mut f = h.identity();
        for l in raw {
            match l {
                RawLetter::Base(b) => h.push_base(&mut f, b),
                RawLetter::Stable(e) => h.push_stable(&mut f, *e),
            }
        }
        f
    }

    #[test]
    fn bs23_pinches() {
        let h = bs(2, 3);
        let raw = word(&h, &[('a', -1), ('b', 3), ('a', 1)]);
        assert_eq!(h.render(&h.britton_reduce(&raw)), "b^2");
        assert_eq!(fold(&h, &raw), h.britton_reduce(&raw));
        let raw = word(&h, &[('b', 3), ('a', 1), ('b', -2)]);
        assert_eq!(h.render(&h.britton_reduce(&raw)), "a");
        assert_eq!(h.render(&fold(&h, &raw)), "a");
    }

    #[test]
    fn reduced_words_only_get_normalized() {
        let h = bs(2, 3);
        let raw = word(&h, &[('b', 1), ('a', 1), ('b', 1)]);
        let f = h.britton_reduce(&raw);
        assert_eq!(h.render(&f), "b a b");
        // b⁴ a = b · b³ a = b a b² : head reduced mod 3
        let f = h.britton_reduce(&word(&h, &[('b', 4), ('a', 1)]));
        assert_eq!(h.render(&f), "b a b^2");
    }

    #[test]
    fn dom_chains() {
        let chain = bs(2, 3).dom_chain(3).unwrap();
        assert_eq!(chain.moduli().unwrap(), vec![v(3)[0].clone(), v(9)[0].clone(), v(27)[0].clone()]);
        assert_eq!(chain.escape_index(&v(6)).unwrap(), Escape::At(2));
        assert_eq!(chain.escape_index(&v(1)).unwrap(), Escape::At(1));
        assert_eq!(chain.escape_index(&v(0)), Err(PairError::IdentityInput));

        let chain = bs(2, 2).dom_chain(5).unwrap();
        assert!(chain.moduli().unwrap().iter().all(|d| *d == BigInt::from(2)));
        assert_eq!(chain.escape_index(&v(2)).unwrap(), Escape::NoEscape(5));

        let auto = HnnStructure::new(vec!["b".into()], "t".into(), &[v(1)], &[v(-1)], None).unwrap();
        assert!(auto.dom_chain(4).unwrap().moduli().unwrap().iter().all(|d| d.is_one()));
    }

    #[test]
    fn rejects_bad_maps() {
        assert!(HnnStructure::new(vec!["b".into()], "a".into(), &[v(3)], &[v(2)], Some(&[v(4)])).is_err());
        assert!(HnnStructure::new(vec!["b".into()], "a".into(), &[v(3)], &[v(0)], None).is_err());
    }

    #[test]
    fn inverse_and_stable_power() {
        let h = bs(2, 3);
        let x = fold(&h, &word(&h, &[('b', 5), ('a', 2), ('b', -1), ('a', -1), ('b', 7)]));
        assert_eq!(h.mul(&x, &h.inv(&x)), h.identity());
        let t3 = fold(&h, &word(&h, &[('a', 3)]));
        assert_eq!(h.stable_power(&t3), Some(3));
        assert_eq!(h.stable_power(&x), None);
        assert_eq!(h.stable_power(&h.identity()), Some(0));
    }
}
