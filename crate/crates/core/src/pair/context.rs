use std::collections::HashSet;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::element::Element;
use super::family::{lift, Family};
use super::word::{Letter, RawWord};
use crate::error::{PairError, Result};
use crate::groups::FiniteGroupTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    pub ball_max: usize,
    pub refute_threshold: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Self { ball_max: 2_000_000, refute_threshold: 8 }
    }
}

/// A group family, its distinguished abelian subgroup Γ₀, and the finite
/// generating sets used to enumerate balls.
#[derive(Debug, Clone)]
pub struct PairContext {
    pub name: String,
    family: Family,
    gamma0_gens: Vec<Element>,
    gamma_gens: Vec<Element>,
    aliases: Vec<(String, Element)>,
    pub caps: Caps,
}

impl PairContext {
    pub fn new(
        name: impl Into<String>,
        family: Family,
        gamma0_gens: Option<Vec<Element>>,
        gamma_gens: Option<Vec<Element>>,
        aliases: Vec<(String, Element)>,
        caps: Caps,
    ) -> Result<Self> {
        let missing = |which: &str| {
            PairError::Config(format!("the {} family has no default {which} generators", family.kind()))
        };
        let gamma0_gens = match gamma0_gens {
            Some(g) => g,
            None => family.default_gamma0_generators().ok_or_else(|| missing("gamma0"))?,
        };
        let gamma_gens = match gamma_gens {
            Some(g) => g,
            None => family.default_gamma_generators().ok_or_else(|| missing("gamma"))?,
        };
        if gamma0_gens.is_empty() || gamma_gens.is_empty() {
            return Err(PairError::Config("generator lists must be nonempty".into()));
        }
        let id = family.identity();
        for g in gamma0_gens.iter().chain(&gamma_gens).chain(aliases.iter().map(|(_, e)| e)) {
            family.check(g).map_err(|_| PairError::Config("generator from a different family".into()))?;
        }
        if gamma0_gens.iter().chain(&gamma_gens).any(|g| *g == id) {
            return Err(PairError::Config("generator lists may not contain the identity".into()));
        }
        if let Some(g) = gamma0_gens.iter().find(|g| !family.is_in_gamma0(g)) {
            return Err(PairError::Config(format!("gamma0 generator {} is not in Γ₀", family.render(g))));
        }
        for (alias, _) in &aliases {
            if family.token(alias, 1).is_some() {
                return Err(PairError::Config(format!("alias `{alias}` shadows a generator")));
            }
        }
        Ok(Self { name: name.into(), family, gamma0_gens, gamma_gens, aliases, caps })
    }

    /// A context without enumeration generators, used while resolving named
    /// elements during configuration.
    pub(crate) fn resolver(family: Family, aliases: Vec<(String, Element)>) -> Self {
        Self {
            name: String::new(),
            family,
            gamma0_gens: Vec::new(),
            gamma_gens: Vec::new(),
            aliases,
            caps: Caps::default(),
        }
    }

    pub(crate) fn into_aliases(self) -> Vec<(String, Element)> {
        self.aliases
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn gamma0_generators(&self) -> &[Element] {
        &self.gamma0_gens
    }

    pub fn gamma_generators(&self) -> &[Element] {
        &self.gamma_gens
    }

    pub fn aliases(&self) -> &[(String, Element)] {
        &self.aliases
    }

    pub fn identity(&self) -> Element {
        self.family.identity()
    }

    pub fn mul(&self, x: &Element, y: &Element) -> Result<Element> {
        self.family.mul(x, y)
    }

    /// g·γ·h.
    pub fn mul3(&self, g: &Element, gamma: &Element, h: &Element) -> Result<Element> {
        self.mul(&self.mul(g, gamma)?, h)
    }

    pub fn inv(&self, x: &Element) -> Result<Element> {
        self.family.inv(x)
    }

    pub fn pow(&self, x: &Element, k: i64) -> Result<Element> {
        self.family.pow(x, k)
    }

    pub fn is_in_gamma0(&self, x: &Element) -> bool {
        self.family.is_in_gamma0(x)
    }

    pub fn render(&self, x: &Element) -> String {
        self.family.render(x)
    }

    /// Canonical element of a raw word; idempotent on rendered canonical forms.
    pub fn canonicalize(&self, raw: &RawWord) -> Result<Element> {
        let mut acc = self.identity();
        for tok in &raw.0 {
            let x = match &tok.letter {
                Letter::Named(name) => match self.family.token(name, tok.exp) {
                    Some(x) => x,
                    None => {
                        let (_, alias) = self
                            .aliases
                            .iter()
                            .find(|(a, _)| a == name)
                            .ok_or_else(|| PairError::UnknownGenerator(name.clone()))?;
                        self.pow(alias, tok.exp)?
                    }
                },
                Letter::Matrix(rows) => {
                    let m = match &self.family {
                        Family::FreeProduct { base, .. } => lift(base, base.matrix(rows)?),
                        fam => fam.matrix(rows)?,
                    };
                    self.pow(&m, tok.exp)?
                }
            };
            acc = self.mul(&acc, &x)?;
        }
        Ok(acc)
    }

    pub fn parse(&self, word: &str) -> Result<Element> {
        self.canonicalize(&word.parse()?)
    }

    /// Γ ∗ G with the same Γ₀, generators lifted and G's elements appended.
    pub fn free_product_with(&self, factor: FiniteGroupTable) -> Result<Self> {
        let base = self.family.clone();
        let lifted = |xs: &[Element]| xs.iter().map(|x| lift(&base, x.clone())).collect::<Vec<_>>();
        let gamma0 = lifted(&self.gamma0_gens);
        let mut gamma = lifted(&self.gamma_gens);
        gamma.extend(
            factor
                .elements()
                .filter(|&f| f != factor.identity())
                .map(|f| Element::FreeProduct(vec![super::element::FpSyllable::Factor(f)])),
        );
        let aliases = self.aliases.iter().map(|(n, e)| (n.clone(), lift(&base, e.clone()))).collect();
        let family = Family::FreeProduct { base: Box::new(base.clone()), factor };
        Self::new(format!("{}*G", self.name), family, Some(gamma0), Some(gamma), aliases, self.caps)
    }

    /// Embeds an element of the base context into this free-product context.
    pub fn lift(&self, x: &Element) -> Result<Element> {
        match &self.family {
            Family::FreeProduct { base, .. } => {
                base.check(x)?;
                Ok(lift(base, x.clone()))
            }
            _ => Err(PairError::FamilyMismatch),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BallSide {
    WholeGroup,
    Gamma0Only,
    ComplementOfGamma0,
}

/// Members in breadth-first order; `level_ends[r]` counts members of word length ≤ r.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ball {
    pub radius: usize,
    pub side: BallSide,
    pub members: Vec<Element>,
    pub level_ends: Vec<usize>,
}

impl Ball {
    /// Word length of the member at `index`.
    pub fn length_of(&self, index: usize) -> usize {
        self.level_ends.iter().position(|&end| index < end).unwrap_or(self.radius)
    }
}

/// Steps are each generator followed by its inverse, duplicates dropped.
fn steps(ctx: &PairContext, gens: &[Element]) -> Result<Vec<Element>> {
    let mut out: Vec<Element> = Vec::new();
    for g in gens {
        for s in [g.clone(), ctx.inv(g)?] {
            if !out.contains(&s) {
                out.push(s);
            }
        }
    }
    Ok(out)
}

pub fn enumerate_ball(ctx: &PairContext, side: BallSide, radius: usize) -> Result<Ball> {
    let gens = match side {
        BallSide::Gamma0Only => ctx.gamma0_generators(),
        _ => ctx.gamma_generators(),
    };
    let steps = steps(ctx, gens)?;
    let cap = ctx.caps.ball_max;
    let mut seen: HashSet<Element> = HashSet::new();
    let mut all = vec![ctx.identity()];
    seen.insert(ctx.identity());
    let mut ends = vec![1];
    let mut frontier = 0..1;
    for _ in 0..radius {
        let start = all.len();
        for i in frontier.clone() {
            for s in &steps {
                let next = ctx.mul(&all[i], s)?;
                if seen.insert(next.clone()) {
                    all.push(next);
                    if all.len() > cap {
                        return Err(PairError::BallTooLarge { radius, cap });
                    }
                }
            }
        }
        frontier = start..all.len();
        ends.push(all.len());
    }
    let keep = |x: &Element| match side {
        BallSide::WholeGroup => true,
        BallSide::Gamma0Only => ctx.is_in_gamma0(x),
        BallSide::ComplementOfGamma0 => !ctx.is_in_gamma0(x),
    };
    let mut members = Vec::new();
    let mut level_ends = Vec::with_capacity(ends.len());
    let mut prev = 0;
    for end in ends {
        members.extend(all[prev..end].iter().filter(|x| keep(x)).cloned());
        level_ends.push(members.len());
        prev = end;
    }
    Ok(Ball { radius, side, members, level_ends })
}

/// Box {(v, k) : ‖v‖∞ ≤ v_bound, |k| ≤ k_bound} in ℤ^d ⋊ ℤ, ordered by k then v.
pub fn enumerate_box(ctx: &PairContext, v_bound: i64, k_bound: i64) -> Result<Vec<Element>> {
    let Family::Semidirect(s) = ctx.family() else {
        return Err(PairError::FamilyMismatch);
    };
    let d = s.dim() as u32;
    let side = (2 * v_bound + 1) as u128;
    let total = side.pow(d) * (2 * k_bound as u128 + 1);
    if total > ctx.caps.ball_max as u128 {
        return Err(PairError::BallTooLarge { radius: v_bound as usize, cap: ctx.caps.ball_max });
    }
    let mut out = Vec::with_capacity(total as usize);
    for k in -k_bound..=k_bound {
        for idx in 0..side.pow(d) {
            let mut rest = idx;
            let mut v = vec![BigInt::from(0); d as usize];
            for slot in v.iter_mut().rev() {
                *slot = BigInt::from((rest % side) as i64 - v_bound);
                rest /= side;
            }
            out.push(Element::Semidirect { v, k });
        }
    }
    Ok(out)
}
