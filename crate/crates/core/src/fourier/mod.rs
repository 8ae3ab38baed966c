//! Finitely supported elements of the group algebra ℂΓ with exact complex
//! rational coefficients, the trace, the conditional expectation onto Γ₀ and
//! mixing defects.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use crate::arith::ComplexRational;
use crate::error::{PairError, Result};
use crate::pair::{enumerate_ball, BallSide, Element, PairContext};

/// x = Σ x(g) λ(g); zero coefficients are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct GroupOperator {
    terms: BTreeMap<Element, ComplexRational>,
}

impl GroupOperator {
    pub fn zero() -> Self {
        Self::default()
    }

    /// λ(g).
    pub fn delta(g: Element) -> Self {
        Self::from_terms([(g, ComplexRational::one())])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Element, ComplexRational)>) -> Self {
        let mut out = Self::zero();
        for (g, c) in terms {
            out.add_term(g, &c);
        }
        out
    }

    fn add_term(&mut self, g: Element, c: &ComplexRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(g) {
            Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Element, &ComplexRational)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Element> {
        self.terms.keys()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// x(g) = τ(x λ(g⁻¹)).
    pub fn coefficient(&self, g: &Element) -> ComplexRational {
        self.terms.get(g).cloned().unwrap_or_else(ComplexRational::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (g, c) in &other.terms {
            out.add_term(g.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-ComplexRational::one()))
    }

    pub fn scale(&self, c: &ComplexRational) -> Self {
        Self::from_terms(self.terms.iter().map(|(g, x)| (g.clone(), x * c)))
    }

    pub fn convolve(&self, ctx: &PairContext, other: &Self) -> Result<Self> {
        let mut out = Self::zero();
        for (g1, c1) in &self.terms {
            for (g2, c2) in &other.terms {
                out.add_term(ctx.mul(g1, g2)?, &(c1 * c2));
            }
        }
        Ok(out)
    }

    /// x*(g) = conj(x(g⁻¹)).
    pub fn adjoint(&self, ctx: &PairContext) -> Result<Self> {
        let terms = self.terms.iter().map(|(g, c)| Ok((ctx.inv(g)?, c.conj()))).collect::<Result<Vec<_>>>()?;
        Ok(Self::from_terms(terms))
    }

    /// τ(x) = x(1).
    pub fn trace(&self, ctx: &PairContext) -> ComplexRational {
        self.coefficient(&ctx.identity())
    }

    /// E_A(x): the restriction of the support to Γ₀.
    pub fn project_onto_gamma0(&self, ctx: &PairContext) -> Self {
        Self {
            terms: self.terms.iter().filter(|(g, _)| ctx.is_in_gamma0(g)).map(|(g, c)| (g.clone(), c.clone())).collect(),
        }
    }

    /// ‖x‖₂² = Σ |x(g)|².
    pub fn norm_sq(&self) -> BigRational {
        self.terms.values().map(ComplexRational::norm_sq).fold(BigRational::zero(), |a, b| a + b)
    }

    pub fn is_supported_in_gamma0(&self, ctx: &PairContext) -> bool {
        self.terms.keys().all(|g| ctx.is_in_gamma0(g))
    }

    /// `coef*word; word; …`, where a bare word has coefficient 1 and
    /// coefficients are `p/q`, `p/q+r/si` and the like.
    pub fn parse(ctx: &PairContext, text: &str) -> Result<Self> {
        let mut out = Self::zero();
        for part in text.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (coef, word) = match part.split_once('*') {
                Some((c, w)) => (c.trim().parse::<ComplexRational>()?, w.trim()),
                None => (ComplexRational::one(), part),
            };
            out.add_term(ctx.parse(word)?, &coef);
        }
        Ok(out)
    }

    pub fn render(&self, ctx: &PairContext) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms.iter().map(|(g, c)| format!("{c}*{}", ctx.render(g))).collect::<Vec<_>>().join("; ")
    }
}

/// ‖E_A(x v y) − E_A(x) v E_A(y)‖₂².
pub fn mixing_defect(ctx: &PairContext, x: &GroupOperator, v: &GroupOperator, y: &GroupOperator) -> Result<BigRational> {
    if let Some(g) = v.support().find(|g| !ctx.is_in_gamma0(g)) {
        return Err(PairError::SupportViolation(ctx.render(g)));
    }
    let full = x.convolve(ctx, v)?.convolve(ctx, y)?.project_onto_gamma0(ctx);
    let split = x.project_onto_gamma0(ctx).convolve(ctx, v)?.convolve(ctx, &y.project_onto_gamma0(ctx))?;
    Ok(full.sub(&split).norm_sq())
}

/// ‖E_A(v x v* y) − E_A(x)E_A(y)‖₂² for a unitary v = λ(γ).
pub fn conjugation_defect(ctx: &PairContext, x: &GroupOperator, gamma: &Element, y: &GroupOperator) -> Result<BigRational> {
    let v = GroupOperator::delta(gamma.clone());
    let v_star = v.adjoint(ctx)?;
    let lhs = v.convolve(ctx, x)?.convolve(ctx, &v_star)?.convolve(ctx, y)?.project_onto_gamma0(ctx);
    let rhs = x.project_onto_gamma0(ctx).convolve(ctx, &y.project_onto_gamma0(ctx))?;
    Ok(lhs.sub(&rhs).norm_sq())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurvePoint {
    pub label: String,
    pub gamma: Element,
    pub defect_sq: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefectCurve {
    pub x: String,
    pub y: String,
    pub points: Vec<CurvePoint>,
}

/// defect_sq(γ) = ‖E_A(x λ(γ) y) − E_A(x) λ(γ) E_A(y)‖₂² over the Γ₀-ball,
/// each value checked against the conjugation form with v = λ(γ⁻¹).
pub fn strong_mixing_curve(ctx: &PairContext, x: &GroupOperator, y: &GroupOperator, radius: usize) -> Result<DefectCurve> {
    let ball = enumerate_ball(ctx, BallSide::Gamma0Only, radius)?;
    let points = ball
        .members
        .par_iter()
        .map(|gamma| {
            let defect_sq = mixing_defect(ctx, x, &GroupOperator::delta(gamma.clone()), y)?;
            let conj = conjugation_defect(ctx, x, &ctx.inv(gamma)?, y)?;
            if conj != defect_sq {
                return Err(PairError::Inconsistent(format!(
                    "conjugation and translation defects differ at {}",
                    ctx.render(gamma)
                )));
            }
            Ok(CurvePoint { label: ctx.render(gamma), gamma: gamma.clone(), defect_sq })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DefectCurve { x: x.render(ctx), y: y.render(ctx), points })
}

/// First γ in ball order with every defect over F × F at most ε².
pub fn weak_mixing_witness(
    ctx: &PairContext,
    f: &[GroupOperator],
    radius: usize,
    eps_sq: &BigRational,
) -> Result<Option<Element>> {
    let ball = enumerate_ball(ctx, BallSide::Gamma0Only, radius)?;
    let ok: Vec<bool> = ball
        .members
        .par_iter()
        .map(|gamma| {
            let v = GroupOperator::delta(gamma.clone());
            for x in f {
                for y in f {
                    if mixing_defect(ctx, x, &v, y)? > *eps_sq {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        })
        .collect::<Result<_>>()?;
    Ok(ok.iter().position(|&b| b).map(|i| ball.members[i].clone()))
}

/// defect_sq(k) for λ(tᵏ), k = −k_max..=k_max.
pub fn ah_curve(ctx: &PairContext, x: &GroupOperator, t: &Element, y: &GroupOperator, k_max: i64) -> Result<DefectCurve> {
    if !ctx.is_in_gamma0(t) {
        return Err(PairError::NotInGamma0(ctx.render(t)));
    }
    let points = (-k_max..=k_max)
        .into_par_iter()
        .map(|k| {
            let tk = ctx.pow(t, k)?;
            let defect_sq = mixing_defect(ctx, x, &GroupOperator::delta(tk.clone()), y)?;
            Ok(CurvePoint { label: k.to_string(), gamma: tk, defect_sq })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DefectCurve { x: x.render(ctx), y: y.render(ctx), points })
}

/// |τ(λ(s) x)|² = |x(s⁻¹)|² along `s`.
pub fn coefficient_decay(ctx: &PairContext, x: &GroupOperator, s: &[Element]) -> Result<Vec<BigRational>> {
    s.iter()
        .map(|g| Ok(GroupOperator::delta(g.clone()).convolve(ctx, x)?.trace(ctx).norm_sq()))
        .collect()
}

#[cfg(test)]
mod tests;
