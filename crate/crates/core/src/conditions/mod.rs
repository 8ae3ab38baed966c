//! Exceptional sets E(g,h), conditions (SS) and (ST), malnormality scans and
//! the structural certificates behind them.

mod certificates;

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

pub use certificates::{
    amalgam_st_certificate, fixed_point_determinants, hnn_fixed_point_check, hnn_malnormal_certificate,
    malnormal_source, semidirect_st_certificate, FixedPointReport, HnnMalnormalReport, HnnVerdict,
    SemidirectCertificate, SemidirectOutcome,
};

use crate::error::{PairError, Result};
use crate::pair::{enumerate_ball, AmalgamGamma0, Ball, BallSide, Element, Family, PairContext, RationalMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CertificateSource {
    AmalgamFormula,
    MalnormalBound,
    SemidirectConstruction,
    DomChainEscape,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CertificateKind {
    /// E(g,h) ⊆ `e`; `complete` when `e` is exactly E(g,h).
    CertifiedFinite { e: Vec<Element>, source: CertificateSource, complete: bool },
    BoundedVerified { radius: usize },
    RefutedInfinite { description: String, members: Vec<Element> },
}

/// Verdict strength, weakest first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VerdictLevel {
    RefutedInfinite,
    BoundedVerified,
    CertifiedFinite,
}

impl CertificateKind {
    pub fn level(&self) -> VerdictLevel {
        match self {
            CertificateKind::CertifiedFinite { .. } => VerdictLevel::CertifiedFinite,
            CertificateKind::BoundedVerified { .. } => VerdictLevel::BoundedVerified,
            CertificateKind::RefutedInfinite { .. } => VerdictLevel::RefutedInfinite,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExceptionalSetReport {
    pub g: Element,
    pub h: Element,
    pub search_radius: usize,
    /// `(γ, gγh)` in Γ₀-ball order.
    pub members: Vec<(Element, Element)>,
    pub verdict: CertificateKind,
}

fn require_complement(ctx: &PairContext, xs: &[&Element]) -> Result<()> {
    for x in xs {
        ctx.family().check(x)?;
        if ctx.is_in_gamma0(x) {
            return Err(PairError::NotInComplement(ctx.render(x)));
        }
    }
    Ok(())
}

/// E(g,h) for g, h in a free group, Γ₀ = ⟨a⟩: write g = g'aᵖ, h = a^q h' with
/// g' not ending and h' not starting in a; then gaᵏh ∈ Γ₀ iff k = −p−q and g'h' ∈ Γ₀.
fn free_exact(ctx: &PairContext, g: &Element, h: &Element) -> Result<Vec<Element>> {
    let (Family::Free { gamma0_generator: a, .. }, Element::Free(gw), Element::Free(hw)) = (ctx.family(), g, h) else {
        return Err(PairError::FamilyMismatch);
    };
    let mut g1 = gw.clone();
    let p = match g1.last() {
        Some(&(i, e)) if i == *a => {
            g1.pop();
            e
        }
        _ => 0,
    };
    let mut h1 = hw.clone();
    let q = match h1.first() {
        Some(&(i, e)) if i == *a => {
            h1.remove(0);
            e
        }
        _ => 0,
    };
    let rest = ctx.mul(&Element::Free(g1), &Element::Free(h1))?;
    if !ctx.is_in_gamma0(&rest) {
        return Ok(Vec::new());
    }
    let k = -(p + q);
    Ok(vec![if k == 0 { ctx.identity() } else { Element::Free(vec![(*a, k)]) }])
}

fn diag_with(dim: usize, slot: usize, f: BigRational) -> RationalMatrix {
    let entries = (0..dim * dim)
        .map(|idx| match (idx / dim, idx % dim) {
            (i, j) if i != j => BigRational::zero(),
            (i, _) if i == slot => f.clone(),
            _ => BigRational::one(),
        })
        .collect();
    RationalMatrix { dim, entries }
}

/// For the triangular families: the off-diagonal entries of g·diag(…f…)·h are
/// affine in f, so checking f = 0 and f = 1 decides whether the whole
/// one-parameter diagonal family lies in E(g,h).
fn triangular_family_witness(ctx: &PairContext, g: &Element, h: &Element) -> Option<(String, usize)> {
    let (Element::Matrix(gm), Element::Matrix(hm)) = (g, h) else {
        return None;
    };
    let slots: Vec<(usize, Option<u32>)> = match ctx.family() {
        Family::Triangular2 { n } => vec![(0, *n)],
        Family::Triangular3 { m, n } => vec![(1, Some(*m)), (2, Some(*n))],
        _ => return None,
    };
    let dim = gm.dim;
    slots.into_iter().find_map(|(slot, order)| {
        let lands = [BigRational::zero(), BigRational::one()]
            .into_iter()
            .all(|f| gm.mul(&diag_with(dim, slot, f)).mul(hm).is_diagonal());
        lands.then(|| {
            let shape = (0..dim).map(|i| if i == slot { "f" } else { "1" }).collect::<Vec<_>>().join(",");
            let group = order.map_or("F_inf".to_string(), |n| format!("F_{n}"));
            (format!("g·diag({shape})·h is diagonal for every f in {group}"), slot)
        })
    })
}

/// Further members diag(…3ʲ…) of a verified one-parameter family (3 lies in every F_n).
fn family_members(ctx: &PairContext, g: &Element, h: &Element, slot: usize, found: &[Element], want: usize) -> Result<Vec<Element>> {
    let mut out: Vec<Element> = found
        .iter()
        .filter(|x| match x {
            Element::Matrix(m) => (0..m.dim).all(|i| i == slot || m.get(i, i).is_one()),
            _ => false,
        })
        .cloned()
        .collect();
    let dim = match g {
        Element::Matrix(m) => m.dim,
        _ => return Err(PairError::FamilyMismatch),
    };
    let mut j = 1u32;
    while out.len() < want {
        let f = BigRational::from_integer(3.into()).pow(j as i32);
        let x = Element::Matrix(diag_with(dim, slot, f));
        if !out.contains(&x) {
            if !ctx.is_in_gamma0(&ctx.mul3(g, &x, h)?) {
                return Err(PairError::Inconsistent("symbolic family witness failed on a member".into()));
            }
            out.push(x);
        }
        j += 1;
    }
    Ok(out)
}

/// A certificate valid for every radius, independent of the scan.
fn structural(ctx: &PairContext, g: &Element, h: &Element, members: &[Element]) -> Result<Option<CertificateKind>> {
    if let Family::FreeProduct { base, .. } = ctx.family() {
        if let (Some(gb), Some(hb)) = (base_syllable(g), base_syllable(h)) {
            // γgh stays inside the base factor, so E(g,h) is the base's.
            let base_ctx = PairContext::resolver((**base).clone(), Vec::new());
            let base_members: Vec<Element> = members.iter().filter_map(|m| base_syllable(m).cloned()).collect();
            let lifted = structural(&base_ctx, gb, hb, &base_members)?;
            return Ok(lifted.map(|c| match c {
                CertificateKind::CertifiedFinite { e, source, complete } => CertificateKind::CertifiedFinite {
                    e: e.into_iter().map(|x| crate::pair::lift(base, x)).collect(),
                    source,
                    complete,
                },
                other => other,
            }));
        }
    }
    if let Family::Free { .. } = ctx.family() {
        let e = free_exact(ctx, g, h)?;
        return Ok(Some(CertificateKind::CertifiedFinite { e, source: CertificateSource::MalnormalBound, complete: true }));
    }
    if let Some(source) = malnormal_source(ctx.family()) {
        // Two members γ₁ ≠ γ₂ would put gγ₁γ₂⁻¹g⁻¹ in Γ₀.
        if members.len() > 1 {
            return Err(PairError::Inconsistent(format!("{} members under a malnormality certificate", members.len())));
        }
        return Ok(Some(CertificateKind::CertifiedFinite {
            e: members.to_vec(),
            source,
            complete: !members.is_empty(),
        }));
    }
    match ctx.family() {
        Family::Amalgam { gamma0: AmalgamGamma0::LeftFactor, .. } => {
            let e = amalgam_st_certificate(ctx, g, h)?;
            Ok(Some(CertificateKind::CertifiedFinite { e, source: CertificateSource::AmalgamFormula, complete: false }))
        }
        Family::Semidirect(spec) => {
            let cert = semidirect_st_certificate(ctx, &[g.clone(), h.clone()], 12)?;
            Ok(match cert.outcome {
                SemidirectOutcome::Certified { e, .. } => Some(CertificateKind::CertifiedFinite {
                    e: e.into_iter().map(|n| certificates::semidirect_t_power(spec, n)).collect(),
                    source: CertificateSource::SemidirectConstruction,
                    complete: false,
                }),
                SemidirectOutcome::Inconclusive { .. } => None,
            })
        }
        _ => Ok(None),
    }
}

fn base_syllable(x: &Element) -> Option<&Element> {
    match x {
        Element::FreeProduct(s) => match s.as_slice() {
            [crate::pair::FpSyllable::Base(b)] => Some(b),
            _ => None,
        },
        _ => None,
    }
}

/// Members of E(g,h) in a precomputed Γ₀-ball, with the verdict.
pub fn exceptional_set_in(ctx: &PairContext, g: &Element, h: &Element, ball: &Ball) -> Result<ExceptionalSetReport> {
    require_complement(ctx, &[g, h])?;
    let landed: Vec<Option<(usize, Element)>> = ball
        .members
        .par_iter()
        .enumerate()
        .map(|(i, gamma)| {
            let p = ctx.mul3(g, gamma, h)?;
            Ok(ctx.is_in_gamma0(&p).then_some((i, p)))
        })
        .collect::<Result<_>>()?;
    let hits: Vec<(usize, Element)> = landed.into_iter().flatten().collect();
    let members: Vec<(Element, Element)> = hits.iter().map(|(i, p)| (ball.members[*i].clone(), p.clone())).collect();
    let gammas: Vec<Element> = members.iter().map(|(x, _)| x.clone()).collect();
    let threshold = ctx.caps.refute_threshold;

    let verdict = if let Some((description, slot)) = triangular_family_witness(ctx, g, h) {
        let witnesses = family_members(ctx, g, h, slot, &gammas, threshold)?;
        CertificateKind::RefutedInfinite { description, members: witnesses }
    } else if let Some(cert) = structural(ctx, g, h, &gammas)? {
        if let CertificateKind::CertifiedFinite { e, .. } = &cert {
            if let Some(x) = gammas.iter().find(|x| !e.contains(x)) {
                return Err(PairError::Inconsistent(format!("ball member {} outside certified E", ctx.render(x))));
            }
        }
        cert
    } else {
        let lengths: BTreeSet<usize> = hits.iter().map(|(i, _)| ball.length_of(*i)).collect();
        let every_level = (1..=ball.radius).all(|r| lengths.contains(&r));
        if members.len() >= threshold && ball.radius >= 1 && every_level {
            CertificateKind::RefutedInfinite {
                description: format!(
                    "{} members, new ones at every word length 1..={}",
                    members.len(),
                    ball.radius
                ),
                members: gammas,
            }
        } else {
            CertificateKind::BoundedVerified { radius: ball.radius }
        }
    };
    Ok(ExceptionalSetReport { g: g.clone(), h: h.clone(), search_radius: ball.radius, members, verdict })
}

pub fn exceptional_set(ctx: &PairContext, g: &Element, h: &Element, radius: usize) -> Result<ExceptionalSetReport> {
    require_complement(ctx, &[g, h])?;
    let ball = enumerate_ball(ctx, BallSide::Gamma0Only, radius)?;
    exceptional_set_in(ctx, g, h, &ball)
}

fn require_test_set(ctx: &PairContext, c: &[Element]) -> Result<()> {
    if c.is_empty() {
        return Err(PairError::BadC("the test set is empty".into()));
    }
    for x in c {
        ctx.family().check(x)?;
        if ctx.is_in_gamma0(x) {
            return Err(PairError::BadC(format!("{} lies in Γ₀", ctx.render(x))));
        }
    }
    Ok(())
}

/// First γ in ball order with gγh ∉ Γ₀ for all g, h ∈ C.
pub fn ss_witness(ctx: &PairContext, c: &[Element], radius: usize, include_identity: bool) -> Result<Option<Element>> {
    require_test_set(ctx, c)?;
    let ball = enumerate_ball(ctx, BallSide::Gamma0Only, radius)?;
    let id = ctx.identity();
    let good: Vec<bool> = ball
        .members
        .par_iter()
        .map(|gamma| {
            if !include_identity && *gamma == id {
                return Ok(false);
            }
            for g in c {
                let g_gamma = ctx.mul(g, gamma)?;
                for h in c {
                    if ctx.is_in_gamma0(&ctx.mul(&g_gamma, h)?) {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        })
        .collect::<Result<_>>()?;
    Ok(good.iter().position(|&b| b).map(|i| ball.members[i].clone()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StReport {
    pub radius: usize,
    /// Ordered pairs (g, h) ∈ C × C, row-major in the order of C.
    pub pairs: Vec<ExceptionalSetReport>,
    /// Union of the per-pair sets: certified E where available, ball members otherwise.
    pub aggregated: Vec<Element>,
    pub overall: VerdictLevel,
}

pub fn st_check(ctx: &PairContext, c: &[Element], radius: usize) -> Result<StReport> {
    require_test_set(ctx, c)?;
    let ball = enumerate_ball(ctx, BallSide::Gamma0Only, radius)?;
    let mut pairs = Vec::with_capacity(c.len() * c.len());
    for g in c {
        for h in c {
            pairs.push(exceptional_set_in(ctx, g, h, &ball)?);
        }
    }
    let mut aggregated: Vec<Element> = Vec::new();
    for p in &pairs {
        let part: Vec<Element> = match &p.verdict {
            CertificateKind::CertifiedFinite { e, .. } => e.clone(),
            _ => p.members.iter().map(|(x, _)| x.clone()).collect(),
        };
        for x in part {
            if !aggregated.contains(&x) {
                aggregated.push(x);
            }
        }
    }
    aggregated.sort();
    let overall = pairs.iter().map(|p| p.verdict.level()).min().unwrap_or(VerdictLevel::CertifiedFinite);
    Ok(StReport { radius, pairs, aggregated, overall })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MalnormalViolation {
    pub g: Element,
    pub gamma: Element,
    /// gγg⁻¹, a nontrivial element of Γ₀.
    pub conjugate: Element,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MalnormalReport {
    pub g_radius: usize,
    pub gamma_radius: usize,
    pub g_count: usize,
    pub gamma_count: usize,
    pub violations: Vec<MalnormalViolation>,
}

pub fn malnormal_scan(ctx: &PairContext, g_radius: usize, gamma_radius: usize) -> Result<MalnormalReport> {
    let gs = enumerate_ball(ctx, BallSide::ComplementOfGamma0, g_radius)?;
    let gammas = enumerate_ball(ctx, BallSide::Gamma0Only, gamma_radius)?;
    let id = ctx.identity();
    let nontrivial: Vec<&Element> = gammas.members.iter().filter(|x| **x != id).collect();
    let found: Vec<Vec<MalnormalViolation>> = gs
        .members
        .par_iter()
        .map(|g| {
            let g_inv = ctx.inv(g)?;
            let mut out = Vec::new();
            for gamma in &nontrivial {
                let conj = ctx.mul3(g, gamma, &g_inv)?;
                if conj != id && ctx.is_in_gamma0(&conj) {
                    out.push(MalnormalViolation { g: g.clone(), gamma: (*gamma).clone(), conjugate: conj });
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(MalnormalReport {
        g_radius,
        gamma_radius,
        g_count: gs.members.len(),
        gamma_count: nontrivial.len(),
        violations: found.into_iter().flatten().collect(),
    })
}
