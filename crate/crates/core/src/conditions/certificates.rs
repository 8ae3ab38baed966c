//! Structural certificates: amalgam exceptional-set formula, hyperbolic
//! semidirect construction, HNN domain-chain escape and fixed points.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::CertificateSource;
use crate::arith::IntMatrix;
use crate::error::{PairError, Result};
use crate::lattice::IntVec;
use crate::normal_forms::hnn::Escape;
use crate::normal_forms::{DomChain, Factor, FactorElem, HnnStructure, Side};
use crate::pair::{AmalgamGamma0, Element, Family, PairContext, SemidirectSpec};

/// Order of a factor element, None when infinite.
fn factor_order(f: &Factor, x: &FactorElem) -> Option<u64> {
    match (f, x) {
        (Factor::Finite(t), FactorElem::Finite(a)) => Some(t.element_order(*a) as u64),
        (Factor::Abelian(spec), FactorElem::Abelian(a)) => {
            if a.free.iter().any(|c| !c.is_zero()) {
                return None;
            }
            Some(spec.torsion.iter().zip(&a.torsion).fold(1u64, |acc, (&n, &r)| acc.lcm(&(n / n.gcd(&r)))))
        }
        _ => None,
    }
}

/// E ⊇ E(g,h) for an amalgam whose Γ₀ is the left factor.
pub fn amalgam_st_certificate(ctx: &PairContext, g: &Element, h: &Element) -> Result<Vec<Element>> {
    let Family::Amalgam { structure, gamma0 } = ctx.family() else {
        return Err(PairError::FamilyMismatch);
    };
    if !matches!(gamma0, AmalgamGamma0::LeftFactor) {
        return Err(PairError::NotApplicable("the formula needs Γ₀ to be the left factor".into()));
    }
    let (Element::Amalgam(gf), Element::Amalgam(hf)) = (g, h) else {
        return Err(PairError::FamilyMismatch);
    };
    for x in [g, h] {
        if ctx.is_in_gamma0(x) {
            return Err(PairError::NotInComplement(ctx.render(x)));
        }
    }
    let left = structure.factor(Side::Left);
    let g_pairs = structure.pairs(gf);
    let (r_l, s_l) = g_pairs.last().expect("g ∉ Γ₀ has syllables");
    let u_1 = structure.pairs(hf).first().map(|(u, _)| u.clone()).unwrap_or_else(|| left.identity());
    let shift = if structure.factor(Side::Right).is_identity(s_l) { left.mul(r_l, &u_1) } else { u_1 };
    let shift_inv = left.inv(&shift);
    let mut out: Vec<Element> = Vec::new();
    for i in 0..structure.z_order() {
        let z = structure.z_elem(Side::Left, i);
        for x in [z.clone(), left.mul(&shift_inv, z)] {
            let e = Element::Amalgam(structure.embed(Side::Left, &x));
            if !out.contains(&e) {
                out.push(e);
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Whether Γ₀ is known to be malnormal, and by which argument.
pub fn malnormal_source(family: &Family) -> Option<CertificateSource> {
    match family {
        Family::Free { .. } => Some(CertificateSource::MalnormalBound),
        Family::Amalgam { structure, gamma0: AmalgamGamma0::Cyclic { generator } } => {
            // ⟨ab⟩ in A ∗ B with one of a, b of order at least 3.
            if structure.z_order() != 1 || generator.syllables.len() != 2 || generator.tail != 0 {
                return None;
            }
            let big = generator
                .syllables
                .iter()
                .any(|s| factor_order(structure.factor(s.side), &s.rep).is_none_or(|o| o >= 3));
            big.then_some(CertificateSource::MalnormalBound)
        }
        Family::Hnn(h) => hnn_escape_structural(h).map(|_| CertificateSource::DomChainEscape),
        // Γ is malnormal in Γ ∗ G, and malnormality is transitive.
        Family::FreeProduct { base, .. } => malnormal_source(base),
        _ => None,
    }
}

/// Rank-one ratio φ(x) = (p/q)·x, when H ≠ 0.
fn rank_one_ratio(h: &HnnStructure) -> Option<BigRational> {
    if h.rank() != 1 || h.h().is_zero() {
        return None;
    }
    let gen = h.h().basis()[0].clone();
    let img = h.phi().apply(&gen)?;
    Some(BigRational::new(img[0].clone(), gen[0].clone()))
}

/// Whether every nontrivial base element provably escapes the domain chain;
/// `Some(true)` when this needs the stable letter inverted.
fn hnn_escape_structural(h: &HnnStructure) -> Option<bool> {
    let escapes = |s: &HnnStructure| {
        if s.h().is_zero() {
            return true;
        }
        match rank_one_ratio(s) {
            // x ∈ Dom(φʲ) forces qʲ | x.
            Some(r) => r.denom().abs() >= BigInt::from(2),
            // A chain that reaches {0} within rank+1 steps.
            None => s.dom_chain(s.rank() + 2).map(|c| c.levels.last().is_some_and(|l| l.is_zero())).unwrap_or(false),
        }
    };
    if escapes(h) {
        Some(false)
    } else if escapes(&h.inverted()) {
        Some(true)
    } else {
        None
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HnnVerdict {
    Certified { inverted: bool },
    Inconclusive { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HnnMalnormalReport {
    pub chain: DomChain,
    /// Dom(φʲ) = dⱼℤ for a rank-one base.
    pub moduli: Option<Vec<BigInt>>,
    pub strictly_descending: bool,
    pub ball_radius: i64,
    /// Base-ball elements with their least escape index.
    pub escapes: Vec<(IntVec, Escape)>,
    pub verdict: HnnVerdict,
}

fn base_box(rank: usize, radius: i64) -> Vec<IntVec> {
    let side = 2 * radius + 1;
    let total = (side as u64).pow(rank as u32);
    (0..total)
        .map(|mut idx| {
            let mut v = vec![BigInt::zero(); rank];
            for slot in v.iter_mut().rev() {
                *slot = BigInt::from((idx % side as u64) as i64 - radius);
                idx /= side as u64;
            }
            v
        })
        .filter(|v| v.iter().any(|c| !c.is_zero()))
        .collect()
}

fn hnn_structure(ctx: &PairContext) -> Result<&HnnStructure> {
    match ctx.family() {
        Family::Hnn(h) => Ok(h),
        _ => Err(PairError::FamilyMismatch),
    }
}

pub fn hnn_malnormal_certificate(ctx: &PairContext, ball_radius: i64, jmax: usize) -> Result<HnnMalnormalReport> {
    let h = hnn_structure(ctx)?;
    let chain = h.dom_chain(jmax)?;
    let strictly_descending =
        chain.levels.windows(2).all(|w| w[1].is_subset_of(&w[0]) && w[0] != w[1]);
    let escapes = base_box(h.rank(), ball_radius)
        .into_iter()
        .map(|v| chain.escape_index(&v).map(|e| (v, e)))
        .collect::<Result<Vec<_>>>()?;
    let all_escape = escapes.iter().all(|(_, e)| matches!(e, Escape::At(_)));
    let verdict = match hnn_escape_structural(h) {
        Some(inverted) => HnnVerdict::Certified { inverted },
        None if all_escape => HnnVerdict::Inconclusive {
            reason: "ball elements escape but no structural argument covers the whole base".into(),
        },
        None => HnnVerdict::Inconclusive { reason: "the domain chain stabilizes; some elements never escape".into() },
    };
    Ok(HnnMalnormalReport { moduli: chain.moduli(), chain, strictly_descending, ball_radius, escapes, verdict })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedPointReport {
    pub jmax: usize,
    pub ball_radius: i64,
    /// `(j, h)` with h ≠ 0 and φʲ(h) = h.
    pub violations: Vec<(usize, IntVec)>,
}

pub fn hnn_fixed_point_check(ctx: &PairContext, jmax: usize, ball_radius: i64) -> Result<FixedPointReport> {
    let h = hnn_structure(ctx)?;
    let ball = base_box(h.rank(), ball_radius);
    let mut violations = Vec::new();
    for j in 1..=jmax {
        for v in &ball {
            if h.phi_power(v, j).as_ref() == Some(v) {
                violations.push((j, v.clone()));
            }
        }
    }
    Ok(FixedPointReport { jmax, ball_radius, violations })
}

/// det(gᵏ − I) for 1 ≤ |k| ≤ kmax, ordered k = 1, −1, 2, −2, ….
pub fn fixed_point_determinants(spec: &SemidirectSpec, kmax: i64) -> Vec<(i64, BigInt)> {
    (1..=kmax).flat_map(|k| [k, -k]).map(|k| (k, spec.power(k).sub_identity().det())).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SemidirectOutcome {
    Certified { e: Vec<i64>, burn_in: (i64, i64) },
    Inconclusive { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemidirectCertificate {
    /// F = C₁ ∪ −C₁.
    pub f: Vec<IntVec>,
    /// Translation parts C₂.
    pub c2: Vec<i64>,
    /// {k : α_k(F) ∩ F ≠ ∅}; exact when certified, scanned over |k| ≤ k_bound otherwise.
    pub e1: Vec<i64>,
    pub determinants: Vec<(i64, BigInt)>,
    pub outcome: SemidirectOutcome,
}

fn sup_norm(v: &[BigInt]) -> BigInt {
    v.iter().map(|c| c.abs()).max().unwrap_or_default()
}

/// First j ≥ 1 after which no coordinate sequence of Aʲf can return to F.
/// Needs a 2×2 matrix with |trace| ≥ 3: a coordinate that has just grown past
/// both its predecessor and every entry of F keeps growing.
fn burn_in(a: &IntMatrix, f: &[IntVec], bound: &BigInt) -> i64 {
    let mut worst = 0;
    for v in f {
        let mut prev = v.clone();
        let mut j = 0i64;
        loop {
            j += 1;
            let next = a.apply(&prev);
            let escaped = next.iter().zip(&prev).any(|(x, p)| x.abs() > *bound && x.abs() > p.abs());
            prev = next;
            if escaped {
                break;
            }
        }
        worst = worst.max(j);
    }
    worst
}

pub fn semidirect_st_certificate(ctx: &PairContext, c: &[Element], k_bound: i64) -> Result<SemidirectCertificate> {
    let Family::Semidirect(spec) = ctx.family() else {
        return Err(PairError::FamilyMismatch);
    };
    let mut f: Vec<IntVec> = Vec::new();
    let mut c2: Vec<i64> = Vec::new();
    for x in c {
        let Element::Semidirect { v, k } = x else {
            return Err(PairError::FamilyMismatch);
        };
        if v.iter().all(Zero::is_zero) {
            return Err(PairError::BadC(format!("{} lies in Γ₀", ctx.render(x))));
        }
        f.push(v.clone());
        f.push(v.iter().map(|c| -c).collect());
        c2.push(*k);
    }
    f.sort();
    f.dedup();
    c2.sort();
    c2.dedup();
    let determinants = fixed_point_determinants(spec, k_bound);
    let hits = |k: i64| f.iter().any(|v| f.contains(&spec.act(k, v)));
    let scan = |lo: i64, hi: i64| (lo..=hi).filter(|&k| hits(k)).collect::<Vec<_>>();
    let order = (1..=k_bound).find(|&k| spec.power(k) == IntMatrix::identity(spec.dim()));
    if let Some(k) = order {
        return Ok(SemidirectCertificate {
            e1: scan(-k_bound, k_bound),
            f,
            c2,
            determinants,
            outcome: SemidirectOutcome::Inconclusive { reason: format!("the action has finite order {k}") },
        });
    }
    for k in (1..=k_bound).flat_map(|k| [k, -k]) {
        if let Some(v) = f.iter().find(|v| spec.act(k, v) == **v) {
            let vector = format!("({})", v.iter().map(ToString::to_string).collect::<Vec<_>>().join(","));
            return Err(PairError::FixedPointExists { k, vector });
        }
    }
    let hyperbolic = spec.dim() == 2 && spec.matrix.trace().abs() >= BigInt::from(3);
    if !hyperbolic {
        return Ok(SemidirectCertificate {
            e1: scan(-k_bound, k_bound),
            f,
            c2,
            determinants,
            outcome: SemidirectOutcome::Inconclusive {
                reason: "expansion certificate needs d ≤ 2 and |trace| ≥ 3".into(),
            },
        });
    }
    let bound = f.iter().map(|v| sup_norm(v)).max().unwrap_or_default();
    let fwd = burn_in(&spec.matrix, &f, &bound);
    let bwd = burn_in(&spec.inverse, &f, &bound);
    let e1 = scan(-bwd, fwd);
    let mut e: Vec<i64> = e1.iter().flat_map(|x| c2.iter().map(move |k| x - k)).collect();
    e.sort();
    e.dedup();
    Ok(SemidirectCertificate { f, c2, e1, determinants, outcome: SemidirectOutcome::Certified { e, burn_in: (bwd, fwd) } })
}

/// The Γ₀ element tⁿ of a semidirect family.
pub fn semidirect_t_power(spec: &SemidirectSpec, n: i64) -> Element {
    Element::Semidirect { v: vec![BigInt::zero(); spec.dim()], k: n }
}
