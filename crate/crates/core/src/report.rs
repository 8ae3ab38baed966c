//! Serializable report payloads. Every rational is a `p/q` string and every
//! complex number a `p/q+r/si` string, so reports round-trip losslessly.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::arith::{decimal_digits, render_rational};
use crate::conditions::{CertificateKind, CertificateSource, ExceptionalSetReport, MalnormalReport, StReport, VerdictLevel};
use crate::fourier::DefectCurve;
use crate::pair::PairContext;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportEnvelope {
    pub command: String,
    /// Hex SHA-256 of the config file bytes.
    pub config_digest: String,
    /// Unix seconds.
    pub timestamp: u64,
    pub result: Payload,
}

impl ReportEnvelope {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    Reduce { input: String, canonical: String, in_gamma0: bool },
    Ball { side: String, radius: usize, size: usize, members: Vec<String> },
    ExceptionalSet(ExceptionalSetDto),
    CheckSs { set: Vec<String>, radius: usize, include_identity: bool, witness: Option<String> },
    CheckSt { set: Vec<String>, radius: usize, pairs: Vec<ExceptionalSetDto>, aggregated: Vec<String>, overall: String },
    CheckMalnormal(MalnormalDto),
    Certify { certificates: Vec<CertificateEntry> },
    Defect { x: String, v: String, y: String, defect_sq: String, decimal: String },
    Curve(CurveDto),
    Decay { x: String, points: Vec<PointDto> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemberDto {
    pub gamma: String,
    pub product: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum VerdictDto {
    CertifiedFinite { e: Vec<String>, source: String, complete: bool },
    BoundedVerified { radius: usize },
    RefutedInfinite { description: String, members: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExceptionalSetDto {
    pub g: String,
    pub h: String,
    pub search_radius: usize,
    pub members: Vec<MemberDto>,
    pub verdict: VerdictDto,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationDto {
    pub g: String,
    pub gamma: String,
    pub conjugate: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MalnormalDto {
    pub g_radius: usize,
    pub gamma_radius: usize,
    pub g_count: usize,
    pub gamma_count: usize,
    pub violations: Vec<ViolationDto>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertStatus {
    Certified,
    Inconclusive,
    Violated,
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateEntry {
    pub name: String,
    pub status: CertStatus,
    pub details: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointDto {
    pub index: String,
    pub defect_sq: String,
    pub decimal: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveDto {
    pub x: String,
    pub y: String,
    pub points: Vec<PointDto>,
}

pub fn source_name(s: CertificateSource) -> &'static str {
    match s {
        CertificateSource::AmalgamFormula => "amalgam_formula",
        CertificateSource::MalnormalBound => "malnormal_bound",
        CertificateSource::SemidirectConstruction => "semidirect_construction",
        CertificateSource::DomChainEscape => "dom_chain_escape",
    }
}

pub fn level_name(l: VerdictLevel) -> &'static str {
    match l {
        VerdictLevel::RefutedInfinite => "refuted_infinite",
        VerdictLevel::BoundedVerified => "bounded_verified",
        VerdictLevel::CertifiedFinite => "certified_finite",
    }
}

pub fn point(index: String, q: &BigRational) -> PointDto {
    PointDto { index, defect_sq: render_rational(q), decimal: decimal_digits(q, 12) }
}

pub fn verdict(ctx: &PairContext, v: &CertificateKind) -> VerdictDto {
    let names = |xs: &[crate::pair::Element]| xs.iter().map(|x| ctx.render(x)).collect();
    match v {
        CertificateKind::CertifiedFinite { e, source, complete } => {
            VerdictDto::CertifiedFinite { e: names(e), source: source_name(*source).into(), complete: *complete }
        }
        CertificateKind::BoundedVerified { radius } => VerdictDto::BoundedVerified { radius: *radius },
        CertificateKind::RefutedInfinite { description, members } => {
            VerdictDto::RefutedInfinite { description: description.clone(), members: names(members) }
        }
    }
}

pub fn exceptional_set(ctx: &PairContext, r: &ExceptionalSetReport) -> ExceptionalSetDto {
    ExceptionalSetDto {
        g: ctx.render(&r.g),
        h: ctx.render(&r.h),
        search_radius: r.search_radius,
        members: r
            .members
            .iter()
            .map(|(x, p)| MemberDto { gamma: ctx.render(x), product: ctx.render(p) })
            .collect(),
        verdict: verdict(ctx, &r.verdict),
    }
}

pub fn st(ctx: &PairContext, set: Vec<String>, r: &StReport) -> Payload {
    Payload::CheckSt {
        set,
        radius: r.radius,
        pairs: r.pairs.iter().map(|p| exceptional_set(ctx, p)).collect(),
        aggregated: r.aggregated.iter().map(|x| ctx.render(x)).collect(),
        overall: level_name(r.overall).into(),
    }
}

pub fn malnormal(ctx: &PairContext, r: &MalnormalReport) -> MalnormalDto {
    MalnormalDto {
        g_radius: r.g_radius,
        gamma_radius: r.gamma_radius,
        g_count: r.g_count,
        gamma_count: r.gamma_count,
        violations: r
            .violations
            .iter()
            .map(|v| ViolationDto { g: ctx.render(&v.g), gamma: ctx.render(&v.gamma), conjugate: ctx.render(&v.conjugate) })
            .collect(),
    }
}

pub fn curve(c: &DefectCurve) -> CurveDto {
    CurveDto { x: c.x.clone(), y: c.y.clone(), points: c.points.iter().map(|p| point(p.label.clone(), &p.defect_sq)).collect() }
}

/// `index_word,defect_sq_num,defect_sq_den` rows.
pub fn csv(points: &[PointDto]) -> String {
    let mut out = String::from("index_word,defect_sq_num,defect_sq_den\n");
    for p in points {
        let (num, den) = p.defect_sq.split_once('/').unwrap_or((&p.defect_sq, "1"));
        let index = if p.index.contains([',', '"']) { format!("\"{}\"", p.index.replace('"', "\"\"")) } else { p.index.clone() };
        out.push_str(&format!("{index},{num},{den}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn envelope_round_trips() {
        let env = ReportEnvelope {
            command: "sm-curve".into(),
            config_digest: "00".into(),
            timestamp: 7,
            result: Payload::Curve(CurveDto {
                x: "1*b".into(),
                y: "1/2-i*b^-1".into(),
                points: vec![point("a".into(), &BigRational::new(1.into(), 3.into()))],
            }),
        };
        assert_eq!(ReportEnvelope::from_json(&env.to_json()).unwrap(), env);
        assert_eq!(env.result, ReportEnvelope::from_json(&env.to_json()).unwrap().result);
    }

    #[test]
    fn csv_columns() {
        let rows = [point("a^2".into(), &BigRational::new(4.into(), 6.into())), point("[[1,0],[0,2]]".into(), &BigRational::from_integer(3.into()))];
        assert_eq!(csv(&rows), "index_word,defect_sq_num,defect_sq_den\na^2,2,3\n\"[[1,0],[0,2]]\",3,1\n");
    }
}
