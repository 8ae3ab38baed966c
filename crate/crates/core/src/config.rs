//! JSON pair-definition files and their validation into a [`PairContext`].

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::arith::IntMatrix;
use crate::error::{PairError, Result};
use crate::groups::{FGAbelianSpec, FiniteGroupTable};
use crate::normal_forms::{AmalgamStructure, Factor, FactorElem, HnnStructure, Side};
use crate::pair::{AmalgamGamma0, Caps, Element, Family, Letter, PairContext, RawWord, SemidirectSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairConfig {
    pub name: String,
    pub family: FamilyConfig,
    /// Words generating the Γ₀-balls; family defaults when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma0_generators: Option<Vec<String>>,
    /// Words generating the Γ-balls; family defaults when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_generators: Option<Vec<String>>,
    /// Aliases usable as generator tokens, resolved in key order.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub named_elements: BTreeMap<String, NamedElement>,
    #[serde(default)]
    pub caps: CapsConfig,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CapsConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ball_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub refute_threshold: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NamedElement {
    Word(String),
    Matrix(Vec<Vec<Scalar>>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Int(i64),
    Text(String),
}

impl Scalar {
    fn text(&self) -> String {
        match self {
            Scalar::Int(n) => n.to_string(),
            Scalar::Text(s) => s.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Order {
    Finite(u32),
    /// The string `"inf"`.
    Infinite(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FactorConfig {
    Abelian { free_rank: usize, #[serde(default)] torsion: Vec<u64>, names: Vec<String> },
    Cyclic { order: usize, generator: String },
    Finite { elements: Vec<String>, table: Vec<Vec<usize>> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZPair {
    pub left: String,
    pub right: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilyConfig {
    Free {
        rank: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        names: Option<Vec<String>>,
        gamma0_generator: String,
    },
    Amalgam {
        left: FactorConfig,
        right: FactorConfig,
        /// Identified pairs generating Z; the identity pair is implicit.
        #[serde(default)]
        z: Vec<ZPair>,
        /// A word w for Γ₀ = ⟨w⟩; when absent Γ₀ is the left factor.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        gamma0_word: Option<String>,
    },
    Hnn {
        base_names: Vec<String>,
        stable_letter: String,
        h_gens: Vec<Vec<i64>>,
        phi_images: Vec<Vec<i64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        k_gens: Option<Vec<Vec<i64>>>,
    },
    Semidirect {
        matrix: Vec<Vec<i64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        names: Option<Vec<String>>,
    },
    Triangular2 { n: Order },
    Triangular3 { m: u32, n: u32 },
    FreeProduct { base: Box<FamilyConfig>, factor: FactorConfig },
}

fn finite_table(cfg: &FactorConfig) -> Result<FiniteGroupTable> {
    match cfg {
        FactorConfig::Cyclic { order, generator } if *order >= 1 => Ok(FiniteGroupTable::cyclic(*order, generator)),
        FactorConfig::Finite { elements, table } => FiniteGroupTable::new(elements.clone(), table.clone()),
        _ => Err(PairError::Config("expected a finite factor".into())),
    }
}

fn factor(cfg: &FactorConfig) -> Result<Factor> {
    match cfg {
        FactorConfig::Abelian { free_rank, torsion, names } => {
            Ok(Factor::Abelian(FGAbelianSpec::new(*free_rank, torsion.clone(), names.clone())?))
        }
        other => Ok(Factor::Finite(finite_table(other)?)),
    }
}

/// Multiplies out a word inside a single factor.
fn factor_word(f: &Factor, word: &str) -> Result<FactorElem> {
    let raw: RawWord = word.parse()?;
    let mut acc = f.identity();
    for tok in raw.0 {
        let Letter::Named(name) = &tok.letter else {
            return Err(PairError::Config("matrix literal inside a factor word".into()));
        };
        let x = f.token(name, tok.exp).ok_or_else(|| PairError::UnknownGenerator(name.clone()))?;
        acc = f.mul(&acc, &x);
    }
    Ok(acc)
}

fn int_vecs(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

fn build_family(cfg: &FamilyConfig) -> Result<Family> {
    Ok(match cfg {
        FamilyConfig::Free { rank, names, gamma0_generator } => {
            let names = match names {
                Some(n) => n.clone(),
                None if *rank <= 26 => (0..*rank).map(|i| ((b'a' + i as u8) as char).to_string()).collect(),
                None => (1..=*rank).map(|i| format!("a{i}")).collect(),
            };
            if *rank == 0 || names.len() != *rank {
                return Err(PairError::Config("free group needs rank ≥ 1 and one name per generator".into()));
            }
            let idx = names
                .iter()
                .position(|n| n == gamma0_generator)
                .ok_or_else(|| PairError::UnknownGenerator(gamma0_generator.clone()))?;
            Family::Free { names, gamma0_generator: idx }
        }
        FamilyConfig::Amalgam { left, right, z, gamma0_word } => {
            let (left, right) = (factor(left)?, factor(right)?);
            let mut pairs = Vec::new();
            for p in z {
                pairs.push((factor_word(&left, &p.left)?, factor_word(&right, &p.right)?));
            }
            let structure = AmalgamStructure::new(left, right, pairs)?;
            let gamma0 = match gamma0_word {
                None => {
                    let l = structure.factor(Side::Left);
                    if !l.is_infinite() {
                        return Err(PairError::Config("Γ₀ = left factor requires an infinite abelian left factor".into()));
                    }
                    AmalgamGamma0::LeftFactor
                }
                Some(w) => {
                    let probe = Family::Amalgam { structure: structure.clone(), gamma0: AmalgamGamma0::LeftFactor };
                    let Element::Amalgam(form) = PairContext::resolver(probe, Vec::new()).parse(w)? else {
                        unreachable!("amalgam family yields amalgam forms")
                    };
                    if form.len() < 2 || form.len() % 2 != 0 {
                        return Err(PairError::Config(format!(
                            "Γ₀ generator `{w}` must be cyclically reduced of even syllable length ≥ 2"
                        )));
                    }
                    AmalgamGamma0::Cyclic { generator: form }
                }
            };
            Family::Amalgam { structure, gamma0 }
        }
        FamilyConfig::Hnn { base_names, stable_letter, h_gens, phi_images, k_gens } => {
            let k = k_gens.as_ref().map(|k| int_vecs(k));
            Family::Hnn(HnnStructure::new(
                base_names.clone(),
                stable_letter.clone(),
                &int_vecs(h_gens),
                &int_vecs(phi_images),
                k.as_deref(),
            )?)
        }
        FamilyConfig::Semidirect { matrix, names } => {
            let m = IntMatrix::from_rows(matrix)?;
            let names = names
                .clone()
                .unwrap_or_else(|| (1..=m.dim()).map(|i| format!("e{i}")).chain(["t".to_string()]).collect());
            Family::Semidirect(SemidirectSpec::new(m, names)?)
        }
        FamilyConfig::Triangular2 { n } => Family::Triangular2 {
            n: match n {
                Order::Finite(0) => return Err(PairError::Config("n must be positive".into())),
                Order::Finite(n) => Some(*n),
                Order::Infinite(s) if s == "inf" => None,
                Order::Infinite(s) => return Err(PairError::Config(format!("bad order `{s}`"))),
            },
        },
        FamilyConfig::Triangular3 { m, n } => {
            if *m == 0 || *n == 0 {
                return Err(PairError::Config("m and n must be positive".into()));
            }
            Family::Triangular3 { m: *m, n: *n }
        }
        FamilyConfig::FreeProduct { base, factor } => {
            Family::FreeProduct { base: Box::new(build_family(base)?), factor: finite_table(factor)? }
        }
    })
}

impl PairConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| PairError::Config(e.to_string()))
    }

    pub fn build(&self) -> Result<PairContext> {
        let family = build_family(&self.family)?;
        let mut resolver = PairContext::resolver(family.clone(), Vec::new());
        for (name, spec) in &self.named_elements {
            let x = match spec {
                NamedElement::Word(w) => resolver.parse(w)?,
                NamedElement::Matrix(rows) => {
                    let rows: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(Scalar::text).collect()).collect();
                    let literal = format!(
                        "[{}]",
                        rows.iter().map(|r| format!("[{}]", r.join(","))).collect::<Vec<_>>().join(",")
                    );
                    resolver.parse(&literal)?
                }
            };
            let mut aliases = resolver.into_aliases();
            aliases.push((name.clone(), x));
            resolver = PairContext::resolver(family.clone(), aliases);
        }
        let words = |ws: &Option<Vec<String>>| -> Result<Option<Vec<Element>>> {
            ws.as_ref().map(|ws| ws.iter().map(|w| resolver.parse(w)).collect()).transpose()
        };
        let gamma0 = words(&self.gamma0_generators)?;
        let gamma = words(&self.gamma_generators)?;
        let defaults = Caps::default();
        let caps = Caps {
            ball_max: self.caps.ball_max.unwrap_or(defaults.ball_max),
            refute_threshold: self.caps.refute_threshold.unwrap_or(defaults.refute_threshold),
        };
        PairContext::new(self.name.clone(), family, gamma0, gamma, resolver.clone().into_aliases(), caps)
    }
}

/// Lowercase hex SHA-256 of the raw config bytes.
pub fn digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn load(path: &std::path::Path) -> Result<(PairContext, String)> {
    let bytes = std::fs::read(path).map_err(|e| PairError::Config(e.to_string()))?;
    let text = std::str::from_utf8(&bytes).map_err(|e| PairError::Config(e.to_string()))?;
    let ctx = PairConfig::from_json(text)?.build()?;
    Ok((ctx, digest(&bytes)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_inconsistent_parameters() {
        let bad_det = r#"{"name":"x","family":{"kind":"semidirect","matrix":[[2,0],[0,1]]}}"#;
        assert!(PairConfig::from_json(bad_det).unwrap().build().is_err());
        let bad_phi = r#"{"name":"x","family":{"kind":"hnn","base_names":["b"],"stable_letter":"a",
            "h_gens":[[3]],"phi_images":[[2]],"k_gens":[[4]]}}"#;
        assert!(PairConfig::from_json(bad_phi).unwrap().build().is_err());
        let bad_z = r#"{"name":"x","family":{"kind":"amalgam",
            "left":{"kind":"abelian","free_rank":1,"torsion":[2],"names":["c","z"]},
            "right":{"kind":"cyclic","order":4,"generator":"y"},
            "z":[{"left":"z","right":"y"}]}}"#;
        assert!(PairConfig::from_json(bad_z).unwrap().build().is_err());
        let no_gens = r#"{"name":"x","family":{"kind":"triangular3","m":2,"n":3}}"#;
        assert!(PairConfig::from_json(no_gens).unwrap().build().is_err());
        let unknown_field = r#"{"name":"x","family":{"kind":"free","rank":2,"gamma0_generator":"a"},"extra":1}"#;
        assert!(PairConfig::from_json(unknown_field).is_err());
    }

    #[test]
    fn builds_free_group_with_defaults() {
        let ctx = PairConfig::from_json(r#"{"name":"f2","family":{"kind":"free","rank":2,"gamma0_generator":"a"}}"#)
            .unwrap()
            .build()
            .unwrap();
        assert_eq!(ctx.gamma_generators().len(), 2);
        assert_eq!(ctx.render(&ctx.parse("a b b^-1").unwrap()), "a");
    }

    #[test]
    fn digest_is_stable() {
        assert_eq!(digest(b"abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }
}

#[cfg(test)]
pub(crate) fn shipped(name: &str) -> PairContext {
    let text = match name {
        "f2" => include_str!("../../../configs/f2.json"),
        "bs23" => include_str!("../../../configs/bs23.json"),
        "bs22" => include_str!("../../../configs/bs22.json"),
        "bs32" => include_str!("../../../configs/bs32.json"),
        "psl2z" => include_str!("../../../configs/psl2z.json"),
        "amalgam_z4" => include_str!("../../../configs/amalgam_z4.json"),
        "z_free_z2" => include_str!("../../../configs/z_free_z2.json"),
        "semidirect_fib" => include_str!("../../../configs/semidirect_fib.json"),
        "gamma_n" => include_str!("../../../configs/gamma_n.json"),
        "gamma_2_3" => include_str!("../../../configs/gamma_2_3.json"),
        other => panic!("no shipped config {other}"),
    };
    PairConfig::from_json(text).unwrap().build().unwrap()
}
