//! The six group families (plus derived free products) and their exact arithmetic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::element::{Element, FpSyllable, RationalMatrix};
use crate::arith::{parse_rational, render_rational, two_adic_valuation, IntMatrix};
use crate::error::{PairError, Result};
use crate::groups::FiniteGroupTable;
use crate::normal_forms::{AmalgamForm, AmalgamStructure, HnnStructure, Side};

/// Which subgroup of an amalgam is distinguished.
#[derive(Debug, Clone)]
pub enum AmalgamGamma0 {
    /// The left factor itself (must be infinite abelian).
    LeftFactor,
    /// ⟨w⟩ for a cyclically reduced w of even syllable length ≥ 2.
    Cyclic { generator: AmalgamForm },
}

#[derive(Debug, Clone)]
pub struct SemidirectSpec {
    pub matrix: IntMatrix,
    pub inverse: IntMatrix,
    /// d vector-generator names followed by the name of t.
    pub names: Vec<String>,
}

impl SemidirectSpec {
    pub fn new(matrix: IntMatrix, names: Vec<String>) -> Result<Self> {
        let inverse = matrix.inverse_unimodular()?;
        if names.len() != matrix.dim() + 1 {
            return Err(PairError::Config(format!("semidirect product needs {} names", matrix.dim() + 1)));
        }
        Ok(Self { matrix, inverse, names })
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// gᵏ for any integer k.
    pub fn power(&self, k: i64) -> IntMatrix {
        if k >= 0 {
            self.matrix.pow(k as u64)
        } else {
            self.inverse.pow(k.unsigned_abs())
        }
    }

    /// α_k(v) = gᵏ v.
    pub fn act(&self, k: i64, v: &[BigInt]) -> Vec<BigInt> {
        if k == 0 {
            return v.to_vec();
        }
        self.power(k).apply(v)
    }
}

/// F_n = {f : v₂(f) ≡ 0 (mod n)}; `None` stands for n = ∞ (v₂(f) = 0).
pub fn in_f_n(f: &BigRational, n: Option<u32>) -> bool {
    match (two_adic_valuation(f), n) {
        (None, _) => false,
        (Some(v), Some(n)) => v.rem_euclid(n as i64) == 0,
        (Some(v), None) => v == 0,
    }
}

#[derive(Debug, Clone)]
pub enum Family {
    Free { names: Vec<String>, gamma0_generator: usize },
    Amalgam { structure: AmalgamStructure, gamma0: AmalgamGamma0 },
    Hnn(HnnStructure),
    Semidirect(SemidirectSpec),
    /// Γ(n): `[[f, x], [0, 1]]`, f ∈ F_n, x ∈ ℚ.
    Triangular2 { n: Option<u32> },
    /// Γ(m,n): `[[1, x, y], [0, f₁, 0], [0, 0, f₂]]`, f₁ ∈ F_m, f₂ ∈ F_n.
    Triangular3 { m: u32, n: u32 },
    /// Γ ∗ G for a finite G, keeping Γ's distinguished subgroup.
    FreeProduct { base: Box<Family>, factor: FiniteGroupTable },
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

impl Family {
    pub fn kind(&self) -> &'static str {
        match self {
            Family::Free { .. } => "free",
            Family::Amalgam { .. } => "amalgam",
            Family::Hnn(_) => "hnn",
            Family::Semidirect(_) => "semidirect",
            Family::Triangular2 { .. } => "triangular2",
            Family::Triangular3 { .. } => "triangular3",
            Family::FreeProduct { .. } => "free_product",
        }
    }

    pub fn identity(&self) -> Element {
        match self {
            Family::Free { .. } => Element::Free(Vec::new()),
            Family::Amalgam { .. } => Element::Amalgam(AmalgamForm::identity()),
            Family::Hnn(h) => Element::Hnn(h.identity()),
            Family::Semidirect(s) => Element::Semidirect { v: vec![BigInt::zero(); s.dim()], k: 0 },
            Family::Triangular2 { .. } => Element::Matrix(Self::diag(&[q(1), q(1)])),
            Family::Triangular3 { .. } => Element::Matrix(Self::diag(&[q(1), q(1), q(1)])),
            Family::FreeProduct { .. } => Element::FreeProduct(Vec::new()),
        }
    }

    fn diag(d: &[BigRational]) -> RationalMatrix {
        let dim = d.len();
        let entries = (0..dim * dim)
            .map(|idx| if idx / dim == idx % dim { d[idx / dim].clone() } else { BigRational::zero() })
            .collect();
        RationalMatrix { dim, entries }
    }

    /// Errors with FamilyMismatch when `x` is not shaped like this family's elements.
    pub fn check(&self, x: &Element) -> Result<()> {
        let ok = match (self, x) {
            (Family::Free { .. }, Element::Free(_)) => true,
            (Family::Amalgam { .. }, Element::Amalgam(_)) => true,
            (Family::Hnn(h), Element::Hnn(f)) => f.head.len() == h.rank(),
            (Family::Semidirect(s), Element::Semidirect { v, .. }) => v.len() == s.dim(),
            (Family::Triangular2 { .. }, Element::Matrix(m)) => m.dim == 2,
            (Family::Triangular3 { .. }, Element::Matrix(m)) => m.dim == 3,
            (Family::FreeProduct { base, .. }, Element::FreeProduct(syls)) => syls.iter().all(|s| match s {
                FpSyllable::Base(b) => base.check(b).is_ok(),
                FpSyllable::Factor(_) => true,
            }),
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(PairError::FamilyMismatch)
        }
    }

    pub fn mul(&self, x: &Element, y: &Element) -> Result<Element> {
        self.check(x)?;
        self.check(y)?;
        Ok(match (self, x, y) {
            (Family::Free { .. }, Element::Free(a), Element::Free(b)) => {
                let mut out = a.clone();
                for &(g, e) in b {
                    push_free(&mut out, g, e);
                }
                Element::Free(out)
            }
            (Family::Amalgam { structure, .. }, Element::Amalgam(a), Element::Amalgam(b)) => {
                Element::Amalgam(structure.mul(a, b))
            }
            (Family::Hnn(h), Element::Hnn(a), Element::Hnn(b)) => Element::Hnn(h.mul(a, b)),
            (Family::Semidirect(s), Element::Semidirect { v, k }, Element::Semidirect { v: w, k: l }) => {
                let moved = s.act(*k, w);
                Element::Semidirect { v: v.iter().zip(&moved).map(|(a, b)| a + b).collect(), k: k + l }
            }
            (Family::Triangular2 { .. } | Family::Triangular3 { .. }, Element::Matrix(a), Element::Matrix(b)) => {
                Element::Matrix(a.mul(b))
            }
            (Family::FreeProduct { base, factor }, Element::FreeProduct(a), Element::FreeProduct(b)) => {
                let mut out = a.clone();
                for s in b {
                    push_fp(base, factor, &mut out, s.clone())?;
                }
                Element::FreeProduct(out)
            }
            _ => return Err(PairError::FamilyMismatch),
        })
    }

    pub fn inv(&self, x: &Element) -> Result<Element> {
        self.check(x)?;
        Ok(match (self, x) {
            (Family::Free { .. }, Element::Free(a)) => Element::Free(a.iter().rev().map(|&(g, e)| (g, -e)).collect()),
            (Family::Amalgam { structure, .. }, Element::Amalgam(a)) => Element::Amalgam(structure.inv(a)),
            (Family::Hnn(h), Element::Hnn(a)) => Element::Hnn(h.inv(a)),
            (Family::Semidirect(s), Element::Semidirect { v, k }) => {
                let back: Vec<BigInt> = s.act(-k, v).into_iter().map(|a| -a).collect();
                Element::Semidirect { v: back, k: -k }
            }
            (Family::Triangular2 { .. }, Element::Matrix(m)) => {
                let (f, x) = (m.get(0, 0), m.get(0, 1));
                let fi = f.recip();
                Element::Matrix(RationalMatrix {
                    dim: 2,
                    entries: vec![fi.clone(), -(x * &fi), q(0), q(1)],
                })
            }
            (Family::Triangular3 { .. }, Element::Matrix(m)) => {
                let (x, y, f1, f2) = (m.get(0, 1), m.get(0, 2), m.get(1, 1), m.get(2, 2));
                let (i1, i2) = (f1.recip(), f2.recip());
                Element::Matrix(RationalMatrix {
                    dim: 3,
                    entries: vec![q(1), -(x * &i1), -(y * &i2), q(0), i1, q(0), q(0), q(0), i2],
                })
            }
            (Family::FreeProduct { base, factor }, Element::FreeProduct(a)) => {
                let mut out = Vec::with_capacity(a.len());
                for s in a.iter().rev() {
                    out.push(match s {
                        FpSyllable::Base(b) => FpSyllable::Base(base.inv(b)?),
                        FpSyllable::Factor(f) => FpSyllable::Factor(factor.inv(*f)),
                    });
                }
                Element::FreeProduct(out)
            }
            _ => return Err(PairError::FamilyMismatch),
        })
    }

    pub fn pow(&self, x: &Element, k: i64) -> Result<Element> {
        let mut base = if k < 0 { self.inv(x)? } else { x.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = self.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base)?;
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base)?;
            }
        }
        Ok(acc)
    }

    pub fn is_in_gamma0(&self, x: &Element) -> bool {
        match (self, x) {
            (Family::Free { gamma0_generator, .. }, Element::Free(w)) => {
                w.is_empty() || (w.len() == 1 && w[0].0 == *gamma0_generator)
            }
            (Family::Amalgam { gamma0, .. }, Element::Amalgam(f)) => match gamma0 {
                AmalgamGamma0::LeftFactor => {
                    f.syllables.is_empty() || (f.syllables.len() == 1 && f.syllables[0].side == Side::Left)
                }
                AmalgamGamma0::Cyclic { generator } => {
                    if f.syllables.is_empty() {
                        return f.tail == 0;
                    }
                    let period = generator.len();
                    if f.len() % period != 0 {
                        return false;
                    }
                    let k = (f.len() / period) as i64;
                    let w = Element::Amalgam(generator.clone());
                    [k, -k].iter().any(|&e| self.pow(&w, e).map(|p| p == *x).unwrap_or(false))
                }
            },
            (Family::Hnn(h), Element::Hnn(f)) => h.stable_power(f).is_some(),
            (Family::Semidirect(_), Element::Semidirect { v, .. }) => v.iter().all(Zero::is_zero),
            (Family::Triangular2 { .. } | Family::Triangular3 { .. }, Element::Matrix(m)) => m.is_diagonal(),
            (Family::FreeProduct { base, .. }, Element::FreeProduct(s)) => match s.as_slice() {
                [] => true,
                [FpSyllable::Base(b)] => base.is_in_gamma0(b),
                _ => false,
            },
            _ => false,
        }
    }

    /// Element for the token `name^k`, if `name` is one of this family's generators.
    pub fn token(&self, name: &str, k: i64) -> Option<Element> {
        match self {
            Family::Free { names, .. } => names.iter().position(|n| n == name).map(|i| Element::Free(vec![(i, k)])),
            Family::Amalgam { structure, .. } => [Side::Left, Side::Right].into_iter().find_map(|side| {
                structure.factor(side).token(name, k).map(|x| Element::Amalgam(structure.embed(side, &x)))
            }),
            Family::Hnn(h) => {
                if name == h.stable_name() {
                    let mut f = h.identity();
                    for _ in 0..k.unsigned_abs() {
                        h.push_stable(&mut f, k.signum() as i8);
                    }
                    return Some(Element::Hnn(f));
                }
                let i = h.base_names().iter().position(|n| n == name)?;
                let mut f = h.identity();
                h.push_base(&mut f, &h.base_generator(i, k));
                Some(Element::Hnn(f))
            }
            Family::Semidirect(s) => {
                let i = s.names.iter().position(|n| n == name)?;
                let mut v = vec![BigInt::zero(); s.dim()];
                if i == s.dim() {
                    return Some(Element::Semidirect { v, k });
                }
                v[i] = BigInt::from(k);
                Some(Element::Semidirect { v, k: 0 })
            }
            Family::Triangular2 { .. } | Family::Triangular3 { .. } => None,
            Family::FreeProduct { base, factor } => {
                if let Some(b) = base.token(name, k) {
                    return Some(lift(base, b));
                }
                let f = factor.pow(factor.lookup(name)?, k);
                Some(Element::FreeProduct(if f == factor.identity() { vec![] } else { vec![FpSyllable::Factor(f)] }))
            }
        }
    }

    /// Validates and canonicalizes a raw matrix for the triangular families.
    pub fn matrix(&self, rows: &[Vec<String>]) -> Result<Element> {
        let mut entries = Vec::new();
        for r in rows {
            for e in r {
                entries.push(parse_rational(e)?);
            }
        }
        let dim = rows.len();
        let m = RationalMatrix { dim, entries };
        let not_in = |why: &str| Err(PairError::NotInGroup(format!("{}: {why}", render_matrix(&m))));
        match self {
            Family::Triangular2 { n } => {
                if dim != 2 {
                    return not_in("expected a 2×2 matrix");
                }
                if !m.get(1, 0).is_zero() || !m.get(1, 1).is_one() {
                    return not_in("second row must be (0, 1)");
                }
                if !in_f_n(m.get(0, 0), *n) {
                    return not_in("diagonal entry outside F_n");
                }
            }
            Family::Triangular3 { m: fm, n: fn_ } => {
                if dim != 3 {
                    return not_in("expected a 3×3 matrix");
                }
                let zeros = [(1, 0), (1, 2), (2, 0), (2, 1)];
                if !m.get(0, 0).is_one() || zeros.iter().any(|&(i, j)| !m.get(i, j).is_zero()) {
                    return not_in("shape must be [[1,x,y],[0,f1,0],[0,0,f2]]");
                }
                if !in_f_n(m.get(1, 1), Some(*fm)) {
                    return not_in("f1 outside F_m");
                }
                if !in_f_n(m.get(2, 2), Some(*fn_)) {
                    return not_in("f2 outside F_n");
                }
            }
            _ => return Err(PairError::FamilyMismatch),
        }
        Ok(Element::Matrix(m))
    }

    pub fn render(&self, x: &Element) -> String {
        let out = match (self, x) {
            (Family::Free { names, .. }, Element::Free(w)) => w
                .iter()
                .map(|&(g, e)| if e == 1 { names[g].clone() } else { format!("{}^{e}", names[g]) })
                .collect::<Vec<_>>()
                .join(" "),
            (Family::Amalgam { structure, .. }, Element::Amalgam(f)) => structure.render(f),
            (Family::Hnn(h), Element::Hnn(f)) => h.render(f),
            (Family::Semidirect(s), Element::Semidirect { v, k }) => {
                let mut parts: Vec<String> = v
                    .iter()
                    .zip(&s.names)
                    .filter(|(a, _)| !a.is_zero())
                    .map(|(a, n)| if a.is_one() { n.clone() } else { format!("{n}^{a}") })
                    .collect();
                if *k != 0 {
                    let t = &s.names[s.dim()];
                    parts.push(if *k == 1 { t.clone() } else { format!("{t}^{k}") });
                }
                parts.join(" ")
            }
            (_, Element::Matrix(m)) => render_matrix(m),
            (Family::FreeProduct { base, factor }, Element::FreeProduct(s)) => s
                .iter()
                .map(|syl| match syl {
                    FpSyllable::Base(b) => base.render(b),
                    FpSyllable::Factor(f) => factor.name(*f).to_string(),
                })
                .collect::<Vec<_>>()
                .join(" "),
            _ => "<family mismatch>".to_string(),
        };
        if out.is_empty() {
            "1".to_string()
        } else {
            out
        }
    }

    /// Default generators for Γ-balls; None for the matrix families.
    pub fn default_gamma_generators(&self) -> Option<Vec<Element>> {
        match self {
            Family::Free { names, .. } => Some((0..names.len()).map(|i| Element::Free(vec![(i, 1)])).collect()),
            Family::Amalgam { structure, .. } => {
                let mut gens = Vec::new();
                for side in [Side::Left, Side::Right] {
                    for x in structure.factor(side).default_generators() {
                        let e = Element::Amalgam(structure.embed(side, &x));
                        if e != self.identity() && !gens.contains(&e) {
                            gens.push(e);
                        }
                    }
                }
                Some(gens)
            }
            Family::Hnn(h) => {
                let mut gens: Vec<Element> =
                    h.base_names().iter().map(|n| self.token(n, 1).expect("declared")).collect();
                gens.push(self.token(h.stable_name(), 1).expect("declared"));
                Some(gens)
            }
            Family::Semidirect(s) => Some(s.names.iter().map(|n| self.token(n, 1).expect("declared")).collect()),
            Family::Triangular2 { .. } | Family::Triangular3 { .. } => None,
            Family::FreeProduct { base, factor } => {
                let mut gens: Vec<Element> =
                    base.default_gamma_generators()?.into_iter().map(|b| lift(base, b)).collect();
                gens.extend(
                    factor
                        .elements()
                        .filter(|&f| f != factor.identity())
                        .map(|f| Element::FreeProduct(vec![FpSyllable::Factor(f)])),
                );
                Some(gens)
            }
        }
    }

    /// Default generators for Γ₀-balls; None for the matrix families.
    pub fn default_gamma0_generators(&self) -> Option<Vec<Element>> {
        match self {
            Family::Free { gamma0_generator, .. } => Some(vec![Element::Free(vec![(*gamma0_generator, 1)])]),
            Family::Amalgam { structure, gamma0 } => match gamma0 {
                AmalgamGamma0::LeftFactor => Some(
                    structure
                        .factor(Side::Left)
                        .default_generators()
                        .into_iter()
                        .map(|x| Element::Amalgam(structure.embed(Side::Left, &x)))
                        .filter(|e| *e != self.identity())
                        .collect(),
                ),
                AmalgamGamma0::Cyclic { generator } => Some(vec![Element::Amalgam(generator.clone())]),
            },
            Family::Hnn(h) => Some(vec![self.token(h.stable_name(), 1).expect("declared")]),
            Family::Semidirect(s) => Some(vec![self.token(&s.names[s.dim()], 1).expect("declared")]),
            Family::Triangular2 { .. } | Family::Triangular3 { .. } => None,
            Family::FreeProduct { base, .. } => {
                Some(base.default_gamma0_generators()?.into_iter().map(|b| lift(base, b)).collect())
            }
        }
    }
}

/// Embeds an element of the base family as a single syllable of Γ ∗ G.
pub fn lift(base: &Family, b: Element) -> Element {
    if b == base.identity() {
        Element::FreeProduct(Vec::new())
    } else {
        Element::FreeProduct(vec![FpSyllable::Base(b)])
    }
}

pub fn render_matrix(m: &RationalMatrix) -> String {
    let rows: Vec<String> = (0..m.dim)
        .map(|i| {
            let row: Vec<String> = (0..m.dim).map(|j| render_rational(m.get(i, j))).collect();
            format!("[{}]", row.join(","))
        })
        .collect();
    format!("[{}]", rows.join(","))
}

fn push_free(out: &mut Vec<(usize, i64)>, g: usize, e: i64) {
    if e == 0 {
        return;
    }
    match out.last_mut() {
        Some(last) if last.0 == g => {
            last.1 += e;
            if last.1 == 0 {
                out.pop();
            }
        }
        _ => out.push((g, e)),
    }
}

fn push_fp(base: &Family, factor: &FiniteGroupTable, out: &mut Vec<FpSyllable>, s: FpSyllable) -> Result<()> {
    let merged = match (out.last(), &s) {
        (Some(FpSyllable::Base(a)), FpSyllable::Base(b)) => {
            let m = base.mul(a, b)?;
            Some(if m == base.identity() { None } else { Some(FpSyllable::Base(m)) })
        }
        (Some(FpSyllable::Factor(a)), FpSyllable::Factor(b)) => {
            let m = factor.mul(*a, *b);
            Some(if m == factor.identity() { None } else { Some(FpSyllable::Factor(m)) })
        }
        _ => None,
    };
    match merged {
        Some(replacement) => {
            out.pop();
            out.extend(replacement);
        }
        None => out.push(s),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Family {
        Family::Free { names: vec!["a".into(), "b".into()], gamma0_generator: 0 }
    }

    #[test]
    fn free_reduction() {
        let f = f2();
        let ab = f.mul(&f.token("a", 1).unwrap(), &f.token("b", 1).unwrap()).unwrap();
        assert_eq!(f.render(&f.inv(&ab).unwrap()), "b^-1 a^-1");
        let x = f.mul(&ab, &f.token("b", -1).unwrap()).unwrap();
        assert_eq!(f.render(&x), "a");
        assert!(f.is_in_gamma0(&f.token("a", 3).unwrap()));
        assert!(!f.is_in_gamma0(&ab));
    }

    #[test]
    fn semidirect_law() {
        let s = SemidirectSpec::new(
            IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]]).unwrap(),
            vec!["e1".into(), "e2".into(), "t".into()],
        )
        .unwrap();
        let fam = Family::Semidirect(s);
        let e1 = fam.token("e1", 1).unwrap();
        let t = fam.token("t", 1).unwrap();
        assert_eq!(fam.render(&fam.mul(&e1, &t).unwrap()), "e1 t");
        assert_eq!(fam.render(&fam.mul(&t, &e1).unwrap()), "e1^2 e2 t");
        let x = fam.mul(&t, &e1).unwrap();
        assert_eq!(fam.mul(&x, &fam.inv(&x).unwrap()).unwrap(), fam.identity());
    }

    #[test]
    fn f_n_membership() {
        let r = |s: &str| parse_rational(s).unwrap();
        assert!(in_f_n(&r("5/3"), Some(2)));
        assert!(!in_f_n(&r("10/3"), Some(2)));
        assert!(in_f_n(&r("4"), Some(2)));
        assert!(in_f_n(&r("8"), Some(3)));
        assert!(!in_f_n(&r("2"), None));
        assert!(in_f_n(&r("3/5"), None));
        assert!(!in_f_n(&r("0"), Some(1)));
    }

    #[test]
    fn triangular3_validation_and_inverse() {
        let fam = Family::Triangular3 { m: 2, n: 3 };
        let rows = |f1: &str| {
            vec![
                vec!["1".to_string(), "0".into(), "0".into()],
                vec!["0".into(), f1.to_string(), "0".into()],
                vec!["0".into(), "0".into(), "1".into()],
            ]
        };
        assert!(fam.matrix(&rows("5/3")).is_ok());
        assert!(matches!(fam.matrix(&rows("10/3")), Err(PairError::NotInGroup(_))));
        let d = fam.matrix(&[
            vec!["1".into(), "0".into(), "0".into()],
            vec!["0".into(), "4".into(), "0".into()],
            vec!["0".into(), "0".into(), "8".into()],
        ])
        .unwrap();
        assert_eq!(fam.render(&fam.inv(&d).unwrap()), "[[1,0,0],[0,1/4,0],[0,0,1/8]]");
    }

    #[test]
    fn free_product_merging() {
        let fam = Family::FreeProduct { base: Box::new(f2()), factor: FiniteGroupTable::cyclic(2, "s") };
        let s = fam.token("s", 1).unwrap();
        let a = fam.token("a", 1).unwrap();
        let w = fam.mul(&fam.mul(&a, &s).unwrap(), &s).unwrap();
        assert_eq!(w, a);
        assert!(fam.is_in_gamma0(&a));
        let asa = fam.mul(&fam.mul(&a, &s).unwrap(), &a).unwrap();
        assert!(!fam.is_in_gamma0(&asa));
        assert_eq!(fam.render(&asa), "a s a");
    }
}
