#![allow(dead_code)]

use std::path::PathBuf;

use pairbench::config::PairConfig;
use pairbench::{BallSide, Element, PairContext};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn config_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(format!("{name}.json"))
}

pub fn load(name: &str) -> PairContext {
    let text = std::fs::read_to_string(config_path(name)).unwrap();
    PairConfig::from_json(&text).unwrap().build().unwrap()
}

pub const SHIPPED: &[&str] =
    &["f2", "bs23", "bs22", "psl2z", "amalgam_z4", "semidirect_fib", "gamma_n", "gamma_2_3"];

/// A word as `(generator, exponent)` tokens.
pub type Word = Vec<(String, i64)>;

pub fn render(w: &Word) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter().map(|(g, e)| format!("{g}^{e}")).collect::<Vec<_>>().join(" ")
}

pub fn inverse(w: &Word) -> Word {
    w.iter().rev().map(|(g, e)| (g.clone(), -e)).collect()
}

pub fn random_word(rng: &mut impl Rng, gens: &[&str], len: usize) -> Word {
    (0..len)
        .map(|_| {
            let g = gens.choose(rng).unwrap().to_string();
            let mut e = rng.gen_range(1..=3);
            if rng.gen_bool(0.5) {
                e = -e;
            }
            (g, e)
        })
        .collect()
}

fn parse_relator(r: &str) -> Word {
    r.split_whitespace()
        .map(|t| match t.split_once('^') {
            Some((g, e)) => (g.to_string(), e.parse().unwrap()),
            None => (t.to_string(), 1),
        })
        .collect()
}

/// Relators of each test presentation, written out by hand.
pub fn relators(name: &str) -> Vec<Word> {
    let rs: &[&str] = match name {
        // a b^m a^-1 b^-n
        "bs23" => &["a b^2 a^-1 b^-3"],
        "bs32" => &["a b^3 a^-1 b^-2"],
        "bs22" => &["a b^2 a^-1 b^-2"],
        "psl2z" => &["x^2", "y^3"],
        "amalgam_z4" => &["y^4", "z^2", "c z c^-1 z^-1", "z y^-2"],
        "z_free_z2" => &["s^2"],
        "f2" => &[],
        "semidirect_fib" => &["t e1 t^-1 e2^-1 e1^-2", "t e2 t^-1 e2^-1 e1^-1", "e1 e2 e1^-1 e2^-1"],
        other => panic!("no relators for {other}"),
    };
    rs.iter().map(|r| parse_relator(r)).collect()
}

pub fn generators(name: &str) -> Vec<&'static str> {
    match name {
        "bs23" | "bs32" | "bs22" => vec!["a", "b"],
        "psl2z" => vec!["x", "y"],
        "amalgam_z4" => vec!["c", "z", "y"],
        "z_free_z2" => vec!["a", "s"],
        "f2" => vec!["a", "b"],
        "semidirect_fib" => vec!["e1", "e2", "t"],
        other => panic!("no generators for {other}"),
    }
}

/// w with relator conjugates u r^±1 u^-1 and trivial pairs g g^-1 spliced in.
pub fn insert_relators(rng: &mut impl Rng, w: &Word, rels: &[Word], gens: &[&str], count: usize) -> Word {
    let mut out = w.clone();
    for _ in 0..count {
        let pos = rng.gen_range(0..=out.len());
        let mut piece = Vec::new();
        if rels.is_empty() || rng.gen_bool(0.3) {
            let g = gens.choose(rng).unwrap().to_string();
            let e = rng.gen_range(1..=3);
            piece.push((g.clone(), e));
            piece.push((g, -e));
        } else {
            let r = rels.choose(rng).unwrap();
            let r = if rng.gen_bool(0.5) { inverse(r) } else { r.clone() };
            // cyclic rotation
            let k = rng.gen_range(0..r.len());
            let rot: Word = r[k..].iter().chain(&r[..k]).cloned().collect();
            let ulen = rng.gen_range(0..3);
            let u = random_word(rng, gens, ulen);
            piece.extend(u.clone());
            piece.extend(rot);
            piece.extend(inverse(&u));
        }
        out.splice(pos..pos, piece);
    }
    out
}

pub fn parse(ctx: &PairContext, w: &Word) -> Element {
    ctx.parse(&render(w)).unwrap()
}

pub fn complement_ball(ctx: &PairContext, radius: usize) -> Vec<Element> {
    pairbench::enumerate_ball(ctx, BallSide::ComplementOfGamma0, radius).unwrap().members
}

pub fn gamma0_ball(ctx: &PairContext, radius: usize) -> Vec<Element> {
    pairbench::enumerate_ball(ctx, BallSide::Gamma0Only, radius).unwrap().members
}
