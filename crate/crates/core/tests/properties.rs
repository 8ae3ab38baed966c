mod common;

use std::sync::OnceLock;

use num_rational::BigRational;
use pairbench::arith::ComplexRational;
use pairbench::conditions::{exceptional_set, exceptional_set_in, ss_witness, CertificateKind};
use pairbench::fourier::{weak_mixing_witness, GroupOperator};
use pairbench::{enumerate_ball, BallSide, Element, PairContext};
use proptest::prelude::*;

use common::{load, SHIPPED};

fn contexts() -> &'static [PairContext] {
    static CTX: OnceLock<Vec<PairContext>> = OnceLock::new();
    CTX.get_or_init(|| SHIPPED.iter().map(|n| load(n)).collect())
}

type Spec = Vec<(usize, i64)>;

fn word() -> impl Strategy<Value = Spec> {
    prop::collection::vec((0usize..8, -3i64..=3), 0..6)
}

fn build(ctx: &PairContext, gens: &[Element], spec: &Spec) -> Element {
    spec.iter().fold(ctx.identity(), |acc, &(i, e)| {
        let g = &gens[i % gens.len()];
        ctx.mul(&acc, &ctx.pow(g, e).unwrap()).unwrap()
    })
}

fn element(ctx: &PairContext, spec: &Spec) -> Element {
    build(ctx, ctx.gamma_generators(), spec)
}

fn gamma0(ctx: &PairContext, spec: &Spec) -> Element {
    build(ctx, ctx.gamma0_generators(), spec)
}

/// A complement element, or None when the word lands in Γ₀.
fn outside(ctx: &PairContext, spec: &Spec) -> Option<Element> {
    let x = element(ctx, spec);
    (!ctx.is_in_gamma0(&x)).then_some(x)
}

fn family() -> impl Strategy<Value = usize> {
    0..SHIPPED.len()
}

fn operator(ctx: &PairContext, terms: &[(Spec, i64, i64)]) -> GroupOperator {
    GroupOperator::from_terms(terms.iter().map(|(w, re, im)| {
        (element(ctx, w), ComplexRational::new(BigRational::from_integer((*re).into()), BigRational::new((*im).into(), 2.into())))
    }))
}

fn terms() -> impl Strategy<Value = Vec<(Spec, i64, i64)>> {
    prop::collection::vec((prop::collection::vec((0usize..8, -2i64..=2), 0..3), -3i64..=3, -2i64..=2), 0..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn group_axioms(f in family(), a in word(), b in word(), c in word()) {
        let ctx = &contexts()[f];
        let (x, y, z) = (element(ctx, &a), element(ctx, &b), element(ctx, &c));
        let xy_z = ctx.mul(&ctx.mul(&x, &y).unwrap(), &z).unwrap();
        let x_yz = ctx.mul(&x, &ctx.mul(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(xy_z, x_yz);
        prop_assert_eq!(ctx.mul(&x, &ctx.identity()).unwrap(), x.clone());
        prop_assert_eq!(ctx.mul(&ctx.identity(), &x).unwrap(), x.clone());
        prop_assert_eq!(ctx.mul(&x, &ctx.inv(&x).unwrap()).unwrap(), ctx.identity());
    }

    #[test]
    fn gamma0_is_an_abelian_subgroup(f in family(), a in word(), b in word()) {
        let ctx = &contexts()[f];
        let (x, y) = (gamma0(ctx, &a), gamma0(ctx, &b));
        prop_assert!(ctx.is_in_gamma0(&x));
        prop_assert!(ctx.is_in_gamma0(&ctx.inv(&x).unwrap()));
        let xy = ctx.mul(&x, &y).unwrap();
        prop_assert!(ctx.is_in_gamma0(&xy));
        prop_assert_eq!(xy, ctx.mul(&y, &x).unwrap());
    }

    #[test]
    fn normal_form_is_idempotent(f in family(), a in word()) {
        let ctx = &contexts()[f];
        let x = element(ctx, &a);
        let again = ctx.parse(&ctx.render(&x)).unwrap();
        prop_assert_eq!(&again, &x);
        prop_assert_eq!(ctx.render(&again), ctx.render(&x));
    }

    #[test]
    fn exceptional_set_symmetry(f in family(), a in word(), b in word()) {
        let ctx = &contexts()[f];
        let (Some(g), Some(h)) = (outside(ctx, &a), outside(ctx, &b)) else { return Ok(()) };
        let ball = enumerate_ball(ctx, BallSide::Gamma0Only, 3).unwrap();
        let e = exceptional_set_in(ctx, &g, &h, &ball).unwrap();
        let mirrored = exceptional_set_in(ctx, &ctx.inv(&h).unwrap(), &ctx.inv(&g).unwrap(), &ball).unwrap();
        let mut left: Vec<Element> = e.members.iter().map(|(x, _)| ctx.inv(x).unwrap()).collect();
        let mut right: Vec<Element> = mirrored.members.into_iter().map(|(x, _)| x).collect();
        left.sort();
        right.sort();
        // Γ₀-balls are symmetric, so the inverse image stays inside the ball.
        prop_assert_eq!(left, right);
    }

    #[test]
    fn certificates_contain_every_found_member(f in family(), a in word(), b in word()) {
        let ctx = &contexts()[f];
        let (Some(g), Some(h)) = (outside(ctx, &a), outside(ctx, &b)) else { return Ok(()) };
        let r = exceptional_set(ctx, &g, &h, 4).unwrap();
        for (gamma, p) in &r.members {
            prop_assert_eq!(ctx.mul3(&g, gamma, &h).unwrap(), p.clone());
            prop_assert!(ctx.is_in_gamma0(p));
        }
        if let CertificateKind::CertifiedFinite { e, complete, .. } = &r.verdict {
            for (gamma, _) in &r.members {
                prop_assert!(e.contains(gamma), "certificate misses {}", ctx.render(gamma));
            }
            if *complete {
                for gamma in e {
                    prop_assert!(ctx.is_in_gamma0(&ctx.mul3(&g, gamma, &h).unwrap()));
                }
            }
        }
    }

    #[test]
    fn conditional_expectation(f in family(), x in terms(), a in word(), b in word()) {
        let ctx = &contexts()[f];
        let x = operator(ctx, &x);
        let e = x.project_onto_gamma0(ctx);
        prop_assert_eq!(e.project_onto_gamma0(ctx), e.clone());
        prop_assert!(e.is_supported_in_gamma0(ctx));
        prop_assert_eq!(e.trace(ctx), x.trace(ctx));
        let (l, r) = (GroupOperator::delta(gamma0(ctx, &a)), GroupOperator::delta(gamma0(ctx, &b)));
        let lxr = l.convolve(ctx, &x).unwrap().convolve(ctx, &r).unwrap();
        let ler = l.convolve(ctx, &e).unwrap().convolve(ctx, &r).unwrap();
        prop_assert_eq!(lxr.project_onto_gamma0(ctx), ler);
    }

    #[test]
    fn trace_is_tracial(f in family(), x in terms(), y in terms()) {
        let ctx = &contexts()[f];
        let (x, y) = (operator(ctx, &x), operator(ctx, &y));
        prop_assert_eq!(x.convolve(ctx, &y).unwrap().trace(ctx), y.convolve(ctx, &x).unwrap().trace(ctx));
    }

    #[test]
    fn ss_matches_weak_mixing(f in family(), specs in prop::collection::vec(word(), 1..4)) {
        let ctx = &contexts()[f];
        let mut c: Vec<Element> = specs.iter().filter_map(|s| outside(ctx, s)).collect();
        c.sort();
        c.dedup();
        if c.is_empty() {
            return Ok(());
        }
        let ops: Vec<GroupOperator> = c.iter().map(|g| GroupOperator::delta(g.clone())).collect();
        let zero = BigRational::from_integer(0.into());
        prop_assert_eq!(ss_witness(ctx, &c, 2, true).unwrap(), weak_mixing_witness(ctx, &ops, 2, &zero).unwrap());
    }
}

#[test]
fn balls_grow_by_prefix() {
    for ctx in contexts() {
        for side in [BallSide::WholeGroup, BallSide::Gamma0Only, BallSide::ComplementOfGamma0] {
            let mut prev = enumerate_ball(ctx, side, 0).unwrap();
            for r in 1..=3 {
                let next = enumerate_ball(ctx, side, r).unwrap();
                assert_prefix(&prev.members, &next.members);
                prev = next;
            }
        }
    }
}

fn assert_prefix(a: &[Element], b: &[Element]) {
    assert!(a.len() <= b.len());
    assert_eq!(a, &b[..a.len()]);
}
