use num_traits::One;

use super::*;
use crate::config::shipped;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn op(ctx: &PairContext, s: &str) -> GroupOperator {
    GroupOperator::parse(ctx, s).unwrap()
}

#[test]
fn convolution_and_adjoint() {
    let ctx = shipped("f2");
    let x = op(&ctx, "a; b");
    let y = op(&ctx, "a^-1; b^-1");
    assert_eq!(x.convolve(&ctx, &y).unwrap(), op(&ctx, "2*1; a b^-1; b a^-1"));
    let z = op(&ctx, "2*a; i*b");
    assert_eq!(z.adjoint(&ctx).unwrap(), op(&ctx, "2*a^-1; -i*b^-1"));
    let zz = z.convolve(&ctx, &z.adjoint(&ctx).unwrap()).unwrap();
    assert_eq!(zz.trace(&ctx), ComplexRational::real(z.norm_sq()));
    assert_eq!(z.norm_sq(), q(5));
}

#[test]
fn cancellation_drops_terms() {
    let ctx = shipped("f2");
    let x = op(&ctx, "a; -1*a; 1/2*b");
    assert_eq!(x.len(), 1);
    assert!(x.sub(&x).is_zero());
}

#[test]
fn conditional_expectation() {
    let ctx = shipped("f2");
    assert!(op(&ctx, "b").project_onto_gamma0(&ctx).is_zero());
    assert_eq!(op(&ctx, "2*1; b").project_onto_gamma0(&ctx), op(&ctx, "2*1"));
}

#[test]
fn defects() {
    let ctx = shipped("f2");
    let x = op(&ctx, "b");
    let y = op(&ctx, "b^-1");
    for k in -3..=3i64 {
        let v = GroupOperator::delta(ctx.pow(&ctx.parse("a").unwrap(), k).unwrap());
        let d = mixing_defect(&ctx, &x, &v, &y).unwrap();
        assert_eq!(d, if k == 0 { q(1) } else { q(0) });
    }
    let bad = op(&ctx, "b");
    assert!(matches!(mixing_defect(&ctx, &x, &bad, &y), Err(PairError::SupportViolation(_))));
    let one = op(&ctx, "1");
    assert!(mixing_defect(&ctx, &one, &op(&ctx, "a^5"), &one).unwrap().is_zero());
}

#[test]
fn bs23_curves() {
    let ctx = shipped("bs23");
    let x = op(&ctx, "b^3");
    let y = op(&ctx, "b^-2");
    let curve = strong_mixing_curve(&ctx, &x, &y, 10).unwrap();
    let a = ctx.parse("a").unwrap();
    for p in &curve.points {
        assert_eq!(p.defect_sq, if p.gamma == a { q(1) } else { q(0) });
    }
    let ah = ah_curve(&ctx, &x, &a, &y, 10).unwrap();
    let nonzero: Vec<&str> = ah.points.iter().filter(|p| !p.defect_sq.is_zero()).map(|p| p.label.as_str()).collect();
    assert_eq!(nonzero, vec!["1"]);
    assert!(matches!(ah_curve(&ctx, &x, &ctx.parse("b").unwrap(), &y, 2), Err(PairError::NotInGamma0(_))));
}

#[test]
fn ah_curve_free() {
    let ctx = shipped("f2");
    let x = op(&ctx, "b; b^-1");
    let c = ah_curve(&ctx, &x, &ctx.parse("a").unwrap(), &x, 5).unwrap();
    for p in &c.points {
        assert_eq!(p.defect_sq, if p.label == "0" { q(4) } else { q(0) });
    }
    let inside = op(&ctx, "a; 1/3*a^2");
    let c = ah_curve(&ctx, &inside, &ctx.parse("a").unwrap(), &inside, 5).unwrap();
    assert!(c.points.iter().all(|p| p.defect_sq.is_zero()));
}

#[test]
fn gamma_2_3_strong_mixing_fails() {
    let ctx = shipped("gamma_2_3");
    let x = op(&ctx, "u");
    let y = op(&ctx, "u^-1");
    let curve = strong_mixing_curve(&ctx, &x, &y, 2).unwrap();
    for p in &curve.points {
        let Element::Matrix(m) = &p.gamma else { panic!() };
        let expected = if m.get(2, 2).is_one() { q(1) } else { q(0) };
        assert_eq!(p.defect_sq, expected, "{}", p.label);
    }
    let w = weak_mixing_witness(&ctx, &[x.clone(), y.clone()], 2, &q(0)).unwrap().unwrap();
    assert_eq!(Some(w), crate::conditions::ss_witness(&ctx, &[ctx.parse("u").unwrap(), ctx.parse("u^-1").unwrap()], 2, true).unwrap());
}

#[test]
fn weak_mixing_examples() {
    let ctx = shipped("f2");
    let f = [op(&ctx, "b")];
    assert_eq!(weak_mixing_witness(&ctx, &f, 2, &q(0)).unwrap(), Some(ctx.identity()));
    let f = [op(&ctx, "b"), op(&ctx, "b^-1")];
    assert_eq!(weak_mixing_witness(&ctx, &f, 2, &q(0)).unwrap(), Some(ctx.parse("a").unwrap()));
}

#[test]
fn decay() {
    let ctx = shipped("f2");
    let g = ctx.parse("a b").unwrap();
    let x = GroupOperator::delta(g.clone());
    let s = vec![ctx.identity(), ctx.inv(&g).unwrap(), g];
    assert_eq!(coefficient_decay(&ctx, &x, &s).unwrap(), vec![q(0), q(1), q(0)]);
}
