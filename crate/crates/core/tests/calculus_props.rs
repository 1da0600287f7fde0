mod common;

use common::*;
use proptest::prelude::*;
use triharmonic::algebra::{AlgebraParams, Element};
use triharmonic::calculus::{
    cr_residual_numeric, cr_residual_poly, jacobian_fd, CalcError, CrSystem, Elementary,
    PhiContext, PhiFunction, PhiPoly,
};
use triharmonic::field::expand;
use triharmonic::harmonic::AffineMap;
use triharmonic::random::Sampler;
use triharmonic::scalar::{rat, Rational};

fn cyclic_ctx(k: Element<Rational>) -> PhiContext {
    PhiContext::new(
        AlgebraParams::cyclic(),
        AffineMap::cyclic_harmonic().with_offset(k),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn sum_and_product_rules(f in phi_poly(4), g in phi_poly(4), p in params()) {
        let t = p.table();
        prop_assert_eq!(f.add(&g).derivative(), f.derivative().add(&g.derivative()));
        let lhs = f.mul(&g, &t).derivative();
        let rhs = f.derivative().mul(&g, &t).add(&f.mul(&g.derivative(), &t));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn partials_match_symbolic_expansion(f in phi_poly(4), k in element(), q in point()) {
        let func = PhiFunction::polynomial(f, cyclic_ctx(k));
        let field = expand(&func).unwrap();
        let partials = func.partials_exact(&q).unwrap();
        for (a, pa) in partials.iter().enumerate() {
            prop_assert_eq!(&field.partial(a).eval(&q), pa);
        }
        let second = func.second_partials_exact(&q).unwrap();
        let d = |a: usize, b: usize| field.partial(a).partial(b).eval(&q);
        prop_assert_eq!(second.xx.clone(), d(0, 0));
        prop_assert_eq!(second.yy.clone(), d(1, 1));
        prop_assert_eq!(second.zz.clone(), d(2, 2));
        prop_assert_eq!(second.xy.clone(), d(0, 1));
        prop_assert_eq!(second.xz.clone(), d(0, 2));
        prop_assert_eq!(second.yz.clone(), d(1, 2));
    }

    #[test]
    fn partials_hold_in_any_member_of_the_family(f in phi_poly(3), p in params(), phi in affine(), q in point()) {
        let func = PhiFunction::polynomial(f, PhiContext::new(p.clone(), phi.clone()));
        let field = expand(&func).unwrap();
        let partials = func.partials_exact(&q).unwrap();
        for (a, pa) in partials.iter().enumerate() {
            prop_assert_eq!(&field.partial(a).eval(&q), pa);
        }
        let report = cr_residual_poly(&field, &CrSystem::new(&p, &phi), &[q]);
        prop_assert!(report.pass && report.rank_consistent);
    }
}

#[test]
fn worked_values_at_one_zero_zero() {
    let f = PhiFunction::polynomial(
        PhiPoly::monomial(Element::identity(), 2),
        PhiContext::cyclic_harmonic(),
    );
    let q = [rat(1), rat(0), rat(0)];
    assert_eq!(f.eval_exact(&q).unwrap(), Element::from_ints([1, -2, 1]));
    assert_eq!(
        f.partials_exact(&q).unwrap()[0],
        Element::from_ints([2, -4, 2])
    );
    assert_eq!(
        f.second_partials_exact(&q).unwrap().xx,
        Element::from_ints([2, -4, 2])
    );
    let two_phi = PhiPoly::monomial(Element::from_ints([2, 0, 0]), 1);
    assert_eq!(
        f.derivative().kind,
        triharmonic::calculus::PhiKind::Polynomial(two_phi)
    );

    let cube = PhiFunction::polynomial(
        PhiPoly::monomial(Element::identity(), 3),
        PhiContext::cyclic_harmonic(),
    );
    let s = cube
        .second_partials_exact(&[rat(0), rat(0), rat(0)])
        .unwrap();
    assert!(s.as_array().iter().all(|e| e.is_zero()));

    let c = PhiFunction::polynomial(
        PhiPoly::constant(Element::from_ints([1, 2, 3])),
        PhiContext::cyclic_harmonic(),
    );
    assert_eq!(
        c.derivative().kind,
        triharmonic::calculus::PhiKind::Polynomial(PhiPoly::zero())
    );
}

#[test]
fn finite_differences_agree_with_partials() {
    let mut s = Sampler::new(17);
    for _ in 0..10 {
        let f = PhiFunction::polynomial(s.phi_poly(4, 2), cyclic_ctx(s.element(1)));
        let q = s.point_f64(-1.0, 1.0);
        let sampler = |x: [f64; 3]| f.sample(x);
        let jac = jacobian_fd(&sampler, q, 1e-5);
        let partials = f.partials(&q).unwrap();
        for a in 0..3 {
            for i in 0..3 {
                let exact = partials[a][i];
                assert!((jac[i][a] - exact).abs() <= 1e-6 * exact.abs().max(1.0));
            }
        }
    }
}

fn elementary(f: Elementary) -> PhiFunction {
    PhiFunction::elementary(f, Element::identity(), PhiContext::cyclic_harmonic())
}

#[test]
fn transcendental_identities() {
    let (sin, cos) = (elementary(Elementary::Sin), elementary(Elementary::Cos));
    let (sinh, cosh) = (elementary(Elementary::Sinh), elementary(Elementary::Cosh));
    let table = PhiContext::cyclic_harmonic().table_f64().clone();
    let mut s = Sampler::new(21);
    for _ in 0..20 {
        let q = s.point_f64(-1.0, 1.0);
        let sq = |f: &PhiFunction| {
            let v = f.eval(&q).unwrap();
            table.multiply(&v, &v)
        };
        let trig = sq(&sin) + sq(&cos);
        let hyp = sq(&cosh) - sq(&sinh);
        for i in 0..3 {
            let e = if i == 0 { 1.0 } else { 0.0 };
            assert!((trig[i] - e).abs() < 1e-10, "{trig}");
            assert!((hyp[i] - e).abs() < 1e-10, "{hyp}");
        }
    }
    let e = elementary(Elementary::Exp);
    assert_eq!(e.derivative(), e);
    assert!(matches!(
        e.eval_exact(&[rat(0), rat(0), rat(0)]),
        Err(CalcError::NotExact(_))
    ));
}

#[test]
fn every_elementary_kind_passes_numeric_cr() {
    let system = CrSystem::new(
        &AlgebraParams::<f64>::cyclic(),
        &AffineMap::cyclic_harmonic(),
    );
    let mut s = Sampler::new(33);
    let probes: Vec<[f64; 3]> = (0..20).map(|_| s.point_f64(-1.0, 1.0)).collect();
    for kind in [
        Elementary::Exp,
        Elementary::Sin,
        Elementary::Cos,
        Elementary::Sinh,
        Elementary::Cosh,
    ] {
        let f = elementary(kind);
        let sampler = |q: [f64; 3]| f.sample(q);
        let r = cr_residual_numeric(&sampler, &system, &probes, 1e-4, 1e-6);
        assert!(r.pass && r.rank_consistent, "{kind:?}: {}", r.max_abs);
        for q in &probes {
            let jac = jacobian_fd(&sampler, *q, 1e-5);
            let partials = f.partials(q).unwrap();
            for a in 0..3 {
                for i in 0..3 {
                    assert!(
                        (jac[i][a] - partials[a][i]).abs() < 1e-6 * partials[a][i].abs().max(1.0)
                    );
                }
            }
            let second = f.second_partials(q).unwrap();
            let lap = second.xx + second.yy + second.zz;
            assert!(lap.max_abs() < 1e-9, "{kind:?}: {lap}");
        }
    }
}

#[test]
fn rational_functions() {
    // (φ + 2e)·(φ − 3e)⁻¹
    let num = PhiPoly::new(vec![Element::from_ints([2, 0, 0]), Element::identity()]);
    let den = PhiPoly::new(vec![Element::from_ints([-3, 0, 0]), Element::identity()]);
    let f = PhiFunction::rational(num, den, PhiContext::cyclic_harmonic());
    let system = CrSystem::new(
        &AlgebraParams::<f64>::cyclic(),
        &AffineMap::cyclic_harmonic(),
    );
    let probes = [[0.2, -0.4, 0.9], [0.5, 0.1, -0.3], [-0.7, 0.6, 0.2]];
    let sampler = |q: [f64; 3]| f.sample(q);
    let r = cr_residual_numeric(&sampler, &system, &probes, 1e-4, 1e-6);
    assert!(r.pass);
    for q in &probes {
        let jac = jacobian_fd(&sampler, *q, 1e-5);
        let partials = f.partials(q).unwrap();
        for a in 0..3 {
            for i in 0..3 {
                assert!((jac[i][a] - partials[a][i]).abs() < 1e-6 * partials[a][i].abs().max(1.0));
            }
        }
    }
    let singular = PhiFunction::rational(
        PhiPoly::constant(Element::identity()),
        PhiPoly::identity(),
        PhiContext::cyclic_harmonic(),
    );
    assert_eq!(
        singular.eval_exact(&[rat(0), rat(0), rat(0)]),
        Err(CalcError::SingularDenominator)
    );
    assert!(singular.sample([0.0, 0.0, 0.0])[0].is_nan());
}
