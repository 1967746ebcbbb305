use fermat_core::exprio::{parse_expr, print_expr};
use fermat_core::numeric::eval_point;
use fermat_core::pdde::{derive_quantities, equivalence_transform, Problem};
use fermat_core::scalars::rat;
use fermat_core::{ExpPoly, GaussianRational, LOperator, Monomial, MultiPoly, RationalFn, Scalar, Shape, Tri};
use num_complex::Complex64;
use proptest::prelude::*;

fn gauss() -> impl Strategy<Value = GaussianRational> {
    (-4i64..=4, -4i64..=4, 1i64..=3).prop_map(|(a, b, d)| GaussianRational::new(rat(a, d), rat(b, d)))
}

fn scalar() -> impl Strategy<Value = Scalar> {
    prop::collection::vec(gauss(), 1..=2).prop_map(Scalar::from_coeffs)
}

fn poly(max_deg: u32) -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec(((0..=max_deg), (0..=max_deg), gauss()), 0..=4).prop_map(move |ts| {
        MultiPoly::from_terms(
            2,
            ts.into_iter()
                .filter(|(a, b, _)| a + b <= max_deg)
                .map(|(a, b, c)| (Monomial(vec![a, b]), Scalar::from(c))),
        )
    })
}

fn nonzero_poly(max_deg: u32) -> impl Strategy<Value = MultiPoly> {
    poly(max_deg).prop_filter("nonzero", |p| !p.is_zero())
}

/// Polynomial phase, optionally with one nested exponential.
fn phase() -> impl Strategy<Value = ExpPoly> {
    (poly(2), prop::option::of((nonzero_poly(1), poly(1)))).prop_map(|(p, nested)| {
        let mut e = ExpPoly::from(p);
        if let Some((c, b)) = nested {
            e = &e + &(&ExpPoly::from(c) * &ExpPoly::exp_i(&ExpPoly::from(b)).unwrap());
        }
        e
    })
}

fn exppoly() -> impl Strategy<Value = ExpPoly> {
    prop::collection::vec((poly(2), phase()), 1..=3).prop_map(|ts| {
        ts.into_iter()
            .fold(ExpPoly::zero(2), |acc, (c, ph)| &acc + &(&ExpPoly::from(c) * &ExpPoly::exp_i(&ph).unwrap()))
    })
}

fn rational() -> impl Strategy<Value = RationalFn> {
    (poly(2), nonzero_poly(2)).prop_map(|(n, d)| RationalFn::new(n, d).unwrap())
}

fn shift_vec() -> impl Strategy<Value = Vec<Scalar>> {
    prop::collection::vec(scalar(), 2)
}

fn sample_points() -> Vec<Vec<Complex64>> {
    (0..8)
        .map(|k| {
            let t = k as f64;
            vec![
                Complex64::new(0.3 * t.cos() - 0.1, 0.7 * t.sin()),
                Complex64::new(-0.4 + 0.1 * t, 0.2 * (1.3 * t).cos()),
            ]
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scalar_field_laws(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!((&a - &a).is_zero(), true);
    }

    #[test]
    fn gaussian_square_roots(x in gauss()) {
        let sq = &x * &x;
        let r = sq.sqrt().unwrap();
        prop_assert_eq!(&r * &r, sq);
        prop_assert!(r == x || r == -&x);
    }

    #[test]
    fn polynomial_ring_laws(a in poly(2), b in poly(2), c in poly(2)) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!((&a * &b).derive(1).unwrap(), &(&a.derive(1).unwrap() * &b) + &(&a * &b.derive(1).unwrap()));
    }

    #[test]
    fn polynomial_shift_laws(a in poly(2), b in poly(2), c in shift_vec()) {
        prop_assert_eq!(a.shift(&c, 1).unwrap().shift(&c, -1).unwrap(), a.clone());
        prop_assert_eq!((&a * &b).shift(&c, 1).unwrap(), &a.shift(&c, 1).unwrap() * &b.shift(&c, 1).unwrap());
        prop_assert_eq!(a.shift(&c, 1).unwrap().derive(2).unwrap(), a.derive(2).unwrap().shift(&c, 1).unwrap());
    }

    #[test]
    fn rational_equivalence(a in rational(), b in rational(), c in rational()) {
        prop_assert!((&a + &b).equals(&(&b + &a)));
        prop_assert!((&(&a + &b) * &c).equals(&(&(&a * &c) + &(&b * &c))));
        if !b.is_zero() {
            let q = a.checked_div(&b).unwrap();
            prop_assert!((&q * &b).equals(&a));
        }
        let d = (&a * &b).derive(1).unwrap();
        prop_assert!(d.equals(&(&(&a.derive(1).unwrap() * &b) + &(&a * &b.derive(1).unwrap()))));
    }

    #[test]
    fn exppoly_ring_laws(a in exppoly(), b in exppoly(), c in exppoly()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!((&a - &a).is_zero_tri(), Tri::Zero);
    }

    #[test]
    fn exppoly_calculus_commutes(a in exppoly(), b in exppoly(), c in shift_vec()) {
        let sa = a.shift(&c, 1).unwrap();
        prop_assert_eq!(sa.shift(&c, -1).unwrap(), a.clone());
        prop_assert_eq!(sa.derive(1).unwrap(), a.derive(1).unwrap().shift(&c, 1).unwrap());
        prop_assert_eq!(a.derive(1).unwrap().derive(2).unwrap(), a.derive(2).unwrap().derive(1).unwrap());
        let lhs = (&a * &b).derive(2).unwrap();
        let rhs = &(&a.derive(2).unwrap() * &b) + &(&a * &b.derive(2).unwrap());
        prop_assert_eq!(lhs.equals(&rhs), Tri::Zero);
    }

    #[test]
    fn print_parse_round_trip(a in exppoly(), r in rational()) {
        prop_assert_eq!(parse_expr(&print_expr(&a), 2).unwrap(), a.clone());
        let e = ExpPoly::from(r);
        prop_assert_eq!(parse_expr(&print_expr(&e), 2).unwrap(), e);
    }

    #[test]
    fn zero_test_agrees_with_evaluation(a in exppoly(), b in exppoly()) {
        let pts = sample_points();
        let d = &a - &b;
        let scale = |z: &[Complex64]| eval_point(&a, z).unwrap().norm() + eval_point(&b, z).unwrap().norm() + 1.0;
        match d.is_zero_tri() {
            Tri::Zero => {
                for z in &pts {
                    prop_assert!(eval_point(&d, z).unwrap().norm() <= 1e-9 * scale(z));
                }
            }
            Tri::NonZero => {
                prop_assert!(pts.iter().any(|z| eval_point(&d, z).unwrap().norm() > 1e-6 * scale(z)));
            }
            Tri::Unknown => {}
        }
        let expanded = &(&a + &b).pow(2) - &(&(&(&a * &a) + &(&a * &b).scale_scalar(&Scalar::int(2))) + &(&b * &b));
        prop_assert_eq!(expanded.is_zero_tri(), Tri::Zero);
    }

    #[test]
    fn matrix_equation_solves_for_any_u(
        eta in prop::array::uniform6(poly(2)),
        rhs in nonzero_poly(2),
        g in poly(2),
        u in exppoly(),
        k in prop::sample::select(vec![1, -1]),
    ) {
        if let Ok(m) = equivalence_transform(eta, rhs, k, &ExpPoly::from(g)) {
            prop_assert_eq!(m.forward_residual(&u).unwrap().is_zero_tri(), Tri::Zero);
        }
    }

    #[test]
    fn derived_quantity_identities(p in prop::array::uniform6(poly(2)), k in prop::sample::select(vec![1, -1])) {
        let [p1, p2, p3, p4, p5, p6] = p;
        let prob = Problem {
            name: None,
            n: 2,
            p1, p2, p3, p4, p5, p6,
            p: MultiPoly::one(2),
            c: vec![Scalar::one(), Scalar::zero()],
            l: LOperator::partial(2, 1).unwrap(),
            assume_irreducible: false,
        };
        let q = derive_quantities(&prob, k).unwrap();
        let cross = &(&q.a1 * &q.b2) - &(&q.a2 * &q.b1);
        prop_assert_eq!(cross.scale(&Scalar::int(k as i64)), q.det.scale(&Scalar::gaussian(0, 2)));
        prop_assert_eq!(&q.a1 * &q.a2, &(&prob.p1 * &prob.p1) + &(&prob.p3 * &prob.p3));
        prop_assert_eq!(&q.b1 * &q.b2, &(&prob.p2 * &prob.p2) + &(&prob.p4 * &prob.p4));
        prop_assert_eq!(&q.bt1 * &q.bt2, &(&prob.p5 * &prob.p5) + &(&prob.p6 * &prob.p6));
    }

    #[test]
    fn constant_offsets_are_constant(g in phase(), s in scalar()) {
        let shifted = &g + &ExpPoly::constant(2, s);
        prop_assert_eq!((&shifted - &g).classify_shape(), Shape::Constant);
    }

    #[test]
    fn malformed_text_is_reported_not_fatal(text in "[ z12Eisncopi+*/^()-]{0,30}|[ -~]{0,30}") {
        match parse_expr(&text, 2) {
            Ok(_) => {}
            Err(fermat_core::Error::Syntax { pos, .. })
            | Err(fermat_core::Error::NegativePower { pos })
            | Err(fermat_core::Error::Arity { pos, .. }) => prop_assert!(pos <= text.chars().count()),
            Err(fermat_core::Error::DivisionByZeroExpression) => {}
            Err(other) => prop_assert!(false, "unexpected error {other:?} for {text:?}"),
        }
    }
}
