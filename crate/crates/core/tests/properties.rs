mod common;

use bgw_core::algebra::{ratio, Alphabet, DiffPoly, Jet, JetMonomial, ParamPoly, Rational};
use bgw_core::bgw::{multisets_up_to, CorrelatorKind, Multiset, TauSeries};
use bgw_core::params::Params;
use bgw_core::psido::{frac_power, rth_root, LaxOperator, PsiDO};
use bgw_core::wconstraints::{apply_wred, invert_triangular, WOperatorSpec};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| ratio(n, d))
}

fn alphabet() -> Alphabet {
    Alphabet::indexed("c", 3)
}

fn param_poly() -> impl Strategy<Value = ParamPoly> {
    prop::collection::vec((prop::collection::vec(0u32..3, 3), rational()), 0..5)
        .prop_map(|terms| ParamPoly::from_terms(&alphabet(), terms))
}

fn jet_monomial() -> impl Strategy<Value = JetMonomial> {
    prop::collection::vec((1u16..=3, 0u16..=3, 1u32..=2), 1..=3)
        .prop_map(|fs| JetMonomial::from_factors(fs.into_iter().map(|(a, k, e)| (Jet::new(a, k), e))))
}

fn diff_poly() -> impl Strategy<Value = DiffPoly> {
    (prop::collection::vec((jet_monomial(), rational()), 0..5), rational()).prop_map(|(terms, c)| {
        let mut p = DiffPoly::constant(c);
        for (m, q) in terms {
            p.add_assign_ref(&DiffPoly::monomial(m, q));
        }
        p
    })
}

/// A finite operator `sum_{e=-2}^{2} f_e ∂^e` with linear coefficients, exact.
fn psido() -> impl Strategy<Value = PsiDO> {
    let coeff = (1u16..=2, 0u16..=2, rational()).prop_map(|(a, k, q)| DiffPoly::var(a, k).scale(&q));
    prop::collection::vec((-2i64..=2, coeff), 1..=3).prop_map(|cs| PsiDO::from_coeffs(cs, None))
}

/// A random series in `d` for `r = 3` through `cap`, with `τ(0) = 1`.
fn series(cap: u32) -> impl Strategy<Value = TauSeries> {
    let shape = multisets_up_to(3, cap);
    let n = shape.len();
    prop::collection::vec(rational(), n).prop_map(move |cs| {
        let mut tau = TauSeries::one(3, cap, Params::D);
        let alphabet = tau.alphabet().clone();
        for (i, (m, c)) in shape.iter().zip(cs).enumerate() {
            let p = ParamPoly::param(&alphabet, 1 + i % 2);
            tau.set(m.clone(), &p.scale(&c) + &ParamPoly::constant(&alphabet, ratio(i as i64 % 3, 1)));
        }
        tau
    })
}

proptest! {
    #[test]
    fn param_poly_ring_axioms(a in param_poly(), b in param_poly(), c in param_poly()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert!(a.terms().all(|(_, q)| *q != Rational::from_integer(0.into())));
    }

    #[test]
    fn identity_substitution(a in param_poly()) {
        let ids: Vec<_> = (1..=3).map(|i| ParamPoly::param(&alphabet(), i)).collect();
        prop_assert_eq!(a.substitute(&ids).unwrap(), a);
    }

    #[test]
    fn leibniz_rule(p in diff_poly(), q in diff_poly()) {
        prop_assert_eq!((&p * &q).diff_x(), &(&p.diff_x() * &q) + &(&p * &q.diff_x()));
    }

    #[test]
    fn derivative_raises_grading(m in jet_monomial(), c in rational()) {
        prop_assume!(c != Rational::from_integer(0.into()));
        let p = DiffPoly::monomial(m.clone(), c);
        let dp = p.diff_x();
        prop_assert!(dp.is_zero() || dp.grading().unwrap() == m.degree() + 1);
    }

    #[test]
    fn psido_composition_is_associative(a in psido(), b in psido(), c in psido()) {
        let floor = -3;
        let ab = a.compose(&b, floor - 4).unwrap();
        let bc = b.compose(&c, floor - 4).unwrap();
        let left = ab.compose(&c, floor).unwrap().truncate(floor);
        let right = a.compose(&bc, floor).unwrap().truncate(floor);
        prop_assert_eq!(left.dump(), right.dump());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn integrate_inverts_derivative(p in diff_poly()) {
        let no_constant = &p - &DiffPoly::constant(p.constant_term());
        prop_assert_eq!(p.diff_x().integrate_x().unwrap(), no_constant);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn exp_and_log_are_inverse(tau in series(6)) {
        let log = tau.log();
        prop_assert_eq!(log.exp(), tau);
    }

    #[test]
    fn correlator_kinds_round_trip(tau in series(6)) {
        let table = tau.to_correlators(CorrelatorKind::Disconnected);
        let back = table.convert(CorrelatorKind::Connected).convert(CorrelatorKind::Disconnected);
        prop_assert_eq!(back.to_series(), tau);
    }

    #[test]
    fn euler_commutator_shifts_weight(tau in series(7), alpha in 1u32..=2, dq in 0u32..=1) {
        // [W_{1,1}, W_{alpha,q}] = -(q - alpha) r W_{alpha,q}
        let w11 = WOperatorSpec::new(3, 1, 1).unwrap();
        let spec = WOperatorSpec::new(3, alpha, alpha + dq).unwrap();
        let left = apply_wred(&w11, &apply_wred(&spec, &tau).unwrap()).unwrap();
        let right = apply_wred(&spec, &apply_wred(&w11, &tau).unwrap()).unwrap();
        let lhs = left.sub(&right).unwrap();
        let factor = ParamPoly::constant(tau.alphabet(), ratio(-((dq * 3) as i64), 1));
        let rhs = apply_wred(&spec, &tau).unwrap().truncate(lhs.weight_cap()).scale(&factor);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn triangular_maps_invert(lower in prop::collection::vec(param_poly(), 3), scales in prop::collection::vec(1i64..=5, 3)) {
        // y_a = s_a x_a + (terms in x_1..x_{a-1})
        let x = alphabet();
        let images: Vec<ParamPoly> = (0..3)
            .map(|a| {
                let keep: Vec<(Vec<u32>, Rational)> = lower[a]
                    .terms()
                    .filter(|(e, _)| e[a..].iter().all(|&k| k == 0))
                    .map(|(e, q)| (e.clone(), q.clone()))
                    .collect();
                let g = ParamPoly::from_terms(&x, keep);
                let g = &g - &ParamPoly::constant(&x, g.constant_term());
                &ParamPoly::param(&x, a + 1).scale(&ratio(scales[a], 1)) + &g
            })
            .collect();
        let inverse = invert_triangular(&images, Params::D).unwrap();
        for (a, y) in images.iter().enumerate() {
            prop_assert_eq!(y.substitute(&inverse).unwrap(), ParamPoly::param(&Params::D.alphabet(4), a + 1));
        }
    }

    #[test]
    fn sub_multiset_count(indices in prop::collection::vec(1u32..=5, 0..6)) {
        let m = Multiset::new(indices);
        let expected: usize = m.counts().iter().map(|(_, n)| n + 1).product();
        prop_assert_eq!(m.sub_multisets().len(), expected);
    }
}

#[test]
fn root_property_symbolic() {
    for r in 2..=5 {
        let lax = LaxOperator::new(r);
        let floor = -6;
        let root = rth_root(&lax, floor - r as i64 + 1).unwrap();
        let mut acc = root.clone();
        for m in 2..=r as i64 {
            acc = acc.compose(&root, floor - (r as i64 - m)).unwrap();
        }
        assert_eq!(acc.truncate(floor).dump(), lax.operator().truncate(floor).dump(), "r={r}");
    }
}

#[test]
fn parser_reads_table_notation() {
    let c = Alphabet::indexed("c", 2);
    let one = ParamPoly::one(&c);
    let (c1, c2) = (ParamPoly::param(&c, 1), ParamPoly::param(&c, 2));
    let expected = &(&c2 * &c2) - &(&c1 * &(&c1 + &one)).scale(&ratio(2, 1));
    assert_eq!(common::poly(&c, "c2^2 - 2c1(c1+1)"), expected);
    assert_eq!(common::poly(&c, "(c1+2)c2/2").to_string(), "1/2*c2*c1 + c2");
}

#[test]
fn fractional_powers_are_graded() {
    // coefficient of ∂^e in L^{i/r} has grading i - e
    std::thread::scope(|s| {
        for r in 2..=5u32 {
            s.spawn(move || graded_powers(r));
        }
    });
}

fn graded_powers(r: u32) {
    let lax = LaxOperator::new(r);
    for i in 1..=8u32 {
        let p = frac_power(&lax, i, -6).unwrap().truncate(-6);
        for (e, c) in p.coeffs() {
            if !c.is_zero() {
                assert_eq!(c.grading().unwrap(), i as i64 - e, "r={r} i={i} e={e}");
            }
        }
        if i % r == 0 {
            assert!(p.residue().unwrap().is_zero(), "r={r} i={i}");
        }
        let flow = p.plus_part().commutator(lax.operator(), 0).unwrap();
        assert!(flow.coeffs().all(|(e, c)| c.is_zero() || (0..=r as i64 - 2).contains(&e)), "r={r} i={i}");
    }
}
