use hyperschwarz::forms::{delta, eisenstein, eta_power, j_inverse, serre_derivative};
use hyperschwarz::hypergeometric::{hypergeom_coeffs, Component, ComponentRecipe, HypergeomParams};
use hyperschwarz::numeric::{cross_check, eval_qseries, ComplexValue};
use hyperschwarz::series::{int, ratio, PuiseuxSeries, QSeries, Rational};
use hyperschwarz::solver::{schwarz_derivative, solve};
use hyperschwarz::vvmf::{minimal_form, raise_weight, wronskian_check, ReprData};
use num_traits::Zero;
use proptest::prelude::*;

#[test]
fn discriminant_identity_through_order_200() {
    for n in [1, 2, 3, 17, 64, 128, 200] {
        let e4 = eisenstein(4, n).unwrap();
        let e6 = eisenstein(6, n).unwrap();
        let d = delta(n).unwrap();
        assert_eq!(&e4.pow_int(3) - &e6.pow_int(2), d.scale(&int(1728)), "order {n}");
        assert_eq!(d.order(), n);
    }
}

#[test]
fn delta_is_q_times_eta24_body() {
    let n = 120;
    let eta24 = eta_power(24, n).unwrap();
    assert_eq!(eta24.offset(), &int(1));
    assert_eq!(delta(n).unwrap(), eta24.body().shift_up(1).truncate(n));
}

#[test]
fn delta_is_serre_flat_and_j_inverse_clears_e4_cube() {
    for n in [5, 40, 150] {
        let d = PuiseuxSeries::from_qseries(delta(n).unwrap());
        assert!(serre_derivative(&d, &int(12)).is_zero(), "order {n}");
        let e4 = eisenstein(4, n).unwrap();
        assert_eq!(&j_inverse(n).unwrap() * &e4.pow_int(3), delta(n).unwrap().scale(&int(1728)));
    }
}

#[test]
fn eisenstein_coefficients_are_integers() {
    for k in [2, 4, 6] {
        assert!(eisenstein(k, 150).unwrap().coeffs().iter().all(|c| c.is_integer()));
    }
}

/// `(x/2 + 1/12, x/2 + 5/12; x + 1)` written out once and evaluated at
/// `x = +n'/m` and `x = -n'/m`.
fn recipe_params(x: &Rational) -> (Rational, Rational, Rational) {
    let half = x / int(2);
    (&half + ratio(1, 12), &half + ratio(5, 12), x + int(1))
}

#[test]
fn components_come_from_one_formula_with_sign_flipped() {
    for (m, np) in [(7u64, 1u64), (7, 3), (8, 3), (12, 5), (13, 6)] {
        let x = ratio(np as i64, m as i64);
        for (component, sign) in [(Component::First, x.clone()), (Component::Second, -x.clone())] {
            let r = ComponentRecipe::new(m, np, component).unwrap();
            let (a, b, c) = recipe_params(&sign);
            assert_eq!((r.params.a(), r.params.b(), r.params.c()), (&a, &b, &c), "({m}, {np}) {component:?}");
            assert_eq!(r.expected_offset(), ratio(10, 24) + &sign / int(2) + ratio(1, 12));
        }
        let f = minimal_form(&ReprData::new(m, np).unwrap(), 8).unwrap();
        assert_eq!(f.first.offset() + f.second.offset(), int(1));
    }
}

#[test]
fn iterated_raising_climbs_one_delta_power_per_step() {
    let repr = ReprData::new(9, 4).unwrap();
    let mut form = minimal_form(&repr, 24).unwrap();
    for level in 0..4 {
        let (c, e) = wronskian_check(&form, 18).unwrap();
        assert_eq!(e, int(level + 1));
        assert!(!c.is_zero());
        let next = raise_weight(&form).unwrap();
        assert_eq!(next.second.offset(), form.second.offset());
        assert_eq!(next.first.offset(), &(form.first.offset() + int(1)));
        assert_eq!(next.weight, &form.weight + int(6));
        form = next;
    }
}

/// Re-expand `h = q^(n/m) u(q)` in `t = q^(1/m)`: integral offset `n`,
/// body supported on multiples of `m`.
fn in_root_variable(h: &PuiseuxSeries, m: usize, order: usize) -> PuiseuxSeries {
    let mut coeffs = vec![Rational::zero(); order];
    for (i, c) in h.body().coeffs().iter().enumerate() {
        if i * m < order {
            coeffs[i * m] = c.clone();
        }
    }
    let offset = h.offset() * int(m as i64);
    PuiseuxSeries::new(offset, QSeries::from_coeffs(coeffs))
}

#[test]
fn schwarzian_of_solution_is_translation_invariant() {
    // D_q = (1/m) D_t, so {h}_q at q^i is {H}_t at t^(mi) divided by m^2.
    let (m, n, terms) = (7usize, 2u64, 12);
    let b = solve(m as u64, n, terms).unwrap();
    let big = in_root_variable(&b.h, m, m * (terms - 1) + 1);
    let s_t = schwarz_derivative(&big).unwrap();
    for c in [int(1), ratio(-7, 3), int(1728)] {
        let shifted = big.add(&PuiseuxSeries::from_qseries(QSeries::constant(c, big.order() + n as usize))).unwrap();
        assert_eq!(schwarz_derivative(&shifted).unwrap(), s_t);
    }
    let mm = int((m * m) as i64);
    for i in 0..terms - 2 {
        assert_eq!(s_t.coeff(m * i), &(b.schwarzian.coeff(i) * &mm), "coefficient {i}");
        if i > 0 {
            assert!((1..m).all(|j| s_t.coeff(m * (i - 1) + j).is_zero()));
        }
    }
}

#[test]
fn cross_check_error_decreases_with_terms() {
    let tau = ComplexValue::new(0.0, 1.25);
    let floor = 1e-13;
    for (m, n) in [(7, 1), (8, 3), (9, 2)] {
        let errors: Vec<f64> =
            [2, 4, 8, 16, 32].iter().map(|&t| cross_check(m, n, tau, t).unwrap().rel_error).collect();
        for w in errors.windows(2) {
            assert!(w[1] <= w[0].max(floor), "({m}, {n}): {errors:?}");
        }
        assert!(errors[errors.len() - 1] < 1e-9, "({m}, {n}): {errors:?}");
    }
}

#[test]
fn evaluation_is_deterministic() {
    let b = solve(8, 3, 30).unwrap();
    let tau = ComplexValue::new(0.21, 1.4);
    let first = eval_qseries(&b.h, tau, 30).unwrap();
    for _ in 0..5 {
        let again = eval_qseries(&b.h, tau, 30).unwrap();
        assert_eq!((first.re.to_bits(), first.im.to_bits()), (again.re.to_bits(), again.im.to_bits()));
    }
    let r1 = cross_check(8, 3, ComplexValue::new(0.0, 2.0), 20).unwrap();
    let r2 = cross_check(8, 3, ComplexValue::new(0.0, 2.0), 20).unwrap();
    assert_eq!(r1, r2);
    assert_eq!(solve(8, 3, 20).unwrap().h, solve(8, 3, 20).unwrap().h);
}

fn param() -> impl Strategy<Value = Rational> {
    (-30i64..=30, 1i64..=12).prop_map(|(n, d)| ratio(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hypergeometric_parameters_commute(a in param(), b in param(), c in param()) {
        prop_assume!(!(c.is_integer() && c <= int(0)));
        let p = HypergeomParams::new(a.clone(), b.clone(), c.clone()).unwrap();
        let q = HypergeomParams::new(b, a, c).unwrap();
        prop_assert_eq!(hypergeom_coeffs(&p, 10), hypergeom_coeffs(&q, 10));
    }

    #[test]
    fn schwarzian_invariant_under_inverse_and_translation(
        k in 1i64..4,
        rest in prop::collection::vec((-9i64..=9, 1i64..=5), 7),
        c in (-9i64..=9, 1i64..=5),
    ) {
        let mut coeffs = vec![int(1)];
        coeffs.extend(rest.into_iter().map(|(n, d)| ratio(n, d)));
        let h = PuiseuxSeries::new(int(k), QSeries::from_coeffs(coeffs));
        let sd = schwarz_derivative(&h).unwrap();
        let shifted = h.add(&PuiseuxSeries::from_qseries(QSeries::constant(ratio(c.0, c.1), h.order() + k as usize))).unwrap();
        prop_assert_eq!(schwarz_derivative(&shifted).unwrap(), sd.clone());
        let inv = PuiseuxSeries::monomial(int(0), h.order()).div(&h).unwrap();
        prop_assert_eq!(schwarz_derivative(&inv).unwrap(), sd);
    }
}
