use std::sync::Arc;

use proptest::prelude::*;
use rand::Rng;

use super::*;
use crate::parse::{parse_form, parse_vector};
use crate::random::{random_form, random_vector, seeded, ScalarGen, SeededRng};
use crate::scalar::{int, rat, Rational, Scalar};

fn plane() -> Arc<Chart> {
    Chart::coordinate(&[("x", true), ("y", true), ("u", false)]).unwrap()
}

fn sl2() -> Arc<Chart> {
    let n = |s: &str| s.to_string();
    Chart::lie_from_brackets(
        vec![n("H"), n("E"), n("F")],
        &[
            (0, 1, vec![int(0), int(2), int(0)]),
            (0, 2, vec![int(0), int(0), int(-2)]),
            (1, 2, vec![int(1), int(0), int(0)]),
        ],
    )
    .unwrap()
}

fn f(chart: &Arc<Chart>, s: &str) -> DifferentialForm {
    parse_form(chart, s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

fn backends() -> Vec<Arc<Chart>> {
    vec![plane(), sl2()]
}

fn any_form(chart: &Arc<Chart>, rng: &mut SeededRng) -> DifferentialForm {
    let degree = rng.gen_range(0..=chart.dim());
    random_form(chart, degree, &ScalarGen::default(), 3, rng)
}

#[test]
fn wedge_examples() {
    let c = plane();
    assert_eq!(f(&c, "dx").wedge(&f(&c, "dy")).unwrap(), f(&c, "dx^dy"));
    assert!(f(&c, "dx").wedge(&f(&c, "dx")).unwrap().is_zero());
    assert_eq!(f(&c, "sin(x) * dx").wedge(&f(&c, "cos(x) * dy")).unwrap(), f(&c, "1/2*sin(2*x) * dx^dy"));
    assert_eq!(f(&c, "dy").wedge(&f(&c, "dx")).unwrap(), f(&c, "-dx^dy"));
}

#[test]
fn wedge_rejects_chart_mismatch() {
    assert!(matches!(f(&plane(), "dx").wedge(&f(&sl2(), "th_H")), Err(FormError::ChartMismatch)));
}

#[test]
fn d_examples() {
    let c = plane();
    assert_eq!(f(&c, "sin(x) * dy").d(), f(&c, "cos(x) * dx^dy"));
    assert!(f(&c, "cos(x) * dx").d().is_zero());
    let g = sl2();
    assert_eq!(f(&g, "th_E").d(), f(&g, "-2 * th_H^th_E"));
    assert_eq!(f(&g, "th_F").d(), f(&g, "2 * th_H^th_F"));
    assert_eq!(f(&g, "th_H").d(), f(&g, "-th_E^th_F"));
}

#[test]
fn lie_d_matches_bracket_evaluation() {
    // d th(X, Y) = -th([X, Y]) on basis pairs
    let g = sl2();
    let ChartKind::Lie { structure } = g.kind() else { unreachable!() };
    for k in 0..3 {
        let dk = DifferentialForm::basis(&g, k).unwrap().d();
        for i in 0..3 {
            for j in 0..3 {
                let xi = VectorField::basis(&g, i).unwrap();
                let xj = VectorField::basis(&g, j).unwrap();
                let val = dk.interior(&xi).unwrap().interior(&xj).unwrap().scalar();
                // i_Y i_X w = w(X, Y)
                assert_eq!(val, Scalar::constant(g.table(), -structure[k][i][j].clone()));
            }
        }
    }
}

#[test]
fn ddt_examples() {
    let c = plane();
    assert_eq!(f(&c, "t * dx").ddt(), f(&c, "dx"));
    assert!(f(&c, "dx").ddt().is_zero());
}

#[test]
fn interior_examples() {
    let c = plane();
    let ex = parse_vector(&c, "e_x").unwrap();
    assert_eq!(f(&c, "dx^dy").interior(&ex).unwrap(), f(&c, "dy"));
    assert!(f(&c, "dy").interior(&ex).unwrap().is_zero());
    assert_eq!(f(&c, "dy^dx").interior(&ex).unwrap(), f(&c, "-dy"));
}

#[test]
fn lie_derivative_examples() {
    let c = plane();
    let ex = parse_vector(&c, "e_x").unwrap();
    assert_eq!(f(&c, "sin(x) * dx").lie_derivative(&ex).unwrap(), f(&c, "cos(x) * dx"));
    assert!(f(&c, "dy").lie_derivative(&ex).unwrap().is_zero());
    let g = sl2();
    let minus_h = parse_vector(&g, "-e_H").unwrap();
    assert_eq!(f(&g, "th_E").lie_derivative(&minus_h).unwrap(), f(&g, "2 * th_E"));
}

#[test]
fn degree_above_dimension_is_zero() {
    let g = sl2();
    let top = f(&g, "th_H^th_E^th_F");
    assert!(top.wedge(&f(&g, "th_H")).unwrap().is_zero());
    assert!(DifferentialForm::zero(&g, 5).is_zero());
}

#[test]
fn top_coefficient_requires_top_degree() {
    let g = sl2();
    assert_eq!(f(&g, "-4 * th_H^th_E^th_F").top_coefficient().unwrap(), Scalar::integer(g.table(), -4));
    assert!(matches!(f(&g, "th_H").top_coefficient(), Err(FormError::NotTopDegree { .. })));
}

#[test]
fn corrupted_sl2_violates_jacobi() {
    let n = |s: &str| s.to_string();
    let res = Chart::lie_from_brackets(
        vec![n("H"), n("E"), n("F")],
        &[
            (0, 1, vec![int(0), int(2), int(0)]),
            (0, 2, vec![int(0), int(0), int(-2)]),
            (1, 2, vec![int(1), int(1), int(0)]),
        ],
    );
    assert!(matches!(res, Err(FormError::JacobiViolated { .. })));
}

#[test]
fn non_antisymmetric_table_is_rejected() {
    let mut c = vec![vec![vec![Rational::from_integer(0.into()); 2]; 2]; 2];
    c[0][0][1] = rat(1, 1);
    assert!(matches!(Chart::lie(vec!["a".into(), "b".into()], c), Err(FormError::NotAntisymmetric { .. })));
}

#[test]
fn heisenberg_is_a_valid_lie_chart() {
    let n = |s: &str| s.to_string();
    let h = Chart::lie_from_brackets(vec![n("X"), n("Y"), n("Z")], &[(0, 1, vec![int(0), int(0), int(1)])]).unwrap();
    assert_eq!(f(&h, "th_Z").d(), f(&h, "-th_X^th_Y"));
}

#[test]
fn d_squared_vanishes_on_300_forms_per_backend() {
    for chart in backends() {
        let mut rng = seeded(1);
        for _ in 0..300 {
            let a = any_form(&chart, &mut rng);
            assert!(a.d().d().is_zero(), "{a}");
        }
    }
}

#[test]
fn graded_leibniz_on_300_pairs() {
    for chart in backends() {
        let mut rng = seeded(2);
        for _ in 0..300 {
            let a = any_form(&chart, &mut rng);
            let b = any_form(&chart, &mut rng);
            let lhs = a.wedge(&b).unwrap().d();
            let sign = if a.degree().is_multiple_of(2) { int(1) } else { int(-1) };
            let rhs = &a.d().wedge(&b).unwrap() + &a.wedge(&b.d()).unwrap().scale_rational(&sign);
            assert!(lhs.equals(&rhs).unwrap());
        }
    }
}

#[test]
fn ddt_commutes_with_d_on_200_forms() {
    for chart in backends() {
        let mut rng = seeded(3);
        for _ in 0..200 {
            let a = any_form(&chart, &mut rng);
            assert_eq!(a.d().ddt(), a.ddt().d());
        }
    }
}

#[test]
fn ddt_is_a_derivation_of_wedge() {
    let chart = plane();
    let mut rng = seeded(4);
    for _ in 0..100 {
        let a = any_form(&chart, &mut rng);
        let b = any_form(&chart, &mut rng);
        let lhs = a.wedge(&b).unwrap().ddt();
        let rhs = &a.ddt().wedge(&b).unwrap() + &a.wedge(&b.ddt()).unwrap();
        assert!(lhs.equals(&rhs).unwrap());
    }
}

#[test]
fn interior_antiderivation_on_200_triples() {
    for chart in backends() {
        let mut rng = seeded(5);
        for _ in 0..200 {
            let x = random_vector(&chart, &ScalarGen::small(), &mut rng);
            let a = any_form(&chart, &mut rng);
            let b = any_form(&chart, &mut rng);
            if a.degree() + b.degree() == 0 {
                continue;
            }
            let lhs = a.wedge(&b).unwrap().interior(&x).unwrap();
            let sign = if a.degree().is_multiple_of(2) { int(1) } else { int(-1) };
            // i_X vanishes on functions, so those terms drop out
            let first = (a.degree() > 0).then(|| a.interior(&x).unwrap().wedge(&b).unwrap());
            let second = (b.degree() > 0).then(|| a.wedge(&b.interior(&x).unwrap()).unwrap().scale_rational(&sign));
            let rhs = [first, second]
                .into_iter()
                .flatten()
                .fold(DifferentialForm::zero(&chart, lhs.degree()), |acc, t| &acc + &t);
            assert!(lhs.equals(&rhs).unwrap());
            assert!(a.interior(&x).unwrap().interior(&x).unwrap().is_zero());
        }
    }
}

#[test]
fn lie_derivative_commutes_with_d() {
    for chart in backends() {
        let mut rng = seeded(6);
        for _ in 0..100 {
            let x = random_vector(&chart, &ScalarGen::small(), &mut rng);
            let a = any_form(&chart, &mut rng);
            assert!(a.d().lie_derivative(&x).unwrap().equals(&a.lie_derivative(&x).unwrap().d()).unwrap());
        }
    }
}

#[test]
fn circle_extension_pullback_keeps_d() {
    for chart in backends() {
        let big = chart.extend_by_circle("s").unwrap();
        assert!(chart.is_prefix_of(&big));
        let mut rng = seeded(7);
        for _ in 0..50 {
            let a = any_form(&chart, &mut rng);
            let pa = a.pullback_to(&big).unwrap();
            assert_eq!(pa.d(), a.d().pullback_to(&big).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn graded_commutativity(seed in any::<u64>()) {
        for chart in backends() {
            let mut rng = seeded(seed);
            let a = any_form(&chart, &mut rng);
            let b = any_form(&chart, &mut rng);
            let sign = if (a.degree() * b.degree()).is_multiple_of(2) { int(1) } else { int(-1) };
            prop_assert!(a.wedge(&b).unwrap().equals(&b.wedge(&a).unwrap().scale_rational(&sign)).unwrap());
        }
    }

    #[test]
    fn wedge_is_associative(seed in any::<u64>()) {
        let chart = plane();
        let mut rng = seeded(seed);
        let gen = ScalarGen::small();
        let a = random_form(&chart, 1, &gen, 2, &mut rng);
        let b = random_form(&chart, 1, &gen, 2, &mut rng);
        let c = random_form(&chart, 1, &gen, 2, &mut rng);
        let lhs = a.wedge(&b).unwrap().wedge(&c).unwrap();
        let rhs = a.wedge(&b.wedge(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn display_round_trips(seed in any::<u64>()) {
        for chart in backends() {
            let mut rng = seeded(seed);
            let a = any_form(&chart, &mut rng);
            let back = parse_form(&chart, &a.to_string()).unwrap();
            prop_assert!(back.equals(&a).unwrap(), "{} -> {}", a, back);
            let x = random_vector(&chart, &ScalarGen::default(), &mut rng);
            let xv = parse_vector(&chart, &x.to_string()).unwrap();
            prop_assert_eq!(xv, x);
        }
    }
}
