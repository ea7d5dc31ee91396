mod common;

use common::*;
use gvkit::foliation::FoliationError;
use gvkit::random::{random_form, seeded, ScalarGen};
use gvkit::{admissible_variations, int, DifferentialForm, FoliationFamily, InfinitesimalVariation};
use rand::Rng;

#[test]
fn integrability_examples() {
    let c = t3();
    assert!(FoliationFamily::new(vec![form(&c, "dz")]).unwrap().check_integrability());
    assert!(FoliationFamily::new(vec![form(&c, "dz - (t*sin(x - 2*z) + cos(3*z)) * dx")])
        .unwrap()
        .check_integrability());
    let g = sl2();
    let tilted = FoliationFamily::new(vec![form(&g, "th_E + t * th_F")]).unwrap();
    assert!(!tilted.check_integrability());
    let defect = &tilted.integrability_defects()[0];
    // 4t th_E^th_H^th_F
    assert_eq!(*defect, form(&g, "-4*t * th_H^th_E^th_F"));
}

#[test]
fn heisenberg_fails_integrability_with_diagnostic() {
    let h = heisenberg();
    let fam = FoliationFamily::new(vec![form(&h, "th_Z")]).unwrap().with_transversal(vec![vector(&h, "e_Z")]).unwrap();
    assert!(!fam.check_integrability());
    assert_eq!(form(&h, "th_Z").wedge(&form(&h, "th_Z").d()).unwrap(), form(&h, "-th_X^th_Y^th_Z"));
    match fam.solve() {
        Err(FoliationError::NotIntegrable { index: 1, defect }) => assert!(defect.contains("th_X^th_Y^th_Z")),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn solve_beta_examples() {
    let lin = torus_linear();
    assert!(lin.beta().unwrap().is_zero());
    let s = sl2_roussarie();
    assert_eq!(*s.beta().unwrap(), form(&sl2(), "2 * th_H"));
    let g = torus_graph();
    // beta = -u_z dx with u = t sin(x) cos(z)
    assert_eq!(*g.beta().unwrap(), form(&t3(), "t*sin(x)*sin(z) * dx"));
}

#[test]
fn missing_transversal_is_reported() {
    let fam = FoliationFamily::new(vec![form(&t3(), "dz")]).unwrap();
    assert!(matches!(fam.solve(), Err(FoliationError::MissingTransversal)));
}

#[test]
fn non_dual_transversal_is_rejected() {
    let fam = FoliationFamily::new(vec![form(&t3(), "dz")]).unwrap();
    assert!(matches!(fam.with_transversal(vec![vector(&t3(), "2 * e_z")]), Err(FoliationError::NotDual { .. })));
}

#[test]
fn wrong_user_beta_fails_verification() {
    let g = sl2();
    let fam = FoliationFamily::new(vec![form(&g, "th_E")])
        .unwrap()
        .with_transversal(vec![vector(&g, "e_E")])
        .unwrap()
        .with_beta(form(&g, "th_H"));
    assert!(matches!(fam.solve(), Err(FoliationError::Verification { .. })));
    let ok = FoliationFamily::new(vec![form(&g, "th_E")])
        .unwrap()
        .with_transversal(vec![vector(&g, "e_E")])
        .unwrap()
        .with_beta(form(&g, "2*th_H + 5*th_E"))
        .solve();
    assert!(ok.is_ok());
}

#[test]
fn gamma_chain_examples() {
    let s = sl2_roussarie();
    let g = sl2();
    assert_eq!(*s.gamma().unwrap(), form(&g, "-2 * th_F"));
    assert!(s.delta().unwrap().is_zero());
    assert!(s.epsilon().unwrap().is_zero());

    let lin = torus_linear();
    assert!(lin.gamma().unwrap().is_zero() && lin.delta().unwrap().is_zero() && lin.epsilon().unwrap().is_zero());

    // gamma = -u_zz dx, delta = -u_zzz dx, epsilon = -u_zzzz dx up to beta terms
    let tg = torus_graph();
    let c = t3();
    assert_eq!(*tg.gamma().unwrap(), form(&c, "t*sin(x)*cos(z) * dx"));
    assert!(!tg.delta().unwrap().is_zero());
}

#[test]
fn codim_two_chain_and_forms() {
    let p = sl2xsl2_codim2();
    let c = sl2xsl2();
    assert_eq!(*p.beta().unwrap(), form(&c, "-2 * th_H1 - 2 * th_H2"));
    assert_eq!(p.gammas().unwrap().len(), 2);
    assert!(matches!(p.delta(), Err(FoliationError::RequiresCodimOne(_))));
    assert_eq!(
        p.gv_form().unwrap(),
        form(&c, "-16 * th_H1^th_E1^th_F1^th_E2^th_F2 - 16 * th_E1^th_F1^th_H2^th_E2^th_F2")
    );
    p.gamma_product().unwrap();
}

#[test]
fn gv_examples() {
    assert!(torus_linear().gv_form().unwrap().is_zero());
    assert_eq!(sl2_roussarie().gv_form().unwrap(), form(&sl2(), "-4 * th_H^th_E^th_F"));
    assert_eq!(sl2_flow().gv_form().unwrap(), form(&sl2(), "-4 * th_H^th_E^th_F"));
}

#[test]
fn tgv_and_t_forms() {
    for (_, fam) in all_families() {
        fam.tgv_form().unwrap();
        let t = fam.t_form().unwrap();
        assert!(t.d().is_zero());
        fam.reeb_rep().unwrap();
    }
    let tg = torus_graph();
    assert!(!tg.beta().unwrap().ddt().is_zero());
    assert!(tg.tgv_form().unwrap().is_zero());
    assert!(sl2_roussarie().tgv_form().unwrap().is_zero());
}

#[test]
fn ideal_membership_examples() {
    for (_, fam) in all_families() {
        for a in fam.alphas() {
            assert!(fam.ideal_membership(a).unwrap());
        }
        assert!(fam.ideal_membership(&fam.beta().unwrap().d()).unwrap());
    }
    assert!(!torus_linear().ideal_membership(&form(&t3(), "dx")).unwrap());
}

#[test]
fn gv_derivative_identity_on_all_families() {
    for (id, fam) in all_families() {
        let w = fam.gv_derivative_identity().unwrap_or_else(|e| panic!("{id}: {e}"));
        assert!(w.residual_is_zero());
        if fam.q() >= 2 {
            assert_eq!(w.in_ideal, Some(true));
        }
    }
    // beta = t sigma on T^3
    let c = t3();
    let fam = FoliationFamily::new(vec![form(&c, "dz")])
        .unwrap()
        .with_transversal(vec![vector(&c, "e_z")])
        .unwrap()
        .with_beta(form(&c, "t*cos(z) * dz"))
        .solve()
        .unwrap();
    assert!(fam.gv_derivative_identity().unwrap().holds());
}

#[test]
fn vanishing_chain_on_codim_one_families() {
    for (id, fam) in all_families() {
        if fam.q() != 1 {
            continue;
        }
        let r = fam.vanishing_chain_check().unwrap();
        assert!(r.identities_hold(), "{id}: {} | {} | {}", r.identity_i, r.identity_ii, r.identity_iii);
        assert!(r.holds(), "{id}");
    }
    let s = sl2_roussarie().vanishing_chain_check().unwrap();
    assert!(s.delta_zero && s.tgv_exact());
    assert!(torus_linear().vanishing_chain_check().unwrap().beta_zero);
    let g = torus_graph().vanishing_chain_check().unwrap();
    assert!(!g.delta_zero);
}

#[test]
fn flow_checks() {
    let s = sl2_flow();
    let r = s.flow_family_check(&vector(&sl2(), "-e_H")).unwrap();
    assert!(r.t_witness.holds() && r.tgv_witness.unwrap().holds());
    let p = sl2xsl2_flow();
    let r = p.flow_family_check(&vector(&sl2xsl2(), "-e_H1 - e_H2")).unwrap();
    assert!(r.t_witness.holds());
    assert_eq!(r.t_witness.in_ideal, Some(true));
    // wrong generator
    assert!(matches!(s.flow_family_check(&vector(&sl2(), "e_H")), Err(FoliationError::Precondition(_))));
    // translation flow on T^3
    let lin = torus_linear();
    assert!(lin.flow_family_check(&vector(&t3(), "e_x")).unwrap().t_witness.holds());
}

#[test]
fn admissible_variations_for_sl2() {
    let s = sl2_roussarie();
    let basis = admissible_variations(&s).unwrap();
    assert_eq!(basis.len(), 2);
    let g = sl2();
    for b in &basis {
        assert!(b.coefficient(&[2]).is_zero(), "{b}");
    }
    let mut rng = seeded(20);
    for _ in 0..20 {
        let mut omega = DifferentialForm::zero(&g, 1);
        for b in &basis {
            omega = &omega + &b.scale_rational(&int(rng.gen_range(-9..=9)));
        }
        let v = InfinitesimalVariation::new(&s, &omega).unwrap();
        assert!(v.t_infinitesimal().unwrap().is_zero());
        v.dgv().unwrap();
    }
    assert!(InfinitesimalVariation::new(&s, &form(&g, "th_F")).is_err());
}

#[test]
fn dgv_examples() {
    let tg = torus_graph();
    let c = t3();
    // closed omega
    let v = InfinitesimalVariation::new(&tg, &form(&c, "dz + 2 * dx")).unwrap();
    assert!(v.dgv().unwrap().is_zero());
    let s = sl2_roussarie();
    let v = InfinitesimalVariation::new(&s, &form(&sl2(), "3 * th_E")).unwrap();
    // d(3 th_E) ^ 2 th_H ^ -2 th_F is a 4-form on a 3-dim chart
    assert!(v.dgv().unwrap().is_zero());
}

#[test]
fn ideal_products_of_length_q_plus_one_vanish() {
    let mut rng = seeded(77);
    let gen = ScalarGen::small();
    for (_, fam) in all_families() {
        let chart = fam.chart().clone();
        for _ in 0..100 {
            let mut prod: Option<DifferentialForm> = None;
            for _ in 0..=fam.q() {
                let i = rng.gen_range(0..fam.q());
                let deg = rng.gen_range(0..chart.dim());
                let rest = random_form(&chart, deg, &gen, 2, &mut rng);
                let member = fam.alphas()[i].wedge(&rest).unwrap();
                assert!(fam.ideal_membership(&member).unwrap());
                prod = Some(match prod {
                    None => member,
                    Some(p) => p.wedge(&member).unwrap(),
                });
            }
            assert!(prod.unwrap().is_zero());
        }
    }
}

#[test]
fn generalized_leibniz_on_ideal_tuples() {
    let mut rng = seeded(78);
    let gen = ScalarGen::small();
    for (_, fam) in all_families() {
        let chart = fam.chart().clone();
        for _ in 0..30 {
            let parts: Vec<DifferentialForm> = (0..=fam.q())
                .map(|_| {
                    let i = rng.gen_range(0..fam.q());
                    let deg = rng.gen_range(0..2);
                    fam.alphas()[i].wedge(&random_form(&chart, deg, &gen, 2, &mut rng)).unwrap()
                })
                .collect();
            let mut total: Option<DifferentialForm> = None;
            for k in 0..parts.len() {
                let mut acc: Option<DifferentialForm> = None;
                for (j, p) in parts.iter().enumerate() {
                    let f = if j == k { p.ddt() } else { p.clone() };
                    acc = Some(match acc {
                        None => f,
                        Some(a) => a.wedge(&f).unwrap(),
                    });
                }
                let acc = acc.unwrap();
                total = Some(match total {
                    None => acc,
                    Some(t) => &t + &acc,
                });
            }
            assert!(total.unwrap().is_zero());
        }
    }
}

#[test]
fn degenerate_alpha_is_rejected() {
    let c = t3();
    assert!(matches!(
        FoliationFamily::new(vec![form(&c, "dz"), form(&c, "2 * dz")]),
        Err(FoliationError::DegenerateAlpha)
    ));
    let fam = FoliationFamily::new(vec![form(&c, "dz - sin(x) * dx")]).unwrap();
    assert!(fam.check_nonvanishing_at(&[Some(0.0), Some(0.0), Some(0.0), Some(0.0)]).is_ok());
}
