#![allow(dead_code)]

use std::sync::Arc;

use gvkit::{int, parse_form, parse_vector, Chart, DifferentialForm, FoliationFamily, VectorField};

pub fn sl2() -> Arc<Chart> {
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

pub fn sl2xsl2() -> Arc<Chart> {
    let a = sl2();
    let n = |s: &str| s.to_string();
    Chart::lie_direct_sum(&a, &a, vec![n("H1"), n("E1"), n("F1"), n("H2"), n("E2"), n("F2")]).unwrap()
}

pub fn heisenberg() -> Arc<Chart> {
    let n = |s: &str| s.to_string();
    Chart::lie_from_brackets(vec![n("X"), n("Y"), n("Z")], &[(0, 1, vec![int(0), int(0), int(1)])]).unwrap()
}

pub fn t3() -> Arc<Chart> {
    Chart::torus(&["x", "y", "z"]).unwrap()
}

pub fn form(chart: &Arc<Chart>, s: &str) -> DifferentialForm {
    parse_form(chart, s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

pub fn vector(chart: &Arc<Chart>, s: &str) -> VectorField {
    parse_vector(chart, s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

pub fn family(chart: &Arc<Chart>, alphas: &[&str], frame: &[&str]) -> FoliationFamily {
    let alphas = alphas.iter().map(|a| form(chart, a)).collect();
    let frame = frame.iter().map(|x| vector(chart, x)).collect();
    FoliationFamily::new(alphas).unwrap().with_transversal(frame).unwrap().solve().unwrap()
}

pub fn torus_linear() -> FoliationFamily {
    family(&t3(), &["dz"], &["e_z"])
}

pub fn torus_graph() -> FoliationFamily {
    family(&t3(), &["dz - t*sin(x)*cos(z) * dx"], &["e_z"])
}

pub fn sl2_roussarie() -> FoliationFamily {
    family(&sl2(), &["th_E"], &["e_E"])
}

pub fn sl2_flow() -> FoliationFamily {
    family(&sl2(), &["exp(2*t) * th_E"], &["exp(-2*t) * e_E"])
}

pub fn sl2xsl2_codim2() -> FoliationFamily {
    family(&sl2xsl2(), &["th_E1", "th_E2"], &["e_E1", "e_E2"])
}

pub fn sl2xsl2_flow() -> FoliationFamily {
    family(&sl2xsl2(), &["exp(2*t) * th_E1", "exp(2*t) * th_E2"], &["exp(-2*t) * e_E1", "exp(-2*t) * e_E2"])
}

pub fn all_families() -> Vec<(&'static str, FoliationFamily)> {
    vec![
        ("torus_linear", torus_linear()),
        ("torus_graph", torus_graph()),
        ("sl2_roussarie", sl2_roussarie()),
        ("sl2_flow", sl2_flow()),
        ("sl2xsl2_codim2", sl2xsl2_codim2()),
    ]
}
