//! Fixtures shared by the benchmarks.

use std::sync::Arc;

use gvkit::random::{random_form, seeded, ScalarGen};
use gvkit::{int, parse_form, parse_vector, Chart, DifferentialForm, FoliationFamily};
use rand::Rng;

pub fn torus(n: usize) -> Arc<Chart> {
    let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    Chart::torus(&refs).expect("valid torus")
}

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
    .expect("valid structure constants")
}

/// Random forms of mixed degree, reproducible from `seed`.
pub fn forms(chart: &Arc<Chart>, count: usize, seed: u64) -> Vec<DifferentialForm> {
    let mut rng = seeded(seed);
    let gen = ScalarGen::default();
    (0..count)
        .map(|_| {
            let degree = rng.gen_range(1..chart.dim());
            random_form(chart, degree, &gen, 3, &mut rng)
        })
        .collect()
}

pub fn torus_graph() -> FoliationFamily {
    let c = Chart::torus(&["x", "y", "z"]).expect("valid torus");
    let alpha = parse_form(&c, "dz - t*sin(x)*cos(z) * dx").expect("literal");
    let frame = parse_vector(&c, "e_z").expect("literal");
    FoliationFamily::new(vec![alpha])
        .and_then(|f| f.with_transversal(vec![frame]))
        .and_then(|f| f.solve())
        .expect("integrable")
}
