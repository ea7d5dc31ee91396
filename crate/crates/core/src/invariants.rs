//! Invariant numbers: exact integration of top forms over closed charts and
//! the gv / tgv / dgv / igv values of a family.

use std::collections::BTreeMap;

use num::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::foliation::{FoliationError, FoliationFamily};
use crate::forms::{ChartKind, DifferentialForm, FormError};
use crate::scalar::{int, Rational, Scalar, ScalarError};
use crate::witness::WitnessRecord;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InvariantError {
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Foliation(#[from] FoliationError),
    #[error("coordinate `{0}` is not periodic; the chart is not closed")]
    NotClosed(String),
    #[error("integrand is not a function of t alone: {0}")]
    NotTOnly(String),
}

pub const NORMALIZATION: &str =
    "volume = wedge of basis covectors in chart order; Lie charts have unit volume; tori have volume (2 pi)^n";

/// Integral of a top-degree form over the closed model of the chart.
pub fn integrate_top(form: &DifferentialForm) -> Result<Scalar, InvariantError> {
    let chart = form.chart();
    let coefficient = form.top_coefficient()?;
    match chart.kind() {
        ChartKind::Lie { .. } => Ok(coefficient),
        ChartKind::Coordinate => {
            let table = chart.table();
            if let Some(i) = (0..table.coord_count()).find(|&i| !table.is_periodic(i)) {
                return Err(InvariantError::NotClosed(table.coord_name(i).to_string()));
            }
            let all: Vec<usize> = (0..table.coord_count()).collect();
            Ok(coefficient.integrate_periodic(&all)?)
        }
    }
}

/// `integrate_top`, with forms of the wrong degree integrating to zero.
pub fn integrate_or_zero(form: &DifferentialForm) -> Result<Scalar, InvariantError> {
    if form.degree() == form.chart().dim() {
        integrate_top(form)
    } else {
        Ok(Scalar::zero(form.chart().table()))
    }
}

/// True iff the form integrates to exactly zero over the closed chart.
pub fn exactness_probe(form: &DifferentialForm) -> Result<bool, InvariantError> {
    Ok(integrate_top(form)?.is_zero())
}

/// Composite Simpson rule on `nodes` equally spaced points (odd, >= 3).
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, nodes: usize) -> f64 {
    assert!(nodes >= 3 && nodes % 2 == 1, "Simpson needs an odd node count");
    let n = nodes - 1;
    let h = (b - a) / n as f64;
    let mut sum = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + i as f64 * h);
    }
    sum * h / 3.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NumericIntegral {
    pub value: f64,
    pub error_estimate: f64,
}

/// Simpson on 129 nodes with a Richardson correction from the 65-node rule.
pub fn integrate_t_numeric(f: &Scalar, a: f64, b: f64) -> Result<NumericIntegral, InvariantError> {
    if !f.is_t_only() {
        return Err(InvariantError::NotTOnly(f.to_string()));
    }
    let eval = |t: f64| -> f64 { eval_t(f, t).unwrap_or(f64::NAN) };
    let fine = simpson(eval, a, b, 129);
    let coarse = simpson(eval, a, b, 65);
    let correction = (fine - coarse) / 15.0;
    Ok(NumericIntegral { value: fine + correction, error_estimate: correction.abs() })
}

pub fn eval_t(f: &Scalar, t: f64) -> Result<f64, ScalarError> {
    let mut slots = vec![None; f.table().coord_count() + 1];
    slots[f.table().coord_count()] = Some(t);
    f.evaluate_slots(&slots)
}

/// `int_0^1 f dt`, exactly when the ring can integrate f.
#[derive(Debug, Clone, PartialEq)]
pub enum IntegralValue {
    Exact(Scalar),
    Numeric(NumericIntegral),
}

pub fn integrate_unit_interval(f: &Scalar) -> Result<IntegralValue, InvariantError> {
    match f.antiderivative_t() {
        Ok(anti) => Ok(IntegralValue::Exact(&anti.substitute_t(&int(1)) - &anti.substitute_t(&Rational::zero()))),
        Err(ScalarError::UnsupportedTDependence) => Ok(IntegralValue::Numeric(integrate_t_numeric(f, 0.0, 1.0)?)),
        Err(e) => Err(e.into()),
    }
}

/// An exact value together with its floating value when it is t-free.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Value {
    pub exact: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub approx: Option<f64>,
}

impl Value {
    pub fn of(s: &Scalar) -> Value {
        let approx = if s.depends_on(crate::Var::T) { None } else { eval_t(s, 0.0).ok() };
        Value { exact: s.to_string(), approx }
    }

    fn of_integral(v: &IntegralValue) -> Value {
        match v {
            IntegralValue::Exact(s) => Value::of(s),
            IntegralValue::Numeric(n) => Value { exact: "numeric".into(), approx: Some(n.value) },
        }
    }
}

#[derive(Debug, Clone)]
pub struct InvariantReport {
    pub family: String,
    pub q: usize,
    pub gv: Scalar,
    pub tgv: Scalar,
    pub dgv: Scalar,
    pub igv: IntegralValue,
    /// Coefficient of the first basis monomial of the gv form.
    pub gv_coefficient: Scalar,
    pub representatives: BTreeMap<String, String>,
    pub witnesses: Vec<WitnessRecord>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportJson {
    pub family: String,
    pub q: usize,
    pub gv: Value,
    pub tgv: Value,
    pub dgv: Value,
    pub igv: Value,
    pub gv_coefficient: Value,
    pub normalization: &'static str,
    pub representatives: BTreeMap<String, String>,
    pub witnesses: Vec<WitnessRecord>,
}

impl InvariantReport {
    pub fn to_json(&self) -> ReportJson {
        ReportJson {
            family: self.family.clone(),
            q: self.q,
            gv: Value::of(&self.gv),
            tgv: Value::of(&self.tgv),
            dgv: Value::of(&self.dgv),
            igv: Value::of_integral(&self.igv),
            gv_coefficient: Value::of(&self.gv_coefficient),
            normalization: NORMALIZATION,
            representatives: self.representatives.clone(),
            witnesses: self.witnesses.clone(),
        }
    }

    /// The invariant numbers only, for comparisons across gauges.
    pub fn numbers(&self) -> (Scalar, Scalar, Scalar, IntegralValue) {
        (self.gv.clone(), self.tgv.clone(), self.dgv.clone(), self.igv.clone())
    }
}

/// Invariant numbers of a solved family.
pub fn report(id: &str, family: &FoliationFamily) -> Result<InvariantReport, InvariantError> {
    let gv_form = family.gv_form()?;
    let tgv_form = family.tgv_form()?;
    let gv = integrate_or_zero(&gv_form)?;
    let tgv = integrate_or_zero(&tgv_form)?;
    let dgv = tgv.substitute_t(&Rational::zero());
    let igv = integrate_unit_interval(&tgv)?;
    let gv_coefficient =
        gv_form.components().first().map(|(_, c)| c.clone()).unwrap_or_else(|| Scalar::zero(family.chart().table()));

    let mut representatives = BTreeMap::new();
    representatives.insert("alpha".to_string(), family.alpha().to_string());
    representatives.insert("beta".to_string(), family.beta()?.to_string());
    for (i, g) in family.gammas()?.iter().enumerate() {
        let key = if family.q() == 1 { "gamma".to_string() } else { format!("gamma_{}", i + 1) };
        representatives.insert(key, g.to_string());
    }
    if family.q() == 1 {
        representatives.insert("delta".to_string(), family.delta()?.to_string());
        representatives.insert("epsilon".to_string(), family.epsilon()?.to_string());
    }
    representatives.insert("gv_form".to_string(), gv_form.to_string());
    representatives.insert("tgv_form".to_string(), tgv_form.to_string());
    representatives.insert("t_form".to_string(), family.t_form()?.to_string());

    let witnesses = vec![family.gv_derivative_identity()?.record()];
    Ok(InvariantReport {
        family: id.to_string(),
        q: family.q(),
        gv,
        tgv,
        dgv,
        igv,
        gv_coefficient,
        representatives,
        witnesses,
    })
}

/// Samples `(t, tgv(t))` on `steps + 1` equally spaced points.
pub fn tgv_grid(family: &FoliationFamily, t0: f64, t1: f64, steps: usize) -> Result<Vec<(f64, f64)>, InvariantError> {
    let tgv = integrate_or_zero(&family.tgv_form()?)?;
    let steps = steps.max(1);
    (0..=steps)
        .map(|k| {
            let t = t0 + (t1 - t0) * k as f64 / steps as f64;
            Ok((t, eval_t(&tgv, t)?))
        })
        .collect()
}

pub fn grid_csv(rows: &[(f64, f64)]) -> String {
    let mut out = String::from("t,tgv\n");
    for (t, v) in rows {
        out.push_str(&format!("{t},{v}\n"));
    }
    out
}
