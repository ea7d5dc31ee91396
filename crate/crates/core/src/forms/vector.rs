use std::fmt;
use std::sync::Arc;

use super::form::same_chart;
use super::{Chart, FormError};
use crate::scalar::{Rational, Scalar};

/// Vector field given by its components in the chart's basis directions.
#[derive(Debug, Clone)]
pub struct VectorField {
    chart: Arc<Chart>,
    components: Vec<Scalar>,
}

impl PartialEq for VectorField {
    fn eq(&self, other: &Self) -> bool {
        same_chart(&self.chart, &other.chart) && self.components == other.components
    }
}

impl VectorField {
    pub fn new(chart: &Arc<Chart>, components: Vec<Scalar>) -> Result<Self, FormError> {
        if components.len() != chart.dim() {
            return Err(FormError::DimensionMismatch { expected: chart.dim(), found: components.len() });
        }
        if components.iter().any(|c| c.table() != chart.table()) {
            return Err(FormError::ChartMismatch);
        }
        Ok(VectorField { chart: chart.clone(), components })
    }

    pub fn zero(chart: &Arc<Chart>) -> Self {
        VectorField { chart: chart.clone(), components: vec![Scalar::zero(chart.table()); chart.dim()] }
    }

    /// Basis direction `e_i`, dual to `dx_i` or `th_i`.
    pub fn basis(chart: &Arc<Chart>, i: usize) -> Result<Self, FormError> {
        if i >= chart.dim() {
            return Err(FormError::IndexOutOfRange(i));
        }
        let mut v = VectorField::zero(chart);
        v.components[i] = Scalar::one(chart.table());
        Ok(v)
    }

    /// Constant-coefficient field `sum_i c_i e_i`.
    pub fn constant(chart: &Arc<Chart>, coefficients: &[Rational]) -> Result<Self, FormError> {
        let comps = coefficients.iter().map(|c| Scalar::constant(chart.table(), c.clone())).collect();
        VectorField::new(chart, comps)
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn component(&self, i: usize) -> &Scalar {
        &self.components[i]
    }

    pub fn components(&self) -> &[Scalar] {
        &self.components
    }

    pub fn scale(&self, f: &Scalar) -> Self {
        VectorField { chart: self.chart.clone(), components: self.components.iter().map(|c| c * f).collect() }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, FormError> {
        if !same_chart(&self.chart, &other.chart) {
            return Err(FormError::ChartMismatch);
        }
        let components = self.components.iter().zip(&other.components).map(|(a, b)| a + b).collect();
        Ok(VectorField { chart: self.chart.clone(), components })
    }

    /// Extend to a chart with extra directions appended; new components are zero.
    pub fn pullback_to(&self, target: &Arc<Chart>) -> Result<Self, FormError> {
        if !self.chart.is_prefix_of(target) {
            return Err(FormError::ChartMismatch);
        }
        let mut components = self.components.iter().map(|c| c.embed(target.table())).collect::<Result<Vec<_>, _>>()?;
        components.resize(target.dim(), Scalar::zero(target.table()));
        Ok(VectorField { chart: target.clone(), components })
    }

    pub fn substitute_t(&self, value: &Rational) -> Self {
        VectorField {
            chart: self.chart.clone(),
            components: self.components.iter().map(|c| c.substitute_t(value)).collect(),
        }
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.components.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            super::form::write_term(f, first, c, &self.chart.vector_name(i))?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
