use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use super::chart::{bit, Chart, ChartKind};
use super::{FormError, VectorField};
use num::One;

use crate::scalar::{Rational, Scalar, Var};

/// Homogeneous differential form. Keys are bitmasks of basis directions
/// (an increasing index tuple), values are nonzero coefficients written to
/// the left of the basis monomial.
#[derive(Debug, Clone)]
pub struct DifferentialForm {
    chart: Arc<Chart>,
    degree: usize,
    coeffs: BTreeMap<u32, Scalar>,
}

impl PartialEq for DifferentialForm {
    fn eq(&self, other: &Self) -> bool {
        same_chart(&self.chart, &other.chart) && self.degree == other.degree && self.coeffs == other.coeffs
    }
}

pub(crate) fn same_chart(a: &Arc<Chart>, b: &Arc<Chart>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// `(-1)^k` where `k` counts pairs `(i in a, j in b)` with `i > j`: the sign
/// of reordering `th_a ^ th_b` into increasing order.
pub(crate) fn merge_sign(a: u32, b: u32) -> i64 {
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        rest &= rest - 1;
        swaps += (a >> (j + 1)).count_ones();
    }
    if swaps.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub(crate) fn mask_indices(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask & (1 << i) != 0).collect()
}

fn add_into(map: &mut BTreeMap<u32, Scalar>, mask: u32, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match map.entry(mask) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let sum = o.get() + &c;
            if sum.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = sum;
            }
        }
    }
}

impl DifferentialForm {
    pub fn zero(chart: &Arc<Chart>, degree: usize) -> Self {
        DifferentialForm { chart: chart.clone(), degree, coeffs: BTreeMap::new() }
    }

    pub fn function(chart: &Arc<Chart>, f: Scalar) -> Result<Self, FormError> {
        Self::monomial(chart, &[], f)
    }

    /// Basis covector `dx_i` or `th_i`.
    pub fn basis(chart: &Arc<Chart>, i: usize) -> Result<Self, FormError> {
        Self::monomial(chart, &[i], Scalar::one(chart.table()))
    }

    /// `f * th_{i1} ^ ... ^ th_{ip}` for an arbitrary index list.
    pub fn monomial(chart: &Arc<Chart>, indices: &[usize], f: Scalar) -> Result<Self, FormError> {
        if !Arc::ptr_eq(f.table(), chart.table()) && f.table() != chart.table() {
            return Err(FormError::ChartMismatch);
        }
        let mut mask = 0u32;
        let mut sign = 1;
        for &i in indices {
            if i >= chart.dim() {
                return Err(FormError::IndexOutOfRange(i));
            }
            if mask & bit(i) != 0 {
                return Ok(Self::zero(chart, indices.len()));
            }
            sign *= merge_sign(mask, bit(i));
            mask |= bit(i);
        }
        let mut form = Self::zero(chart, indices.len());
        let f = if sign < 0 { -f } else { f };
        add_into(&mut form.coeffs, mask, f);
        Ok(form)
    }

    /// One-form `sum_i c_i th_i`.
    pub fn one_form(chart: &Arc<Chart>, components: Vec<Scalar>) -> Result<Self, FormError> {
        if components.len() != chart.dim() {
            return Err(FormError::DimensionMismatch { expected: chart.dim(), found: components.len() });
        }
        let mut form = Self::zero(chart, 1);
        for (i, c) in components.into_iter().enumerate() {
            if c.table() != chart.table() {
                return Err(FormError::ChartMismatch);
            }
            add_into(&mut form.coeffs, bit(i), c);
        }
        Ok(form)
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn equals(&self, other: &Self) -> Result<bool, FormError> {
        self.check(other)?;
        Ok(self == other)
    }

    pub fn term_count(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient on the increasing index tuple `indices`.
    pub fn coefficient(&self, indices: &[usize]) -> Scalar {
        let mask = indices.iter().fold(0u32, |m, &i| m | bit(i));
        self.coeffs.get(&mask).cloned().unwrap_or_else(|| Scalar::zero(self.chart.table()))
    }

    /// Coefficients keyed by increasing index tuples, in lexicographic order.
    pub fn components(&self) -> Vec<(Vec<usize>, Scalar)> {
        let mut v: Vec<_> = self.coeffs.iter().map(|(m, c)| (mask_indices(*m), c.clone())).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }

    /// Coefficient of the 0-form, or of the volume monomial for top forms.
    pub fn scalar(&self) -> Scalar {
        self.coeffs.values().next().cloned().unwrap_or_else(|| Scalar::zero(self.chart.table()))
    }

    pub fn top_coefficient(&self) -> Result<Scalar, FormError> {
        if self.degree != self.chart.dim() {
            return Err(FormError::NotTopDegree { degree: self.degree, dim: self.chart.dim() });
        }
        Ok(self.scalar())
    }

    fn check(&self, other: &Self) -> Result<(), FormError> {
        if same_chart(&self.chart, &other.chart) {
            Ok(())
        } else {
            Err(FormError::ChartMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, FormError> {
        self.check(other)?;
        if self.degree != other.degree {
            return Err(FormError::DegreeMismatch { left: self.degree, right: other.degree });
        }
        let mut coeffs = self.coeffs.clone();
        for (m, c) in &other.coeffs {
            add_into(&mut coeffs, *m, c.clone());
        }
        Ok(DifferentialForm { chart: self.chart.clone(), degree: self.degree, coeffs })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, FormError> {
        self.try_add(&-other)
    }

    pub fn wedge(&self, other: &Self) -> Result<Self, FormError> {
        self.check(other)?;
        let mut coeffs = BTreeMap::new();
        for (ma, ca) in &self.coeffs {
            for (mb, cb) in &other.coeffs {
                if ma & mb != 0 {
                    continue;
                }
                let prod = ca * cb;
                let prod = if merge_sign(*ma, *mb) < 0 { -prod } else { prod };
                add_into(&mut coeffs, ma | mb, prod);
            }
        }
        Ok(DifferentialForm { chart: self.chart.clone(), degree: self.degree + other.degree, coeffs })
    }

    /// Wedge of several forms, left to right.
    pub fn wedge_all(parts: &[&DifferentialForm]) -> Result<Self, FormError> {
        let (first, rest) = parts.split_first().ok_or(FormError::Empty)?;
        rest.iter().try_fold((*first).clone(), |acc, p| acc.wedge(p))
    }

    /// `self ^ self ^ ... ^ self`, with the empty power the constant 1.
    pub fn wedge_power(&self, k: usize) -> Self {
        let mut acc = DifferentialForm::function(&self.chart, Scalar::one(self.chart.table())).expect("same table");
        for _ in 0..k {
            acc = acc.wedge(self).expect("same chart");
        }
        acc
    }

    pub fn scale(&self, f: &Scalar) -> Self {
        let mut coeffs = BTreeMap::new();
        for (m, c) in &self.coeffs {
            add_into(&mut coeffs, *m, c * f);
        }
        DifferentialForm { chart: self.chart.clone(), degree: self.degree, coeffs }
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        let mut coeffs = BTreeMap::new();
        for (m, c) in &self.coeffs {
            add_into(&mut coeffs, *m, c.scale(r));
        }
        DifferentialForm { chart: self.chart.clone(), degree: self.degree, coeffs }
    }

    /// Exterior derivative in the chart's rule.
    pub fn d(&self) -> Self {
        let mut coeffs = BTreeMap::new();
        let n = self.chart.dim();
        match self.chart.kind() {
            ChartKind::Coordinate => {
                for (mask, f) in &self.coeffs {
                    for i in 0..n {
                        if mask & bit(i) != 0 {
                            continue;
                        }
                        let df = f.partial(Var::Coord(i)).expect("coordinate slot");
                        if df.is_zero() {
                            continue;
                        }
                        let df = if merge_sign(bit(i), *mask) < 0 { -df } else { df };
                        add_into(&mut coeffs, mask | bit(i), df);
                    }
                }
            }
            ChartKind::Lie { .. } => {
                for (mask, f) in &self.coeffs {
                    for (pos, k) in mask_indices(*mask).into_iter().enumerate() {
                        let before = mask & (bit(k) - 1);
                        let after = mask & !(bit(k + 1) - 1);
                        let outer = if pos % 2 == 0 { 1 } else { -1 };
                        for (m2, c) in self.chart.d_basis(k) {
                            if m2 & (before | after) != 0 {
                                continue;
                            }
                            let sign = outer * merge_sign(before, *m2) * merge_sign(before | m2, after);
                            let r = if sign < 0 { -c.clone() } else { c.clone() };
                            add_into(&mut coeffs, before | m2 | after, f.scale(&r));
                        }
                    }
                }
            }
        }
        DifferentialForm { chart: self.chart.clone(), degree: self.degree + 1, coeffs }
    }

    /// Coefficientwise derivative in the family parameter.
    pub fn ddt(&self) -> Self {
        let mut coeffs = BTreeMap::new();
        for (m, c) in &self.coeffs {
            add_into(&mut coeffs, *m, c.ddt());
        }
        DifferentialForm { chart: self.chart.clone(), degree: self.degree, coeffs }
    }

    /// Contraction `i_X`. Functions contract to the zero function.
    pub fn interior(&self, x: &VectorField) -> Result<Self, FormError> {
        if !same_chart(&self.chart, x.chart()) {
            return Err(FormError::ChartMismatch);
        }
        if self.degree == 0 {
            return Ok(DifferentialForm::zero(&self.chart, 0));
        }
        let mut coeffs = BTreeMap::new();
        for (mask, f) in &self.coeffs {
            for (pos, i) in mask_indices(*mask).into_iter().enumerate() {
                let xi = x.component(i);
                if xi.is_zero() {
                    continue;
                }
                let c = f * xi;
                let c = if pos % 2 == 1 { -c } else { c };
                add_into(&mut coeffs, mask & !bit(i), c);
            }
        }
        Ok(DifferentialForm { chart: self.chart.clone(), degree: self.degree - 1, coeffs })
    }

    /// Value of a one-form on a vector field.
    pub fn pair(&self, x: &VectorField) -> Result<Scalar, FormError> {
        if self.degree != 1 {
            return Err(FormError::DegreeMismatch { left: self.degree, right: 1 });
        }
        Ok(self.interior(x)?.scalar())
    }

    /// Cartan formula `i_X d + d i_X`.
    pub fn lie_derivative(&self, x: &VectorField) -> Result<Self, FormError> {
        let first = self.d().interior(x)?;
        if self.degree == 0 {
            return Ok(first);
        }
        first.try_add(&self.interior(x)?.d())
    }

    pub fn substitute_t(&self, value: &Rational) -> Self {
        let mut coeffs = BTreeMap::new();
        for (m, c) in &self.coeffs {
            add_into(&mut coeffs, *m, c.substitute_t(value));
        }
        DifferentialForm { chart: self.chart.clone(), degree: self.degree, coeffs }
    }

    /// Pull back along the projection from an extended chart (`M x S^1`).
    pub fn pullback_to(&self, target: &Arc<Chart>) -> Result<Self, FormError> {
        if !self.chart.is_prefix_of(target) {
            return Err(FormError::ChartMismatch);
        }
        let mut coeffs = BTreeMap::new();
        for (m, c) in &self.coeffs {
            add_into(&mut coeffs, *m, c.embed(target.table())?);
        }
        Ok(DifferentialForm { chart: target.clone(), degree: self.degree, coeffs })
    }

    /// Largest absolute coefficient value at a point (slots: coordinates, then t).
    pub fn max_abs_at(&self, values: &[Option<f64>]) -> Result<f64, FormError> {
        let mut best = 0.0f64;
        for c in self.coeffs.values() {
            best = best.max(c.evaluate_slots(values)?.abs());
        }
        Ok(best)
    }
}

impl Neg for &DifferentialForm {
    type Output = DifferentialForm;
    fn neg(self) -> DifferentialForm {
        DifferentialForm {
            chart: self.chart.clone(),
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Neg for DifferentialForm {
    type Output = DifferentialForm;
    fn neg(self) -> DifferentialForm {
        -&self
    }
}

// Panicking operator forms for internal algebra where charts and degrees are
// known to agree.
impl Add<&DifferentialForm> for &DifferentialForm {
    type Output = DifferentialForm;
    fn add(self, rhs: &DifferentialForm) -> DifferentialForm {
        self.try_add(rhs).expect("incompatible forms in sum")
    }
}

impl Add for DifferentialForm {
    type Output = DifferentialForm;
    fn add(self, rhs: DifferentialForm) -> DifferentialForm {
        &self + &rhs
    }
}

impl Sub<&DifferentialForm> for &DifferentialForm {
    type Output = DifferentialForm;
    fn sub(self, rhs: &DifferentialForm) -> DifferentialForm {
        self.try_sub(rhs).expect("incompatible forms in difference")
    }
}

impl Sub for DifferentialForm {
    type Output = DifferentialForm;
    fn sub(self, rhs: DifferentialForm) -> DifferentialForm {
        &self - &rhs
    }
}

/// One `coefficient * basis` summand; rational coefficients print bare.
pub(crate) fn write_term(f: &mut fmt::Formatter<'_>, first: bool, c: &Scalar, basis: &str) -> fmt::Result {
    let sep = if first { "" } else { " + " };
    match c.as_rational() {
        Some(r) if r.is_one() => write!(f, "{sep}{basis}"),
        Some(r) if crate::scalar::is_negative(&r) => {
            let sep = if first { "-" } else { " - " };
            let r = -r;
            if r.is_one() {
                write!(f, "{sep}{basis}")
            } else {
                write!(f, "{sep}{r} * {basis}")
            }
        }
        Some(r) => write!(f, "{sep}{r} * {basis}"),
        None => write!(f, "{sep}({c}) * {basis}"),
    }
}

impl fmt::Display for DifferentialForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let comps = self.components();
        if comps.is_empty() {
            return write!(f, "0");
        }
        for (n, (idx, c)) in comps.iter().enumerate() {
            let basis: Vec<String> = idx.iter().map(|&i| self.chart.covector_name(i)).collect();
            let basis = basis.join("^");
            let sep = if n == 0 { "" } else { " + " };
            if idx.is_empty() {
                write!(f, "{sep}({c})")?;
                continue;
            }
            write_term(f, n == 0, c, &basis)?;
        }
        Ok(())
    }
}
