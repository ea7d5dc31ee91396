use std::collections::BTreeMap;
use std::sync::Arc;

use num::Zero;

use super::FormError;
use crate::scalar::{Rational, VariableTable};

/// How the exterior derivative acts on basis covectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChartKind {
    /// `d(f dx_I) = sum_i (df/dx_i) dx_i ^ dx_I`.
    Coordinate,
    /// Left-invariant forms on a Lie group. `structure[k][i][j]` is the
    /// `e_k` component of `[e_i, e_j]`.
    Lie { structure: Vec<Vec<Vec<Rational>>> },
}

/// A coordinate chart or a Lie chart. Forms are expanded in the basis
/// `dx_i` (coordinate) or `th_i` (Lie) in the order of `names`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chart {
    names: Vec<String>,
    table: Arc<VariableTable>,
    kind: ChartKind,
    // Lie charts only: d(th_k) as a map from two-element masks to coefficients.
    d_basis: Vec<BTreeMap<u32, Rational>>,
}

pub(crate) fn bit(i: usize) -> u32 {
    1u32 << i
}

impl Chart {
    /// Coordinate chart; each coordinate is flagged periodic (period 2pi) or not.
    pub fn coordinate<S: AsRef<str>>(coords: &[(S, bool)]) -> Result<Arc<Chart>, FormError> {
        let table = VariableTable::new(coords.iter().map(|(n, p)| (n.as_ref().to_string(), *p)), true)?;
        Ok(Arc::new(Chart { names: table.coord_names().to_vec(), table, kind: ChartKind::Coordinate, d_basis: vec![] }))
    }

    /// Flat torus with the given coordinate names.
    pub fn torus(names: &[&str]) -> Result<Arc<Chart>, FormError> {
        let coords: Vec<(&str, bool)> = names.iter().map(|n| (*n, true)).collect();
        Chart::coordinate(&coords)
    }

    /// Lie chart from a full structure-constant table `c[k][i][j]`.
    /// Rejects tables that are not antisymmetric or violate Jacobi.
    pub fn lie(names: Vec<String>, structure: Vec<Vec<Vec<Rational>>>) -> Result<Arc<Chart>, FormError> {
        let n = names.len();
        if n == 0 || n > 30 {
            return Err(FormError::InvalidChart("Lie chart dimension must be in 1..=30".into()));
        }
        for (i, name) in names.iter().enumerate() {
            let valid = name.chars().next().is_some_and(|c| c.is_ascii_alphanumeric())
                && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid || names[..i].contains(name) {
                return Err(FormError::InvalidChart(format!("bad or duplicate basis name `{name}`")));
            }
        }
        if structure.len() != n || structure.iter().any(|m| m.len() != n || m.iter().any(|r| r.len() != n)) {
            return Err(FormError::InvalidChart("structure table must be n x n x n".into()));
        }
        let c = &structure;
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if c[k][i][j] != -c[k][j][i].clone() {
                        return Err(FormError::NotAntisymmetric { k, i, j });
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let mut s = Rational::zero();
                        for m in 0..n {
                            s += &c[m][i][j] * &c[l][m][k] + &c[m][j][k] * &c[l][m][i] + &c[m][k][i] * &c[l][m][j];
                        }
                        if !s.is_zero() {
                            return Err(FormError::JacobiViolated { i, j, k, l });
                        }
                    }
                }
            }
        }
        // d th_k = -sum_{i<j} c[k][i][j] th_i ^ th_j
        let d_basis = (0..n)
            .map(|k| {
                let mut m = BTreeMap::new();
                for i in 0..n {
                    for j in i + 1..n {
                        if !c[k][i][j].is_zero() {
                            m.insert(bit(i) | bit(j), -c[k][i][j].clone());
                        }
                    }
                }
                m
            })
            .collect();
        Ok(Arc::new(Chart {
            names,
            table: VariableTable::parameter_only(),
            kind: ChartKind::Lie { structure },
            d_basis,
        }))
    }

    /// Lie chart from brackets `[e_i, e_j] = sum_k v[k] e_k`, pairs not
    /// listed are zero.
    pub fn lie_from_brackets(
        names: Vec<String>,
        brackets: &[(usize, usize, Vec<Rational>)],
    ) -> Result<Arc<Chart>, FormError> {
        let n = names.len();
        let mut c = vec![vec![vec![Rational::zero(); n]; n]; n];
        for (i, j, v) in brackets {
            let (i, j) = (*i, *j);
            if i >= n || j >= n || v.len() != n {
                return Err(FormError::InvalidChart("bracket index out of range".into()));
            }
            if i == j {
                if v.iter().any(|x| !x.is_zero()) {
                    return Err(FormError::NotAntisymmetric { k: 0, i, j });
                }
                continue;
            }
            for k in 0..n {
                c[k][i][j] = v[k].clone();
                c[k][j][i] = -v[k].clone();
            }
        }
        Chart::lie(names, c)
    }

    /// Direct sum of two Lie charts; basis names are concatenated.
    pub fn lie_direct_sum(a: &Chart, b: &Chart, names: Vec<String>) -> Result<Arc<Chart>, FormError> {
        let (ChartKind::Lie { structure: ca }, ChartKind::Lie { structure: cb }) = (&a.kind, &b.kind) else {
            return Err(FormError::InvalidChart("direct sum needs two Lie charts".into()));
        };
        let (na, nb) = (a.dim(), b.dim());
        let n = na + nb;
        let mut c = vec![vec![vec![Rational::zero(); n]; n]; n];
        for k in 0..na {
            for i in 0..na {
                for j in 0..na {
                    c[k][i][j] = ca[k][i][j].clone();
                }
            }
        }
        for k in 0..nb {
            for i in 0..nb {
                for j in 0..nb {
                    c[na + k][na + i][na + j] = cb[k][i][j].clone();
                }
            }
        }
        Chart::lie(names, c)
    }

    /// `M x S^1`: a periodic coordinate, or an abelian one-dimensional Lie factor.
    pub fn extend_by_circle(&self, name: &str) -> Result<Arc<Chart>, FormError> {
        match &self.kind {
            ChartKind::Coordinate => {
                let table = self.table.extended(name, true)?;
                Ok(Arc::new(Chart {
                    names: table.coord_names().to_vec(),
                    table,
                    kind: ChartKind::Coordinate,
                    d_basis: vec![],
                }))
            }
            ChartKind::Lie { structure } => {
                let n = self.dim();
                let mut c = vec![vec![vec![Rational::zero(); n + 1]; n + 1]; n + 1];
                for k in 0..n {
                    for i in 0..n {
                        for j in 0..n {
                            c[k][i][j] = structure[k][i][j].clone();
                        }
                    }
                }
                let mut names = self.names.clone();
                names.push(name.to_string());
                Chart::lie(names, c)
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn table(&self) -> &Arc<VariableTable> {
        &self.table
    }

    pub fn kind(&self) -> &ChartKind {
        &self.kind
    }

    pub fn is_lie(&self) -> bool {
        matches!(self.kind, ChartKind::Lie { .. })
    }

    /// Every coordinate periodic (coordinate charts) or any Lie chart.
    pub fn is_closed(&self) -> bool {
        match self.kind {
            ChartKind::Coordinate => self.table.all_periodic(),
            ChartKind::Lie { .. } => true,
        }
    }

    pub fn covector_name(&self, i: usize) -> String {
        match self.kind {
            ChartKind::Coordinate => format!("d{}", self.names[i]),
            ChartKind::Lie { .. } => format!("th_{}", self.names[i]),
        }
    }

    pub fn vector_name(&self, i: usize) -> String {
        format!("e_{}", self.names[i])
    }

    pub(crate) fn d_basis(&self, k: usize) -> &BTreeMap<u32, Rational> {
        &self.d_basis[k]
    }

    /// True if `other` is this chart with extra basis directions appended.
    pub fn is_prefix_of(&self, other: &Chart) -> bool {
        let n = self.dim();
        if other.dim() < n || other.names[..n] != self.names[..] {
            return false;
        }
        match (&self.kind, &other.kind) {
            (ChartKind::Coordinate, ChartKind::Coordinate) => self.table.is_prefix_of(&other.table),
            // the projection onto the old directions must be a homomorphism
            (ChartKind::Lie { structure: a }, ChartKind::Lie { structure: b }) => {
                let big = other.dim();
                (0..n).all(|k| {
                    (0..big).all(|i| {
                        (0..big).all(|j| if i < n && j < n { a[k][i][j] == b[k][i][j] } else { b[k][i][j].is_zero() })
                    })
                })
            }
            _ => false,
        }
    }
}
