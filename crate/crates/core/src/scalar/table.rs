use std::sync::Arc;

use super::ScalarError;

/// Variable of a [`VariableTable`]: a chart coordinate or the family parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    Coord(usize),
    T,
}

const RESERVED: &[&str] = &["t", "pi", "sin", "cos", "exp"];

/// Ordered coordinate names with periodicity flags, plus the parameter `t`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VariableTable {
    coords: Vec<String>,
    periodic: Vec<bool>,
    t_present: bool,
}

impl VariableTable {
    pub fn new<S: Into<String>>(
        coords: impl IntoIterator<Item = (S, bool)>,
        t_present: bool,
    ) -> Result<Arc<Self>, ScalarError> {
        let (names, periodic): (Vec<String>, Vec<bool>) = coords.into_iter().map(|(n, p)| (n.into(), p)).unzip();
        for (i, n) in names.iter().enumerate() {
            let valid = n.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                && n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid {
                return Err(ScalarError::InvalidTable(format!("`{n}` is not an identifier")));
            }
            if RESERVED.contains(&n.as_str()) {
                return Err(ScalarError::InvalidTable(format!("`{n}` is reserved")));
            }
            if names[..i].contains(n) {
                return Err(ScalarError::InvalidTable(format!("duplicate coordinate `{n}`")));
            }
        }
        if names.len() > 30 {
            return Err(ScalarError::InvalidTable("at most 30 coordinates".into()));
        }
        Ok(Arc::new(VariableTable { coords: names, periodic, t_present }))
    }

    /// Table with no coordinates, for coefficients that depend on t only.
    pub fn parameter_only() -> Arc<Self> {
        Arc::new(VariableTable { coords: vec![], periodic: vec![], t_present: true })
    }

    pub fn coord_count(&self) -> usize {
        self.coords.len()
    }

    pub fn coord_name(&self, i: usize) -> &str {
        &self.coords[i]
    }

    pub fn coord_names(&self) -> &[String] {
        &self.coords
    }

    pub fn is_periodic(&self, i: usize) -> bool {
        self.periodic[i]
    }

    pub fn all_periodic(&self) -> bool {
        self.periodic.iter().all(|&p| p)
    }

    pub fn t_present(&self) -> bool {
        self.t_present
    }

    pub(crate) fn slots(&self) -> usize {
        self.coords.len() + 1
    }

    pub(crate) fn t_slot(&self) -> usize {
        self.coords.len()
    }

    pub(crate) fn slot(&self, v: Var) -> Result<usize, ScalarError> {
        match v {
            Var::Coord(i) if i < self.coords.len() => Ok(i),
            Var::Coord(i) => Err(ScalarError::UnknownVariable(format!("#{i}"))),
            Var::T if self.t_present => Ok(self.coords.len()),
            Var::T => Err(ScalarError::NoParameter),
        }
    }

    pub fn lookup(&self, name: &str) -> Option<Var> {
        if name == "t" {
            return self.t_present.then_some(Var::T);
        }
        self.coords.iter().position(|c| c == name).map(Var::Coord)
    }

    /// Table with one more coordinate appended.
    pub fn extended(&self, name: &str, periodic: bool) -> Result<Arc<Self>, ScalarError> {
        let coords =
            self.coords.iter().cloned().zip(self.periodic.iter().copied()).chain([(name.to_string(), periodic)]);
        VariableTable::new(coords, self.t_present)
    }

    pub(crate) fn is_prefix_of(&self, other: &VariableTable) -> bool {
        self.t_present == other.t_present
            && other.coords.len() >= self.coords.len()
            && other.coords[..self.coords.len()] == self.coords[..]
            && other.periodic[..self.periodic.len()] == self.periodic[..]
    }
}
