use std::collections::BTreeMap;
use std::sync::Arc;

use num::Zero;

use super::{CatalogEntry, CatalogError, Expected, Provenance};
use crate::forms::{Chart, DifferentialForm, VectorField};
use crate::parse::{parse_form, parse_vector, ParseError};
use crate::scalar::Rational;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Header,
    Chart,
    Foliation,
    Expected,
}

/// A value with its 1-based position in the file.
#[derive(Clone)]
struct Spanned {
    text: String,
    line: usize,
    column: usize,
}

struct Parser<'a> {
    file: &'a str,
}

impl Parser<'_> {
    fn err(&self, line: usize, column: usize, message: impl Into<String>) -> CatalogError {
        CatalogError::Parse { file: self.file.to_string(), line, column, message: message.into() }
    }

    fn at(&self, s: &Spanned, message: impl Into<String>) -> CatalogError {
        self.err(s.line, s.column, message)
    }

    fn relocate(&self, s: &Spanned, e: ParseError) -> CatalogError {
        let e = e.relocate(s.line, s.column - 1);
        self.err(e.line, e.column, e.message)
    }

    fn form(&self, chart: &Arc<Chart>, s: &Spanned) -> Result<DifferentialForm, CatalogError> {
        parse_form(chart, &s.text).map_err(|e| self.relocate(s, e))
    }

    fn vector(&self, chart: &Arc<Chart>, s: &Spanned) -> Result<VectorField, CatalogError> {
        parse_vector(chart, &s.text).map_err(|e| self.relocate(s, e))
    }
}

/// Splits `key = value`, returning the key and the value with its column.
fn split_pair(raw: &str, line: usize) -> Option<(String, Spanned)> {
    let eq = raw.find('=')?;
    let key = raw[..eq].trim().to_string();
    let rest = &raw[eq + 1..];
    let lead = rest.len() - rest.trim_start().len();
    let column = eq + 1 + lead + 1;
    Some((key, Spanned { text: rest.trim().to_string(), line, column }))
}

fn names(s: &Spanned) -> Vec<String> {
    s.text.split(',').map(|n| n.trim().to_string()).filter(|n| !n.is_empty()).collect()
}

/// Parses one entry file. `file` is only used in error messages.
pub fn parse_entry(src: &str, file: &str) -> Result<CatalogEntry, CatalogError> {
    let p = Parser { file };
    let mut section = Section::Header;
    let mut header: BTreeMap<String, Spanned> = BTreeMap::new();
    let mut chart_keys: BTreeMap<String, Spanned> = BTreeMap::new();
    let mut brackets: Vec<(Spanned, Spanned, Spanned)> = Vec::new();
    let mut foliation: Vec<(String, Spanned)> = Vec::new();
    let mut expected_raw: Vec<(String, Spanned)> = Vec::new();

    for (idx, raw) in src.lines().enumerate() {
        let line = idx + 1;
        let body = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        let trimmed = body.trim();
        if trimmed.is_empty() {
            continue;
        }
        let column = body.len() - body.trim_start().len() + 1;
        if trimmed.starts_with('[') && !trimmed.contains('=') {
            section = match trimmed {
                "[chart]" => Section::Chart,
                "[foliation]" => Section::Foliation,
                "[expected]" => Section::Expected,
                other => return Err(p.err(line, column, format!("unknown section `{other}`"))),
            };
            continue;
        }
        let Some((key, value)) = split_pair(body, line) else {
            return Err(p.err(line, column, "expected `key = value`"));
        };
        if value.text.is_empty() {
            return Err(p.at(&value, format!("missing value for `{key}`")));
        }
        match section {
            Section::Header => {
                if !matches!(key.as_str(), "id" | "description") {
                    return Err(p.err(line, column, format!("unknown key `{key}` before the first section")));
                }
                header.insert(key, value);
            }
            Section::Chart if key.starts_with('[') => {
                let inner = key.strip_prefix('[').and_then(|k| k.strip_suffix(']'));
                let parts: Vec<&str> = inner.map(|k| k.split(',').map(str::trim).collect()).unwrap_or_default();
                if parts.len() != 2 {
                    return Err(p.err(line, column, "brackets are written `[A, B] = ...`"));
                }
                let at = |t: &str| Spanned { text: t.to_string(), line, column };
                brackets.push((at(parts[0]), at(parts[1]), value));
            }
            Section::Chart => {
                if !matches!(key.as_str(), "kind" | "coords" | "basis") {
                    return Err(p.err(line, column, format!("unknown chart key `{key}`")));
                }
                chart_keys.insert(key, value);
            }
            Section::Foliation => {
                if !matches!(key.as_str(), "alpha" | "transversal" | "beta" | "flow" | "omega") {
                    return Err(p.err(line, column, format!("unknown foliation key `{key}`")));
                }
                foliation.push((key, value));
            }
            Section::Expected => expected_raw.push((key, value)),
        }
    }

    let id = header.get("id").ok_or_else(|| p.err(1, 1, "missing `id`"))?;
    if id.text.is_empty() || !id.text.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
        return Err(p.at(id, "ids use letters, digits, `_` and `-`"));
    }
    let chart = build_chart(&p, &chart_keys, &brackets)?;

    let mut alphas = Vec::new();
    let mut transversal = Vec::new();
    let mut beta = None;
    let mut flow = None;
    let mut omegas = Vec::new();
    for (key, value) in &foliation {
        match key.as_str() {
            "alpha" => alphas.push(p.form(&chart, value)?),
            "transversal" => transversal.push(p.vector(&chart, value)?),
            "omega" => omegas.push(p.form(&chart, value)?),
            "beta" => beta = Some(p.form(&chart, value)?),
            _ => flow = Some(p.vector(&chart, value)?),
        }
    }
    if alphas.is_empty() {
        return Err(p.err(1, 1, "the [foliation] section needs at least one `alpha`"));
    }
    for (key, value) in foliation.iter().filter(|(k, _)| k == "alpha" || k == "omega" || k == "beta") {
        let f = p.form(&chart, value)?;
        if f.degree() != 1 {
            return Err(p.at(value, format!("`{key}` must be a 1-form")));
        }
    }

    let mut expected = BTreeMap::new();
    for (key, value) in expected_raw {
        let (v, provenance, note) = split_tag(&p, &value)?;
        if expected.contains_key(&key) {
            return Err(p.at(&value, format!("duplicate expected value `{key}`")));
        }
        expected.insert(key, Expected { value: v, provenance, note, line: value.line });
    }

    Ok(CatalogEntry {
        id: id.text.clone(),
        description: header.get("description").map(|d| d.text.clone()).unwrap_or_default(),
        file: file.to_string(),
        chart,
        alphas,
        transversal,
        beta,
        flow,
        omegas,
        expected,
    })
}

/// `value [TAG] note`; the tag is mandatory.
fn split_tag(p: &Parser, s: &Spanned) -> Result<(String, Provenance, String), CatalogError> {
    let Some(open) = s.text.find('[') else {
        return Err(p.at(s, "expected values need a provenance tag, `[DERIVED]` or `[TRIVIAL]`"));
    };
    let close = s.text[open..].find(']').map(|c| open + c).ok_or_else(|| p.at(s, "unclosed provenance tag"))?;
    let provenance = match &s.text[open + 1..close] {
        "DERIVED" => Provenance::Derived,
        "TRIVIAL" => Provenance::Trivial,
        other => {
            return Err(p.err(s.line, s.column + open, format!("unknown provenance tag `{other}`")));
        }
    };
    let value = s.text[..open].trim().to_string();
    if value.is_empty() {
        return Err(p.at(s, "empty expected value"));
    }
    Ok((value, provenance, s.text[close + 1..].trim().to_string()))
}

fn build_chart(
    p: &Parser,
    keys: &BTreeMap<String, Spanned>,
    brackets: &[(Spanned, Spanned, Spanned)],
) -> Result<Arc<Chart>, CatalogError> {
    let kind = keys.get("kind").ok_or_else(|| p.err(1, 1, "the [chart] section needs `kind`"))?;
    let need = |k: &str| keys.get(k).ok_or_else(|| p.at(kind, format!("a `{}` chart needs `{k}`", kind.text)));
    let bad = |s: &Spanned, e: crate::forms::FormError| p.at(s, e.to_string());
    match kind.text.as_str() {
        "torus" => {
            let coords = need("coords")?;
            let list = names(coords);
            let refs: Vec<&str> = list.iter().map(String::as_str).collect();
            Chart::torus(&refs).map_err(|e| bad(coords, e))
        }
        "coordinate" => {
            let coords = need("coords")?;
            let mut list = Vec::new();
            for item in names(coords) {
                let (name, kind) =
                    item.split_once(':').map(|(n, k)| (n.trim(), k.trim())).unwrap_or((item.as_str(), "periodic"));
                let periodic = match kind {
                    "periodic" => true,
                    "real" => false,
                    other => {
                        return Err(p.at(coords, format!("coordinate kind `{other}` is neither `periodic` nor `real`")))
                    }
                };
                list.push((name.to_string(), periodic));
            }
            Chart::coordinate(&list).map_err(|e| bad(coords, e))
        }
        "lie" => {
            let basis = need("basis")?;
            let list = names(basis);
            let abelian = Chart::lie_from_brackets(list.clone(), &[]).map_err(|e| bad(basis, e))?;
            let index = |s: &Spanned| {
                list.iter()
                    .position(|n| *n == s.text)
                    .ok_or_else(|| p.at(s, format!("`{}` is not a basis element", s.text)))
            };
            let mut table = Vec::new();
            for (a, b, rhs) in brackets {
                let v = p.vector(&abelian, rhs)?;
                let mut coeffs = Vec::with_capacity(list.len());
                for k in 0..list.len() {
                    let c = v.component(k);
                    coeffs.push(
                        c.as_rational()
                            .or_else(|| c.is_zero().then(Rational::zero))
                            .ok_or_else(|| p.at(rhs, "structure constants must be rational"))?,
                    );
                }
                table.push((index(a)?, index(b)?, coeffs));
            }
            Chart::lie_from_brackets(list, &table).map_err(|e| bad(kind, e))
        }
        other => Err(p.at(kind, format!("unknown chart kind `{other}`; expected torus, coordinate or lie"))),
    }
}
