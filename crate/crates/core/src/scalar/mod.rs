//! Exact coefficient ring.
//!
//! A [`Scalar`] is a finite sum of terms
//!
//! ```text
//! c * pi^k * prod(x_i^p_i) * t^p * trig(k . theta) * exp(E)
//! ```
//!
//! with `c` rational, polynomial powers only on non-periodic coordinates and
//! on the family parameter `t`, at most one trigonometric atom over the
//! periodic coordinates, and `E` an exponential-free scalar. Periodic
//! coordinates never occur polynomially, which keeps every term single-valued
//! on a torus. The representation is canonical, so a scalar is zero exactly
//! when it has no terms.

mod display;
mod table;

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub use table::{Var, VariableTable};

/// Exact rational numbers used for all coefficients.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("scalars belong to different variable tables")]
    TableMismatch,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable `{0}` is periodic and may only appear inside sin/cos/exp")]
    PeriodicVariable(String),
    #[error("variable `{0}` is not periodic")]
    NotPeriodic(String),
    #[error("the family parameter t is not available in this table")]
    NoParameter,
    #[error("invalid variable table: {0}")]
    InvalidTable(String),
    #[error("no value assigned to `{0}`")]
    MissingAssignment(String),
    #[error("exp argument must be free of exp and pi")]
    InvalidExponent,
    #[error("term depends on an integrated variable through exp and has no exact period integral")]
    NotIntegrable,
    #[error("t-dependence of a term is not polynomial times exp(c*t)")]
    UnsupportedTDependence,
}

/// Trigonometric atom over the periodic coordinates. Frequency vectors are
/// indexed by coordinate slot and are lexicographically positive.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) enum Trig {
    One,
    Cos(Vec<i32>),
    Sin(Vec<i32>),
}

impl Trig {
    fn freq(&self) -> Option<&[i32]> {
        match self {
            Trig::One => None,
            Trig::Cos(f) | Trig::Sin(f) => Some(f),
        }
    }

    /// `sin`/`cos` of an arbitrary integer frequency, normalized.
    fn normalized(is_sin: bool, mut freq: Vec<i32>) -> Option<(i32, Trig)> {
        let lead = freq.iter().copied().find(|&k| k != 0);
        match lead {
            None if is_sin => None,
            None => Some((1, Trig::One)),
            Some(k) => {
                let mut sign = 1;
                if k < 0 {
                    freq.iter_mut().for_each(|k| *k = -*k);
                    if is_sin {
                        sign = -1;
                    }
                }
                Some((sign, if is_sin { Trig::Sin(freq) } else { Trig::Cos(freq) }))
            }
        }
    }

    /// Product-to-sum expansion.
    fn mul(&self, other: &Trig) -> Vec<(Rational, Trig)> {
        let plus = |a: &[i32], b: &[i32]| a.iter().zip(b).map(|(x, y)| x + y).collect::<Vec<_>>();
        let minus = |a: &[i32], b: &[i32]| a.iter().zip(b).map(|(x, y)| x - y).collect::<Vec<_>>();
        let half = rat(1, 2);
        // (sign, is_sin, freq) pieces, each with weight 1/2
        let pieces: Vec<(i32, bool, Vec<i32>)> = match (self, other) {
            (Trig::One, t) | (t, Trig::One) => return vec![(Rational::one(), t.clone())],
            (Trig::Sin(a), Trig::Sin(b)) => vec![(1, false, minus(a, b)), (-1, false, plus(a, b))],
            (Trig::Cos(a), Trig::Cos(b)) => vec![(1, false, minus(a, b)), (1, false, plus(a, b))],
            (Trig::Sin(a), Trig::Cos(b)) => vec![(1, true, plus(a, b)), (1, true, minus(a, b))],
            (Trig::Cos(a), Trig::Sin(b)) => vec![(1, true, plus(a, b)), (-1, true, minus(a, b))],
        };
        let mut out: Vec<(Rational, Trig)> = Vec::with_capacity(2);
        for (sign, is_sin, freq) in pieces {
            if let Some((s, trig)) = Trig::normalized(is_sin, freq) {
                let c = &half * int((sign * s) as i64);
                if let Some(slot) = out.iter_mut().find(|(_, t)| *t == trig) {
                    slot.0 += c;
                } else {
                    out.push((c, trig));
                }
            }
        }
        out.retain(|(c, _)| !c.is_zero());
        out
    }
}

/// Exponential-free monomial: polynomial powers per slot and a trig atom.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct Atom {
    pub(crate) powers: Vec<u32>,
    pub(crate) trig: Trig,
}

impl Atom {
    fn unit(slots: usize) -> Self {
        Atom { powers: vec![0; slots], trig: Trig::One }
    }

    fn is_unit(&self) -> bool {
        self.trig == Trig::One && self.powers.iter().all(|&p| p == 0)
    }

    fn mul(&self, other: &Atom) -> Vec<(Rational, Atom)> {
        let powers: Vec<u32> = self.powers.iter().zip(&other.powers).map(|(a, b)| a + b).collect();
        self.trig.mul(&other.trig).into_iter().map(|(c, trig)| (c, Atom { powers: powers.clone(), trig })).collect()
    }

    /// Derivative with respect to a slot. `periodic` selects the trig rule.
    fn partial(&self, slot: usize, periodic: bool) -> Vec<(Rational, Atom)> {
        if periodic {
            match &self.trig {
                Trig::One => vec![],
                Trig::Sin(f) if f[slot] != 0 => {
                    vec![(int(f[slot] as i64), Atom { powers: self.powers.clone(), trig: Trig::Cos(f.clone()) })]
                }
                Trig::Cos(f) if f[slot] != 0 => {
                    vec![(int(-(f[slot] as i64)), Atom { powers: self.powers.clone(), trig: Trig::Sin(f.clone()) })]
                }
                _ => vec![],
            }
        } else {
            let p = self.powers[slot];
            if p == 0 {
                return vec![];
            }
            let mut powers = self.powers.clone();
            powers[slot] -= 1;
            vec![(int(p as i64), Atom { powers, trig: self.trig.clone() })]
        }
    }

    fn depends_on_periodic(&self, slots: &[usize]) -> bool {
        self.trig.freq().is_some_and(|f| slots.iter().any(|&s| f[s] != 0))
    }
}

/// Argument of the exponential atom: an exp-free, pi-free sum of atoms.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct ExpArg(pub(crate) BTreeMap<Atom, Rational>);

impl ExpArg {
    fn add(&self, other: &ExpArg) -> ExpArg {
        let mut out = self.0.clone();
        for (a, c) in &other.0 {
            accumulate(&mut out, a.clone(), c.clone());
        }
        ExpArg(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct Key {
    pub(crate) pi: u32,
    pub(crate) atom: Atom,
    pub(crate) exp: ExpArg,
}

fn accumulate<K: Ord>(map: &mut BTreeMap<K, Rational>, key: K, c: Rational) {
    if c.is_zero() {
        return;
    }
    match map.entry(key) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

/// Canonical exact scalar. See the module docs for the term shape.
#[derive(Debug, Clone)]
pub struct Scalar {
    table: Arc<VariableTable>,
    terms: BTreeMap<Key, Rational>,
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.same_table(other) && self.terms == other.terms
    }
}

impl Eq for Scalar {}

impl Scalar {
    pub fn zero(table: &Arc<VariableTable>) -> Self {
        Scalar { table: table.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(table: &Arc<VariableTable>, c: Rational) -> Self {
        let mut s = Scalar::zero(table);
        let key = Key { pi: 0, atom: Atom::unit(table.slots()), exp: ExpArg::default() };
        accumulate(&mut s.terms, key, c);
        s
    }

    pub fn one(table: &Arc<VariableTable>) -> Self {
        Scalar::constant(table, Rational::one())
    }

    pub fn integer(table: &Arc<VariableTable>, n: i64) -> Self {
        Scalar::constant(table, int(n))
    }

    pub fn pi(table: &Arc<VariableTable>) -> Self {
        let key = Key { pi: 1, atom: Atom::unit(table.slots()), exp: ExpArg::default() };
        Scalar::from_terms(table, [(key, Rational::one())])
    }

    /// A non-periodic coordinate or the parameter as a polynomial generator.
    pub fn var(table: &Arc<VariableTable>, v: Var) -> Result<Self, ScalarError> {
        let slot = table.slot(v)?;
        if let Var::Coord(i) = v {
            if table.is_periodic(i) {
                return Err(ScalarError::PeriodicVariable(table.coord_name(i).to_string()));
            }
        }
        let mut atom = Atom::unit(table.slots());
        atom.powers[slot] = 1;
        Ok(Scalar::from_terms(table, [(Key { pi: 0, atom, exp: ExpArg::default() }, Rational::one())]))
    }

    pub fn t(table: &Arc<VariableTable>) -> Result<Self, ScalarError> {
        Scalar::var(table, Var::T)
    }

    /// `sin(freq . theta)` over the periodic coordinates.
    pub fn sin(table: &Arc<VariableTable>, freq: &[i32]) -> Result<Self, ScalarError> {
        Scalar::trig(table, true, freq)
    }

    pub fn cos(table: &Arc<VariableTable>, freq: &[i32]) -> Result<Self, ScalarError> {
        Scalar::trig(table, false, freq)
    }

    fn trig(table: &Arc<VariableTable>, is_sin: bool, freq: &[i32]) -> Result<Self, ScalarError> {
        if freq.len() != table.coord_count() {
            return Err(ScalarError::InvalidTable("frequency vector length".into()));
        }
        for (i, &k) in freq.iter().enumerate() {
            if k != 0 && !table.is_periodic(i) {
                return Err(ScalarError::NotPeriodic(table.coord_name(i).to_string()));
            }
        }
        Ok(match Trig::normalized(is_sin, freq.to_vec()) {
            None => Scalar::zero(table),
            Some((sign, trig)) => {
                let atom = Atom { powers: vec![0; table.slots()], trig };
                Scalar::from_terms(table, [(Key { pi: 0, atom, exp: ExpArg::default() }, int(sign as i64))])
            }
        })
    }

    /// `exp(arg)`; the argument must itself be free of exp and pi.
    pub fn exp(arg: &Scalar) -> Result<Self, ScalarError> {
        let mut e = ExpArg::default();
        for (k, c) in &arg.terms {
            if k.pi != 0 || !k.exp.0.is_empty() {
                return Err(ScalarError::InvalidExponent);
            }
            accumulate(&mut e.0, k.atom.clone(), c.clone());
        }
        let key = Key { pi: 0, atom: Atom::unit(arg.table.slots()), exp: e };
        Ok(Scalar::from_terms(&arg.table, [(key, Rational::one())]))
    }

    fn from_terms(table: &Arc<VariableTable>, terms: impl IntoIterator<Item = (Key, Rational)>) -> Self {
        let mut s = Scalar::zero(table);
        for (k, c) in terms {
            accumulate(&mut s.terms, k, c);
        }
        s
    }

    pub fn table(&self) -> &Arc<VariableTable> {
        &self.table
    }

    pub fn same_table(&self, other: &Scalar) -> bool {
        Arc::ptr_eq(&self.table, &other.table) || self.table == other.table
    }

    fn check(&self, other: &Scalar) -> Result<(), ScalarError> {
        if self.same_table(other) {
            Ok(())
        } else {
            Err(ScalarError::TableMismatch)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// The rational value if this scalar is a constant without pi.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (k, c) = self.terms.iter().next().unwrap();
                (k.pi == 0 && k.atom.is_unit() && k.exp.0.is_empty()).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// True if no coordinate occurs (the scalar is a function of t alone).
    pub fn is_t_only(&self) -> bool {
        (0..self.table.coord_count()).all(|i| !self.depends_on(Var::Coord(i)))
    }

    pub fn depends_on(&self, v: Var) -> bool {
        let Ok(slot) = self.table.slot(v) else { return false };
        let periodic = matches!(v, Var::Coord(i) if self.table.is_periodic(i));
        let atom_dep = |a: &Atom| {
            if periodic {
                a.depends_on_periodic(&[slot])
            } else {
                a.powers[slot] > 0
            }
        };
        self.terms.keys().any(|k| atom_dep(&k.atom) || k.exp.0.keys().any(atom_dep))
    }

    pub fn is_exp_free(&self) -> bool {
        self.terms.keys().all(|k| k.exp.0.is_empty())
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.check(other)?;
        let mut out = self.terms.clone();
        for (k, c) in &other.terms {
            accumulate(&mut out, k.clone(), c.clone());
        }
        Ok(Scalar { table: self.table.clone(), terms: out })
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.check(other)?;
        let mut out = BTreeMap::new();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                let exp = ka.exp.add(&kb.exp);
                let c = ca * cb;
                for (f, atom) in ka.atom.mul(&kb.atom) {
                    let key = Key { pi: ka.pi + kb.pi, atom, exp: exp.clone() };
                    accumulate(&mut out, key, &c * f);
                }
            }
        }
        Ok(Scalar { table: self.table.clone(), terms: out })
    }

    pub fn scale(&self, c: &Rational) -> Scalar {
        if c.is_zero() {
            return Scalar::zero(&self.table);
        }
        Scalar { table: self.table.clone(), terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect() }
    }

    pub fn pow(&self, n: u32) -> Scalar {
        let mut acc = Scalar::one(&self.table);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Exact partial derivative.
    pub fn partial(&self, v: Var) -> Result<Scalar, ScalarError> {
        let slot = self.table.slot(v)?;
        let periodic = matches!(v, Var::Coord(i) if self.table.is_periodic(i));
        let mut out = BTreeMap::new();
        for (k, c) in &self.terms {
            for (f, atom) in k.atom.partial(slot, periodic) {
                accumulate(&mut out, Key { pi: k.pi, atom, exp: k.exp.clone() }, c * f);
            }
            // chain rule through exp(E)
            for (ea, ec) in &k.exp.0 {
                for (f, da) in ea.partial(slot, periodic) {
                    for (g, atom) in k.atom.mul(&da) {
                        let key = Key { pi: k.pi, atom, exp: k.exp.clone() };
                        accumulate(&mut out, key, c * ec * &f * g);
                    }
                }
            }
        }
        Ok(Scalar { table: self.table.clone(), terms: out })
    }

    /// Partial derivative by variable name (`t` for the parameter).
    pub fn partial_by_name(&self, name: &str) -> Result<Scalar, ScalarError> {
        let v = self.table.lookup(name).ok_or_else(|| ScalarError::UnknownVariable(name.to_string()))?;
        self.partial(v)
    }

    pub fn ddt(&self) -> Scalar {
        if !self.table.t_present() {
            return Scalar::zero(&self.table);
        }
        self.partial(Var::T).expect("t slot exists")
    }

    /// Numeric value at a point given by variable name.
    pub fn evaluate(&self, point: &BTreeMap<String, f64>) -> Result<f64, ScalarError> {
        let n = self.table.coord_count();
        let mut values = vec![None; n + 1];
        for (name, &v) in point {
            if let Some(var) = self.table.lookup(name) {
                values[self.table.slot(var)?] = Some(v);
            }
        }
        self.evaluate_slots(&values)
    }

    /// Numeric value with values given per slot (coordinates then t).
    pub fn evaluate_slots(&self, values: &[Option<f64>]) -> Result<f64, ScalarError> {
        let name_of = |slot: usize| {
            if slot == self.table.coord_count() {
                "t".to_string()
            } else {
                self.table.coord_name(slot).to_string()
            }
        };
        let get = |slot: usize| {
            values.get(slot).copied().flatten().ok_or_else(|| ScalarError::MissingAssignment(name_of(slot)))
        };
        let eval_atom = |a: &Atom| -> Result<f64, ScalarError> {
            let mut v = 1.0;
            for (slot, &p) in a.powers.iter().enumerate() {
                if p > 0 {
                    v *= get(slot)?.powi(p as i32);
                }
            }
            if let Some(freq) = a.trig.freq() {
                let mut phase = 0.0;
                for (slot, &k) in freq.iter().enumerate() {
                    if k != 0 {
                        phase += k as f64 * get(slot)?;
                    }
                }
                v *= match a.trig {
                    Trig::Sin(_) => phase.sin(),
                    _ => phase.cos(),
                };
            }
            Ok(v)
        };
        let mut total = 0.0;
        for (k, c) in &self.terms {
            let mut v = to_f64(c) * std::f64::consts::PI.powi(k.pi as i32) * eval_atom(&k.atom)?;
            if !k.exp.0.is_empty() {
                let mut e = 0.0;
                for (a, ec) in &k.exp.0 {
                    e += to_f64(ec) * eval_atom(a)?;
                }
                v *= e.exp();
            }
            total += v;
        }
        Ok(total)
    }

    /// Integral over full periods `[0, 2pi]` of the listed periodic coordinates.
    pub fn integrate_periodic(&self, coords: &[usize]) -> Result<Scalar, ScalarError> {
        for &i in coords {
            if i >= self.table.coord_count() {
                return Err(ScalarError::UnknownVariable(format!("#{i}")));
            }
            if !self.table.is_periodic(i) {
                return Err(ScalarError::NotPeriodic(self.table.coord_name(i).to_string()));
            }
        }
        let mut slots = coords.to_vec();
        slots.sort_unstable();
        slots.dedup();
        let factor = int(1 << slots.len());
        let mut out = BTreeMap::new();
        for (k, c) in &self.terms {
            if k.exp.0.keys().any(|a| a.depends_on_periodic(&slots)) {
                return Err(ScalarError::NotIntegrable);
            }
            if k.atom.depends_on_periodic(&slots) {
                continue;
            }
            let key = Key { pi: k.pi + slots.len() as u32, atom: k.atom.clone(), exp: k.exp.clone() };
            accumulate(&mut out, key, c * &factor);
        }
        Ok(Scalar { table: self.table.clone(), terms: out })
    }

    /// Exact antiderivative in t for terms of shape `t^p * exp(c*t + rest)`.
    pub fn antiderivative_t(&self) -> Result<Scalar, ScalarError> {
        if !self.table.t_present() {
            return Err(ScalarError::NoParameter);
        }
        let ts = self.table.t_slot();
        let mut out = BTreeMap::new();
        for (k, c) in &self.terms {
            let mut rate = Rational::zero();
            for (a, ec) in &k.exp.0 {
                if a.powers[ts] == 0 {
                    continue;
                }
                let pure_t = a.powers[ts] == 1
                    && a.trig == Trig::One
                    && a.powers.iter().enumerate().all(|(s, &p)| s == ts || p == 0);
                if !pure_t {
                    return Err(ScalarError::UnsupportedTDependence);
                }
                rate = ec.clone();
            }
            let p = k.atom.powers[ts];
            if rate.is_zero() {
                let mut key = k.clone();
                key.atom.powers[ts] = p + 1;
                accumulate(&mut out, key, c / int(p as i64 + 1));
            } else {
                // t^p e^{at} integrates to e^{at} sum_j (-1)^j p!/(p-j)! t^{p-j} / a^{j+1}
                let mut falling = Rational::one();
                let mut rate_pow = rate.clone();
                for j in 0..=p {
                    let mut key = k.clone();
                    key.atom.powers[ts] = p - j;
                    let sign = if j % 2 == 0 { int(1) } else { int(-1) };
                    accumulate(&mut out, key, c * &sign * &falling / &rate_pow);
                    falling *= int((p - j) as i64);
                    rate_pow *= &rate;
                }
            }
        }
        Ok(Scalar { table: self.table.clone(), terms: out })
    }

    /// Substitute a rational value for t everywhere, including inside exp.
    pub fn substitute_t(&self, value: &Rational) -> Scalar {
        if !self.table.t_present() {
            return self.clone();
        }
        let ts = self.table.t_slot();
        let subst_atom = |a: &Atom| -> (Rational, Atom) {
            let p = a.powers[ts];
            let mut a2 = a.clone();
            a2.powers[ts] = 0;
            (num::pow::pow(value.clone(), p as usize), a2)
        };
        let mut out = BTreeMap::new();
        for (k, c) in &self.terms {
            let (f, atom) = subst_atom(&k.atom);
            let mut exp = BTreeMap::new();
            for (a, ec) in &k.exp.0 {
                let (g, a2) = subst_atom(a);
                accumulate(&mut exp, a2, ec * g);
            }
            accumulate(&mut out, Key { pi: k.pi, atom, exp: ExpArg(exp) }, c * f);
        }
        Scalar { table: self.table.clone(), terms: out }
    }

    /// Re-express this scalar over a table whose coordinates extend ours.
    pub fn embed(&self, target: &Arc<VariableTable>) -> Result<Scalar, ScalarError> {
        if !self.table.is_prefix_of(target) {
            return Err(ScalarError::TableMismatch);
        }
        if Arc::ptr_eq(&self.table, target) {
            return Ok(self.clone());
        }
        let n_old = self.table.coord_count();
        let n_new = target.coord_count();
        let lift = |a: &Atom| -> Atom {
            let mut powers = vec![0; n_new + 1];
            powers[..n_old].copy_from_slice(&a.powers[..n_old]);
            powers[n_new] = a.powers[n_old];
            let grow = |f: &Vec<i32>| {
                let mut g = f.clone();
                g.resize(n_new, 0);
                g
            };
            let trig = match &a.trig {
                Trig::One => Trig::One,
                Trig::Sin(f) => Trig::Sin(grow(f)),
                Trig::Cos(f) => Trig::Cos(grow(f)),
            };
            Atom { powers, trig }
        };
        let terms = self
            .terms
            .iter()
            .map(|(k, c)| {
                let exp = ExpArg(k.exp.0.iter().map(|(a, v)| (lift(a), v.clone())).collect());
                (Key { pi: k.pi, atom: lift(&k.atom), exp }, c.clone())
            })
            .collect();
        Ok(Scalar { table: target.clone(), terms })
    }
}

pub(crate) fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // very large numerators or denominators
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

pub(crate) fn is_negative(r: &Rational) -> bool {
    r.is_negative()
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { table: self.table.clone(), terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect() }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

// Operator forms panic on table mismatch; use the `try_*` methods when the
// operands come from untrusted input.
macro_rules! binop {
    ($tr:ident, $method:ident, $try:ident) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.$try(rhs).expect("scalar variable tables differ")
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$try(&rhs).expect("scalar variable tables differ")
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$try(rhs).expect("scalar variable tables differ")
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);
