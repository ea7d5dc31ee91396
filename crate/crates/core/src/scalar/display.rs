//! Rendering in the catalog expression syntax. The output parses back to
//! the same canonical scalar.

use std::fmt;

use num::{One, Signed};

use super::{Atom, Rational, Scalar, Trig, VariableTable};

fn phase(table: &VariableTable, freq: &[i32]) -> String {
    let mut out = String::new();
    for (i, &k) in freq.iter().enumerate() {
        if k == 0 {
            continue;
        }
        let name = table.coord_name(i);
        let mag = k.unsigned_abs();
        let body = if mag == 1 { name.to_string() } else { format!("{mag}*{name}") };
        if out.is_empty() {
            if k < 0 {
                out.push('-');
            }
        } else {
            out.push_str(if k < 0 { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    out
}

fn atom_factors(table: &VariableTable, atom: &Atom, out: &mut Vec<String>) {
    let ts = table.t_slot();
    let mut push_power = |name: &str, p: u32| match p {
        0 => {}
        1 => out.push(name.to_string()),
        p => out.push(format!("{name}^{p}")),
    };
    for (slot, &p) in atom.powers.iter().enumerate() {
        if slot != ts {
            push_power(table.coord_name(slot), p);
        }
    }
    push_power("t", atom.powers[ts]);
    match &atom.trig {
        Trig::One => {}
        Trig::Sin(f) => out.push(format!("sin({})", phase(table, f))),
        Trig::Cos(f) => out.push(format!("cos({})", phase(table, f))),
    }
}

fn write_sum<'a>(f: &mut fmt::Formatter<'_>, terms: impl Iterator<Item = (Vec<String>, &'a Rational)>) -> fmt::Result {
    let mut first = true;
    for (factors, c) in terms {
        let mag = c.abs();
        let body = if factors.is_empty() {
            mag.to_string()
        } else if mag.is_one() {
            factors.join("*")
        } else {
            format!("{}*{}", mag, factors.join("*"))
        };
        match (first, c.is_negative()) {
            (true, true) => write!(f, "-{body}")?,
            (true, false) => write!(f, "{body}")?,
            (false, true) => write!(f, " - {body}")?,
            (false, false) => write!(f, " + {body}")?,
        }
        first = false;
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

struct ExpDisplay<'a>(&'a VariableTable, &'a super::ExpArg);

impl fmt::Display for ExpDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_sum(
            f,
            self.1 .0.iter().map(|(a, c)| {
                let mut factors = Vec::new();
                atom_factors(self.0, a, &mut factors);
                (factors, c)
            }),
        )
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let table = &*self.table;
        write_sum(
            f,
            self.terms.iter().map(|(k, c)| {
                let mut factors = Vec::new();
                match k.pi {
                    0 => {}
                    1 => factors.push("pi".to_string()),
                    p => factors.push(format!("pi^{p}")),
                }
                atom_factors(table, &k.atom, &mut factors);
                if !k.exp.0.is_empty() {
                    factors.push(format!("exp({})", ExpDisplay(table, &k.exp)));
                }
                (factors, c)
            }),
        )
    }
}
