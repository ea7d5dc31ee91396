use std::fmt;

use rand::Rng;

use super::{compute, CatalogEntry, CatalogError};
use crate::foliation::{admissible_variations, FoliationError, FoliationFamily, InfinitesimalVariation};
use crate::forms::DifferentialForm;
use crate::gauge::{
    gv_gauge_witness, random_moves, t_gauge_witness, telescoping_identities, tgv_gauge_witness, GaugeMove,
};
use crate::invariants::{exactness_probe, integrate_or_zero, IntegralValue, InvariantReport};
use crate::parse::{parse_form, parse_scalar};
use crate::random::{seeded, stable_hash, SeededRng};
use crate::scalar::int;
use crate::witness::ExactnessWitness;

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Randomized gauge moves per entry.
    pub cases: usize,
    /// Recompute and compare every expected value.
    pub strict: bool,
    /// Randomized cases per codimension for the telescoping identities.
    pub telescoping_cases: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { seed: 0, cases: 25, strict: false, telescoping_cases: 2 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum EntryOutcome {
    Pass,
    VerificationFailure,
    PreconditionFailure,
}

#[derive(Debug, Clone)]
pub struct EntryReport {
    pub id: String,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
    pub outcome: EntryOutcome,
}

impl EntryReport {
    pub fn passed(&self) -> bool {
        self.outcome == EntryOutcome::Pass
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for EntryReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "entry {} (seed {:#018x})", self.id, self.seed)?;
        for c in &self.checks {
            let mark = if c.passed { "ok  " } else { "FAIL" };
            if c.detail.is_empty() {
                writeln!(f, "  {mark} {}", c.name)?;
            } else {
                writeln!(f, "  {mark} {:<22} {}", c.name, c.detail)?;
            }
        }
        let result = match self.outcome {
            EntryOutcome::Pass => "pass",
            EntryOutcome::VerificationFailure => "verification failure",
            EntryOutcome::PreconditionFailure => "precondition failure",
        };
        writeln!(f, "  result: {result}")
    }
}

struct Run {
    checks: Vec<CheckResult>,
    outcome: EntryOutcome,
}

impl Run {
    fn pass(&mut self, name: &str, detail: impl Into<String>) {
        self.checks.push(CheckResult { name: name.into(), passed: true, detail: detail.into() });
    }

    fn fail(&mut self, name: &str, detail: impl Into<String>) {
        self.checks.push(CheckResult { name: name.into(), passed: false, detail: detail.into() });
        self.outcome = self.outcome.max(EntryOutcome::VerificationFailure);
    }

    fn precondition(&mut self, name: &str, detail: impl Into<String>) {
        self.checks.push(CheckResult { name: name.into(), passed: false, detail: detail.into() });
        self.outcome = EntryOutcome::PreconditionFailure;
    }

    fn record(&mut self, name: &str, result: Result<String, String>) {
        match result {
            Ok(d) => self.pass(name, d),
            Err(d) => self.fail(name, d),
        }
    }
}

fn first_failure(w: &ExactnessWitness) -> Option<String> {
    if !w.residual_is_zero() {
        return Some(format!("{}: residual {}", w.label, w.residual));
    }
    if w.in_ideal == Some(false) {
        return Some(format!("{}: primitive {} is not in the ideal", w.label, w.primitive));
    }
    None
}

fn describe(e: &FoliationError) -> String {
    e.to_string()
}

/// Runs the full structural suite on one entry.
pub fn verify_entry(entry: &CatalogEntry, opts: &VerifyOptions) -> EntryReport {
    let seed = opts.seed ^ stable_hash(&entry.id);
    let mut run = Run { checks: Vec::new(), outcome: EntryOutcome::Pass };
    run_checks(entry, opts, seed, &mut run);
    EntryReport { id: entry.id.clone(), seed, checks: run.checks, outcome: run.outcome }
}

fn run_checks(entry: &CatalogEntry, opts: &VerifyOptions, seed: u64, run: &mut Run) {
    let mut rng = seeded(seed);
    let unsolved = match entry.unsolved() {
        Ok(f) => f,
        Err(e) => return run.precondition("family", describe(&e)),
    };

    let defects: Vec<DifferentialForm> =
        unsolved.integrability_defects().into_iter().filter(|d| !d.is_zero()).collect();
    if !entry.expects_integrable() {
        if defects.is_empty() {
            run.fail("integrability", "expected a non-integrable form, found alpha integrable");
        } else {
            let detail = match unsolved.solve() {
                Err(FoliationError::NotIntegrable { index, defect }) => {
                    format!("fails as expected: d alpha_{index} ^ alpha = {defect}")
                }
                Err(e) => format!("fails as expected: {e}"),
                Ok(_) => String::new(),
            };
            if detail.is_empty() {
                run.fail("integrability", "solving a non-integrable family succeeded");
            } else {
                run.pass("integrability", detail);
            }
        }
        if opts.strict {
            strict_non_integrable(entry, &unsolved, run);
        }
        return;
    }
    if let Some(d) = defects.first() {
        return run.precondition("integrability", format!("d alpha ^ alpha = {d}"));
    }
    run.pass("integrability", "d alpha_i ^ alpha = 0");

    let fam = match entry.family() {
        Ok(f) => f,
        Err(CatalogError::Foliation { source: e @ FoliationError::Verification { .. }, .. }) => {
            return run.fail("chain", describe(&e));
        }
        Err(e) => return run.precondition("chain", e.to_string()),
    };
    run.pass("chain", format!("beta = {}", fam.beta().map(|b| b.to_string()).unwrap_or_default()));

    run.record("closedness", closedness(&fam));
    run.record("ideal", ideal(&fam));
    run.record("gauge", gauge(&fam, opts.cases, &mut rng));
    run.record("gv_derivative", witness_check(fam.gv_derivative_identity()));
    if fam.q() == 1 {
        run.record("vanishing_chain", vanishing_chain(&fam));
        run.record("circle_extension", circle_extension(&fam));
        run.record("infinitesimal", infinitesimal(entry, &fam, &mut rng));
    }
    if let Some(x) = &entry.flow {
        let result = match fam.flow_family_check(x) {
            Ok(r) => {
                let mut ws = vec![&r.t_witness];
                ws.extend(r.tgv_witness.as_ref());
                match ws.iter().find_map(|w| first_failure(w)) {
                    Some(f) => Err(f),
                    None => Ok(format!("generator {x}")),
                }
            }
            Err(e) => Err(describe(&e)),
        };
        run.record("flow", result);
    }
    run.record("telescoping", telescoping(opts.telescoping_cases, &mut rng));
    if opts.strict {
        strict_expected(entry, &fam, run);
    }
}

fn closedness(fam: &FoliationFamily) -> Result<String, String> {
    fam.gv_form().map_err(|e| describe(&e))?;
    fam.tgv_form().map_err(|e| describe(&e))?;
    fam.t_form().map_err(|e| describe(&e))?;
    fam.reeb_rep().map_err(|e| describe(&e))?;
    Ok("gv, tgv and T closed".into())
}

fn ideal(fam: &FoliationFamily) -> Result<String, String> {
    let beta = fam.beta().map_err(|e| describe(&e))?;
    let t = fam.t_form().map_err(|e| describe(&e))?;
    let mut items: Vec<(String, DifferentialForm)> =
        fam.alphas().iter().enumerate().map(|(i, a)| (format!("alpha_{}", i + 1), a.clone())).collect();
    items.push(("d beta".into(), beta.d()));
    items.push(("T".into(), t));
    for (name, f) in items {
        if !fam.ideal_membership(&f).map_err(|e| describe(&e))? {
            return Err(format!("{name} = {f} is not in the ideal"));
        }
    }
    Ok("alpha_i, d beta, T in the ideal".into())
}

fn gauge(fam: &FoliationFamily, cases: usize, rng: &mut SeededRng) -> Result<String, String> {
    let moves = random_moves(fam, cases, rng);
    let closed = fam.chart().is_closed();
    let mut timed = (0, 0);
    let mut probes = 0;
    for m in &moves {
        if m.is_t_dependent() {
            match m {
                GaugeMove::Rescale { .. } => timed.0 += 1,
                GaugeMove::ShiftBeta { .. } => timed.1 += 1,
            }
        }
        let mut ws = vec![gv_gauge_witness(fam, m), t_gauge_witness(fam, m)];
        if fam.q() == 1 {
            ws.push(tgv_gauge_witness(fam, m));
        }
        for w in ws {
            let w = w.map_err(|e| format!("{m}: {}", describe(&e)))?;
            if let Some(f) = first_failure(&w) {
                return Err(f);
            }
            if w.label.starts_with("T") && w.in_ideal != Some(true) {
                return Err(format!("{}: primitive not shown to lie in the ideal", w.label));
            }
            if closed && w.lhs.degree() == fam.chart().dim() {
                probes += 1;
                if !exactness_probe(&w.lhs).map_err(|e| e.to_string())? {
                    return Err(format!("{}: lhs does not integrate to zero", w.label));
                }
            }
        }
    }
    Ok(format!(
        "{} moves ({} t-dependent rescalings, {} t-dependent shifts), {probes} Stokes probes",
        moves.len(),
        timed.0,
        timed.1
    ))
}

fn witness_check(w: Result<ExactnessWitness, FoliationError>) -> Result<String, String> {
    let w = w.map_err(|e| describe(&e))?;
    match first_failure(&w) {
        Some(f) => Err(f),
        None => Ok(format!("primitive {}", w.primitive)),
    }
}

fn vanishing_chain(fam: &FoliationFamily) -> Result<String, String> {
    let r = fam.vanishing_chain_check().map_err(|e| describe(&e))?;
    if !r.identities_hold() {
        return Err(format!("identities (i) {} | (ii) {} | (iii) {}", r.identity_i, r.identity_ii, r.identity_iii));
    }
    if !r.holds() {
        let w = r.tgv_witness.as_ref().and_then(first_failure).unwrap_or_default();
        return Err(format!("tgv witness failed {w}"));
    }
    let mut flags = Vec::new();
    for (name, on) in [("beta = 0", r.beta_zero), ("gamma = 0", r.gamma_zero), ("delta = 0", r.delta_zero)] {
        if on {
            flags.push(name);
        }
    }
    let flags = if flags.is_empty() { String::new() } else { format!(", {}", flags.join(", ")) };
    let exact = if r.tgv_exact() { ", tgv exact" } else { "" };
    Ok(format!("identities (i)-(iii) hold{flags}{exact}"))
}

fn circle_extension(fam: &FoliationFamily) -> Result<String, String> {
    let names = fam.chart().names();
    let name =
        ["w", "s", "r", "u"].into_iter().find(|n| !names.iter().any(|m| m == n)).ok_or("no free coordinate name")?;
    let ext = fam.extend_by_circle(name).map_err(|e| describe(&e))?;
    let tgv = ext.tgv_form().map_err(|e| describe(&e))?;
    let value = integrate_or_zero(&tgv).map_err(|e| e.to_string())?;
    if value.is_zero() {
        Ok(format!("integral of tgv over the {}-dimensional extension is 0", ext.chart().dim()))
    } else {
        Err(format!("integral of tgv is {value}"))
    }
}

fn infinitesimal(entry: &CatalogEntry, fam: &FoliationFamily, rng: &mut SeededRng) -> Result<String, String> {
    let base = fam.substitute_t(&int(0));
    let homographic = base.delta().map_err(|e| describe(&e))?.is_zero();
    let mut omegas = entry.omegas.clone();
    if fam.chart().is_lie() {
        let basis = admissible_variations(&base).map_err(|e| describe(&e))?;
        if !basis.is_empty() {
            for _ in 0..20 {
                let mut omega = DifferentialForm::zero(fam.chart(), 1);
                for b in &basis {
                    omega = &omega + &b.scale_rational(&int(rng.gen_range(-9..=9)));
                }
                omegas.push(omega);
            }
        }
    }
    if omegas.is_empty() {
        return Ok("no variations to test".into());
    }
    for omega in &omegas {
        let v = InfinitesimalVariation::new(&base, omega).map_err(|e| format!("omega = {omega}: {}", describe(&e)))?;
        v.dgv().map_err(|e| describe(&e))?;
        let t = v.t_infinitesimal().map_err(|e| describe(&e))?;
        if homographic && !t.is_zero() {
            return Err(format!("omega = {omega}: T infinitesimal = {t} with delta = 0"));
        }
    }
    let note = if homographic { ", T infinitesimal = 0 (delta = 0)" } else { "" };
    Ok(format!("{} admissible variations{note}", omegas.len()))
}

fn telescoping(cases: usize, rng: &mut SeededRng) -> Result<String, String> {
    let mut total = 0;
    for q in 1..=3 {
        for _ in 0..cases {
            for check in telescoping_identities(q, rng).map_err(|e| describe(&e))? {
                total += 1;
                if !check.holds {
                    return Err(format!("q = {q}, {}: residual {}", check.name, check.residual));
                }
            }
        }
    }
    Ok(format!("{total} identities for q = 1, 2, 3"))
}

fn strict_non_integrable(entry: &CatalogEntry, fam: &FoliationFamily, run: &mut Run) {
    for (key, exp) in &entry.expected {
        let result = match key.as_str() {
            "integrable" => Ok(()),
            "defect" => match parse_form(&entry.chart, &exp.value) {
                Ok(f) if fam.integrability_defects().first() == Some(&f) => Ok(()),
                Ok(_) => Err(format!(
                    "defect is {}",
                    fam.integrability_defects().first().map(|d| d.to_string()).unwrap_or_default()
                )),
                Err(e) => Err(e.to_string()),
            },
            other => Err(format!("`{other}` cannot be computed for a non-integrable entry")),
        };
        record_expected(run, key, exp, result);
    }
}

fn record_expected(run: &mut Run, key: &str, exp: &super::Expected, result: Result<(), String>) {
    let name = format!("expected.{key}");
    match result {
        Ok(()) => run.pass(&name, format!("{} [{}]", exp.value, exp.provenance)),
        Err(d) => run.fail(&name, format!("expected {} [{}], {d}", exp.value, exp.provenance)),
    }
}

fn strict_expected(entry: &CatalogEntry, fam: &FoliationFamily, run: &mut Run) {
    let report = match compute(entry) {
        Ok(r) => r,
        Err(e) => return run.fail("expected", e.to_string()),
    };
    for (key, exp) in &entry.expected {
        record_expected(run, key, exp, compare(entry, fam, &report, key, &exp.value));
    }
}

fn compare(
    entry: &CatalogEntry,
    fam: &FoliationFamily,
    report: &InvariantReport,
    key: &str,
    value: &str,
) -> Result<(), String> {
    let table = entry.chart.table();
    let scalar = |actual: &crate::Scalar| -> Result<(), String> {
        let want = parse_scalar(table, value).map_err(|e| e.to_string())?;
        if &want == actual {
            Ok(())
        } else {
            Err(format!("computed {actual}"))
        }
    };
    let form = |actual: Result<DifferentialForm, FoliationError>| -> Result<(), String> {
        let actual = actual.map_err(|e| describe(&e))?;
        let want = parse_form(&entry.chart, value).map_err(|e| e.to_string())?;
        if want == actual || (want.is_zero() && actual.is_zero()) {
            Ok(())
        } else {
            Err(format!("computed {actual}"))
        }
    };
    match key {
        "integrable" => {
            if value == "true" {
                Ok(())
            } else {
                Err("the family is integrable".into())
            }
        }
        "gv" => scalar(&report.gv),
        "tgv" => scalar(&report.tgv),
        "dgv" => scalar(&report.dgv),
        "gv_coefficient" => scalar(&report.gv_coefficient),
        "igv" => match &report.igv {
            IntegralValue::Exact(s) => scalar(s),
            IntegralValue::Numeric(n) => {
                let want = parse_scalar(table, value).map_err(|e| e.to_string())?;
                let want = crate::invariants::eval_t(&want, 0.0).map_err(|e| e.to_string())?;
                if (want - n.value).abs() <= 1e-10 {
                    Ok(())
                } else {
                    Err(format!("computed {} numerically", n.value))
                }
            }
        },
        "beta" => form(fam.beta().cloned()),
        "gamma" => form(fam.gamma().cloned()),
        "delta" => form(fam.delta().cloned()),
        "epsilon" => form(fam.epsilon().cloned()),
        "gv_form" => form(fam.gv_form()),
        "tgv_form" => form(fam.tgv_form()),
        "t_form" => form(fam.t_form()),
        k if k.starts_with("gamma_") => {
            let i: usize = k["gamma_".len()..].parse().map_err(|_| format!("bad key `{k}`"))?;
            form(
                fam.gammas().and_then(|g| {
                    g.get(i.wrapping_sub(1)).cloned().ok_or(FoliationError::Precondition(format!("no {k}")))
                }),
            )
        }
        other => Err(format!("unknown expected key `{other}`")),
    }
}
