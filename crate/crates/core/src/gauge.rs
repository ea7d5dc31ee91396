//! The two gauge moves (rescaling alpha, shifting beta by an ideal element)
//! and explicit primitives showing that every invariant representative
//! changes by an exact form.

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::foliation::{sign, FoliationError, FoliationFamily};
use crate::forms::{Chart, DifferentialForm, VectorField};
use crate::random::{ScalarGen, SeededRng};
use crate::scalar::{int, rat, Rational, Scalar};
use crate::witness::ExactnessWitness;

#[derive(Debug, Clone, PartialEq)]
pub enum GaugeMove {
    /// `alpha_1 -> exp(h) alpha_1`.
    Rescale { h: Scalar },
    /// `beta -> beta + sum_i g_i alpha_i`.
    ShiftBeta { g: Vec<Scalar> },
}

impl GaugeMove {
    pub fn is_t_dependent(&self) -> bool {
        match self {
            GaugeMove::Rescale { h } => h.depends_on(crate::Var::T),
            GaugeMove::ShiftBeta { g } => g.iter().any(|s| s.depends_on(crate::Var::T)),
        }
    }
}

impl fmt::Display for GaugeMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GaugeMove::Rescale { h } => write!(f, "rescale(h = {h})"),
            GaugeMove::ShiftBeta { g } => {
                let parts: Vec<String> = g.iter().map(ToString::to_string).collect();
                write!(f, "shift(g = [{}])", parts.join(", "))
            }
        }
    }
}

fn binomial(n: usize, k: usize) -> Rational {
    (0..k).fold(int(1), |acc, i| acc * int((n - i) as i64) / int(i as i64 + 1))
}

fn function_form(chart: &Arc<Chart>, f: &Scalar) -> DifferentialForm {
    DifferentialForm::function(chart, f.clone()).expect("scalar on the chart table")
}

fn check(w: ExactnessWitness) -> Result<ExactnessWitness, FoliationError> {
    if w.holds() {
        Ok(w)
    } else if w.residual_is_zero() {
        Err(FoliationError::Verification {
            stage: format!("{}: primitive in the foliation ideal", w.label),
            residual: w.primitive.to_string(),
        })
    } else {
        Err(FoliationError::Verification { stage: w.label.clone(), residual: w.residual.to_string() })
    }
}

/// `tau = sum_i g_i alpha_i`.
pub fn shift_form(family: &FoliationFamily, g: &[Scalar]) -> Result<DifferentialForm, FoliationError> {
    if g.len() != family.q() {
        return Err(FoliationError::Precondition(format!("shift needs {} coefficients", family.q())));
    }
    let mut tau = DifferentialForm::zero(family.chart(), 1);
    for (a, gi) in family.alphas().iter().zip(g) {
        if gi.table() != family.chart().table() {
            return Err(crate::FormError::ChartMismatch.into());
        }
        tau = tau.try_add(&a.scale(gi))?;
    }
    Ok(tau)
}

/// `beta` after the move, from the move itself.
fn moved_beta(family: &FoliationFamily, m: &GaugeMove) -> Result<DifferentialForm, FoliationError> {
    let beta = family.beta()?;
    Ok(match m {
        GaugeMove::Rescale { h } => {
            let dh = function_form(family.chart(), h).d();
            beta.try_add(&dh.scale_rational(&sign(family.q() % 2 == 1)))?
        }
        GaugeMove::ShiftBeta { g } => beta.try_add(&shift_form(family, g)?)?,
    })
}

/// Apply a move and re-solve. Rescaling multiplies alpha_1 only, so the
/// transversal X_1 is divided by the same factor and
/// `beta -> beta + (-1)^q dh` keeps `d alpha = alpha ^ beta`.
pub fn apply(family: &FoliationFamily, m: &GaugeMove) -> Result<FoliationFamily, FoliationError> {
    let beta = moved_beta(family, m)?;
    let (alphas, frame) = match m {
        GaugeMove::Rescale { h } => {
            if !h.is_exp_free() {
                return Err(FoliationError::Precondition("rescaling exponent must be exp-free".into()));
            }
            if h.table() != family.chart().table() {
                return Err(crate::FormError::ChartMismatch.into());
            }
            let f = Scalar::exp(h)?;
            let f_inv = Scalar::exp(&-h)?;
            let mut alphas = family.alphas().to_vec();
            alphas[0] = alphas[0].scale(&f);
            let frame = family.transversal().map(|fr| {
                let mut fr: Vec<VectorField> = fr.to_vec();
                fr[0] = fr[0].scale(&f_inv);
                fr
            });
            (alphas, frame)
        }
        GaugeMove::ShiftBeta { .. } => (family.alphas().to_vec(), family.transversal().map(<[_]>::to_vec)),
    };
    let mut next = FoliationFamily::new(alphas)?;
    if let Some(frame) = frame {
        next = next.with_transversal(frame)?;
    }
    next.with_beta(beta).solve()
}

/// `gv(F') - gv(F) = d P` with `P = (-1)^q h (d beta)^q` for a rescaling and
/// `P = sum_{i<q} C(q,i) tau ^ beta ^ (d beta)^i ^ (d tau)^(q-1-i)` for a shift.
pub fn gv_gauge_witness(family: &FoliationFamily, m: &GaugeMove) -> Result<ExactnessWitness, FoliationError> {
    let q = family.q();
    let moved = apply(family, m)?;
    let lhs = moved.gv_form()?.try_sub(&family.gv_form()?)?;
    let beta = family.beta()?;
    let b = beta.d();
    let primitive = match m {
        // a rescaling constant in space leaves gv unchanged
        GaugeMove::Rescale { h } if function_form(family.chart(), h).d().is_zero() => {
            DifferentialForm::zero(family.chart(), 2 * q)
        }
        GaugeMove::Rescale { h } => b.wedge_power(q).scale(h).scale_rational(&sign(q % 2 == 1)),
        GaugeMove::ShiftBeta { g } => {
            let tau = shift_form(family, g)?;
            let s = tau.d();
            let mut acc = DifferentialForm::zero(family.chart(), 2 * q);
            for i in 0..q {
                let term = tau.wedge(beta)?.wedge(&b.wedge_power(i))?.wedge(&s.wedge_power(q - 1 - i))?;
                acc = acc.try_add(&term.scale_rational(&binomial(q, i)))?;
            }
            acc
        }
    };
    check(ExactnessWitness::new(format!("gv: {m}"), lhs, primitive)?)
}

/// Codimension one: `tgv(F') - tgv(F) = d P` with
/// `P = -beta' ^ tau ^ beta - 1/2 tau' ^ tau ^ beta` for a shift and
/// `P = -h' beta ^ d beta + beta' ^ (h d beta) + h' d(h d beta)` for a rescaling.
pub fn tgv_gauge_witness(family: &FoliationFamily, m: &GaugeMove) -> Result<ExactnessWitness, FoliationError> {
    if family.q() != 1 {
        return Err(FoliationError::RequiresCodimOne("tgv gauge witness"));
    }
    let moved = apply(family, m)?;
    let lhs = moved.tgv_form()?.try_sub(&family.tgv_form()?)?;
    let beta = family.beta()?;
    let bdot = beta.ddt();
    let b = beta.d();
    let primitive = match m {
        GaugeMove::ShiftBeta { g } => {
            let tau = shift_form(family, g)?;
            let first = bdot.wedge(&tau)?.wedge(beta)?;
            let second = tau.ddt().wedge(&tau)?.wedge(beta)?.scale_rational(&rat(1, 2));
            -&(&first + &second)
        }
        GaugeMove::Rescale { h } => {
            let hdot = h.ddt();
            let h_db = b.scale(h);
            let first = beta.wedge(&b)?.scale(&hdot);
            let second = bdot.wedge(&h_db)?;
            let third = h_db.d().scale(&hdot);
            &(&second - &first) + &third
        }
    };
    check(ExactnessWitness::new(format!("tgv: {m}"), lhs, primitive)?)
}

/// Primitive of `T(beta + tau) - T(beta)` built from the telescoping
/// identities; every term carries a factor tau.
pub fn t_shift_primitive(
    beta: &DifferentialForm,
    tau: &DifferentialForm,
    q: usize,
) -> Result<DifferentialForm, FoliationError> {
    let bdot = beta.ddt();
    let tdot = tau.ddt();
    let b = beta.d();
    let s = tau.d();
    let qr = int(q as i64);
    let mut acc = tau.wedge(&tdot)?.wedge(&s.wedge_power(q - 1))?.scale_rational(&(qr.clone() / int(q as i64 + 1)));
    acc = acc.try_add(&tau.wedge(&bdot)?.wedge(&b.wedge_power(q - 1))?.scale_rational(&qr))?;
    for i in 0..q.saturating_sub(1) {
        let c = binomial(q, i);
        let ratio = int((q - i - 1) as i64) / int(i as i64 + 1);
        let first = tau.wedge(&tdot)?.wedge(&b.wedge_power(i + 1))?.wedge(&s.wedge_power(q - i - 2))?;
        let second = bdot.wedge(tau)?.wedge(&b.wedge_power(i))?.wedge(&s.wedge_power(q - i - 1))?;
        acc = acc.try_add(&first.scale_rational(&(&c * &ratio)))?.try_sub(&second.scale_rational(&c))?;
    }
    Ok(acc)
}

/// `T(F') - T(F) = d P` with P in the foliation ideal: `(-1)^q h' (d beta)^q`
/// for a rescaling, the telescoping primitive for a shift.
pub fn t_gauge_witness(family: &FoliationFamily, m: &GaugeMove) -> Result<ExactnessWitness, FoliationError> {
    let q = family.q();
    let moved = apply(family, m)?;
    let lhs = moved.t_form()?.try_sub(&family.t_form()?)?;
    let beta = family.beta()?;
    let primitive = match m {
        GaugeMove::Rescale { h } => beta.d().wedge_power(q).scale(&h.ddt()).scale_rational(&sign(q % 2 == 1)),
        GaugeMove::ShiftBeta { g } => t_shift_primitive(beta, &shift_form(family, g)?, q)?,
    };
    let w = ExactnessWitness::new(format!("T: {m}"), lhs, primitive)?;
    let inside = family.ideal_membership(&w.primitive)?;
    check(w.with_ideal_flag(inside))
}

/// Randomized moves for a family. The first two are a t-dependent
/// rescaling and a t-dependent shift; the rest alternate.
pub fn random_moves(family: &FoliationFamily, count: usize, rng: &mut SeededRng) -> Vec<GaugeMove> {
    let table = family.chart().table();
    let gen = ScalarGen::small();
    let h_gen = ScalarGen::small().without_exp();
    (0..count)
        .map(|k| {
            let force_t = k < 2 || rng.gen_bool(0.5);
            let rescale = if k < 2 { k == 0 } else { k % 2 == 0 };
            let draw = |g: &ScalarGen, rng: &mut SeededRng| {
                if force_t {
                    g.sample_t_dependent(table, rng)
                } else {
                    g.sample(table, rng)
                }
            };
            if rescale {
                GaugeMove::Rescale { h: draw(&h_gen, rng) }
            } else {
                let mut g: Vec<Scalar> = (0..family.q()).map(|_| gen.sample(table, rng)).collect();
                g[0] = draw(&gen, rng);
                GaugeMove::ShiftBeta { g }
            }
        })
        .collect()
}

/// One standalone identity and whether it held.
#[derive(Debug, Clone)]
pub struct IdentityCheck {
    pub name: String,
    pub holds: bool,
    pub residual: String,
}

impl IdentityCheck {
    fn form(name: String, residual: DifferentialForm) -> Self {
        IdentityCheck { name, holds: residual.is_zero(), residual: residual.to_string() }
    }
}

/// Random data for the telescoping identities in codimension q: the torus
/// `T^(2q+2)` with coordinates `z_1..z_q, x_1..x_(q+2)`, `alpha_i = dz_i`,
/// `tau = sum g_i dz_i` and `beta = d psi + sum b_i dz_i + w(z, t) dx_1`.
pub struct TelescopingData {
    pub family: FoliationFamily,
    pub beta: DifferentialForm,
    pub tau: DifferentialForm,
}

pub fn telescoping_data(q: usize, rng: &mut SeededRng) -> Result<TelescopingData, FoliationError> {
    let mut names: Vec<String> = (1..=q).map(|i| format!("z{i}")).collect();
    names.extend((1..=q + 2).map(|i| format!("x{i}")));
    let coords: Vec<(&str, bool)> = names.iter().map(|n| (n.as_str(), true)).collect();
    let chart = Chart::coordinate(&coords)?;
    let table = chart.table();
    let n = chart.dim();
    let gen = ScalarGen::small();
    let z: Vec<usize> = (0..q).collect();
    let spread: Vec<usize> = (0..n).collect();

    let alphas: Vec<DifferentialForm> = (0..q).map(|i| DifferentialForm::basis(&chart, i)).collect::<Result<_, _>>()?;
    let frame: Vec<VectorField> = (0..q).map(|i| VectorField::basis(&chart, i)).collect::<Result<_, _>>()?;
    let family = FoliationFamily::new(alphas.clone())?.with_transversal(frame)?;

    let psi = gen.sample_t_dependent(table, rng);
    let mut beta = function_form(&chart, &psi).d();
    for a in &alphas {
        beta = beta.try_add(&a.scale(&gen.sample_in(table, &spread, rng)))?;
    }
    let w = gen.sample_in(table, &z, rng);
    beta = beta.try_add(&DifferentialForm::basis(&chart, q)?.scale(&w))?;

    let mut tau = DifferentialForm::zero(&chart, 1);
    for (i, a) in alphas.iter().enumerate() {
        let g = if i == 0 { gen.sample_t_dependent(table, rng) } else { gen.sample_in(table, &spread, rng) };
        tau = tau.try_add(&a.scale(&g))?;
    }
    Ok(TelescopingData { family, beta, tau })
}

/// Every displayed step of the telescoping proof for the change of
/// `beta' (d beta)^q` under `beta -> beta + tau`, on one random instance.
pub fn telescoping_identities(q: usize, rng: &mut SeededRng) -> Result<Vec<IdentityCheck>, FoliationError> {
    if q == 0 {
        return Err(FoliationError::Precondition("codimension must be positive".into()));
    }
    let data = telescoping_data(q, rng)?;
    let (family, beta, tau) = (&data.family, &data.beta, &data.tau);
    let alpha = family.alpha();
    let bdot = beta.ddt();
    let tdot = tau.ddt();
    let b = beta.d();
    let s = tau.d();
    let qr = int(q as i64);
    let mut out = Vec::new();

    // hypotheses: beta, tau, d beta, d tau lie in the ideal
    let ideal = [&b, tau, &s].iter().all(|f| f.wedge(&alpha).map(|x| x.is_zero()).unwrap_or(false));
    out.push(IdentityCheck { name: "inputs in the ideal".into(), holds: ideal, residual: String::new() });

    // tau' S^q + q tau dtau' S^(q-1) = 0
    let lhs = tdot.wedge(&s.wedge_power(q))?;
    let lhs = lhs.try_add(&tau.wedge(&tdot.d())?.wedge(&s.wedge_power(q - 1))?.scale_rational(&qr))?;
    out.push(IdentityCheck::form(format!("q={q}: tau' (d tau)^q + q tau d tau' (d tau)^(q-1) = 0"), lhs));

    // d(tau tau' S^(q-1)) = (q+1)/q tau' S^q
    let left = tau.wedge(&tdot)?.wedge(&s.wedge_power(q - 1))?.d();
    let right = tdot.wedge(&s.wedge_power(q))?.scale_rational(&(int(q as i64 + 1) / qr.clone()));
    out.push(IdentityCheck::form(
        format!("q={q}: d(tau tau' (d tau)^(q-1)) = (q+1)/q tau' (d tau)^q"),
        left.try_sub(&right)?,
    ));

    // q beta' B^(q-1) S + tau' B^q = q d(tau beta' B^(q-1))
    let left = bdot.wedge(&b.wedge_power(q - 1))?.wedge(&s)?.scale_rational(&qr);
    let left = left.try_add(&tdot.wedge(&b.wedge_power(q))?)?;
    let right = tau.wedge(&bdot)?.wedge(&b.wedge_power(q - 1))?.d().scale_rational(&qr);
    out.push(IdentityCheck::form(
        format!("q={q}: q beta' (d beta)^(q-1) d tau + tau' (d beta)^q = q d(tau beta' (d beta)^(q-1))"),
        left.try_sub(&right)?,
    ));

    for i in 0..q.saturating_sub(1) {
        let bi = b.wedge_power(i);
        let bi1 = b.wedge_power(i + 1);
        // Leibniz on the vanishing product tau B^(i+1) S^(q-i-1)
        let l1 = tdot.wedge(&bi1)?.wedge(&s.wedge_power(q - i - 1))?;
        let l2 = tau.wedge(&bdot.d())?.wedge(&bi)?.wedge(&s.wedge_power(q - i - 1))?.scale_rational(&int(i as i64 + 1));
        let l3 = tau
            .wedge(&bi1)?
            .wedge(&tdot.d())?
            .wedge(&s.wedge_power(q - i - 2))?
            .scale_rational(&int((q - i - 1) as i64));
        out.push(IdentityCheck::form(
            format!("q={q}, i={i}: d/dt of tau (d beta)^(i+1) (d tau)^(q-i-1) = 0"),
            &(&l1 + &l2) + &l3,
        ));

        // C(q,i)[(q-i-1)/(i+1) d(tau tau' B^(i+1) S^(q-i-2)) - d(beta' tau B^i S^(q-i-1))]
        //   = C(q,i+1) tau' B^(i+1) S^(q-i-1) + C(q,i) beta' B^i S^(q-i)
        let c = binomial(q, i);
        let ratio = int((q - i - 1) as i64) / int(i as i64 + 1);
        let p1 = tau.wedge(&tdot)?.wedge(&bi1)?.wedge(&s.wedge_power(q - i - 2))?.d().scale_rational(&ratio);
        let p2 = bdot.wedge(tau)?.wedge(&bi)?.wedge(&s.wedge_power(q - i - 1))?.d();
        let left = p1.try_sub(&p2)?.scale_rational(&c);
        let r1 = tdot.wedge(&bi1)?.wedge(&s.wedge_power(q - i - 1))?.scale_rational(&binomial(q, i + 1));
        let r2 = bdot.wedge(&bi)?.wedge(&s.wedge_power(q - i))?.scale_rational(&c);
        out.push(IdentityCheck::form(format!("q={q}, i={i}: telescoping step"), left.try_sub(&(&r1 + &r2))?));
    }

    let binomial_ok = (0..q).all(|i| binomial(q, i) * int((q - i) as i64) / int(i as i64 + 1) == binomial(q, i + 1));
    out.push(IdentityCheck {
        name: format!("q={q}: C(q,i) (q-i)/(i+1) = C(q,i+1)"),
        holds: binomial_ok,
        residual: String::new(),
    });

    // full expansion
    let moved = beta.try_add(tau)?;
    let t_new = moved.ddt().wedge(&moved.d().wedge_power(q))?;
    let t_old = bdot.wedge(&b.wedge_power(q))?;
    let primitive = t_shift_primitive(beta, tau, q)?;
    let residual = t_new.try_sub(&t_old)?.try_sub(&primitive.d())?;
    out.push(IdentityCheck::form(format!("q={q}: T(beta + tau) - T(beta) = d P"), residual));
    let inside = primitive.wedge(&alpha)?.is_zero();
    out.push(IdentityCheck { name: format!("q={q}: P in the ideal"), holds: inside, residual: String::new() });

    // gv shift primitive on the same data
    let gv_new = moved.wedge(&moved.d().wedge_power(q))?;
    let gv_old = beta.wedge(&b.wedge_power(q))?;
    let mut p = DifferentialForm::zero(family.chart(), 2 * q);
    for i in 0..q {
        let term = tau.wedge(beta)?.wedge(&b.wedge_power(i))?.wedge(&s.wedge_power(q - 1 - i))?;
        p = p.try_add(&term.scale_rational(&binomial(q, i)))?;
    }
    out.push(IdentityCheck::form(
        format!("q={q}: gv(beta + tau) - gv(beta) = d P"),
        gv_new.try_sub(&gv_old)?.try_sub(&p.d())?,
    ));
    Ok(out)
}
