//! Foliation families given by defining 1-forms, their auxiliary chain
//! `d alpha = alpha ^ beta`, `d beta = sum alpha_i ^ gamma_i` and, in
//! codimension one, `d gamma = beta ^ gamma + alpha ^ delta`,
//! `d delta = 2 beta ^ delta + alpha ^ epsilon`.

use std::sync::Arc;

use num::{One, Zero};
use thiserror::Error;

use crate::forms::{Chart, DifferentialForm, FormError, VectorField};
use crate::linalg::null_space;
use crate::scalar::{int, Rational, Scalar, ScalarError};
use crate::witness::ExactnessWitness;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FoliationError {
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("at least one defining form is required")]
    Empty,
    #[error("defining form {0} is not a 1-form")]
    NotOneForm(usize),
    #[error("alpha_1 ^ ... ^ alpha_q vanishes identically")]
    DegenerateAlpha,
    #[error("alpha vanishes at the declared witness point")]
    VanishesAtWitness,
    #[error("not integrable: d alpha_{index} ^ alpha = {defect}")]
    NotIntegrable { index: usize, defect: String },
    #[error("a transversal frame is required")]
    MissingTransversal,
    #[error("transversal frame has {found} fields, expected {expected}")]
    TransversalCount { expected: usize, found: usize },
    #[error("alpha_{i}(X_{j}) = {value}, expected {expected}")]
    NotDual { i: usize, j: usize, value: String, expected: i64 },
    #[error("{stage} failed; residual {residual}")]
    Verification { stage: String, residual: String },
    #[error("{0} has not been solved")]
    NotSolved(&'static str),
    #[error("{0} requires codimension 1")]
    RequiresCodimOne(&'static str),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

fn verify_zero(stage: &str, residual: &DifferentialForm) -> Result<(), FoliationError> {
    if residual.is_zero() {
        Ok(())
    } else {
        Err(FoliationError::Verification { stage: stage.to_string(), residual: residual.to_string() })
    }
}

pub(crate) fn sign(odd: bool) -> Rational {
    if odd {
        int(-1)
    } else {
        int(1)
    }
}

fn factorial(n: usize) -> Rational {
    (1..=n as i64).fold(Rational::one(), |acc, k| acc * int(k))
}

/// A codimension-q foliation, possibly depending on the parameter t.
#[derive(Debug, Clone)]
pub struct FoliationFamily {
    chart: Arc<Chart>,
    alphas: Vec<DifferentialForm>,
    transversal: Option<Vec<VectorField>>,
    beta: Option<DifferentialForm>,
    gammas: Option<Vec<DifferentialForm>>,
    delta: Option<DifferentialForm>,
    epsilon: Option<DifferentialForm>,
    solved: bool,
}

impl FoliationFamily {
    pub fn new(alphas: Vec<DifferentialForm>) -> Result<Self, FoliationError> {
        let chart = alphas.first().ok_or(FoliationError::Empty)?.chart().clone();
        for (i, a) in alphas.iter().enumerate() {
            if a.degree() != 1 {
                return Err(FoliationError::NotOneForm(i));
            }
            if !Arc::ptr_eq(a.chart(), &chart) && **a.chart() != *chart {
                return Err(FormError::ChartMismatch.into());
            }
        }
        let family = FoliationFamily {
            chart,
            alphas,
            transversal: None,
            beta: None,
            gammas: None,
            delta: None,
            epsilon: None,
            solved: false,
        };
        if family.alpha().is_zero() {
            return Err(FoliationError::DegenerateAlpha);
        }
        Ok(family)
    }

    /// Attach `X_1..X_q` with `alpha_i(X_j) = delta_ij`, checked exactly.
    pub fn with_transversal(mut self, frame: Vec<VectorField>) -> Result<Self, FoliationError> {
        if frame.len() != self.q() {
            return Err(FoliationError::TransversalCount { expected: self.q(), found: frame.len() });
        }
        for (i, a) in self.alphas.iter().enumerate() {
            for (j, x) in frame.iter().enumerate() {
                let value = a.pair(x)?;
                let expected = i64::from(i == j);
                if value != Scalar::integer(self.chart.table(), expected) {
                    return Err(FoliationError::NotDual { i: i + 1, j: j + 1, value: value.to_string(), expected });
                }
            }
        }
        self.transversal = Some(frame);
        self.invalidate();
        Ok(self)
    }

    /// Supply beta instead of solving for it; it is verified by `solve`.
    pub fn with_beta(mut self, beta: DifferentialForm) -> Self {
        self.beta = Some(beta);
        self.invalidate();
        self
    }

    /// Supply gamma_1..gamma_q; they are verified by `solve`.
    pub fn with_gammas(mut self, gammas: Vec<DifferentialForm>) -> Self {
        self.gammas = Some(gammas);
        self.solved = false;
        self
    }

    fn invalidate(&mut self) {
        self.solved = false;
        self.delta = None;
        self.epsilon = None;
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn q(&self) -> usize {
        self.alphas.len()
    }

    pub fn alphas(&self) -> &[DifferentialForm] {
        &self.alphas
    }

    pub fn transversal(&self) -> Option<&[VectorField]> {
        self.transversal.as_deref()
    }

    /// The decomposable q-form `alpha_1 ^ ... ^ alpha_q`.
    pub fn alpha(&self) -> DifferentialForm {
        let parts: Vec<&DifferentialForm> = self.alphas.iter().collect();
        DifferentialForm::wedge_all(&parts).expect("defining forms share a chart")
    }

    pub fn is_solved(&self) -> bool {
        self.solved
    }

    pub fn beta(&self) -> Result<&DifferentialForm, FoliationError> {
        self.beta.as_ref().filter(|_| self.solved).ok_or(FoliationError::NotSolved("beta"))
    }

    pub fn gammas(&self) -> Result<&[DifferentialForm], FoliationError> {
        self.gammas.as_deref().filter(|_| self.solved).ok_or(FoliationError::NotSolved("gamma"))
    }

    pub fn gamma(&self) -> Result<&DifferentialForm, FoliationError> {
        self.require_codim_one("gamma")?;
        Ok(&self.gammas()?[0])
    }

    pub fn delta(&self) -> Result<&DifferentialForm, FoliationError> {
        self.require_codim_one("delta")?;
        self.delta.as_ref().filter(|_| self.solved).ok_or(FoliationError::NotSolved("delta"))
    }

    pub fn epsilon(&self) -> Result<&DifferentialForm, FoliationError> {
        self.require_codim_one("epsilon")?;
        self.epsilon.as_ref().filter(|_| self.solved).ok_or(FoliationError::NotSolved("epsilon"))
    }

    fn require_codim_one(&self, what: &'static str) -> Result<(), FoliationError> {
        if self.q() == 1 {
            Ok(())
        } else {
            Err(FoliationError::RequiresCodimOne(what))
        }
    }

    fn frame(&self) -> Result<&[VectorField], FoliationError> {
        self.transversal.as_deref().ok_or(FoliationError::MissingTransversal)
    }

    /// Nonvanishing certificate at a point (slots: coordinates, then t).
    pub fn check_nonvanishing_at(&self, values: &[Option<f64>]) -> Result<(), FoliationError> {
        if self.alpha().max_abs_at(values)? > 1e-12 {
            Ok(())
        } else {
            Err(FoliationError::VanishesAtWitness)
        }
    }

    /// The forms `d alpha_i ^ alpha`; all zero iff the family is integrable.
    pub fn integrability_defects(&self) -> Vec<DifferentialForm> {
        let alpha = self.alpha();
        self.alphas.iter().map(|a| a.d().wedge(&alpha).expect("same chart")).collect()
    }

    pub fn check_integrability(&self) -> bool {
        self.integrability_defects().iter().all(DifferentialForm::is_zero)
    }

    fn require_integrable(&self) -> Result<(), FoliationError> {
        for (i, defect) in self.integrability_defects().iter().enumerate() {
            if !defect.is_zero() {
                return Err(FoliationError::NotIntegrable { index: i + 1, defect: defect.to_string() });
            }
        }
        Ok(())
    }

    /// `beta` with `d alpha = alpha ^ beta`: the supplied one, or
    /// `(-1)^(q-1) sum_i i_{X_i} d alpha_i`, verified exactly.
    pub fn solve_beta(&self) -> Result<DifferentialForm, FoliationError> {
        self.require_integrable()?;
        let beta = match &self.beta {
            Some(b) => b.clone(),
            None => {
                let frame = self.frame()?;
                let mut acc = DifferentialForm::zero(&self.chart, 1);
                for (a, x) in self.alphas.iter().zip(frame) {
                    acc = acc.try_add(&a.d().interior(x)?)?;
                }
                acc.scale_rational(&sign(self.q().is_multiple_of(2)))
            }
        };
        if beta.degree() != 1 {
            return Err(FormError::DegreeMismatch { left: beta.degree(), right: 1 }.into());
        }
        let alpha = self.alpha();
        verify_zero("d alpha = alpha ^ beta", &alpha.d().try_sub(&alpha.wedge(&beta)?)?)?;
        Ok(beta)
    }

    /// Write an element of the ideal as `sum_i alpha_i ^ g_i` by successive
    /// contraction with the transversal frame.
    pub fn decompose(&self, form: &DifferentialForm) -> Result<Vec<DifferentialForm>, FoliationError> {
        let frame = self.frame()?;
        let mut rest = form.clone();
        let mut parts = Vec::with_capacity(self.q());
        for (a, x) in self.alphas.iter().zip(frame) {
            let g = rest.interior(x)?;
            rest = rest.try_sub(&a.wedge(&g)?)?;
            parts.push(g);
        }
        verify_zero("ideal decomposition", &rest)?;
        Ok(parts)
    }

    /// Solve the gamma chain for a given beta. Codimension one continues
    /// with delta and epsilon.
    pub fn solve_gamma_chain(&self, beta: &DifferentialForm) -> Result<Chain, FoliationError> {
        let db = beta.d();
        let gammas = match &self.gammas {
            Some(g) => {
                if g.len() != self.q() {
                    return Err(FoliationError::Precondition(format!("expected {} gamma forms", self.q())));
                }
                g.clone()
            }
            None => self.decompose(&db)?,
        };
        let mut sum = DifferentialForm::zero(&self.chart, 2);
        for (a, g) in self.alphas.iter().zip(&gammas) {
            sum = sum.try_add(&a.wedge(g)?)?;
        }
        verify_zero("d beta = sum alpha_i ^ gamma_i", &db.try_sub(&sum)?)?;
        if self.q() > 1 {
            return Ok(Chain { gammas, delta: None, epsilon: None });
        }
        let x = &self.frame()?[0];
        let alpha = &self.alphas[0];
        let gamma = &gammas[0];

        let rest = gamma.d().try_sub(&beta.wedge(gamma)?)?;
        let delta = rest.interior(x)?;
        verify_zero("d gamma = beta ^ gamma + alpha ^ delta", &rest.try_sub(&alpha.wedge(&delta)?)?)?;

        let rest = delta.d().try_sub(&beta.wedge(&delta)?.scale_rational(&int(2)))?;
        let epsilon = rest.interior(x)?;
        verify_zero("d delta = 2 beta ^ delta + alpha ^ epsilon", &rest.try_sub(&alpha.wedge(&epsilon)?)?)?;

        Ok(Chain { gammas, delta: Some(delta), epsilon: Some(epsilon) })
    }

    /// Check integrability, solve and verify the whole chain, and cache it.
    pub fn solve(&self) -> Result<FoliationFamily, FoliationError> {
        let beta = self.solve_beta()?;
        let chain = self.solve_gamma_chain(&beta)?;
        Ok(FoliationFamily {
            beta: Some(beta),
            gammas: Some(chain.gammas),
            delta: chain.delta,
            epsilon: chain.epsilon,
            solved: true,
            ..self.clone()
        })
    }

    /// All defining data and cached forms with t replaced by a constant.
    pub fn substitute_t(&self, value: &Rational) -> FoliationFamily {
        let sub = |f: &DifferentialForm| f.substitute_t(value);
        FoliationFamily {
            chart: self.chart.clone(),
            alphas: self.alphas.iter().map(sub).collect(),
            transversal: self.transversal.as_ref().map(|fr| fr.iter().map(|x| x.substitute_t(value)).collect()),
            beta: self.beta.as_ref().map(sub),
            gammas: self.gammas.as_ref().map(|g| g.iter().map(sub).collect()),
            delta: self.delta.as_ref().map(sub),
            epsilon: self.epsilon.as_ref().map(sub),
            solved: self.solved,
        }
    }

    /// The same family on `M x S^1`, re-solved there. Supplied beta and
    /// gamma forms are pulled back along with alpha.
    pub fn extend_by_circle(&self, name: &str) -> Result<FoliationFamily, FoliationError> {
        let target = self.chart.extend_by_circle(name)?;
        let pull = |f: &DifferentialForm| f.pullback_to(&target);
        let alphas = self.alphas.iter().map(pull).collect::<Result<Vec<_>, _>>()?;
        let mut next = FoliationFamily::new(alphas)?;
        if let Some(frame) = &self.transversal {
            next = next.with_transversal(frame.iter().map(|x| x.pullback_to(&target)).collect::<Result<_, _>>()?)?;
        }
        if let Some(b) = &self.beta {
            next = next.with_beta(pull(b)?);
        }
        if let Some(g) = &self.gammas {
            next = next.with_gammas(g.iter().map(pull).collect::<Result<_, _>>()?);
        }
        next.solve()
    }

    /// `form ^ alpha_1 ^ ... ^ alpha_q = 0`.
    pub fn ideal_membership(&self, form: &DifferentialForm) -> Result<bool, FoliationError> {
        Ok(form.wedge(&self.alpha())?.is_zero())
    }

    fn require_ideal(&self, stage: &str, form: &DifferentialForm) -> Result<(), FoliationError> {
        if self.ideal_membership(form)? {
            Ok(())
        } else {
            Err(FoliationError::Verification {
                stage: format!("{stage} in the foliation ideal"),
                residual: form.wedge(&self.alpha())?.to_string(),
            })
        }
    }

    fn d_beta_power(&self, k: usize) -> Result<DifferentialForm, FoliationError> {
        Ok(self.beta()?.d().wedge_power(k))
    }

    /// `beta ^ (d beta)^q`, asserted closed.
    pub fn gv_form(&self) -> Result<DifferentialForm, FoliationError> {
        let gv = self.beta()?.wedge(&self.d_beta_power(self.q())?)?;
        verify_zero("d(gv) = 0", &gv.d())?;
        Ok(gv)
    }

    /// `beta' ^ beta ^ (d beta)^q`, asserted closed.
    pub fn tgv_form(&self) -> Result<DifferentialForm, FoliationError> {
        let beta = self.beta()?;
        let tgv = beta.ddt().wedge(beta)?.wedge(&self.d_beta_power(self.q())?)?;
        verify_zero("d(tgv) = 0", &tgv.d())?;
        Ok(tgv)
    }

    /// `beta' ^ (d beta)^q`, asserted closed and in the ideal.
    pub fn t_form(&self) -> Result<DifferentialForm, FoliationError> {
        let t = self.beta()?.ddt().wedge(&self.d_beta_power(self.q())?)?;
        verify_zero("d(T) = 0", &t.d())?;
        self.require_ideal("T", &t)?;
        Ok(t)
    }

    /// beta as a leafwise class representative; `d beta` asserted in the ideal.
    pub fn reeb_rep(&self) -> Result<DifferentialForm, FoliationError> {
        let beta = self.beta()?;
        self.require_ideal("d beta", &beta.d())?;
        Ok(beta.clone())
    }

    /// `q! (-1)^(q(q-1)/2) gamma_1 ^ ... ^ gamma_q`, so that
    /// `(d beta)^q = alpha ^ gamma`.
    pub fn gamma_product(&self) -> Result<DifferentialForm, FoliationError> {
        let gammas = self.gammas()?;
        let parts: Vec<&DifferentialForm> = gammas.iter().collect();
        let q = self.q();
        let c = factorial(q) * sign((q * (q - 1) / 2) % 2 == 1);
        let g = DifferentialForm::wedge_all(&parts)?.scale_rational(&c);
        verify_zero("(d beta)^q = alpha ^ gamma", &self.d_beta_power(q)?.try_sub(&self.alpha().wedge(&g)?)?)?;
        Ok(g)
    }

    /// `d/dt(beta (d beta)^q) = (q+1) beta' (d beta)^q + q d(beta' beta (d beta)^(q-1))`.
    /// The witness primitive is `q beta' ^ beta ^ (d beta)^(q-1)`, checked
    /// to lie in the ideal when q >= 2.
    pub fn gv_derivative_identity(&self) -> Result<ExactnessWitness, FoliationError> {
        let q = self.q();
        let beta = self.beta()?;
        let bdot = beta.ddt();
        let lhs = self.gv_form()?.ddt().try_sub(&self.t_form()?.scale_rational(&int(q as i64 + 1)))?;
        let primitive = bdot.wedge(beta)?.wedge(&self.d_beta_power(q - 1)?)?.scale_rational(&int(q as i64));
        let mut w = ExactnessWitness::new("d/dt gv", lhs, primitive)?;
        if q >= 2 {
            let inside = self.ideal_membership(&w.primitive)?;
            w = w.with_ideal_flag(inside);
        }
        if !w.holds() {
            return Err(FoliationError::Verification {
                stage: "d/dt gv identity".into(),
                residual: w.residual.to_string(),
            });
        }
        Ok(w)
    }

    /// The codimension-one vanishing identities and the properties of the
    /// chain that decide which of them apply.
    pub fn vanishing_chain_check(&self) -> Result<ChainReport, FoliationError> {
        self.require_codim_one("vanishing chain check")?;
        let alpha = &self.alphas[0];
        let adot = alpha.ddt();
        let beta = self.beta()?;
        let bdot = beta.ddt();
        let gamma = self.gamma()?;
        let delta = self.delta()?;
        let epsilon = self.epsilon()?;
        let db = beta.d();

        // beta' beta d beta - d(alpha' beta gamma) + alpha' beta alpha delta
        let a_b_g = adot.wedge(beta)?.wedge(gamma)?;
        let a_b_a_d = adot.wedge(beta)?.wedge(alpha)?.wedge(delta)?;
        let tgv = bdot.wedge(beta)?.wedge(&db)?;
        let identity_i = tgv.try_sub(&a_b_g.d())?.try_add(&a_b_a_d)?;

        // alpha' beta alpha delta + 1/2 alpha' alpha (d delta - alpha epsilon)
        let inner = delta.d().try_sub(&alpha.wedge(epsilon)?)?;
        let identity_ii =
            a_b_a_d.try_add(&adot.wedge(alpha)?.wedge(&inner)?.scale_rational(&Rational::new(1.into(), 2.into())))?;

        // beta' d beta = d(alpha gamma') + alpha alpha' delta
        let identity_iii =
            bdot.wedge(&db)?.try_sub(&alpha.wedge(&gamma.ddt())?.d())?.try_sub(&alpha.wedge(&adot)?.wedge(delta)?)?;

        let delta_zero = delta.is_zero();
        let delta_closed = delta.d().is_zero();
        let beta_zero = beta.is_zero();
        let gamma_zero = gamma.is_zero();
        // with d delta = 0 the correction term alpha' beta alpha delta vanishes
        let tgv_witness = if delta_zero || delta_closed || beta_zero || gamma_zero {
            let w = ExactnessWitness::new("tgv = d(alpha' beta gamma)", tgv, a_b_g)?;
            Some(w)
        } else {
            None
        };
        Ok(ChainReport {
            identity_i,
            identity_ii,
            identity_iii,
            beta_zero,
            beta_closed: db.is_zero(),
            gamma_zero,
            gamma_closed: gamma.d().is_zero(),
            delta_zero,
            delta_closed,
            tgv_witness,
        })
    }

    /// For a family moved by a flow (`alpha' = L_X alpha`):
    /// `beta' (d beta)^q = d(beta(X) (d beta)^q)` and, in codimension one,
    /// `beta' beta d beta = d(beta(X) beta d beta)`.
    pub fn flow_family_check(&self, x: &VectorField) -> Result<FlowReport, FoliationError> {
        let alpha = self.alpha();
        let moved = alpha.ddt().try_sub(&alpha.lie_derivative(x)?)?;
        if !moved.is_zero() {
            return Err(FoliationError::Precondition(format!("alpha' - L_X alpha = {moved}")));
        }
        let q = self.q();
        if q >= 2 {
            let g = self.gamma_product()?;
            let r = self.beta()?.d().wedge(&g)?;
            if !r.is_zero() {
                return Err(FoliationError::Precondition(format!("d beta ^ gamma = {r}")));
            }
        }
        let beta = self.beta()?;
        let bx = beta.pair(x)?;
        let power = self.d_beta_power(q)?;
        let t_witness = ExactnessWitness::new("flow: T", self.t_form()?, power.scale(&bx))?;
        let inside = self.ideal_membership(&t_witness.primitive)?;
        let t_witness = t_witness.with_ideal_flag(inside);
        let tgv_witness = if q == 1 {
            Some(ExactnessWitness::new("flow: tgv", self.tgv_form()?, self.gv_form()?.scale(&bx))?)
        } else {
            None
        };
        for w in std::iter::once(&t_witness).chain(tgv_witness.as_ref()) {
            if !w.holds() {
                return Err(FoliationError::Verification { stage: w.label.clone(), residual: w.residual.to_string() });
            }
        }
        Ok(FlowReport { t_witness, tgv_witness })
    }
}

/// Result of solving the gamma chain.
#[derive(Debug, Clone)]
pub struct Chain {
    pub gammas: Vec<DifferentialForm>,
    pub delta: Option<DifferentialForm>,
    pub epsilon: Option<DifferentialForm>,
}

#[derive(Debug, Clone)]
pub struct ChainReport {
    pub identity_i: DifferentialForm,
    pub identity_ii: DifferentialForm,
    pub identity_iii: DifferentialForm,
    pub beta_zero: bool,
    pub beta_closed: bool,
    pub gamma_zero: bool,
    pub gamma_closed: bool,
    pub delta_zero: bool,
    pub delta_closed: bool,
    /// Present when the chain forces tgv to be exact.
    pub tgv_witness: Option<ExactnessWitness>,
}

impl ChainReport {
    pub fn identities_hold(&self) -> bool {
        self.identity_i.is_zero() && self.identity_ii.is_zero() && self.identity_iii.is_zero()
    }

    pub fn tgv_exact(&self) -> bool {
        self.tgv_witness.as_ref().is_some_and(ExactnessWitness::holds)
    }

    pub fn holds(&self) -> bool {
        self.identities_hold() && self.tgv_witness.as_ref().is_none_or(ExactnessWitness::holds)
    }
}

#[derive(Debug, Clone)]
pub struct FlowReport {
    pub t_witness: ExactnessWitness,
    pub tgv_witness: Option<ExactnessWitness>,
}

/// A first-order variation `omega` of a codimension-one foliation, taken at t = 0.
#[derive(Debug, Clone)]
pub struct InfinitesimalVariation {
    base: FoliationFamily,
    omega: DifferentialForm,
}

impl InfinitesimalVariation {
    pub fn new(family: &FoliationFamily, omega: &DifferentialForm) -> Result<Self, FoliationError> {
        family.require_codim_one("infinitesimal variation")?;
        family.delta()?;
        let zero = Rational::zero();
        let base = family.substitute_t(&zero);
        let omega = omega.substitute_t(&zero);
        if omega.degree() != 1 {
            return Err(FormError::DegreeMismatch { left: omega.degree(), right: 1 }.into());
        }
        let r = linearized_integrability(&base.alphas[0], &omega)?;
        if !r.is_zero() {
            return Err(FoliationError::Precondition(format!("omega ^ d alpha + alpha ^ d omega = {r}")));
        }
        Ok(InfinitesimalVariation { base, omega })
    }

    pub fn base(&self) -> &FoliationFamily {
        &self.base
    }

    pub fn omega(&self) -> &DifferentialForm {
        &self.omega
    }

    /// `d omega ^ beta ^ gamma`, asserted closed.
    pub fn dgv(&self) -> Result<DifferentialForm, FoliationError> {
        let f = self.omega.d().wedge(self.base.beta()?)?.wedge(self.base.gamma()?)?;
        verify_zero("d(dgv) = 0", &f.d())?;
        Ok(f)
    }

    /// `alpha ^ omega ^ delta`, asserted closed and in the ideal.
    pub fn t_infinitesimal(&self) -> Result<DifferentialForm, FoliationError> {
        let f = self.base.alphas[0].wedge(&self.omega)?.wedge(self.base.delta()?)?;
        verify_zero("d(t_inf) = 0", &f.d())?;
        self.base.require_ideal("t_inf", &f)?;
        Ok(f)
    }
}

fn linearized_integrability(alpha: &DifferentialForm, omega: &DifferentialForm) -> Result<DifferentialForm, FormError> {
    omega.wedge(&alpha.d())?.try_add(&alpha.wedge(&omega.d())?)
}

/// Basis of the constant-coefficient variations `omega` at t = 0 satisfying
/// the linearized integrability condition. Lie charts only.
pub fn admissible_variations(family: &FoliationFamily) -> Result<Vec<DifferentialForm>, FoliationError> {
    family.require_codim_one("admissible variations")?;
    let chart = family.chart();
    if !chart.is_lie() {
        return Err(FoliationError::Precondition("admissible variations are solved on Lie charts only".into()));
    }
    let alpha = family.alphas[0].substitute_t(&Rational::zero());
    let n = chart.dim();
    let images: Vec<DifferentialForm> = (0..n)
        .map(|j| linearized_integrability(&alpha, &DifferentialForm::basis(chart, j)?))
        .collect::<Result<_, _>>()?;
    let mut keys: Vec<Vec<usize>> = images.iter().flat_map(|f| f.components().into_iter().map(|(k, _)| k)).collect();
    keys.sort();
    keys.dedup();
    let mut rows = Vec::with_capacity(keys.len());
    for key in &keys {
        let row = images
            .iter()
            .map(|f| {
                f.coefficient(key).as_rational().ok_or_else(|| {
                    FoliationError::Precondition("alpha at t = 0 must have constant coefficients".into())
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    null_space(&rows, n)
        .into_iter()
        .map(|v| {
            let comps = v.into_iter().map(|c| Scalar::constant(chart.table(), c)).collect();
            Ok(DifferentialForm::one_form(chart, comps)?)
        })
        .collect()
}
