//! Seeded generators for scalars, forms and vector fields.
//!
//! Used by the property tests and by the randomized gauge batches of the
//! verification runner, so both draw from the same bounded distribution.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::forms::{Chart, DifferentialForm, VectorField};
use crate::scalar::{rat, Scalar, Var, VariableTable};

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Stable 64-bit FNV-1a hash, used to derive per-entry seeds.
pub fn stable_hash(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

/// Bounds for random scalars.
#[derive(Debug, Clone)]
pub struct ScalarGen {
    pub max_terms: usize,
    pub max_freq: i32,
    pub max_poly_degree: u32,
    /// Allow `exp(c*t)` factors.
    pub allow_exp: bool,
    /// Allow the parameter t to appear.
    pub use_t: bool,
}

impl Default for ScalarGen {
    fn default() -> Self {
        ScalarGen { max_terms: 4, max_freq: 3, max_poly_degree: 3, allow_exp: true, use_t: true }
    }
}

impl ScalarGen {
    pub fn small() -> Self {
        ScalarGen { max_terms: 2, max_freq: 2, max_poly_degree: 2, allow_exp: true, use_t: true }
    }

    pub fn without_exp(mut self) -> Self {
        self.allow_exp = false;
        self
    }

    pub fn sample<R: Rng>(&self, table: &Arc<VariableTable>, rng: &mut R) -> Scalar {
        let all: Vec<usize> = (0..table.coord_count()).collect();
        self.sample_in(table, &all, rng)
    }

    /// A sample depending only on the listed coordinates (and t).
    pub fn sample_in<R: Rng>(&self, table: &Arc<VariableTable>, coords: &[usize], rng: &mut R) -> Scalar {
        let n_terms = rng.gen_range(1..=self.max_terms.max(1));
        let mut acc = Scalar::zero(table);
        for _ in 0..n_terms {
            acc = &acc + &self.term(table, coords, rng);
        }
        acc
    }

    /// A sample that is guaranteed to depend on t (when t is available).
    pub fn sample_t_dependent<R: Rng>(&self, table: &Arc<VariableTable>, rng: &mut R) -> Scalar {
        loop {
            let s = self.sample(table, rng);
            if !table.t_present() || s.depends_on(Var::T) {
                return s;
            }
            let t = Scalar::t(table).expect("t present");
            let all: Vec<usize> = (0..table.coord_count()).collect();
            let bumped = &s + &(&t * &self.term(table, &all, rng));
            if bumped.depends_on(Var::T) {
                return bumped;
            }
        }
    }

    fn term<R: Rng>(&self, table: &Arc<VariableTable>, coords: &[usize], rng: &mut R) -> Scalar {
        let num = loop {
            let k: i64 = rng.gen_range(-5..=5);
            if k != 0 {
                break k;
            }
        };
        let den: i64 = rng.gen_range(1..=3);
        let mut s = Scalar::constant(table, rat(num, den));

        let mut poly_vars: Vec<Var> =
            coords.iter().copied().filter(|&i| !table.is_periodic(i)).map(Var::Coord).collect();
        if self.use_t && table.t_present() {
            poly_vars.push(Var::T);
        }
        if !poly_vars.is_empty() {
            let degree = rng.gen_range(0..=self.max_poly_degree);
            for _ in 0..degree {
                let v = *poly_vars.choose(rng).expect("nonempty");
                s = &s * &Scalar::var(table, v).expect("non-periodic");
            }
        }

        let periodic: Vec<usize> = coords.iter().copied().filter(|&i| table.is_periodic(i)).collect();
        if !periodic.is_empty() && rng.gen_bool(0.7) {
            let mut freq = vec![0i32; table.coord_count()];
            for &i in &periodic {
                freq[i] = rng.gen_range(-self.max_freq..=self.max_freq);
            }
            let trig = if rng.gen_bool(0.5) { Scalar::sin(table, &freq) } else { Scalar::cos(table, &freq) };
            let trig = trig.expect("periodic frequencies");
            if !trig.is_zero() {
                s = &s * &trig;
            }
        }

        if self.allow_exp && self.use_t && table.t_present() && rng.gen_bool(0.25) {
            let rates = [rat(-2, 1), rat(-1, 1), rat(1, 2), rat(1, 1), rat(2, 1)];
            let rate = rates.choose(rng).expect("nonempty").clone();
            let arg = Scalar::t(table).expect("t present").scale(&rate);
            s = &s * &Scalar::exp(&arg).expect("exp-free argument");
        }
        s
    }
}

/// Random form of the given degree with at most `max_monomials` monomials.
pub fn random_form<R: Rng>(
    chart: &Arc<Chart>,
    degree: usize,
    gen: &ScalarGen,
    max_monomials: usize,
    rng: &mut R,
) -> DifferentialForm {
    let n = chart.dim();
    if degree > n {
        return DifferentialForm::zero(chart, degree);
    }
    let count = rng.gen_range(1..=max_monomials.max(1));
    let mut acc = DifferentialForm::zero(chart, degree);
    let all: Vec<usize> = (0..n).collect();
    for _ in 0..count {
        let mut idx: Vec<usize> = all.choose_multiple(rng, degree).copied().collect();
        idx.sort_unstable();
        let c = gen.sample(chart.table(), rng);
        let m = DifferentialForm::monomial(chart, &idx, c).expect("valid indices");
        acc = &acc + &m;
    }
    acc
}

pub fn random_vector<R: Rng>(chart: &Arc<Chart>, gen: &ScalarGen, rng: &mut R) -> VectorField {
    let comps = (0..chart.dim())
        .map(|_| if rng.gen_bool(0.75) { gen.sample(chart.table(), rng) } else { Scalar::zero(chart.table()) })
        .collect();
    VectorField::new(chart, comps).expect("chart components")
}
