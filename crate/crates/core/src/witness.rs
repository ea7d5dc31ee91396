use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::forms::{DifferentialForm, FormError};

/// An explicit primitive certifying `lhs = d(primitive)`.
#[derive(Debug, Clone)]
pub struct ExactnessWitness {
    pub label: String,
    pub lhs: DifferentialForm,
    pub primitive: DifferentialForm,
    pub residual: DifferentialForm,
    /// `Some(_)` only for claims that the primitive lies in the foliation ideal.
    pub in_ideal: Option<bool>,
}

impl ExactnessWitness {
    pub fn new(
        label: impl Into<String>,
        lhs: DifferentialForm,
        primitive: DifferentialForm,
    ) -> Result<Self, FormError> {
        if primitive.degree() + 1 != lhs.degree() {
            return Err(FormError::DegreeMismatch { left: lhs.degree(), right: primitive.degree() + 1 });
        }
        let residual = lhs.try_sub(&primitive.d())?;
        Ok(ExactnessWitness { label: label.into(), lhs, primitive, residual, in_ideal: None })
    }

    pub fn with_ideal_flag(mut self, in_ideal: bool) -> Self {
        self.in_ideal = Some(in_ideal);
        self
    }

    pub fn residual_is_zero(&self) -> bool {
        self.residual.is_zero()
    }

    pub fn holds(&self) -> bool {
        self.residual_is_zero() && self.in_ideal != Some(false)
    }

    pub fn record(&self) -> WitnessRecord {
        WitnessRecord {
            r#move: self.label.clone(),
            lhs_hash: form_hash(&self.lhs),
            primitive: self.primitive.to_string(),
            residual_is_zero: self.residual_is_zero(),
            in_ideal: self.in_ideal,
        }
    }
}

/// Serialized form of a witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessRecord {
    pub r#move: String,
    pub lhs_hash: String,
    pub primitive: String,
    pub residual_is_zero: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub in_ideal: Option<bool>,
}

/// Hex SHA-256 of the canonical printed form.
pub fn form_hash(form: &DifferentialForm) -> String {
    let digest = Sha256::digest(format!("{}|{}", form.degree(), form).as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}
