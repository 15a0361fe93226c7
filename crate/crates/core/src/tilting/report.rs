use serde::Serialize;

use crate::coxeter::{CoxeterSystem, Element};

/// One failed comparison, located by the stratum `alpha` of the column and,
/// where relevant, the entry `gamma`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub check: String,
    pub alpha: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<String>,
    pub detail: String,
}

impl Discrepancy {
    pub fn new(check: &str, sys: &CoxeterSystem, alpha: Element, gamma: Option<Element>, detail: String) -> Self {
        Self {
            check: check.to_string(),
            alpha: sys.format_word(alpha),
            gamma: gamma.map(|g| sys.format_word(g)),
            detail,
        }
    }
}

/// Outcome of the cross-validation of all tilting columns of an ideal.
#[derive(Debug, Clone, Default, Serialize)]
pub struct VerificationReport {
    pub checked_columns: usize,
    pub checked_subsets: usize,
    pub discrepancies: Vec<Discrepancy>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.discrepancies.is_empty()
    }
}

/// Outcome of the inversion check.
#[derive(Debug, Clone, Default, Serialize)]
pub struct RingelReport {
    pub inversion_holds: bool,
    /// `None` for infinite groups, where there is no longest element.
    pub w0_form_holds: Option<bool>,
    /// Diagnostic only: whether the IC matrix of the same stratification
    /// (at `t^-1`) also inverts the tilting matrix. It does not in general.
    pub flag_ic_inverts: bool,
    /// Diagnostic only: whether `(-1)^{l(a)-l(g)}` times the inverse tilting
    /// matrix has non-negative entries.
    pub sign_pattern_holds: bool,
    pub discrepancies: Vec<Discrepancy>,
}

impl RingelReport {
    pub fn passed(&self) -> bool {
        self.inversion_holds && self.w0_form_holds != Some(false) && self.discrepancies.is_empty()
    }
}
