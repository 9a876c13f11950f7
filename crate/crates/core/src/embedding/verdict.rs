use alloc::string::String;
use alloc::vec::Vec;

use num_rational::BigRational;

use crate::counterexamples::Family;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Holds,
    Fails,
    OutsideHypotheses,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Holds => "holds",
            Status::Fails => "fails",
            Status::OutsideHypotheses => "outside-hypotheses",
        }
    }
}

/// The criterion that produced a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    /// Besov space with shifted log exponent into Lipschitz.
    ShiftIntoLip,
    /// Lipschitz into Besov space with shifted log exponent.
    ShiftFromLip,
    /// Besov third index `q` versus `min{2, tau, theta}`.
    ThirdIndexIntoLip,
    /// Besov third index `q` versus `max{2, tau, theta}`.
    ThirdIndexFromLip,
    /// Different integrability `p0 < p`, shifted log exponent.
    CrossExponentIntoLip,
    /// Different integrability `p < p1`, shifted log exponent.
    CrossExponentFromLip,
    /// Different integrability, third index `r` versus `min{tau, theta}`.
    CrossThirdIndexIntoLip,
    /// Different integrability, third index `r` versus `max{tau, theta}`.
    CrossThirdIndexFromLip,
    /// Lipschitz to Lipschitz with strictly larger smoothness.
    LipSmoothnessGap,
    /// Equal smoothness, strictly better log exponent.
    LipLogGap,
    /// Equal smoothness, equal effective log exponent.
    LipLogEqual,
    /// Different integrability on the diagonal `alpha0 - 1/p0 = alpha1 - 1/p1`.
    LipDiagonal,
}

impl Rule {
    pub fn as_str(&self) -> &'static str {
        match self {
            Rule::ShiftIntoLip => "shift-into-lip",
            Rule::ShiftFromLip => "shift-from-lip",
            Rule::ThirdIndexIntoLip => "third-index-into-lip",
            Rule::ThirdIndexFromLip => "third-index-from-lip",
            Rule::CrossExponentIntoLip => "cross-exponent-into-lip",
            Rule::CrossExponentFromLip => "cross-exponent-from-lip",
            Rule::CrossThirdIndexIntoLip => "cross-third-index-into-lip",
            Rule::CrossThirdIndexFromLip => "cross-third-index-from-lip",
            Rule::LipSmoothnessGap => "lip-smoothness-gap",
            Rule::LipLogGap => "lip-log-gap",
            Rule::LipLogEqual => "lip-log-equal",
            Rule::LipDiagonal => "lip-diagonal",
        }
    }
}

/// Parameters of a lacunary counterexample, exact.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub family: Family,
    /// Distinguished axis `j0`.
    pub axis: usize,
    /// Midpoint of the admissible open window.
    pub delta: BigRational,
    pub window: (BigRational, BigRational),
    /// Auxiliary exponent on the other axes (shift families only).
    pub aux_t: Option<BigRational>,
    /// Shift vector the witness is built for (shift families only). It
    /// differs from the query only in coordinates other than `axis`, moved
    /// so that a failure there implies failure for the query.
    pub xi: Option<Vec<BigRational>>,
    pub epsilon: Option<BigRational>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingVerdict {
    pub status: Status,
    pub rule: Rule,
    pub witness: Option<Witness>,
    /// Why the query is outside the covered cases.
    pub reason: Option<String>,
    pub notes: Vec<String>,
}

impl EmbeddingVerdict {
    pub(crate) fn holds(rule: Rule) -> Self {
        EmbeddingVerdict {
            status: Status::Holds,
            rule,
            witness: None,
            reason: None,
            notes: Vec::new(),
        }
    }

    pub(crate) fn fails(rule: Rule, w: Witness) -> Self {
        EmbeddingVerdict {
            status: Status::Fails,
            rule,
            witness: Some(w),
            reason: None,
            notes: Vec::new(),
        }
    }

    pub(crate) fn outside(rule: Rule, reason: impl Into<String>) -> Self {
        EmbeddingVerdict {
            status: Status::OutsideHypotheses,
            rule,
            witness: None,
            reason: Some(reason.into()),
            notes: Vec::new(),
        }
    }

    pub(crate) fn note(mut self, n: impl Into<String>) -> Self {
        self.notes.push(n.into());
        self
    }
}
