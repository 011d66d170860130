//! Outcomes of criterion runs together with the data that certifies them.

use serde::Serialize;

use crate::poly::{Escape, ModPoly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum VerdictKind {
    FPure,
    NotFPure,
    QfeSplitCertified,
    NotQfeSplitUpToDegree,
    QfrCertified,
    Inconclusive,
    Height,
    /// Output of the test-element search; carries no splitting claim.
    TauElements,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Soundness {
    /// Decided exactly, or backed by a replayable certificate.
    Exact,
    /// Sound in one direction only: containment up to a degree bound.
    SoundOneSided,
    Heuristic,
}

/// Which power of `u` the conditions are evaluated at.
///
/// `Standard` uses `u^(e+r-1)` for the `(p^r)` conditions and `u^(e+n-2)` for
/// the escape condition. `Shifted` adds one to both exponents; it is only
/// ever reported as a diagnostic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum IndexConvention {
    Standard,
    Shifted,
}

impl IndexConvention {
    pub fn offset(self) -> u32 {
        match self {
            IndexConvention::Standard => 0,
            IndexConvention::Shifted => 1,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Certificate {
    pub e: Option<u32>,
    pub n: Option<u32>,
    pub c: Option<ModPoly>,
    /// Multiplier `m` with `g = m * f^(p^(e+n-1) - 1)`.
    pub multiplier: Option<ModPoly>,
    /// The term of the final `u`-image that escapes `(m^[p], p^n)`, or the
    /// escaping term of `f^(p-1)` for Fedder's criterion.
    pub escape: Option<Escape>,
    pub convention: Option<IndexConvention>,
    pub u_power: Option<u32>,
    /// Whether the shifted index would also certify the same `g`.
    pub shifted_also_holds: Option<bool>,
    pub degree_bound: Option<u32>,
    pub search_bound: Option<u32>,
    pub height: Option<u32>,
    /// An element of the final ideal outside `(m^[p], p)`.
    pub escape_element: Option<ModPoly>,
    pub test_element: Option<ModPoly>,
    pub elements: Vec<ModPoly>,
    pub stable: Option<bool>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub soundness: Soundness,
    pub certificate: Certificate,
}

impl Verdict {
    pub fn new(kind: VerdictKind, soundness: Soundness) -> Self {
        Verdict { kind, soundness, certificate: Certificate::default() }
    }

    pub fn with(kind: VerdictKind, soundness: Soundness, certificate: Certificate) -> Self {
        Verdict { kind, soundness, certificate }
    }

    pub fn is_certified(&self) -> bool {
        matches!(self.kind, VerdictKind::QfeSplitCertified | VerdictKind::QfrCertified)
    }

    pub fn is_inconclusive(&self) -> bool {
        self.kind == VerdictKind::Inconclusive
    }
}
