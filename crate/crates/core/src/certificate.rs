//! Certified dimensions of truncated quotients.

use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    JacobianQuotient,
    TjurinaQuotient,
    NormalizationCodim,
    SemigroupGaps,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::JacobianQuotient => "jacobian-quotient",
            Method::TjurinaQuotient => "tjurina-quotient",
            Method::NormalizationCodim => "normalization-codim",
            Method::SemigroupGaps => "semigroup-gaps",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A dimension together with the truncation level at which it was proved
/// stable. `rechecked_at` records a second, larger level that reproduced the
/// value, when one was reachable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalQuotientCertificate {
    pub value: u64,
    pub stabilized_at: u64,
    pub rechecked_at: Option<u64>,
    pub method: Method,
}
