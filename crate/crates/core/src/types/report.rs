use std::fmt;

use super::SubsetId;

/// How a worst-case error (or one of its subset terms) was evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// Closed-form integration; exact up to rounding.
    ExactClosedForm,
    /// Supremum over all cell-corner one-sided limits; exact up to rounding.
    ExactGridSup,
    /// Adaptive Gauss–Legendre quadrature with an estimated error bound.
    Quadrature,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::ExactClosedForm => "exact_closed_form",
            Method::ExactGridSup => "exact_grid_sup",
            Method::Quadrature => "quadrature",
        }
    }

    /// The less exact of two methods.
    pub(crate) fn combine(self, other: Method) -> Method {
        if self == Method::Quadrature || other == Method::Quadrature {
            Method::Quadrature
        } else {
            self
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Contribution of one coordinate subset to a worst-case error.
#[derive(Debug, Clone, PartialEq)]
pub struct SubsetTerm {
    pub subset: SubsetId,
    /// For finite `p*` the term before the outer root, so that the total is
    /// `(Σ term)^{1/p*}`; for `p* = ∞` the candidate entering the maximum.
    pub term: f64,
    pub method: Method,
    /// Estimated absolute error of `term` (0 for exact methods).
    pub tolerance: f64,
}

/// A worst-case error with its per-subset breakdown.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub total: f64,
    /// Terms in increasing mask order.
    pub per_subset: Vec<SubsetTerm>,
    pub method: Method,
    /// Estimated absolute error of `total` (0 for exact paths).
    pub tolerance: f64,
}

impl ErrorReport {
    /// The subset attaining the maximum for `p* = ∞` reports (smallest mask
    /// on ties); `None` when there are no terms.
    pub fn argmax(&self) -> Option<SubsetId> {
        let mut best: Option<&SubsetTerm> = None;
        for t in &self.per_subset {
            if best.is_none_or(|b| t.term > b.term) {
                best = Some(t);
            }
        }
        best.map(|t| t.subset)
    }
}

/// A computed quantity with its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Certified {
    pub value: f64,
    /// Estimated absolute error (0 for exact paths).
    pub tol: f64,
}

impl Certified {
    pub const fn exact(value: f64) -> Self {
        Certified { value, tol: 0.0 }
    }
}
