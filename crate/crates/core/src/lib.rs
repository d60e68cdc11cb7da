//! Worst-case errors and weighted discrepancies of quasi-Monte Carlo point
//! sets in ANOVA-type Sobolev spaces.
//!
//! The main entry points are [`wce`], [`lp_discrepancy`],
//! [`weighted_lp_discrepancy`] and the bounds in [`bounds`].

pub mod bounds;
pub mod discrepancy;
mod error;
pub mod io;
pub mod oracle;
pub mod pointsets;
pub mod study;
pub mod types;
pub mod verify;
pub mod wce;

mod aggregate;
mod cells;
mod quadrature;

pub use discrepancy::{
    anchored_wce, l2_discrepancy, linf_discrepancy, local_discrepancy, lp_discrepancy,
    weighted_lp_discrepancy,
};
pub use error::{Error, Result};
pub use wce::{kernel, kernel_sum, kernel_sum_via_discrepancy, wce};
pub use types::{
    condition9_holds, Certified, ErrorReport, Method, PStar, PointSet, SubsetId, SubsetTerm, Weights,
};

/// Largest dimension for which all `2^d` subsets are enumerated.
pub const MAX_DIM: usize = 20;
