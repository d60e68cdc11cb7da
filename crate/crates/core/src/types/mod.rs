//! Shared domain vocabulary: point sets, coordinate subsets, weights and
//! exponents.

mod pointset;
mod pstar;
mod report;
mod subset;
mod weights;

pub use pointset::PointSet;
pub use pstar::PStar;
pub use report::{Certified, ErrorReport, Method, SubsetTerm};
pub use subset::SubsetId;
pub use weights::{condition9_holds, Weights};
