//! Truncated arithmetic in Λ_O(Γ^{p^e}) = O[[T]] and in its p-adically
//! completed localization, modeled by Laurent series in T.

pub mod block;
pub mod series;

pub use block::{Agreement, Block};
pub use series::{LaurentElement, PowerSeriesElement, Series, SeriesRing};
