//! Exact arithmetic over Z/p^N and unramified extensions of Z_p.

pub mod cyclo;
pub mod det;
pub mod howell;
pub mod unram;
pub mod zmod;

pub use cyclo::CyclotomicElement;
pub use det::{berkowitz_charpoly, det_berkowitz, det_unit_pivot, CommRing, LocalRing};
pub use howell::{howell_solve, HowellForm, ModMatrix};
pub use unram::{UnramRing, UnramifiedElement};
