//! Integral logarithms on K_1 of one-dimensional pro-p Iwasawa algebras
//! Λ_O(H ⋊ Γ): twisted group rings, conjugacy-trace maps, the integral
//! logarithm and its norm congruences, computed at finite p-adic and T-adic
//! precision.

pub mod additive;
pub mod context;
pub mod error;
pub mod group;
pub mod iwasawa;
pub mod k1;
pub mod harness;
pub mod padic;
pub mod sample;
pub mod twisted;

pub use context::{ArithmeticContext, ContextParams, Ctx};
pub use error::{Error, Result};
pub use iwasawa::{LaurentElement, PowerSeriesElement, Series};
pub use padic::{UnramRing, UnramifiedElement};
