//! Riemann's auxiliary function
//!
//! R(s) = ∫_{0↙1} x^{-s} e^{πix²} / (e^{πix} - e^{-πix}) dx
//!
//! evaluated two independent ways: by trapezoidal quadrature along the
//! slanted line ([`oracle`]) and by the exact saddle-point decomposition
//! around η = √((s-1)/(2πi)) ([`expansion`]). On top of those sit the explicit
//! remainder and U bounds with the region predicates ([`region`]), a
//! re-derivation of the numeric constants those bounds rest on ([`audit`]),
//! and an argument-principle zero scanner ([`zeros`]).

pub mod audit;
pub mod error;
pub mod evaluate;
pub mod expansion;
pub mod ext;
pub mod oracle;
pub mod quadrature;
pub mod region;
pub mod special;
pub mod zeros;

pub use error::{Error, Result};
pub use ext::ExtComplex;
pub use num_complex::Complex64;
