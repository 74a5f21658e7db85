//! Verification toolkit for the coefficient bounds of a bi-univalent
//! function class subordinated to the Chebyshev generating function
//! H(z,t) = 1/(1 - 2tz - z^2).
//!
//! The crate has three layers:
//!
//! * numerical kernels: truncated power series ([`series`]), Chebyshev
//!   polynomials ([`chebyshev`]), Schwarz-function coefficient data
//!   ([`schwarz`]) and the class constraint system ([`class_gsigma`]);
//! * bound evaluators ([`bounds`]) for two formula families, `printed_*`
//!   (the reference displays taken verbatim) and `derived_*` (re-derived
//!   from the constraint algebra), plus an audit that compares them;
//! * an empirical layer ([`search`]) that maximizes |a2|, |a3| and the
//!   Fekete-Szego functional over admissible Schwarz coefficients and
//!   checks the maxima against both bound families.
//!
//! The `biuniv` binary exposes all of it on the command line; [`cli`] and
//! [`report`] hold the flag parsing and the manifest/emission plumbing.

pub mod bounds;
pub mod chebyshev;
pub mod class_gsigma;
pub mod cli;
pub mod error;
pub mod report;
pub mod schwarz;
pub mod search;
pub mod series;

pub use class_gsigma::ClassParams;
pub use error::{Error, Result};
pub use series::PowerSeries;
