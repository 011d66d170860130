//! Fedder-type criteria for F-purity, quasi-F^e-splitting and quasi-F-regularity
//! of hypersurfaces `R/fR`, computed exactly over `Z/p^W[x_1, ..., x_k]`.

pub mod config;
pub mod criteria;
pub mod error;
pub mod modlin;
pub mod monomial;
pub mod par;
pub mod parse;
pub mod poly;
pub mod report;
pub mod semilinear;
pub mod verdict;
pub mod witt;

pub use config::RingConfig;
pub use error::{Error, Result};
pub use monomial::Monomial;
pub use parse::{format_poly, parse_poly};
pub use poly::{Escape, ModPoly};
pub use verdict::{Certificate, IndexConvention, Soundness, Verdict, VerdictKind};
