//! The Novikov field over a coefficient field: series, valuations,
//! truncation, inversion, reduction modulo `p`, rescaling and linear algebra.

pub mod linalg;
pub mod puiseux;
pub mod series;

pub use linalg::{LinalgError, Matrix, RowReduction};
pub use series::{parse_rat_value, reduce_series_mod_p, NovikovError, NovikovSeries};
pub use puiseux::{derivative, newton_root, polynomial_roots, PuiseuxError, PuiseuxRoots};
