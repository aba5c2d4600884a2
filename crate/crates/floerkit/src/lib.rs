//! Exact computer algebra over Novikov fields.
//!
//! The crate is organised bottom-up:
//!
//! * [`coeff`]: coefficient fields and reductions modulo primes;
//! * [`novikov`]: truncated Novikov series with rational exponents;
//! * [`polytope`]: moment polytopes, vertices, Delzant check, Kouchnirenko bound;
//! * [`potential`]: bulk-deformed toric potentials and their critical points;
//! * [`filtered`]: filtered Floer–Novikov complexes, barcodes and spectral invariants;
//! * [`semisimple`]: idempotent splitting of algebras over Novikov fields and its
//!   transfer to characteristic `p`;
//! * [`tate`]: the Borel model, cyclic tensor powers and the `Z/p` Tate complex;
//! * [`cli`]: report assembly for the command-line tool.

pub mod coeff;
pub mod novikov;
pub mod polytope;
pub mod potential;
pub mod filtered;
pub mod semisimple;
pub mod tate;
pub mod cli;
