//! debmat: computing with matrix-valued rational functions.
//!
//! The crate covers local pole/zero structure of meromorphic matrix
//! functions, simultaneous entire-factor extraction, J-inner certification
//! through the Potapov-Ginzburg transform, de Branges pairs and their
//! reproducing-kernel spaces, and the parametrization of de Branges matrices
//! by a pair, an associated function, and Herglotz data (P, Q).
//!
//! Grid sweeps and batch certifications are data parallel; the `parallel`
//! feature (default) backs them with rayon, and disabling it falls back to
//! sequential execution with identical results.

pub mod classes;
pub mod debranges;
pub mod error;
pub mod exec;
pub mod factorization;
pub mod generate;
pub mod grid;
pub mod localstruct;
pub mod model;
pub mod parametrize;
pub mod ratmat;

pub use error::{Error, Result};
