//! Exact invariants of piecewise monotonic interval maps.
//!
//! The crate works with piecewise-linear maps of `[0, 1]` whose data live in
//! Q or in Q(s) for one real algebraic `s`, and computes transfer-operator
//! actions, Markov data, entropy, dimension-group presentations, exactness
//! decompositions and Perron–Frobenius eigenfunctions exactly.

pub mod decomposition;
pub mod dimension;
pub mod error;
pub mod linalg;
pub mod map_model;
pub mod markov;
pub mod number;
pub mod pf_lab;
pub mod symbolic;
pub mod transfer;

pub use error::{Error, Result};
pub use number::{AlgebraicContext, QPoly, Scalar};
