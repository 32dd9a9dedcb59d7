//! Exact arithmetic over Q and over Q(s) for a single real algebraic `s`.

pub mod context;
pub mod literal;
pub mod poly;
pub mod rat;
pub mod scalar;

pub use context::{factor, is_irreducible, AlgebraicContext};
pub use literal::{parse_scalar, scalar_to_json, Session};
pub use poly::{QPoly, Sturm};
pub use scalar::{AlgebraicValue, Scalar};
