//! Exact computations with basic classical Lie superalgebras, their map
//! superalgebras over finite-dimensional coordinate quotients, and the
//! finite-dimensional modules of those.

pub mod classify;
pub mod coordalg;
pub mod error;
pub mod liesuper;
pub mod linalg;
pub mod mapalg;
pub mod modules;
pub mod par;
pub mod scalars;

pub use error::{Error, Result};
pub use linalg::Matrix;
pub use scalars::{Cyclotomic, Field, Rational};
