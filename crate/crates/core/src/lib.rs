//! Tropical Hilbert functions of univariate tropical polynomials.
//!
//! A real sequence `y` satisfies the coefficient vector `a = (a_0, ..., a_n)`
//! when, in every window, `min_i (y_{j+i} + a_i)` is attained at least twice.
//! The sequences of length `s` form a polyhedral complex `D(s)`; its
//! dimension `d(s)` is the tropical Hilbert function and `lim d(s)/s` the
//! tropical entropy `H`.
//!
//! Two independent routes compute `d(s)`:
//!
//! * [`oracle`] enumerates the cells of `D(s)` by their exact
//!   minimum-attainment patterns and measures each with [`diffcon`];
//! * [`graph`] builds the finite graph of recurrent sequences (general
//!   integer vectors and tropical boolean vectors), after which
//!   [`analysis`] reads `d(s)` off a max-plus path recursion and `H` off a
//!   maximum-mean cycle.

pub mod analysis;
pub mod diffcon;
pub mod error;
pub mod graph;
pub mod newton;
pub mod oracle;
pub mod sequence;
pub mod vector;
pub mod verify;

pub use error::{Error, Result};
pub use newton::{is_regular, newton_polygon, single_bounded_edge, NewtonPolygon};
pub use sequence::{classify_connected, satisfies, Connectivity, FiniteSequence, Rat};
pub use vector::{CoefficientVector, ExtendedInt};
