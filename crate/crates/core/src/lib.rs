//! Exact evolution of the cube recurrence (the discrete BKP equation) in the
//! plane, a triangle, a cylinder and a torus, together with the
//! combinatorial models that recompute its values: groves on lozenge
//! regions and vertex-disjoint path and cycle families in cylindrical
//! networks.
//!
//! All arithmetic is exact. Values are [`laurent::LaurentPoly`] over
//! arbitrary-precision rationals; a numeric specialization is just a
//! polynomial with a single constant term.

pub mod cli;
pub mod error;
pub mod groves;
pub mod lattice;
pub mod laurent;
pub mod networks;
pub mod recurrence;
pub mod svg;
pub mod verify;

pub use error::{CubeError, Result};
pub use lattice::{Region, Vertex};
pub use laurent::{LaurentPoly, Monomial, Rational, VarId};
