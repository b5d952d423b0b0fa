//! Knot diagrams, rational tangles, band surgery and exact invariants for a family of
//! satellite knots built on the (2, q) torus knots.

pub mod certify;
pub mod diagram;
pub mod error;
pub mod family;
pub mod invariants;
pub mod matrix;
pub mod morse;
pub(crate) mod net;
pub mod poly;
pub mod render;
pub mod simplify;
pub mod surgery;
pub mod tangle;

pub use diagram::{Crossing, Geometry, Orientation, PlanarDiagram, ValidationReport};
pub use error::{BandError, DiagramError, InvariantError, ParamError, TangleError};
pub use matrix::{smith_normal_form, AbelianGroupInvariants, IntegerMatrix};
pub use poly::LaurentPolynomial;
