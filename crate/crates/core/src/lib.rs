//! Exact computation in free post-Lie and pre-Lie algebras of colored
//! planar rooted trees and in their dual Hopf algebras.
//!
//! The basis objects are forests of planar trees ([`Forest`]), graded by
//! vertex count. A [`Series`] is a truncated linear combination of forests
//! with exact coefficients. All structure maps live on an
//! [`AlgebraContext`], which memoizes basis-level products.

pub mod algebra;
pub mod coeff;
pub mod error;
pub mod flows;
pub mod hopf;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod prelie;
pub mod random;
pub mod series;
pub mod subst;
pub mod trees;
pub mod verify;

pub use algebra::AlgebraContext;
pub use coeff::{format_rational, int, parse_rational, rat, Coeff, Rational};
pub use error::{AlgebraError, Result};
pub use poly::{Monomial, Poly, Var};
pub use series::{pair, Series, Tensor};
pub use trees::{
    abelianize, enumerate_forests, enumerate_trees, max_order, Alphabet, Color, Forest,
    NonPlanarTree, PlanarTree, DEFAULT_MAX_ORDER, MAX_ORDER_ENV,
};
