//! Exact scalars and affine functions of the ray parameter.

mod line;
mod rational;

pub use line::{lex_compare, line_intersection, AffineLine, Direction, Lex};
pub use rational::{ParseRationalError, Rational};
