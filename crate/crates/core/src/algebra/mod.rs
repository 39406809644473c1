//! Exact arithmetic: rationals, parameter polynomials, and the graded differential-polynomial ring.

pub mod diff_poly;
pub mod param_poly;
pub mod rational;

pub use diff_poly::{DiffPoly, Jet, JetMonomial};
pub use param_poly::{Alphabet, Exponents, ParamPoly};
pub use rational::{binomial, factorial, falling, format_rational, rat, ratio, Rational};
