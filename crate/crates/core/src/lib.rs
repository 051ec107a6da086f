//! Exact measure algebras with measure-preserving automorphisms.
//!
//! Events are canonical measure classes on the unit interval, on Bernoulli
//! sequence spaces, or on products of these. Transformations act on them exactly,
//! and the remaining modules build conditional probabilities, entropy, Rokhlin
//! towers and cycle approximations on top.

pub mod conditioning;
pub mod entropy;
pub mod error;
pub mod measure;
pub mod rational;
pub mod towers;
pub mod transform;

pub use error::{Error, Result};
pub use measure::{BoolOp, Carrier, Event, FiniteAlgebra};
pub use rational::Rational;
pub use transform::{Direction, System, Transformation};
