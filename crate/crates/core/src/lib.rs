//! Wiener-Hopf factorization of normal inverse Gaussian processes.

pub mod applications;
pub mod bigfloat;
pub mod distributions;
pub mod error;
pub mod factorization;
pub mod moments;
pub mod nig;
pub mod pade;
pub mod quadrature;
pub mod validation;

pub use bigfloat::{BigComplex, Precision};
pub use error::{Error, Result};
pub use nig::{CaseLabel, MinusCase, NigParams, PlusCase, RootSet, Tolerances};
pub use rug::{Float, Rational};
