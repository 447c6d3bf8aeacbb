//! Numerical laboratory for the period function of planar potential centers.
//!
//! The crate covers special functions and the Roussarie-Ecalle compensator
//! ([`specfun`]), robust quadrature ([`quadrature`]), potential centers and
//! their conjugating map ([`potential`]), the integral and Wronskian operators
//! ([`operators`]), quantifier estimation and compensator asymptotics
//! ([`asymptotics`]), the period function and zero counting of its derivative
//! ([`period`]), and two concrete families ([`families`]). Experiment drivers
//! that emit CSV live in [`experiments`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod error;
pub mod experiments;
pub mod families;
pub mod operators;
pub mod period;
pub mod potential;
pub mod quadrature;
pub mod roots;
pub mod smooth;
pub mod specfun;
pub mod taylor;

pub use error::{Error, Result};
