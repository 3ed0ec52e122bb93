//! Bohmian mechanics of Gaussian packets and self-gravitating
//! Schrödinger–Newton states.

// `!(x > 0.0)` is used deliberately so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod fields;
pub mod packet;
pub mod par;
pub mod quadrature;
pub mod stationary;
pub mod units;

pub use error::{Error, Result};
