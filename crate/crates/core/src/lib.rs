//! Exact verification of the polynomial, quantum-loop and elliptic
//! weight-function identities.
//!
//! Identities in formal variables are checked by exact evaluation at seeded
//! random rational points, either over the rationals or over a prime field.
//! Elliptic quantities live in power series in the nome `p` truncated at a
//! fixed order.

#![allow(clippy::needless_range_loop)]

pub mod elliptic;
pub mod error;
pub mod exactnum;
pub mod linalg;
pub mod partitions;
pub mod polyweights;
pub mod residues;
pub mod uqrep;
pub mod verify;

pub use error::{Error, Result};
pub use exactnum::{ModP, PSeries, Rational, Ring, Scalar};
