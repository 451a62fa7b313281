//! Exact algebra for 4-manifolds with Baumslag-Solitar fundamental group
//! `B(k) = <a, b | a b a^-1 = b^k>`.

pub mod bsgroup;
pub mod error;
pub mod foxchain;
pub mod groupring;
pub mod hermform;
pub mod intlinalg;
pub mod invariants;
pub mod matrix;
pub mod wire;

pub use error::{Error, Result};
