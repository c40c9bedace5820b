//! Robust hyperplane and subspace recovery by ℓ1 minimization on the sphere.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod baselines;
pub mod datagen;
pub mod dpcp;
pub mod error;
pub mod eval;
pub mod io;
pub mod lp;
pub mod numerics;
pub mod rng;
pub mod theory;

pub use error::{Error, Result};
