//! Exact invariants of Coxeter systems and of regular buildings built on them.

pub mod building;
pub mod cache;
pub mod coxeter;
pub mod davis;
pub mod error;
pub mod growth;
pub mod homology;
pub mod hyperbolic;
pub mod numeric;
pub mod poly;
pub mod report;

pub use coxeter::{CoxeterMatrix, GenSet, GroupElement, Order, Representation};
pub use error::{Error, Result};
