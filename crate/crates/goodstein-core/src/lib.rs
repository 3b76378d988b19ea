//! Fractal Goodstein processes over base hierarchies.
//!
//! The crate covers hereditary multi-base notation, the deep base-change and
//! upgrade operators, ouroboros successors, a symbolic calculus for ordinals
//! written with the collapsing functions ϑ and ψ, and the two ordinal
//! interpretations that certify termination and witness lower bounds.
//!
//! Everything here is `no_std` with `alloc`; file formats and the command
//! line live in the companion `goodstein-cli` crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

mod error;

pub mod hierarchy;
pub mod interpretations;
pub mod numerals;
pub mod ordinal_terms;
pub mod runner;
pub mod successors;
pub mod upgrade;

pub use error::Error;
pub use hierarchy::{BaseHierarchy, ExtNat};
pub use numerals::{Budget, Decomposition, Nat};
pub use ordinal_terms::{Atom, Cnt, OrdTerm};

pub type Result<T> = core::result::Result<T, Error>;
