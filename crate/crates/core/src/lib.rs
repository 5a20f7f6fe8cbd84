//! Synthesis for LTL+Past specifications whose atoms are first-order
//! formulas over an ω-categorical data structure.

#![allow(clippy::type_complexity)]

pub mod backend;
pub mod error;
pub mod fixpoint;
pub mod fo;
pub mod ltl;
pub mod parse;
pub mod runtime;
pub mod structure;
pub mod translate;

pub use error::{Error, Result};
