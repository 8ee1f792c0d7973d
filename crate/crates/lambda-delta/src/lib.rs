//! The λΔ-calculus: simply typed λ-calculus extended with the classical
//! Δ control operator.
//!
//! The crate provides the syntax trees ([`ast`]), the typing judgment
//! ([`typing`]), the small-step operational semantics ([`reduction`]) and
//! hereditary substitution together with the normalizer built on it
//! ([`hereditary`]). Everything is pure: no IO, no global state, values are
//! immutable after construction. The crate is `no_std` (with `alloc`).

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod ast;
pub mod hereditary;
pub mod reduction;
pub mod typing;

pub use ast::{Context, Term, Theta, ThetaEntry, Type};
