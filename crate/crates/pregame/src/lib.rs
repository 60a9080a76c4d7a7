//! Compositional game theory over finite sets.
//!
//! Games are built from three kinds of atomic pieces and two combinators:
//!
//! - **decisions**, one per agent, whose strategies are all functions from
//!   observations to choices and whose rationality relation says when the
//!   agent has no incentive to deviate;
//! - **computations**, ordinary functions lifted onto forward or backward
//!   wires (the rules of the game);
//! - the **teleological unit**, a feedback cup that routes a produced value
//!   back to the agents that reason about it;
//! - sequential composition (`compose`) and parallel composition (`tensor`).
//!
//! A game whose outer interface is trivial is *closed*; its rationality
//! relation becomes a unary predicate on strategy profiles and
//! [`core::equilibria`] enumerates the profiles satisfying it.
//!
//! The [`dsl`] module provides a small textual language for wiring games up
//! as string diagrams, [`agents`] provides selection-function and quantifier
//! based rationality together with independent brute-force oracles,
//! [`corpus`] ships classic instances, and [`laws`] contains randomized and
//! exhaustive checks of the categorical laws the combinators satisfy.

pub mod agents;
pub mod core;
pub mod corpus;
pub mod dsl;
mod error;
pub mod finite;
pub mod laws;

pub use crate::core::{
    compose, computation, cocomputation, decision, equilibria, extensionally_equal, identity,
    structural, teleological_unit, tensor, Caps, Context, Interface, Pregame,
};
pub use error::Error;
pub use finite::{enumerate_tuples, FinFun, FinSet, Ports, Tuple};
