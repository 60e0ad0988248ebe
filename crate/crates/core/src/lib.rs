//! Structured reductions between constraint satisfaction problems.
//!
//! The crate is organised bottom-up:
//!
//! * [`structures`] — multisorted signatures, finite structures, homomorphism
//!   and isomorphism search, powers, quotients and disjoint unions;
//! * [`datalog`] — typed Datalog programs, Datalog interpretations, union
//!   gadgets and their compositions;
//! * [`gadgets`] — gadget replacements, projective gadgets, reification, the
//!   universal gadget and the gadget-to-Datalog compiler;
//! * [`labelcover`] — label cover instances, arc-consistency enforcement and
//!   the k-consistency and arc-consistency reductions;
//! * [`minions`] — truncated minions, polymorphism minions, the `ω`
//!   construction and its co-Kleisli structure, minion homomorphisms and the
//!   minion of rational distributions;
//! * [`relax`] — Sherali–Adams systems, the `λ_conv` system, exact LP
//!   feasibility, affine systems over `Z`/`Z_n` and the tensor test;
//! * [`text`] — the declaration language, system exports and JSON;
//! * [`harness`] — seeded corpora and the property suites.

pub mod datalog;
pub mod error;
pub mod gadgets;
pub mod harness;
pub mod labelcover;
pub mod minions;
pub mod relax;
pub mod structures;
pub mod text;
mod unionfind;

pub use error::{Error, Result};
