//! Typed Datalog: programs, semi-naive evaluation, interpretations, union
//! gadgets and their composition into Datalog∪ reductions.

mod compose;
mod eval;
mod interpretation;
pub mod library;
mod program;
mod union;

pub use compose::{compose_ddatalog, compose_interpretations, swap_union_interpretation, Reduction};
pub use eval::{evaluate_all, evaluate_naive, evaluate_program};
pub use interpretation::Interpretation;
pub use program::{Atom, Idb, Pred, Program, Rule, RuleBuilder, Var};
pub use union::{compose_union_gadgets, UnionGadget};
