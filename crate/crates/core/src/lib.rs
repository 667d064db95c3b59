//! Modular smodels-style logic programs.
//!
//! Programs are sets of weight and choice rules organised into modules
//! `⟨R, I, O, H⟩` with input, output and hidden signatures. The crate
//! parses and prints modules, computes stable models, composes and joins
//! modules, decomposes them along strongly connected components, translates
//! them to normal programs and checks several notions of equivalence.

pub mod algebra;
pub mod atom;
pub mod cli;
pub mod completion;
pub mod decompose;
pub mod desugar;
pub mod equivalence;
pub mod error;
pub mod graphs;
pub mod interpretation;
pub mod io;
pub mod module;
pub mod rule;
pub mod semantics;
pub mod splitting;
pub mod translate;

pub use atom::{Atom, AtomSet};
pub use error::{CompositionError, Error, Result};
pub use interpretation::{Interpretation, ModelSet};
pub use module::{Module, Violation};
pub use rule::{ChoiceRule, Rule, WeightRule, WeightedLiteral};
pub use semantics::{Limits, Strategy};
