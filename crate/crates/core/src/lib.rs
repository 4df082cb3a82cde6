//! Boolean automata networks with external inputs.
//!
//! The crate covers the whole algebra: expressions and their normal forms
//! ([`expr`]), configurations, modules and executions ([`network`]), the two
//! wiring operators ([`wiring`]), partition into sub-modules and recomposition
//! ([`decomposition`]), simulation schemes and their exhaustive checkers
//! ([`simulation`]), the clause and monotone network rewritings
//! ([`transforms`]) and state-transition-graph analysis ([`dynamics`]).
//!
//! Everything is exhaustive and meant for desk-scale instances: the default
//! sweep cap is 20 Boolean variables (see [`limits`]).

pub mod decomposition;
pub mod dynamics;
pub mod error;
pub mod expr;
pub mod format;
pub mod generate;
pub mod limits;
pub mod network;
pub mod scheme_file;
pub mod simulation;
pub mod transforms;
pub mod wiring;

pub use error::{Error, Result};
pub use expr::{BoolExpr, Clause, TruthTable, VarName};
pub use network::{Configuration, InputConfiguration, Module, NodeDef, Update, UpdateMode};
