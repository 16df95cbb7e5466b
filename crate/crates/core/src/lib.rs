//! Model checking of first-order sentences over finite structures with an
//! explicit accounted-space model.
//!
//! The crate provides three evaluation engines ([`engines`]), translations
//! between model checking and bounded reachability plus elimination of
//! function symbols ([`reductions`]), reachability algorithms ([`reach`]),
//! and the text formats used by the command-line tool ([`textio`]).

pub mod bench;
pub mod digraph;
pub mod engines;
pub mod error;
pub mod gen;
pub mod metrics;
pub mod reach;
pub mod reductions;
pub mod structure;
pub mod syntax;
pub mod textio;
pub mod vocab;

pub use digraph::Digraph;
pub use engines::{evaluate, Engine, EvalReport};
pub use error::{Error, Result};
pub use metrics::{classify, Classification};
pub use reach::ReachReport;
pub use structure::{
    structure_size, Assignment, Expansion, Interpretation, Structure, StructureBuilder, Tuple, TupleSet,
};
pub use syntax::{Formula, Position, Term};
pub use textio::SourceSpan;
pub use vocab::{SymbolDecl, SymbolKind, Vocabulary};
