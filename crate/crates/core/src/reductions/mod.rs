//! Translations between model checking and bounded reachability, and the
//! elimination of function symbols.

mod config_graph;
mod functions;
mod stcon;

pub use config_graph::{mc_to_stcon, ConfigGraph, ConfigScope, ConfigVertex};
pub use functions::{
    constant_marker, eliminate_functions, extend_structure, function_graph, relation_marker, tuple_formula,
    value_exists, value_forall, AuxVars, Elimination, ExtendedStructure, TransVariant, EXTENSION_RELATION,
    UNIVERSE_MARKER,
};
pub use stcon::{chain_formula, chain_sentence, chain_vocabulary, stcon_to_mc, StconInstance};
