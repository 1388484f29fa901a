//! Synthesis of controlled NLI challenge sets.
//!
//! Premise templates carry typed argument slots and a phenomenon anchor (a
//! dative verb or a relational numeric expression). From a set of templates
//! the crate enumerates instantiated premises, derives labeled hypotheses,
//! and builds train/test splits whose distance is controlled along syntax,
//! lexical content, dative verb and number range.

pub mod error;
pub mod generator;
pub mod io;
pub mod miner;
pub mod model;
pub mod seed;
pub mod splitter;
pub mod text;

#[cfg(any(test, feature = "oracle"))]
pub mod oracle;

pub use error::{Error, Result};
pub use model::{
    classify_complexity, parse_template, validate_instantiation, ArgumentSlot, Assignment,
    Complexity, ExampleId, Instantiation, Label, LexicalGroup, NliExample, NumericExpression,
    NumericInfo, Phenomenon, PhenomenonAnchor, PremiseTemplate, Rel, Role, Segment,
};
