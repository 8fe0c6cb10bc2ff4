//! Context-based API recommendation.
//!
//! The pipeline parses single methods (a Java-syntax subset) into a
//! statement-level IR, resolves API references against a signature catalog,
//! builds an API context graph (control/data-flow over API sites), extracts
//! a normalized bag of identifier tokens, hole-punches graphs into training
//! instances, and trains a gated graph network + token network joint
//! classifier that ranks candidate APIs for a hole position.

pub mod corpus;
pub mod eval;
pub mod graph;
pub mod model;
pub mod source;
pub mod tokens;
