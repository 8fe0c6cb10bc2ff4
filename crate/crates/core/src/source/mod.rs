//! Parsing of single methods (Java-syntax subset), the signature catalog,
//! and declared-type API resolution.

pub mod ast;
pub mod catalog;
mod lexer;
mod parser;
mod printer;
pub mod resolve;

pub use ast::{MethodIr, Statement, StatementData, StatementKind};
pub use catalog::{ApiCatalog, ApiSignature, CatalogStats, MemberKind};
pub use parser::{parse_method, HOLE_MARKER};
pub use printer::to_source;
pub use resolve::{resolve_apis, ResolvedMethod, ResolvedRef, Site, SiteEvent, SiteKind};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SourceError {
    #[error("syntax error at line {line}: {message}")]
    Syntax { line: u32, message: String },
    #[error("method contains {count} hole markers; at most one is allowed")]
    MultipleHoles { count: usize },
}

impl SourceError {
    pub fn line(&self) -> Option<u32> {
        match self {
            SourceError::Syntax { line, .. } => Some(*line),
            SourceError::MultipleHoles { .. } => None,
        }
    }
}

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("cannot read catalog {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("catalog format error at line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("catalog file is empty")]
    Empty,
}

/// Load a catalog from the line-oriented file format.
pub fn load_catalog(path: &std::path::Path) -> Result<ApiCatalog, CatalogError> {
    ApiCatalog::load(path)
}
