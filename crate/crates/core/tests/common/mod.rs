//! Shared fixtures for integration tests.

use std::path::PathBuf;

use ctxrec_core::corpus::InstanceSource;
use ctxrec_core::graph::{build_graph, ApiContextGraph};
use ctxrec_core::source::{self, ApiCatalog, ResolvedMethod};
use ctxrec_core::tokens::TokenVocabulary;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn catalog() -> ApiCatalog {
    source::load_catalog(&fixture_path("catalog.txt")).expect("fixture catalog loads")
}

pub fn vocab() -> TokenVocabulary {
    TokenVocabulary::load(&fixture_path("vocab.txt")).expect("fixture vocabulary loads")
}

pub fn resolve_fixture(name: &str) -> ResolvedMethod {
    let text = std::fs::read_to_string(fixture_path(name)).expect("fixture file");
    let ir = source::parse_method(&text).expect("fixture parses");
    source::resolve_apis(&ir, &catalog())
}

pub fn graph_of(name: &str) -> ApiContextGraph {
    build_graph(&resolve_fixture(name)).expect("fixture builds a graph")
}

pub fn source_of(name: &str) -> InstanceSource {
    let rm = resolve_fixture(name);
    let g = build_graph(&rm).expect("fixture builds a graph");
    InstanceSource::new(&rm, g)
}

/// Parse + resolve + build in one step for inline snippets.
pub fn graph_of_text(text: &str) -> ApiContextGraph {
    let ir = source::parse_method(text).expect("snippet parses");
    let rm = source::resolve_apis(&ir, &catalog());
    build_graph(&rm).expect("snippet builds a graph")
}
