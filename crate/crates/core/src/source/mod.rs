//! Source model: parsing a Java-style corpus and resolving its types.

pub mod ast;
mod corpus;
pub mod lexer;
pub mod parser;

pub use ast::*;
pub use corpus::{
    load_corpus, locate_method, parse_corpus, parse_corpus_with, read_source_tree, resolve_types, Diagnostic,
    DiagnosticKind, MethodId, SourceCorpus, SourceError, SourceFile, CONTAINER_NAMES, PRIMITIVE_NAMES,
};
