//! Measurement toolkit for a codified statutory corpus modeled as the union
//! of a hierarchy tree and a citation network over token-bearing vertices.

pub mod citation;
pub mod fold;
pub mod ingest;
pub mod metrics;
pub mod model;
pub mod report;
pub mod tokenizer;

pub use model::{CitationSubgraph, CodeGraph, CorpusNode, GraphBuilder, LevelKind, NodeId, NodePath};
pub use tokenizer::TokenStream;
