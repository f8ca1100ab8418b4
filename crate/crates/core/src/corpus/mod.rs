//! Corpus construction from category-labeled article collections.
//!
//! Articles are selected by walking the category graph from a set of roots,
//! concatenated in id order, and optionally mixed with or frequency-matched
//! against another corpus. All selection is whole-article so local context
//! windows stay intact.

mod build;
mod io;
mod store;
mod tokenize;

pub use build::{
    build_corpus, count_occurrences, frequency_match, mix_corpora, Corpus, CorpusArticle,
    MixedCorpus, SourceShare,
};
pub use io::{read_corpus, sidecar_path, write_corpus, CorpusSidecar};
pub use store::{
    collect_context_articles, ingest, ingest_articles, read_articles, read_category_edges,
    ArticleRecord, ArticleStore, CategoryGraph, ContextSpec,
};
pub use tokenize::tokenize;
