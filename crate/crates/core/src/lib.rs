//! Domain-restricted word embeddings and their evaluation against human
//! similarity judgments.
//!
//! The crate covers the whole pipeline: selecting training articles from a
//! category graph, training skip-gram negative-sampling spaces, projecting
//! words onto anchor-defined feature axes, predicting pairwise similarity,
//! and scoring predictions with bootstrap statistics.

pub mod cli;
pub mod corpus;
pub mod embedding;
mod error;
pub mod eval;
pub mod inventory;
pub mod projection;
pub mod similarity;
pub mod synthetic;

pub use error::{Error, Result, Shortfall};
