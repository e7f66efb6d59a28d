//! Core algorithms for turning plain-text software mentions into software
//! entities.
//!
//! The crate is `no_std` (with `alloc`) and contains no IO. File formats,
//! snapshots and the command-line driver live in the `swmention` crate.
//!
//! Pipeline, in order:
//!
//! 1. [`mention`]: mention ids and distinct-paper frequencies.
//! 2. [`synonyms`]: scored synonym pairs from registry keywords, a
//!    knowledge-base dictionary and Jaro-Winkler similarity ([`jaro`]).
//! 3. [`graph`]: the sparse similarity matrix, its clean-up rules and
//!    connected components.
//! 4. [`dbscan`] and [`cluster`]: per-component density clustering and
//!    frequency-based naming.
//! 5. [`linking`]: exact-match registry links under a normalized schema.
//! 6. [`eval`]: precision/recall, Precision@k and inter-annotator agreement.
#![no_std]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

pub mod cluster;
pub mod dbscan;
pub mod error;
pub mod eval;
pub mod graph;
pub mod jaro;
pub mod linking;
pub mod mention;
pub mod synonyms;
mod text;
mod unionfind;

pub use cluster::{disambiguate, Accounting, Cluster, DisambiguationConfig, DisambiguationResult, MentionStatus};
pub use dbscan::{dbscan, DbscanOutput};
pub use error::{Error, Result};
pub use graph::{Component, SimilarityGraph, Stoplist};
pub use jaro::{jaro, jaro_winkler};
pub use mention::{FrequencyTable, MentionId, MentionTable};
pub use synonyms::{SynonymPair, SynonymSource};
