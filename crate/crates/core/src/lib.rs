//! Weighted finite-state transducers and a lattice-combination pipeline for
//! lightly supervised speech recognition training.
//!
//! The combination merges an inaccurate transcript with a hypothesis lattice
//! into a supervision lattice that is narrow where the two agree and keeps
//! the lattice's alternatives where they do not:
//!
//! ```text
//! T = min(det(rmeps(proj(prune(R ∘ E ∘ H)))))
//! ```
//!
//! where `R` is the transcript as a linear acceptor, `E` an edit transducer
//! that rewards matches, and `H` the hypothesis lattice with its weights
//! removed. See [`combine`] for the pipeline, [`lm`] for grammar estimation
//! and the word-reward transform, and [`metrics`] for lattice quality
//! measures.

pub mod algo;
pub mod archive;
pub mod combine;
pub mod edit;
pub mod error;
pub mod fst;
pub mod lm;
pub mod metrics;
pub mod semiring;
pub mod simulate;
pub mod symbols;
pub mod text;

pub use error::{Error, Result};
pub use fst::{Arc, Fst, Label, StateId, EPSILON};
pub use semiring::{Log, Semiring, Tropical};
pub use symbols::SymbolTable;
pub use combine::{combine, combine_labels, rescore_with_grammar, CombineConfig, EditMode};
pub use edit::{build_edit_fst, lazy_edit_compose, EditCosts};
pub use lm::{NGramEntry, NGramModel};
pub use archive::{read_transcripts, write_transcripts, LatticeArchive};
pub use metrics::{edit_distance, ErrorBreakdown, LatticeStats};
pub use simulate::{generate, NoiseConfig, SimCorpus};
