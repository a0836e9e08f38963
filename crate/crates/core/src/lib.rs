//! Corpus co-occurrence analytics and quantum conjunction-fallacy models.
//!
//! The crate treats a document collection as an "information space" that can be
//! interrogated with counting queries, and derives from those counts the
//! statistics used to diagnose overextension effects in concept combinations:
//!
//! - [`corpus`] — tokenization, an immutable positional inverted index, and an
//!   exact boolean/phrase query engine (`n_A`, `n_{A,B}`, `n_{AB}`, ...).
//! - [`provider`] — a uniform count-provider abstraction: the same analyses run
//!   against a local index or against a persisted cache of externally recorded
//!   hit counts, with consistency auditing for the latter.
//! - [`measures`] — landing probabilities, conditional probabilities, and the
//!   meaning bond `M(A,B) = p(A,B) / (p(A) p(B))`.
//! - [`quantum`] — Hilbert-space models of the conjunction fallacy: the
//!   sequential-measurement (order-effects) model and the superposed-state
//!   (emergence-effects) model, with forward evaluation, feasibility bounds,
//!   and model fitting.
//! - [`analysis`] — the end-to-end triad pipeline: overextension ratios for
//!   both mechanisms, the dominance ratio and its two-factor decomposition,
//!   and machine/human-readable reports.

pub mod analysis;
pub mod corpus;
pub mod fallacy;
pub mod measures;
pub mod provider;
pub mod quantum;

pub use analysis::{analyze_triad, AnalysisConfig, TriadAnalysis};
pub use corpus::{build_index, tokenize, Document, Index, Query, TokenizerConfig};
pub use fallacy::FallacyClass;
pub use measures::{MeaningBond, Probability};
pub use provider::{
    audit, get_triad_counts, CountObservation, CountProvider, CountSource, LocalProvider,
    RecordedProvider, TriadCounts,
};
