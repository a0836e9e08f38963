//! Uniform count providers: a local index and persisted caches of recorded
//! hit counts answer the same queries, so every analysis runs identically
//! against either.

mod audit;
mod local;
mod recorded;

pub use audit::{audit, ConsistencyCheck, ConsistencyReport};
pub use local::LocalProvider;
pub use recorded::{CacheHeader, RecordedProvider, CACHE_FORMAT, CACHE_VERSION};

use crate::corpus::{Query, QueryError};
use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

/// Decoy terms excluded from every query by default.
///
/// Excluding a fixed set of words with no meaning relation to anything under
/// study forces an external engine to search at a uniform depth, which makes
/// its counts more consistent; on a local index the subtraction is an exact
/// no-op unless the corpus actually contains the decoys.
pub const DEFAULT_EXCLUSION_TERMS: [&str; 4] =
    ["barbablu", "miseriaccia", "acciderpoli", "tristobello"];

pub fn default_exclusions() -> BTreeSet<String> {
    DEFAULT_EXCLUSION_TERMS
        .iter()
        .map(|s| s.to_string())
        .collect()
}

/// Where a count came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountSource {
    LocalIndex,
    RecordedExternal,
}

/// One resolved count: the canonical query, the number, and its provenance.
///
/// `count` is a nonnegative `f64`: externally recorded hit counts are rounded
/// magnitudes and are stored exactly as observed, never re-rounded. Local
/// counts carry no `observed_at` because they are recomputable on demand;
/// recorded ones keep their measurement timestamp.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountObservation {
    pub query: String,
    pub count: f64,
    pub source: CountSource,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub observed_at: Option<DateTime<Utc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
}

#[derive(Debug, Error)]
pub enum ProviderError {
    #[error("observation missing from cache: {query}")]
    MissingObservation { query: String },
    #[error("observations missing from cache:\n  {}", queries.join("\n  "))]
    MissingObservations { queries: Vec<String> },
    #[error(transparent)]
    Query(#[from] QueryError),
    #[error("cache line {line}: {message}")]
    CorruptCache { line: usize, message: String },
    #[error("cache line {line}: duplicate canonical query {query}")]
    DuplicateObservation { query: String, line: usize },
    #[error("not a count cache (format {found:?}, expected {expected:?})")]
    BadCacheFormat { found: String, expected: String },
    #[error("unsupported cache version {found} (supported: {supported})")]
    CacheVersionMismatch { found: u32, supported: u32 },
    #[error("negative count {count} recorded for {query}")]
    NegativeCount { query: String, count: f64 },
    #[error(
        "local index produced inconsistent triad counts (violated: {})",
        violated.join(", ")
    )]
    InconsistentLocalCounts { violated: Vec<String> },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Anything that can resolve counting queries.
///
/// Providers are read-only once constructed; concurrent readers are safe.
pub trait CountProvider {
    /// Resolve one query. The provider applies its exclusion decoration before
    /// looking anything up, so callers pass undecorated queries.
    fn get_count(&self, query: &Query) -> Result<CountObservation, ProviderError>;

    /// Total number of documents, when the source knows it.
    fn doc_count(&self) -> Option<f64>;

    /// The exclusion decoration applied to every query.
    fn exclusions(&self) -> &BTreeSet<String>;

    /// Normalize a user-supplied term the way this provider's counts expect.
    fn normalize_term(&self, term: &str) -> Result<String, ProviderError>;

    fn source(&self) -> CountSource;

    /// Human-readable description of the backing data, for report provenance.
    fn describe(&self) -> String;
}

/// The terms of one triad analysis, already normalized by a provider.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriadLabels {
    pub a: String,
    pub b: String,
    pub c: String,
    pub phrase: Vec<String>,
}

/// The eleven counts a triad analysis consumes.
///
/// `n_ab` counts the strict adjacent combination (phrase); `n_a_b` counts mere
/// co-occurrence anywhere in a document. `n_w` is optional because external
/// sources typically cannot report a total collection size — every ratio used
/// by the overextension analyses cancels it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriadCounts {
    pub labels: TriadLabels,
    pub source: CountSource,
    pub n_w: Option<f64>,
    pub n_a: f64,
    pub n_b: f64,
    pub n_c: f64,
    pub n_ab: f64,
    pub n_a_b: f64,
    pub n_a_c: f64,
    pub n_b_c: f64,
    pub n_ab_c: f64,
    pub n_a_b_c: f64,
    pub n_a_not_b: f64,
}

/// The ten undecorated queries behind a triad, in a fixed order.
///
/// Terms must already be normalized. The phrase is passed through verbatim as
/// the strict combination.
pub fn triad_queries(labels: &TriadLabels) -> Result<[(&'static str, Query); 10], QueryError> {
    let a = || Query::term(&labels.a);
    let b = || Query::term(&labels.b);
    let c = || Query::term(&labels.c);
    let phrase = || Query::phrase(labels.phrase.clone());
    Ok([
        ("n_A", a()),
        ("n_B", b()),
        ("n_C", c()),
        ("n_AB", phrase()?),
        ("n_{A,B}", Query::and([a(), b()])?),
        ("n_{A,C}", Query::and([a(), c()])?),
        ("n_{B,C}", Query::and([b(), c()])?),
        ("n_{AB,C}", Query::and([phrase()?, c()])?),
        ("n_{A,B,C}", Query::and([a(), b(), c()])?),
        ("n_{A,notB}", Query::and_not(a(), b())?),
    ])
}

/// Resolve all triad observations from a provider.
///
/// Missing observations are aggregated so a single run reports every gap.
pub fn collect_triad(
    provider: &(impl CountProvider + ?Sized),
    a: &str,
    b: &str,
    c: &str,
    phrase: &[String],
) -> Result<(TriadCounts, Vec<CountObservation>), ProviderError> {
    let labels = TriadLabels {
        a: provider.normalize_term(a)?,
        b: provider.normalize_term(b)?,
        c: provider.normalize_term(c)?,
        phrase: phrase
            .iter()
            .map(|t| provider.normalize_term(t))
            .collect::<Result<_, _>>()?,
    };

    let queries = triad_queries(&labels)?;
    let mut observations = Vec::with_capacity(queries.len());
    let mut missing = Vec::new();
    for (_, query) in &queries {
        match provider.get_count(query) {
            Ok(obs) => observations.push(obs),
            Err(ProviderError::MissingObservation { query }) => missing.push(query),
            Err(other) => return Err(other),
        }
    }
    if !missing.is_empty() {
        return Err(ProviderError::MissingObservations { queries: missing });
    }

    let count = |i: usize| observations[i].count;
    let counts = TriadCounts {
        labels,
        source: provider.source(),
        n_w: provider.doc_count(),
        n_a: count(0),
        n_b: count(1),
        n_c: count(2),
        n_ab: count(3),
        n_a_b: count(4),
        n_a_c: count(5),
        n_b_c: count(6),
        n_ab_c: count(7),
        n_a_b_c: count(8),
        n_a_not_b: count(9),
    };

    // Exact local counting can only violate these invariants through a bug.
    if counts.source == CountSource::LocalIndex {
        let report = audit(&counts);
        if !report.all_satisfied() {
            return Err(ProviderError::InconsistentLocalCounts {
                violated: report
                    .violations()
                    .map(|check| check.name.clone())
                    .collect(),
            });
        }
    }

    Ok((counts, observations))
}

/// Assemble the eleven counts of a triad (ten queries plus the total).
pub fn get_triad_counts(
    provider: &(impl CountProvider + ?Sized),
    a: &str,
    b: &str,
    c: &str,
    phrase: &[String],
) -> Result<TriadCounts, ProviderError> {
    collect_triad(provider, a, b, c, phrase).map(|(counts, _)| counts)
}

/// Snapshot a provider's triad observations into a recorded provider, e.g. to
/// persist a reproducible cache of the counts an analysis consumed.
pub fn record_triad_cache(
    provider: &(impl CountProvider + ?Sized),
    triads: &[(&str, &str, &str, Vec<String>)],
) -> Result<RecordedProvider, ProviderError> {
    let mut observations = Vec::new();
    for (a, b, c, phrase) in triads {
        let (_, obs) = collect_triad(provider, a, b, c, phrase)?;
        observations.extend(obs);
    }
    let header = CacheHeader {
        format: CACHE_FORMAT.to_string(),
        version: CACHE_VERSION,
        case_folding: true,
        exclusions: provider.exclusions().clone(),
        doc_count: provider.doc_count(),
    };
    RecordedProvider::from_observations(header, observations, "in-memory snapshot")
}
