//! Count provider backed by a local inverted index.

use super::{default_exclusions, CountObservation, CountProvider, CountSource, ProviderError};
use crate::corpus::{Index, Query};
use std::collections::BTreeSet;

/// Resolves queries by exact counting against an in-memory [`Index`].
pub struct LocalProvider {
    index: Index,
    exclusions: BTreeSet<String>,
}

impl LocalProvider {
    /// Wrap an index with the default exclusion decoration.
    pub fn new(index: Index) -> Self {
        LocalProvider {
            index,
            exclusions: default_exclusions(),
        }
    }

    pub fn with_exclusions(index: Index, exclusions: BTreeSet<String>) -> Self {
        LocalProvider { index, exclusions }
    }

    pub fn index(&self) -> &Index {
        &self.index
    }
}

impl CountProvider for LocalProvider {
    fn get_count(&self, query: &Query) -> Result<CountObservation, ProviderError> {
        let decorated = query.clone().decorated(&self.exclusions);
        let count = self.index.count(&decorated)?;
        Ok(CountObservation {
            query: decorated.canonical(),
            count: count as f64,
            source: CountSource::LocalIndex,
            observed_at: None,
            notes: None,
        })
    }

    fn doc_count(&self) -> Option<f64> {
        Some(self.index.doc_count() as f64)
    }

    fn exclusions(&self) -> &BTreeSet<String> {
        &self.exclusions
    }

    fn normalize_term(&self, term: &str) -> Result<String, ProviderError> {
        Ok(self.index.normalize_term(term)?)
    }

    fn source(&self) -> CountSource {
        CountSource::LocalIndex
    }

    fn describe(&self) -> String {
        format!("local index ({} documents)", self.index.doc_count())
    }
}
