//! Count provider backed by a persisted cache of recorded observations.
//!
//! Hit counts measured against an external engine drift over time, so analyses
//! run against a dated snapshot: a JSON-lines file whose first line is a
//! header record and whose remaining lines are one observation each, keyed by
//! canonical query.

use super::{CountObservation, CountProvider, CountSource, ProviderError};
use crate::corpus::Query;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, Write};
use std::path::Path;

pub const CACHE_FORMAT: &str = "meaningbond-count-cache";
pub const CACHE_VERSION: u32 = 1;

/// First line of a cache file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CacheHeader {
    pub format: String,
    pub version: u32,
    /// Whether terms were case-folded when the observations were recorded.
    #[serde(default = "default_true")]
    pub case_folding: bool,
    /// Exclusion decoration applied to every recorded query.
    #[serde(default)]
    pub exclusions: BTreeSet<String>,
    /// Total collection size, when the source knew it. External engines
    /// normally cannot report one; every overextension ratio cancels it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub doc_count: Option<f64>,
}

fn default_true() -> bool {
    true
}

/// Read-only provider over a loaded cache.
#[derive(Debug, Clone)]
pub struct RecordedProvider {
    header: CacheHeader,
    observations: BTreeMap<String, CountObservation>,
    origin: String,
}

impl RecordedProvider {
    /// Load a cache file, validating the header and rejecting duplicate keys.
    pub fn load(path: impl AsRef<Path>) -> Result<Self, ProviderError> {
        let path = path.as_ref();
        let file = std::fs::File::open(path)?;
        let origin = path.display().to_string();
        Self::from_reader(std::io::BufReader::new(file), origin)
    }

    pub fn from_reader(reader: impl BufRead, origin: String) -> Result<Self, ProviderError> {
        let mut lines = reader.lines().enumerate();

        let header: CacheHeader = loop {
            match lines.next() {
                Some((number, line)) => {
                    let line = line?;
                    if line.trim().is_empty() {
                        continue;
                    }
                    break serde_json::from_str(&line).map_err(|e| {
                        ProviderError::CorruptCache {
                            line: number + 1,
                            message: format!("bad header: {e}"),
                        }
                    })?;
                }
                None => {
                    return Err(ProviderError::CorruptCache {
                        line: 1,
                        message: "empty file (missing header record)".to_string(),
                    })
                }
            }
        };
        if header.format != CACHE_FORMAT {
            return Err(ProviderError::BadCacheFormat {
                found: header.format,
                expected: CACHE_FORMAT.to_string(),
            });
        }
        if header.version != CACHE_VERSION {
            return Err(ProviderError::CacheVersionMismatch {
                found: header.version,
                supported: CACHE_VERSION,
            });
        }

        let mut observations = BTreeMap::new();
        for (number, line) in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let obs: CountObservation =
                serde_json::from_str(&line).map_err(|e| ProviderError::CorruptCache {
                    line: number + 1,
                    message: e.to_string(),
                })?;
            if !obs.count.is_finite() || obs.count < 0.0 {
                return Err(ProviderError::NegativeCount {
                    query: obs.query,
                    count: obs.count,
                });
            }
            let key = obs.query.clone();
            if observations.insert(key.clone(), obs).is_some() {
                return Err(ProviderError::DuplicateObservation {
                    query: key,
                    line: number + 1,
                });
            }
        }

        Ok(RecordedProvider {
            header,
            observations,
            origin,
        })
    }

    /// Build a provider directly from observations (used when snapshotting
    /// another provider's counts).
    pub fn from_observations(
        header: CacheHeader,
        observations: Vec<CountObservation>,
        origin: &str,
    ) -> Result<Self, ProviderError> {
        let mut map = BTreeMap::new();
        for obs in observations {
            if !obs.count.is_finite() || obs.count < 0.0 {
                return Err(ProviderError::NegativeCount {
                    query: obs.query,
                    count: obs.count,
                });
            }
            let key = obs.query.clone();
            if let Some(existing) = map.get(&key) {
                // Re-recording the identical observation is harmless.
                if existing == &obs {
                    continue;
                }
                return Err(ProviderError::DuplicateObservation { query: key, line: 0 });
            }
            map.insert(key, obs);
        }
        Ok(RecordedProvider {
            header,
            observations: map,
            origin: origin.to_string(),
        })
    }

    /// Persist to `path` atomically (temp file + rename), bit-exactly
    /// round-tripping every observation.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), ProviderError> {
        let path = path.as_ref();
        let dir = path.parent().unwrap_or_else(|| Path::new("."));
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        let header = serde_json::to_string(&self.header)
            .expect("header serialization cannot fail");
        writeln!(tmp, "{header}")?;
        for obs in self.observations.values() {
            let line =
                serde_json::to_string(obs).expect("observation serialization cannot fail");
            writeln!(tmp, "{line}")?;
        }
        tmp.persist(path).map_err(|e| ProviderError::Io(e.error))?;
        Ok(())
    }

    pub fn header(&self) -> &CacheHeader {
        &self.header
    }

    pub fn observations(&self) -> impl Iterator<Item = &CountObservation> {
        self.observations.values()
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }
}

impl CountProvider for RecordedProvider {
    fn get_count(&self, query: &Query) -> Result<CountObservation, ProviderError> {
        let decorated = query.clone().decorated(&self.header.exclusions);
        let key = decorated.canonical();
        self.observations
            .get(&key)
            .cloned()
            .ok_or(ProviderError::MissingObservation { query: key })
    }

    fn doc_count(&self) -> Option<f64> {
        self.header.doc_count
    }

    fn exclusions(&self) -> &BTreeSet<String> {
        &self.header.exclusions
    }

    fn normalize_term(&self, term: &str) -> Result<String, ProviderError> {
        let trimmed = term.trim();
        Ok(if self.header.case_folding {
            trimmed.to_lowercase()
        } else {
            trimmed.to_string()
        })
    }

    fn source(&self) -> CountSource {
        // Observations snapshotted from a local index keep their provenance.
        if !self.observations.is_empty()
            && self
                .observations
                .values()
                .all(|o| o.source == CountSource::LocalIndex)
        {
            CountSource::LocalIndex
        } else {
            CountSource::RecordedExternal
        }
    }

    fn describe(&self) -> String {
        format!("recorded cache ({})", self.origin)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::TimeZone;

    fn sample_header() -> CacheHeader {
        CacheHeader {
            format: CACHE_FORMAT.to_string(),
            version: CACHE_VERSION,
            case_folding: true,
            exclusions: BTreeSet::new(),
            doc_count: None,
        }
    }

    fn sample_observation(key: &str, count: f64) -> CountObservation {
        CountObservation {
            query: key.to_string(),
            count,
            source: CountSource::RecordedExternal,
            observed_at: Some(chrono::Utc.with_ymd_and_hms(2016, 11, 19, 0, 0, 0).unwrap()),
            notes: None,
        }
    }

    #[test]
    fn round_trip_preserves_observations() {
        let provider = RecordedProvider::from_observations(
            sample_header(),
            vec![
                sample_observation("term(pet)", 7.14e8),
                sample_observation("term(fish)", 8.06e8),
            ],
            "test",
        )
        .unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.jsonl");
        provider.save(&path).unwrap();
        let reloaded = RecordedProvider::load(&path).unwrap();
        assert_eq!(provider.header, reloaded.header);
        let a: Vec<_> = provider.observations().collect();
        let b: Vec<_> = reloaded.observations().collect();
        assert_eq!(a, b);
    }

    #[test]
    fn empty_cache_round_trips() {
        let provider =
            RecordedProvider::from_observations(sample_header(), Vec::new(), "test").unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("empty.jsonl");
        provider.save(&path).unwrap();
        let reloaded = RecordedProvider::load(&path).unwrap();
        assert!(reloaded.is_empty());
    }

    #[test]
    fn duplicate_key_is_a_load_error() {
        let header = serde_json::to_string(&sample_header()).unwrap();
        let obs = serde_json::to_string(&sample_observation("term(pet)", 1.0)).unwrap();
        let obs2 = serde_json::to_string(&sample_observation("term(pet)", 2.0)).unwrap();
        let text = format!("{header}\n{obs}\n{obs2}\n");
        let err = RecordedProvider::from_reader(text.as_bytes(), "test".into()).unwrap_err();
        assert!(matches!(
            err,
            ProviderError::DuplicateObservation { line: 3, .. }
        ));
    }

    #[test]
    fn corrupt_record_reports_line() {
        let header = serde_json::to_string(&sample_header()).unwrap();
        let text = format!("{header}\n{{broken\n");
        let err = RecordedProvider::from_reader(text.as_bytes(), "test".into()).unwrap_err();
        assert!(matches!(err, ProviderError::CorruptCache { line: 2, .. }));
    }

    #[test]
    fn missing_observation_names_the_canonical_query() {
        let provider =
            RecordedProvider::from_observations(sample_header(), Vec::new(), "test").unwrap();
        let err = provider.get_count(&Query::term("pet")).unwrap_err();
        assert!(matches!(
            err,
            ProviderError::MissingObservation { query } if query == "term(pet)"
        ));
    }

    #[test]
    fn wrong_format_and_version_are_distinct() {
        let bad_format = "{\"format\":\"other\",\"version\":1}\n";
        assert!(matches!(
            RecordedProvider::from_reader(bad_format.as_bytes(), "t".into()).unwrap_err(),
            ProviderError::BadCacheFormat { .. }
        ));
        let bad_version = format!("{{\"format\":\"{CACHE_FORMAT}\",\"version\":9}}\n");
        assert!(matches!(
            RecordedProvider::from_reader(bad_version.as_bytes(), "t".into()).unwrap_err(),
            ProviderError::CacheVersionMismatch { found: 9, .. }
        ));
    }
}
