//! Immutable positional inverted index with exact boolean/phrase counting.

use super::query::{Query, QueryError};
use super::{tokenize, Document, TokenizerConfig};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::io::{BufRead, Write};
use std::path::Path;
use thiserror::Error;

const INDEX_MAGIC: &str = "meaningbond-index";
const INDEX_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum IndexError {
    #[error("duplicate document id: {0}")]
    DuplicateDocumentId(String),
    #[error("document {0} has empty text")]
    EmptyDocument(String),
    #[error("corpus line {line}: {message}")]
    MalformedCorpusLine { line: usize, message: String },
    #[error("not an index file (magic {found:?}, expected {INDEX_MAGIC:?})")]
    BadMagic { found: String },
    #[error("unsupported index version {found} (supported: {INDEX_VERSION})")]
    VersionMismatch { found: u32 },
    #[error("corrupted index file: {0}")]
    Corrupt(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Positions of one term within one document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct Posting {
    doc: u32,
    positions: Vec<u32>,
}

/// An immutable inverted index over a corpus.
///
/// Postings are sorted by document id and positions are strictly increasing
/// within a document. The index never mutates after [`build_index`], so any
/// number of readers may query it concurrently.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Index {
    config: TokenizerConfig,
    /// External document ids; the vector position is the internal id.
    docs: Vec<String>,
    postings: BTreeMap<String, Vec<Posting>>,
}

/// Build an index from a corpus.
///
/// Rejects duplicate document ids and documents whose text is empty after
/// whitespace trimming. The result depends only on the corpus content and
/// config, never on processing order.
pub fn build_index(corpus: &[Document], config: TokenizerConfig) -> Result<Index, IndexError> {
    let mut seen: HashSet<&str> = HashSet::with_capacity(corpus.len());
    let mut docs = Vec::with_capacity(corpus.len());
    let mut postings: BTreeMap<String, Vec<Posting>> = BTreeMap::new();

    for doc in corpus {
        if !seen.insert(doc.id.as_str()) {
            return Err(IndexError::DuplicateDocumentId(doc.id.clone()));
        }
        if doc.text.trim().is_empty() {
            return Err(IndexError::EmptyDocument(doc.id.clone()));
        }
        let internal = docs.len() as u32;
        docs.push(doc.id.clone());
        for (position, token) in tokenize(&doc.text, &config).into_iter().enumerate() {
            let list = postings.entry(token).or_default();
            match list.last_mut() {
                Some(last) if last.doc == internal => last.positions.push(position as u32),
                _ => list.push(Posting {
                    doc: internal,
                    positions: vec![position as u32],
                }),
            }
        }
    }

    Ok(Index {
        config,
        docs,
        postings,
    })
}

impl Index {
    /// Total number of documents (the `n_W` of landing probabilities).
    pub fn doc_count(&self) -> u64 {
        self.docs.len() as u64
    }

    /// Number of distinct indexed terms.
    pub fn distinct_terms(&self) -> usize {
        self.postings.len()
    }

    /// Number of distinct terms ignoring the given stop words (reporting only;
    /// stop words are always indexed).
    pub fn distinct_terms_excluding(&self, stop_words: &BTreeSet<String>) -> usize {
        self.postings
            .keys()
            .filter(|t| !stop_words.contains(*t))
            .count()
    }

    pub fn tokenizer_config(&self) -> &TokenizerConfig {
        &self.config
    }

    /// Normalize a user-supplied term with this index's tokenizer; it must
    /// reduce to exactly one token.
    pub fn normalize_term(&self, term: &str) -> Result<String, QueryError> {
        let mut tokens = tokenize(term, &self.config);
        if tokens.len() == 1 {
            Ok(tokens.pop().expect("len checked"))
        } else {
            Err(QueryError::NotASingleTerm {
                term: term.to_string(),
                tokens,
            })
        }
    }

    /// Exact number of documents matching `query`.
    pub fn count(&self, query: &Query) -> Result<u64, QueryError> {
        query.validate()?;
        Ok(self.eval(query)?.len() as u64)
    }

    /// The matching document ids themselves; `count` always equals the
    /// cardinality of this set.
    pub fn matching_docs(&self, query: &Query) -> Result<BTreeSet<String>, QueryError> {
        query.validate()?;
        Ok(self
            .eval(query)?
            .into_iter()
            .map(|internal| self.docs[internal as usize].clone())
            .collect())
    }

    /// Evaluate to a sorted vector of internal doc ids.
    fn eval(&self, query: &Query) -> Result<Vec<u32>, QueryError> {
        match query {
            Query::Term(term) => self.term_docs(term),
            Query::Phrase(terms) => self.phrase_docs(terms),
            Query::And(children) => {
                let mut sets = children
                    .iter()
                    .map(|c| self.eval(c))
                    .collect::<Result<Vec<_>, _>>()?;
                sets.sort_by_key(Vec::len);
                let mut iter = sets.into_iter();
                let mut acc = iter.next().unwrap_or_default();
                for set in iter {
                    acc = intersect_sorted(&acc, &set);
                    if acc.is_empty() {
                        break;
                    }
                }
                Ok(acc)
            }
            Query::AndNot { positive, negative } => {
                let pos = self.eval(positive)?;
                let neg = self.eval(negative)?;
                Ok(difference_sorted(&pos, &neg))
            }
            Query::Excluding { inner, terms } => {
                let mut matched = self.eval(inner)?;
                for term in terms {
                    let excluded = self.term_docs(term)?;
                    matched = difference_sorted(&matched, &excluded);
                    if matched.is_empty() {
                        break;
                    }
                }
                Ok(matched)
            }
        }
    }

    fn term_docs(&self, term: &str) -> Result<Vec<u32>, QueryError> {
        let normalized = self.normalize_term(term)?;
        Ok(self
            .postings
            .get(&normalized)
            .map(|list| list.iter().map(|p| p.doc).collect())
            .unwrap_or_default())
    }

    /// Documents containing the phrase tokens at consecutive positions in
    /// order. Each phrase element is normalized first and may itself split
    /// into several tokens ("pet-fish" matches like "pet fish").
    fn phrase_docs(&self, raw_terms: &[String]) -> Result<Vec<u32>, QueryError> {
        let mut tokens = Vec::new();
        for raw in raw_terms {
            let split = tokenize(raw, &self.config);
            if split.is_empty() {
                return Err(QueryError::NotASingleTerm {
                    term: raw.clone(),
                    tokens: split,
                });
            }
            tokens.extend(split);
        }
        debug_assert!(tokens.len() >= 2, "arity checked by Query::validate");

        let mut lists = Vec::with_capacity(tokens.len());
        for token in &tokens {
            match self.postings.get(token) {
                Some(list) => lists.push(list),
                None => return Ok(Vec::new()),
            }
        }

        let mut candidates: Vec<u32> = lists[0].iter().map(|p| p.doc).collect();
        for list in &lists[1..] {
            let docs: Vec<u32> = list.iter().map(|p| p.doc).collect();
            candidates = intersect_sorted(&candidates, &docs);
            if candidates.is_empty() {
                return Ok(Vec::new());
            }
        }

        let mut matches = Vec::new();
        for doc in candidates {
            let position_lists: Vec<&[u32]> = lists
                .iter()
                .map(|list| {
                    let at = list
                        .binary_search_by_key(&doc, |p| p.doc)
                        .expect("doc came from intersection");
                    list[at].positions.as_slice()
                })
                .collect();
            let adjacent = position_lists[0].iter().any(|&start| {
                position_lists[1..]
                    .iter()
                    .enumerate()
                    .all(|(offset, positions)| {
                        positions.binary_search(&(start + offset as u32 + 1)).is_ok()
                    })
            });
            if adjacent {
                matches.push(doc);
            }
        }
        Ok(matches)
    }

    /// Persist to `path` as a versioned JSON container (atomic write).
    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), IndexError> {
        let path = path.as_ref();
        let file = IndexFile {
            magic: INDEX_MAGIC.to_string(),
            version: INDEX_VERSION,
            index: self.clone(),
        };
        let bytes =
            serde_json::to_vec(&file).map_err(|e| IndexError::Corrupt(e.to_string()))?;
        let dir = path.parent().unwrap_or_else(|| Path::new("."));
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        tmp.write_all(&bytes)?;
        tmp.persist(path).map_err(|e| IndexError::Io(e.error))?;
        Ok(())
    }

    /// Load an index previously written by [`Index::save`].
    pub fn load(path: impl AsRef<Path>) -> Result<Index, IndexError> {
        let text = std::fs::read_to_string(path)?;
        let value: serde_json::Value = serde_json::from_str(&text)
            .map_err(|e| IndexError::Corrupt(e.to_string()))?;
        let magic = value
            .get("magic")
            .and_then(|m| m.as_str())
            .unwrap_or_default();
        if magic != INDEX_MAGIC {
            return Err(IndexError::BadMagic {
                found: magic.to_string(),
            });
        }
        let version = value.get("version").and_then(|v| v.as_u64()).unwrap_or(0) as u32;
        if version != INDEX_VERSION {
            return Err(IndexError::VersionMismatch { found: version });
        }
        let file: IndexFile =
            serde_json::from_value(value).map_err(|e| IndexError::Corrupt(e.to_string()))?;
        Ok(file.index)
    }
}

#[derive(Serialize, Deserialize)]
struct IndexFile {
    magic: String,
    version: u32,
    index: Index,
}

/// Read a corpus file: one JSON document object per line, UTF-8.
pub fn read_corpus(path: impl AsRef<Path>) -> Result<Vec<Document>, IndexError> {
    let file = std::fs::File::open(path)?;
    read_corpus_from_reader(std::io::BufReader::new(file))
}

pub fn read_corpus_from_reader(reader: impl BufRead) -> Result<Vec<Document>, IndexError> {
    let mut docs = Vec::new();
    for (number, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let doc: Document =
            serde_json::from_str(&line).map_err(|e| IndexError::MalformedCorpusLine {
                line: number + 1,
                message: e.to_string(),
            })?;
        docs.push(doc);
    }
    Ok(docs)
}

fn intersect_sorted(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len().min(b.len()));
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
        }
    }
    out
}

fn difference_sorted(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len());
    let mut j = 0;
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j >= b.len() || b[j] != x {
            out.push(x);
        }
    }
    out
}
