//! The counting-query AST and its canonical serialization.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QueryError {
    #[error("phrase requires at least 2 terms, got {0}")]
    PhraseTooShort(usize),
    #[error("conjunction requires at least 2 sub-queries, got {0}")]
    AndTooFew(usize),
    #[error("exclusion decoration is only legal at the outermost query level")]
    NestedExcluding,
    #[error("not a single term after normalization: {term:?} -> {tokens:?}")]
    NotASingleTerm { term: String, tokens: Vec<String> },
}

/// A document-counting query.
///
/// `Term` counts documents containing a term; `Phrase` requires the terms to
/// occur adjacently in the given order (the "strict combination"); `And`
/// intersects; `AndNot` subtracts; `Excluding` subtracts documents containing
/// any of a set of decoy terms — a no-op in spirit on a local index, present so
/// local and recorded providers accept identical queries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Query {
    Term(String),
    Phrase(Vec<String>),
    And(Vec<Query>),
    AndNot {
        positive: Box<Query>,
        negative: Box<Query>,
    },
    Excluding {
        inner: Box<Query>,
        terms: BTreeSet<String>,
    },
}

impl Query {
    pub fn term(t: impl Into<String>) -> Query {
        Query::Term(t.into())
    }

    pub fn phrase<I, S>(terms: I) -> Result<Query, QueryError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let terms: Vec<String> = terms.into_iter().map(Into::into).collect();
        if terms.len() < 2 {
            return Err(QueryError::PhraseTooShort(terms.len()));
        }
        Ok(Query::Phrase(terms))
    }

    pub fn and<I>(children: I) -> Result<Query, QueryError>
    where
        I: IntoIterator<Item = Query>,
    {
        let children: Vec<Query> = children.into_iter().collect();
        if children.len() < 2 {
            return Err(QueryError::AndTooFew(children.len()));
        }
        for child in &children {
            child.ensure_no_excluding()?;
        }
        Ok(Query::And(children))
    }

    pub fn and_not(positive: Query, negative: Query) -> Result<Query, QueryError> {
        positive.ensure_no_excluding()?;
        negative.ensure_no_excluding()?;
        Ok(Query::AndNot {
            positive: Box::new(positive),
            negative: Box::new(negative),
        })
    }

    pub fn excluding<I, S>(inner: Query, terms: I) -> Result<Query, QueryError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        inner.ensure_no_excluding()?;
        Ok(Query::Excluding {
            inner: Box::new(inner),
            terms: terms.into_iter().map(Into::into).collect(),
        })
    }

    /// Wrap in an exclusion decoration unless one is already present or the
    /// exclusion set is empty.
    pub fn decorated(self, exclusions: &BTreeSet<String>) -> Query {
        match self {
            q @ Query::Excluding { .. } => q,
            q if exclusions.is_empty() => q,
            q => Query::Excluding {
                inner: Box::new(q),
                terms: exclusions.clone(),
            },
        }
    }

    pub fn is_excluding(&self) -> bool {
        matches!(self, Query::Excluding { .. })
    }

    /// Check the structural invariants: phrase arity, conjunction arity, and
    /// exclusion decorations only at the outermost level.
    pub fn validate(&self) -> Result<(), QueryError> {
        match self {
            Query::Excluding { inner, .. } => inner.validate_inner(),
            other => other.validate_inner(),
        }
    }

    fn validate_inner(&self) -> Result<(), QueryError> {
        match self {
            Query::Term(_) => Ok(()),
            Query::Phrase(terms) => {
                if terms.len() < 2 {
                    Err(QueryError::PhraseTooShort(terms.len()))
                } else {
                    Ok(())
                }
            }
            Query::And(children) => {
                if children.len() < 2 {
                    return Err(QueryError::AndTooFew(children.len()));
                }
                children.iter().try_for_each(Query::validate_inner)
            }
            Query::AndNot { positive, negative } => {
                positive.validate_inner()?;
                negative.validate_inner()
            }
            Query::Excluding { .. } => Err(QueryError::NestedExcluding),
        }
    }

    fn ensure_no_excluding(&self) -> Result<(), QueryError> {
        match self {
            Query::Excluding { .. } => Err(QueryError::NestedExcluding),
            Query::And(children) => children.iter().try_for_each(Query::ensure_no_excluding),
            Query::AndNot { positive, negative } => {
                positive.ensure_no_excluding()?;
                negative.ensure_no_excluding()
            }
            _ => Ok(()),
        }
    }

    /// Canonical textual form, used as the cache key for recorded counts.
    ///
    /// Conjunction children and exclusion terms are sorted, so any two queries
    /// that denote the same count map to the same key regardless of the order
    /// in which they were assembled.
    pub fn canonical(&self) -> String {
        match self {
            Query::Term(t) => format!("term({})", escape(t)),
            Query::Phrase(terms) => {
                let parts: Vec<String> = terms.iter().map(|t| escape(t)).collect();
                format!("phrase({})", parts.join(","))
            }
            Query::And(children) => {
                let mut parts: Vec<String> = children.iter().map(Query::canonical).collect();
                parts.sort();
                format!("and({})", parts.join(","))
            }
            Query::AndNot { positive, negative } => {
                format!("andnot({},{})", positive.canonical(), negative.canonical())
            }
            Query::Excluding { inner, terms } => {
                let excluded: Vec<String> = terms.iter().map(|t| escape(t)).collect();
                format!("excluding({};{})", inner.canonical(), excluded.join(","))
            }
        }
    }
}

/// Percent-encode anything that could collide with the canonical syntax.
fn escape(term: &str) -> String {
    let mut out = String::with_capacity(term.len());
    for byte in term.bytes() {
        match byte {
            b'a'..=b'z' | b'A'..=b'Z' | b'0'..=b'9' | b'_' | b'-' => out.push(byte as char),
            other => out.push_str(&format!("%{other:02X}")),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructors_enforce_arity() {
        assert_eq!(
            Query::phrase(["solo"]).unwrap_err(),
            QueryError::PhraseTooShort(1)
        );
        assert_eq!(
            Query::and([Query::term("a")]).unwrap_err(),
            QueryError::AndTooFew(1)
        );
    }

    #[test]
    fn excluding_must_be_outermost() {
        let ex = Query::excluding(Query::term("a"), ["x"]).unwrap();
        assert_eq!(
            Query::and([ex.clone(), Query::term("b")]).unwrap_err(),
            QueryError::NestedExcluding
        );
        assert!(ex.validate().is_ok());
    }

    #[test]
    fn validate_rejects_hand_built_malformed() {
        let bad = Query::Phrase(vec!["one".into()]);
        assert_eq!(bad.validate().unwrap_err(), QueryError::PhraseTooShort(1));
    }

    #[test]
    fn canonical_sorts_conjunctions() {
        let q1 = Query::and([Query::term("pet"), Query::term("fish")]).unwrap();
        let q2 = Query::and([Query::term("fish"), Query::term("pet")]).unwrap();
        assert_eq!(q1.canonical(), q2.canonical());
        assert_eq!(q1.canonical(), "and(term(fish),term(pet))");
    }

    #[test]
    fn canonical_keeps_phrase_and_andnot_order() {
        let p = Query::phrase(["pet", "fish"]).unwrap();
        assert_eq!(p.canonical(), "phrase(pet,fish)");
        let d = Query::and_not(Query::term("pet"), Query::term("fish")).unwrap();
        assert_eq!(d.canonical(), "andnot(term(pet),term(fish))");
    }

    #[test]
    fn canonical_escapes_separators() {
        let q = Query::term("a,b(c)");
        assert_eq!(q.canonical(), "term(a%2Cb%28c%29)");
    }

    #[test]
    fn decorated_wraps_once() {
        let exclusions: BTreeSet<String> = ["zzz".to_string()].into();
        let q = Query::term("pet").decorated(&exclusions);
        assert!(q.is_excluding());
        let again = q.clone().decorated(&exclusions);
        assert_eq!(q, again);
    }
}
