//! From triad counts to overextension diagnostics.
//!
//! For a term triple (A, B, C) and the strict combination AB, the pipeline
//! compares the two mechanisms that can lift `C`'s conditional probability:
//! the emergent combined concept (`p(C|AB)` against `p(C|A)` and `p(C|B)`)
//! and sequential interrogation (`p(C|A then B)` against the same baselines),
//! then quantifies how strongly the first dominates the second.

mod report;

pub use report::{render_markdown, render_markdown_full};

use crate::fallacy::FallacyClass;
use crate::measures::{self, MeasureError};
use crate::provider::{
    audit, collect_triad, ConsistencyReport, CountProvider, CountSource, ProviderError,
    TriadCounts,
};
use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("phrase {phrase:?} never occurs: p(C|AB) conditions on an empty event")]
    PhraseAbsent { phrase: String },
    #[error("ratio undefined: {count_name} is zero")]
    UndefinedRatio { count_name: &'static str },
    #[error("computing {context}: {source}")]
    Measure {
        context: String,
        #[source]
        source: MeasureError,
    },
    #[error(transparent)]
    Provider(#[from] ProviderError),
}

fn measure_ctx(
    context: impl Into<String>,
) -> impl FnOnce(MeasureError) -> AnalysisError {
    let context = context.into();
    move |source| AnalysisError::Measure { context, source }
}

/// Thresholds for the analysis pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalysisConfig {
    /// Overextension requires a ratio above `1 + margin` for exact counts.
    pub overextension_margin_exact: f64,
    /// Margin for rounded external counts (0 reads the recorded ratios as-is).
    pub overextension_margin_external: f64,
    /// Dominance is flagged when the direct ratio reaches this threshold; the
    /// raw value is always reported alongside.
    pub dominance_threshold: f64,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            overextension_margin_exact: 1e-12,
            overextension_margin_external: 0.0,
            dominance_threshold: 10.0,
        }
    }
}

impl AnalysisConfig {
    fn margin_for(&self, source: CountSource) -> f64 {
        match source {
            CountSource::LocalIndex => self.overextension_margin_exact,
            CountSource::RecordedExternal => self.overextension_margin_external,
        }
    }
}

/// Overextension through the emergent combined concept.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EeOverextension {
    pub p_c_given_ab: f64,
    /// `p(C|AB) / p(C|A)`; above 1 means the combination overextends `A`.
    pub ratio_vs_a: f64,
    pub ratio_vs_b: f64,
    pub class: FallacyClass,
}

/// Overextension through sequential interrogation (asking A first).
///
/// `ratio_vs_a` compares `p(C|A then B)` against `p(C|A)`: on consistent
/// counts it can never exceed 1 because `n_{A,B,C} ≤ n_{A,C}`, which is the
/// count-level face of the sequential model's no-double-fallacy theorem.
/// `ratio_vs_b` compares against `p(C|B)` and can only exceed 1 when
/// `n_B/n_A > 1` (the reported necessary condition).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OeSequential {
    pub p_c_a_then_b: f64,
    pub p_c_b_then_a: f64,
    pub ratio_vs_a: f64,
    pub ratio_vs_b: f64,
    /// `n_B / n_A`: must exceed 1 for the A-then-B sequence to overextend B.
    pub necessary_ab: f64,
    /// `n_A / n_B`: must exceed 1 for the B-then-A sequence to overextend A.
    pub necessary_ba: f64,
    pub class: FallacyClass,
}

/// The dominance of the emergent mechanism over the sequential one, computed
/// two ways: directly as `p(C|AB) / p(C|A then B)` and through the two-factor
/// decomposition (bond concentration × co-occurrence dilution).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Dominance {
    pub direct: f64,
    /// `(n_{AB,C}/n_AB) · (n_{A,B}/n_{A,B,C})` — how much of C's affinity
    /// needs the strict combination rather than mere co-occurrence.
    pub factor1: f64,
    /// `1 + n_{A,notB}/n_{A,B}` — how rarely A's occurrences come with B.
    pub factor2: f64,
    pub decomposed: f64,
    /// Relative disagreement between the two computations; zero up to
    /// floating point for exact counts, reported (not hidden) for rounded
    /// external counts.
    pub relative_discrepancy: f64,
    /// `M(C,AB) / M(C;A,B)` recomputed through the bond measures when the
    /// collection size is known; equals `factor1` identically.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bond_ratio_check: Option<f64>,
    pub dominant: bool,
}

/// Provenance of the counts behind an analysis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub source: CountSource,
    pub origin: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub observed_earliest: Option<DateTime<Utc>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub observed_latest: Option<DateTime<Utc>>,
}

/// Everything derived from one (A, B, C, AB) quadruple.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriadAnalysis {
    pub counts: TriadCounts,
    pub consistency: ConsistencyReport,
    pub p_c_given_a: f64,
    pub p_c_given_b: f64,
    /// `None` when the phrase never occurs (EE undefined, not zero).
    pub ee: Option<EeOverextension>,
    pub oe: OeSequential,
    /// `None` when a zero count leaves a dominance denominator undefined.
    pub dominance: Option<Dominance>,
    pub provenance: Provenance,
}

/// The emergent-combination diagnostics: `p(C|AB)` against both baselines.
pub fn ee_overextension(
    counts: &TriadCounts,
    config: &AnalysisConfig,
) -> Result<EeOverextension, AnalysisError> {
    if counts.n_ab == 0.0 {
        return Err(AnalysisError::PhraseAbsent {
            phrase: counts.labels.phrase.join(" "),
        });
    }
    let p_c_given_ab = measures::conditional_probability(counts.n_ab_c, counts.n_ab)
        .map_err(measure_ctx("p(C|AB) = n_{AB,C}/n_AB"))?
        .value();
    let p_c_given_a = measures::conditional_probability(counts.n_a_c, counts.n_a)
        .map_err(measure_ctx("p(C|A) = n_{A,C}/n_A"))?
        .value();
    let p_c_given_b = measures::conditional_probability(counts.n_b_c, counts.n_b)
        .map_err(measure_ctx("p(C|B) = n_{B,C}/n_B"))?
        .value();
    if p_c_given_a == 0.0 {
        return Err(AnalysisError::UndefinedRatio {
            count_name: "n_{A,C}",
        });
    }
    if p_c_given_b == 0.0 {
        return Err(AnalysisError::UndefinedRatio {
            count_name: "n_{B,C}",
        });
    }
    let ratio_vs_a = p_c_given_ab / p_c_given_a;
    let ratio_vs_b = p_c_given_ab / p_c_given_b;
    let threshold = 1.0 + config.margin_for(counts.source);
    Ok(EeOverextension {
        p_c_given_ab,
        ratio_vs_a,
        ratio_vs_b,
        class: FallacyClass::from_flags(ratio_vs_a > threshold, ratio_vs_b > threshold),
    })
}

/// The sequential diagnostics: `p(C|A then B)` against both baselines, plus
/// the symmetric order's probability and both necessary-condition values.
pub fn oe_sequential(
    counts: &TriadCounts,
    config: &AnalysisConfig,
) -> Result<OeSequential, AnalysisError> {
    let p_c_a_then_b = measures::conditional_probability(counts.n_a_b_c, counts.n_a)
        .map_err(measure_ctx("p(C|A then B) = n_{A,B,C}/n_A"))?
        .value();
    let p_c_b_then_a = measures::conditional_probability(counts.n_a_b_c, counts.n_b)
        .map_err(measure_ctx("p(C|B then A) = n_{A,B,C}/n_B"))?
        .value();
    let p_c_given_a = measures::conditional_probability(counts.n_a_c, counts.n_a)
        .map_err(measure_ctx("p(C|A) = n_{A,C}/n_A"))?
        .value();
    let p_c_given_b = measures::conditional_probability(counts.n_b_c, counts.n_b)
        .map_err(measure_ctx("p(C|B) = n_{B,C}/n_B"))?
        .value();
    if p_c_given_a == 0.0 {
        return Err(AnalysisError::UndefinedRatio {
            count_name: "n_{A,C}",
        });
    }
    if p_c_given_b == 0.0 {
        return Err(AnalysisError::UndefinedRatio {
            count_name: "n_{B,C}",
        });
    }
    let ratio_vs_a = p_c_a_then_b / p_c_given_a;
    let ratio_vs_b = p_c_a_then_b / p_c_given_b;
    let threshold = 1.0 + config.margin_for(counts.source);
    Ok(OeSequential {
        p_c_a_then_b,
        p_c_b_then_a,
        ratio_vs_a,
        ratio_vs_b,
        necessary_ab: counts.n_b / counts.n_a,
        necessary_ba: counts.n_a / counts.n_b,
        class: FallacyClass::from_flags(ratio_vs_a > threshold, ratio_vs_b > threshold),
    })
}

/// Dominance ratio and its decomposition.
pub fn dominance(
    counts: &TriadCounts,
    config: &AnalysisConfig,
) -> Result<Dominance, AnalysisError> {
    if counts.n_ab == 0.0 {
        return Err(AnalysisError::UndefinedRatio { count_name: "n_AB" });
    }
    if counts.n_a_b_c == 0.0 {
        return Err(AnalysisError::UndefinedRatio {
            count_name: "n_{A,B,C}",
        });
    }
    if counts.n_a_b == 0.0 {
        return Err(AnalysisError::UndefinedRatio {
            count_name: "n_{A,B}",
        });
    }

    let direct = (counts.n_ab_c / counts.n_a_b_c) * (counts.n_a / counts.n_ab);
    let factor1 = (counts.n_ab_c / counts.n_ab) * (counts.n_a_b / counts.n_a_b_c);
    let factor2 = 1.0 + counts.n_a_not_b / counts.n_a_b;
    let decomposed = factor1 * factor2;
    let scale = direct.abs().max(decomposed.abs());
    let relative_discrepancy = if scale > 0.0 {
        (direct - decomposed).abs() / scale
    } else {
        0.0
    };

    // When the collection size is known, the first factor is cross-checkable
    // as a ratio of meaning bonds (n_W and n_C cancel).
    let bond_ratio_check = match (counts.n_w, counts.n_c > 0.0) {
        (Some(n_w), true) => {
            let bond_strict = measures::meaning_bond(
                counts.n_ab_c,
                counts.n_ab,
                counts.n_c,
                Some(n_w),
                measures::EXACT_NEUTRALITY_TOLERANCE,
            )
            .map_err(measure_ctx("M(C,AB)"))?;
            let bond_joint = measures::meaning_bond_joint(
                counts.n_a_b_c,
                counts.n_a_b,
                counts.n_c,
                Some(n_w),
                measures::EXACT_NEUTRALITY_TOLERANCE,
            )
            .map_err(measure_ctx("M(C;A,B)"))?;
            Some(bond_strict.value / bond_joint.value)
        }
        _ => None,
    };

    Ok(Dominance {
        direct,
        factor1,
        factor2,
        decomposed,
        relative_discrepancy,
        bond_ratio_check,
        dominant: direct >= config.dominance_threshold,
    })
}

/// Run the whole pipeline for one triad against any provider.
///
/// The consistency audit is carried alongside the results; inconsistent
/// recorded counts are findings, not failures. An absent phrase or a zero
/// denominator leaves the corresponding section undefined rather than
/// aborting the rest.
pub fn analyze_triad(
    provider: &(impl CountProvider + ?Sized),
    a: &str,
    b: &str,
    c: &str,
    phrase: &[String],
    config: &AnalysisConfig,
) -> Result<TriadAnalysis, AnalysisError> {
    let (counts, observations) = collect_triad(provider, a, b, c, phrase)?;
    let consistency = audit(&counts);

    let p_c_given_a = measures::conditional_probability(counts.n_a_c, counts.n_a)
        .map_err(measure_ctx("p(C|A) = n_{A,C}/n_A"))?
        .value();
    let p_c_given_b = measures::conditional_probability(counts.n_b_c, counts.n_b)
        .map_err(measure_ctx("p(C|B) = n_{B,C}/n_B"))?
        .value();

    let ee = match ee_overextension(&counts, config) {
        Ok(ee) => Some(ee),
        Err(AnalysisError::PhraseAbsent { .. }) | Err(AnalysisError::UndefinedRatio { .. }) => {
            None
        }
        Err(other) => return Err(other),
    };
    let oe = oe_sequential(&counts, config)?;
    let dominance = match dominance(&counts, config) {
        Ok(d) => Some(d),
        Err(AnalysisError::UndefinedRatio { .. }) => None,
        Err(other) => return Err(other),
    };

    let timestamps: Vec<DateTime<Utc>> =
        observations.iter().filter_map(|o| o.observed_at).collect();
    let provenance = Provenance {
        source: counts.source,
        origin: provider.describe(),
        observed_earliest: timestamps.iter().min().copied(),
        observed_latest: timestamps.iter().max().copied(),
    };

    Ok(TriadAnalysis {
        counts,
        consistency,
        p_c_given_a,
        p_c_given_b,
        ee,
        oe,
        dominance,
        provenance,
    })
}

impl TriadAnalysis {
    /// Stable JSON report (field order fixed by the struct definitions).
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("analysis serialization cannot fail")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::provider::TriadLabels;

    fn toy_counts() -> TriadCounts {
        TriadCounts {
            labels: TriadLabels {
                a: "a".into(),
                b: "b".into(),
                c: "c".into(),
                phrase: vec!["a".into(), "b".into()],
            },
            source: CountSource::LocalIndex,
            n_w: Some(10.0),
            n_a: 5.0,
            n_b: 4.0,
            n_c: 3.0,
            n_ab: 1.0,
            n_a_b: 2.0,
            n_a_c: 2.0,
            n_b_c: 2.0,
            n_ab_c: 1.0,
            n_a_b_c: 2.0,
            n_a_not_b: 3.0,
        }
    }

    #[test]
    fn ee_overextension_on_exact_counts() {
        let config = AnalysisConfig::default();
        let ee = ee_overextension(&toy_counts(), &config).unwrap();
        assert_eq!(ee.p_c_given_ab, 1.0);
        assert_eq!(ee.ratio_vs_a, 2.5);
        assert_eq!(ee.ratio_vs_b, 2.0);
        assert_eq!(ee.class, FallacyClass::Double);
    }

    #[test]
    fn oe_sequential_on_exact_counts() {
        let config = AnalysisConfig::default();
        let oe = oe_sequential(&toy_counts(), &config).unwrap();
        assert_eq!(oe.p_c_a_then_b, 0.4);
        assert_eq!(oe.p_c_b_then_a, 0.5);
        // p(C|A then B) = p(C|A) exactly: the boundary is not an
        // overextension under the exact-count margin.
        assert_eq!(oe.ratio_vs_a, 1.0);
        assert_eq!(oe.ratio_vs_b, 0.8);
        assert_eq!(oe.class, FallacyClass::None);
        assert_eq!(oe.necessary_ab, 0.8);
        assert_eq!(oe.necessary_ba, 1.25);
    }

    #[test]
    fn dominance_on_exact_counts() {
        let config = AnalysisConfig::default();
        let d = dominance(&toy_counts(), &config).unwrap();
        assert_eq!(d.direct, 2.5);
        assert_eq!(d.factor1, 1.0);
        assert_eq!(d.factor2, 2.5);
        assert_eq!(d.decomposed, 2.5);
        assert_eq!(d.relative_discrepancy, 0.0);
        assert_eq!(d.bond_ratio_check, Some(1.0));
        assert!(!d.dominant);
    }

    #[test]
    fn phrase_absent_is_undefined_not_zero() {
        let mut counts = toy_counts();
        counts.n_ab = 0.0;
        counts.n_ab_c = 0.0;
        let config = AnalysisConfig::default();
        assert!(matches!(
            ee_overextension(&counts, &config).unwrap_err(),
            AnalysisError::PhraseAbsent { .. }
        ));
    }

    #[test]
    fn dominance_names_the_zero_count() {
        let mut counts = toy_counts();
        counts.n_a_b_c = 0.0;
        let config = AnalysisConfig::default();
        assert!(matches!(
            dominance(&counts, &config).unwrap_err(),
            AnalysisError::UndefinedRatio {
                count_name: "n_{A,B,C}"
            }
        ));
    }

    #[test]
    fn external_margin_reads_ratios_directly() {
        let mut counts = toy_counts();
        counts.source = CountSource::RecordedExternal;
        // ratio_vs_a slightly above 1 through count noise.
        counts.n_a_b_c = 2.2;
        let config = AnalysisConfig::default();
        let oe = oe_sequential(&counts, &config).unwrap();
        assert!(oe.ratio_vs_a > 1.0);
        assert_eq!(oe.class, FallacyClass::SingleWrtA);
    }
}
