//! Probabilities and meaning bonds computed exactly from counts.
//!
//! Counts are nonnegative `f64` so that rounded magnitudes recorded from
//! external sources (e.g. `7.14e8`) flow through unchanged; locally counted
//! integers are exact in `f64`. Inconsistent counts are rejected, never
//! clamped.

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Neutrality band for bond classification on exact local counts.
pub const EXACT_NEUTRALITY_TOLERANCE: f64 = 1e-9;
/// Neutrality band for counts recorded to ~3 significant figures.
pub const ROUNDED_NEUTRALITY_TOLERANCE: f64 = 0.05;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeasureError {
    #[error("probability undefined: {denominator_name} is zero")]
    UndefinedProbability { denominator_name: &'static str },
    #[error("inconsistent counts: numerator {numerator} exceeds denominator {denominator}")]
    InconsistentCounts { numerator: f64, denominator: f64 },
    #[error("meaning bond undefined: {count_name} is zero")]
    UndefinedBond { count_name: &'static str },
    #[error("total document count (n_W) unavailable for this source")]
    NWUnavailable,
    #[error("invalid count {name} = {value} (must be finite and nonnegative)")]
    InvalidCount { name: &'static str, value: f64 },
    #[error("value {0} is not a probability in [0, 1]")]
    OutOfRange(f64),
}

/// A real number constrained to `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Probability(f64);

impl Probability {
    pub fn new(value: f64) -> Result<Self, MeasureError> {
        if value.is_finite() && (0.0..=1.0).contains(&value) {
            Ok(Probability(value))
        } else {
            Err(MeasureError::OutOfRange(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Correlation regime of a meaning bond.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BondClass {
    Attractive,
    Repulsive,
    Neutral,
}

impl fmt::Display for BondClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BondClass::Attractive => "attractive",
            BondClass::Repulsive => "repulsive",
            BondClass::Neutral => "neutral",
        };
        f.write_str(s)
    }
}

/// A meaning bond value with its classification.
///
/// `value > 1` means the two terms co-occur more often than independence would
/// predict (attractive), `value < 1` less often (repulsive); values within the
/// neutrality tolerance of 1 are classified neutral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeaningBond {
    pub value: f64,
    pub class: BondClass,
}

impl MeaningBond {
    pub fn from_value(value: f64, neutrality_tolerance: f64) -> Self {
        let class = if (value - 1.0).abs() <= neutrality_tolerance {
            BondClass::Neutral
        } else if value > 1.0 {
            BondClass::Attractive
        } else {
            BondClass::Repulsive
        };
        MeaningBond { value, class }
    }
}

fn check_count(name: &'static str, value: f64) -> Result<f64, MeasureError> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(MeasureError::InvalidCount { name, value })
    }
}

/// Probability of landing on a document containing a term: `n_X / n_W`.
pub fn landing_probability(n_x: f64, n_w: f64) -> Result<Probability, MeasureError> {
    let n_x = check_count("n_X", n_x)?;
    let n_w = check_count("n_W", n_w)?;
    if n_w == 0.0 {
        return Err(MeasureError::UndefinedProbability {
            denominator_name: "n_W",
        });
    }
    if n_x > n_w {
        return Err(MeasureError::InconsistentCounts {
            numerator: n_x,
            denominator: n_w,
        });
    }
    Probability::new(n_x / n_w)
}

/// Conditional probability `p(X|Y) = n_{X,Y} / n_Y`.
pub fn conditional_probability(n_xy: f64, n_y: f64) -> Result<Probability, MeasureError> {
    let n_xy = check_count("n_XY", n_xy)?;
    let n_y = check_count("n_Y", n_y)?;
    if n_y == 0.0 {
        return Err(MeasureError::UndefinedProbability {
            denominator_name: "n_Y",
        });
    }
    if n_xy > n_y {
        return Err(MeasureError::InconsistentCounts {
            numerator: n_xy,
            denominator: n_y,
        });
    }
    Probability::new(n_xy / n_y)
}

/// Meaning bond between two terms: `M(A,B) = n_{A,B} n_W / (n_A n_B)`.
///
/// Equivalently `p(A|B)/p(A)` and `p(B|A)/p(B)` — the relative boost a term
/// receives from conditioning on the other. `n_w` is `None` when the count
/// source cannot report a total document count; the bond is then undefined.
pub fn meaning_bond(
    n_ab: f64,
    n_a: f64,
    n_b: f64,
    n_w: Option<f64>,
    neutrality_tolerance: f64,
) -> Result<MeaningBond, MeasureError> {
    let n_ab = check_count("n_{A,B}", n_ab)?;
    let n_a = check_count("n_A", n_a)?;
    let n_b = check_count("n_B", n_b)?;
    let n_w = check_count("n_W", n_w.ok_or(MeasureError::NWUnavailable)?)?;
    if n_a == 0.0 {
        return Err(MeasureError::UndefinedBond { count_name: "n_A" });
    }
    if n_b == 0.0 {
        return Err(MeasureError::UndefinedBond { count_name: "n_B" });
    }
    if n_w == 0.0 {
        return Err(MeasureError::UndefinedBond { count_name: "n_W" });
    }
    Ok(MeaningBond::from_value(
        n_ab * n_w / (n_a * n_b),
        neutrality_tolerance,
    ))
}

/// Meaning bond between a term `C` and the joint presence of `A` and `B`
/// (co-occurrence anywhere in the document, not necessarily as the strict
/// combination): `M(C; A,B) = n_{A,B,C} n_W / (n_{A,B} n_C)`.
pub fn meaning_bond_joint(
    n_abc: f64,
    n_a_b: f64,
    n_c: f64,
    n_w: Option<f64>,
    neutrality_tolerance: f64,
) -> Result<MeaningBond, MeasureError> {
    let n_abc = check_count("n_{A,B,C}", n_abc)?;
    let n_a_b = check_count("n_{A,B}", n_a_b)?;
    let n_c = check_count("n_C", n_c)?;
    let n_w = check_count("n_W", n_w.ok_or(MeasureError::NWUnavailable)?)?;
    if n_a_b == 0.0 {
        return Err(MeasureError::UndefinedBond {
            count_name: "n_{A,B}",
        });
    }
    if n_c == 0.0 {
        return Err(MeasureError::UndefinedBond { count_name: "n_C" });
    }
    if n_w == 0.0 {
        return Err(MeasureError::UndefinedBond { count_name: "n_W" });
    }
    Ok(MeaningBond::from_value(
        n_abc * n_w / (n_a_b * n_c),
        neutrality_tolerance,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel_close(actual: f64, expected: f64, tol: f64) -> bool {
        (actual - expected).abs() <= tol * expected.abs().max(1e-300)
    }

    #[test]
    fn landing_examples() {
        assert_eq!(landing_probability(5.0, 10.0).unwrap().value(), 0.5);
        assert_eq!(landing_probability(0.0, 10.0).unwrap().value(), 0.0);
        assert_eq!(landing_probability(10.0, 10.0).unwrap().value(), 1.0);
    }

    #[test]
    fn landing_errors() {
        assert_eq!(
            landing_probability(1.0, 0.0).unwrap_err(),
            MeasureError::UndefinedProbability {
                denominator_name: "n_W"
            }
        );
        assert!(matches!(
            landing_probability(11.0, 10.0).unwrap_err(),
            MeasureError::InconsistentCounts { .. }
        ));
        assert!(matches!(
            landing_probability(-1.0, 10.0).unwrap_err(),
            MeasureError::InvalidCount { .. }
        ));
    }

    #[test]
    fn conditional_reproduces_recorded_magnitudes() {
        // Guppy given the strict Pet-Fish combination, and given Pet alone.
        let given_pf = conditional_probability(1.37e5, 6.17e5).unwrap().value();
        assert!(rel_close(given_pf, 2.22e-1, 1e-2));
        let given_p = conditional_probability(6.12e5, 7.14e8).unwrap().value();
        assert!(rel_close(given_p, 8.57e-4, 1e-2));
    }

    #[test]
    fn conditional_subset_equals_superset() {
        for k in [1.0, 3.0, 1e9] {
            assert_eq!(conditional_probability(k, k).unwrap().value(), 1.0);
        }
    }

    #[test]
    fn conditional_rejects_rather_than_clamps() {
        assert!(matches!(
            conditional_probability(3.0, 2.0).unwrap_err(),
            MeasureError::InconsistentCounts { .. }
        ));
        assert!(matches!(
            conditional_probability(1.0, 0.0).unwrap_err(),
            MeasureError::UndefinedProbability { .. }
        ));
    }

    #[test]
    fn bond_neutral_attractive_repulsive() {
        let neutral = meaning_bond(2.0, 5.0, 4.0, Some(10.0), EXACT_NEUTRALITY_TOLERANCE).unwrap();
        assert_eq!(neutral.value, 1.0);
        assert_eq!(neutral.class, BondClass::Neutral);

        let attractive =
            meaning_bond(2.0, 5.0, 3.0, Some(10.0), EXACT_NEUTRALITY_TOLERANCE).unwrap();
        assert_eq!(attractive.value, 4.0 / 3.0);
        assert_eq!(attractive.class, BondClass::Attractive);

        let repulsive =
            meaning_bond(0.0, 5.0, 3.0, Some(10.0), EXACT_NEUTRALITY_TOLERANCE).unwrap();
        assert_eq!(repulsive.value, 0.0);
        assert_eq!(repulsive.class, BondClass::Repulsive);
    }

    #[test]
    fn bond_requires_n_w() {
        assert_eq!(
            meaning_bond(1.0, 2.0, 2.0, None, EXACT_NEUTRALITY_TOLERANCE).unwrap_err(),
            MeasureError::NWUnavailable
        );
    }

    #[test]
    fn bond_undefined_on_zero_marginals() {
        assert!(matches!(
            meaning_bond(0.0, 0.0, 3.0, Some(10.0), 1e-9).unwrap_err(),
            MeasureError::UndefinedBond { count_name: "n_A" }
        ));
    }

    #[test]
    fn joint_bond_examples() {
        let b = meaning_bond_joint(2.0, 2.0, 3.0, Some(10.0), EXACT_NEUTRALITY_TOLERANCE).unwrap();
        assert_eq!(b.value, 10.0 / 3.0);
        assert_eq!(b.class, BondClass::Attractive);

        let zero =
            meaning_bond_joint(0.0, 2.0, 3.0, Some(10.0), EXACT_NEUTRALITY_TOLERANCE).unwrap();
        assert_eq!(zero.value, 0.0);
        assert_eq!(zero.class, BondClass::Repulsive);

        // n_ABC = n_{A,B} and n_C = n_W force the bond to 1.
        let one =
            meaning_bond_joint(7.0, 7.0, 10.0, Some(10.0), EXACT_NEUTRALITY_TOLERANCE).unwrap();
        assert_eq!(one.value, 1.0);
        assert_eq!(one.class, BondClass::Neutral);
    }

    #[test]
    fn bond_symmetry_is_exact() {
        let ab = meaning_bond(3.0, 7.0, 11.0, Some(40.0), 1e-9).unwrap();
        let ba = meaning_bond(3.0, 11.0, 7.0, Some(40.0), 1e-9).unwrap();
        assert_eq!(ab.value, ba.value);
    }

    #[test]
    fn rounded_tolerance_widens_neutral_band() {
        let b = meaning_bond(1.03, 1.0, 1.0, Some(1.0), ROUNDED_NEUTRALITY_TOLERANCE).unwrap();
        assert_eq!(b.class, BondClass::Neutral);
        let b = meaning_bond(1.03, 1.0, 1.0, Some(1.0), EXACT_NEUTRALITY_TOLERANCE).unwrap();
        assert_eq!(b.class, BondClass::Attractive);
    }
}
