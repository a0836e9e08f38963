//! Shared classification of conjunction-fallacy / overextension outcomes.

use serde::{Deserialize, Serialize};
use std::fmt;

/// Outcome of comparing a conjunction's estimate against its two conjuncts.
///
/// "Wrt A" means the combined concept received a higher estimate than the
/// component `A` alone; `Double` means it exceeded both components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FallacyClass {
    None,
    SingleWrtA,
    SingleWrtB,
    Double,
}

impl FallacyClass {
    pub fn from_flags(wrt_a: bool, wrt_b: bool) -> Self {
        match (wrt_a, wrt_b) {
            (true, true) => FallacyClass::Double,
            (true, false) => FallacyClass::SingleWrtA,
            (false, true) => FallacyClass::SingleWrtB,
            (false, false) => FallacyClass::None,
        }
    }

    pub fn is_double(self) -> bool {
        self == FallacyClass::Double
    }
}

impl fmt::Display for FallacyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FallacyClass::None => "none",
            FallacyClass::SingleWrtA => "single (wrt A)",
            FallacyClass::SingleWrtB => "single (wrt B)",
            FallacyClass::Double => "double",
        };
        f.write_str(s)
    }
}
