//! Consistency auditing for triad counts.
//!
//! Exact local counting satisfies every invariant by construction; counts
//! recorded from external engines often do not (search depth varies with query
//! complexity), so violations are findings to carry alongside an analysis,
//! never reasons to abort it.

use super::TriadCounts;
use serde::{Deserialize, Serialize};

/// Relative tolerance for the additive partition check; exact integer counts
/// satisfy it with zero error, rounded magnitudes legitimately may not.
const PARTITION_REL_TOL: f64 = 1e-9;

/// One audited invariant: `lhs <op> rhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyCheck {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
}

/// The outcome of auditing one `TriadCounts`, covering every invariant once.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub checks: Vec<ConsistencyCheck>,
}

impl ConsistencyReport {
    pub fn all_satisfied(&self) -> bool {
        self.checks.iter().all(|c| c.satisfied)
    }

    pub fn violations(&self) -> impl Iterator<Item = &ConsistencyCheck> {
        self.checks.iter().filter(|c| !c.satisfied)
    }
}

/// Check every triad-count invariant, mutating nothing.
pub fn audit(counts: &TriadCounts) -> ConsistencyReport {
    let mut checks = Vec::with_capacity(14);

    let mut le = |name: &str, lhs: f64, rhs: f64| {
        checks.push(ConsistencyCheck {
            name: name.to_string(),
            lhs,
            rhs,
            satisfied: lhs <= rhs,
        });
    };

    // Triple co-occurrence is bounded by every pair.
    le("n_{A,B,C} <= n_{A,B}", counts.n_a_b_c, counts.n_a_b);
    le("n_{A,B,C} <= n_{A,C}", counts.n_a_b_c, counts.n_a_c);
    le("n_{A,B,C} <= n_{B,C}", counts.n_a_b_c, counts.n_b_c);
    // Pairs are bounded by their singletons.
    le("n_{A,B} <= n_A", counts.n_a_b, counts.n_a);
    le("n_{A,B} <= n_B", counts.n_a_b, counts.n_b);
    le("n_{A,C} <= n_A", counts.n_a_c, counts.n_a);
    le("n_{A,C} <= n_C", counts.n_a_c, counts.n_c);
    le("n_{B,C} <= n_B", counts.n_b_c, counts.n_b);
    le("n_{B,C} <= n_C", counts.n_b_c, counts.n_c);
    // A page containing the strict combination AB also contains A and B.
    le("n_AB <= n_{A,B}", counts.n_ab, counts.n_a_b);
    le("n_{AB,C} <= n_AB", counts.n_ab_c, counts.n_ab);
    le("n_{AB,C} <= n_{A,B,C}", counts.n_ab_c, counts.n_a_b_c);

    // Additive partition of A by presence of B.
    let partition_rhs = counts.n_a_b + counts.n_a_not_b;
    checks.push(ConsistencyCheck {
        name: "n_A = n_{A,B} + n_{A,notB}".to_string(),
        lhs: counts.n_a,
        rhs: partition_rhs,
        satisfied: (counts.n_a - partition_rhs).abs()
            <= PARTITION_REL_TOL * counts.n_a.abs().max(1.0),
    });

    // Everything is bounded by the collection size, when known.
    if let Some(n_w) = counts.n_w {
        let max_count = [
            counts.n_a,
            counts.n_b,
            counts.n_c,
            counts.n_ab,
            counts.n_a_b,
            counts.n_a_c,
            counts.n_b_c,
            counts.n_ab_c,
            counts.n_a_b_c,
            counts.n_a_not_b,
        ]
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max);
        checks.push(ConsistencyCheck {
            name: "max count <= n_W".to_string(),
            lhs: max_count,
            rhs: n_w,
            satisfied: max_count <= n_w,
        });
    }

    ConsistencyReport { checks }
}
