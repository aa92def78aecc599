//! Three-valued answers with checkable certificates.

use serde::Serialize;

/// Certificate attached to a [`Verdict`]. Points are given by name.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// An infinite walk `stem · cycle^ω`.
    Lasso { stem: Vec<String>, cycle: Vec<String> },
    /// Strongly connected components in walk order.
    Chain { components: Vec<Vec<String>> },
    /// A pair of test points for which the required iterate does not exist.
    Pair { u: String, v: String },
    /// Level index at which a level is a singleton, per target point.
    SingletonLevels { hits: Vec<(String, usize)> },
    /// An infinite walk `stem · cycle^ω` that never visits `avoided`.
    Avoiding { avoided: String, stem: Vec<String>, cycle: Vec<String> },
    /// A point with no infinite walk, and the depth at which its levels die.
    DeadEnd { point: String, depth: usize },
    /// Every point reachable from `from` and the set that was required.
    Reach { reached: Vec<String>, missing: Vec<String> },
    /// The finite search was exhaustive.
    Exhaustive { states: usize },
    /// Every base pair of the rational net with denominator `≤ net` is covered
    /// by an iterate of index at most `max_n`.
    NetCover { net: u64, pairs: usize, max_n: usize },
    /// Every walk visits at most one point outside `points`.
    BranchFinite { points: Vec<String> },
    /// `hub` is reached in `steps` steps, maps onto the whole space and is hit
    /// from every point, so a walk can return to it between arbitrary points.
    Fiber { hub: String, steps: usize },
    /// Cumulative levels first cover the space at index `n`.
    Levels { n: usize },
    /// Every point has a successor, so every walk extends forever.
    Total { domain: String },
    /// A smallest family of branch shapes whose union is dense.
    BranchCover { branches: Vec<Vec<String>> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Verdict {
    Proved { witness: Witness },
    Refuted { witness: Witness },
    Unknown { depth: usize },
}

impl Verdict {
    pub fn proved(w: Witness) -> Self {
        Verdict::Proved { witness: w }
    }

    pub fn refuted(w: Witness) -> Self {
        Verdict::Refuted { witness: w }
    }

    pub fn from_bool(b: bool, w: Witness) -> Self {
        if b {
            Verdict::proved(w)
        } else {
            Verdict::refuted(w)
        }
    }

    pub fn is_proved(&self) -> bool {
        matches!(self, Verdict::Proved { .. })
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted { .. })
    }

    /// `Some(true)` for proved, `Some(false)` for refuted.
    pub fn decided(&self) -> Option<bool> {
        match self {
            Verdict::Proved { .. } => Some(true),
            Verdict::Refuted { .. } => Some(false),
            Verdict::Unknown { .. } => None,
        }
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Proved { witness } | Verdict::Refuted { witness } => Some(witness),
            Verdict::Unknown { .. } => None,
        }
    }

    pub fn status(&self) -> &'static str {
        match self {
            Verdict::Proved { .. } => "proved",
            Verdict::Refuted { .. } => "refuted",
            Verdict::Unknown { .. } => "unknown",
        }
    }
}
