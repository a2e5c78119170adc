use serde::{Deserialize, Serialize};

/// Maximum number of elements produced by a generator closure.
pub const GROUP_SIZE_CAP: usize = 10_000;

/// Largest group order for which the full subgroup lattice is enumerated.
pub const SUBGROUP_ENUMERATION_CAP: usize = 200;

/// Numerical tolerances shared by the character arithmetic and the oracle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Exact-identity checks (trace formula against matrix trace, unitarity).
    pub identity: f64,
    /// Decomposition sums over irreducibles.
    pub decomposition: f64,
    /// Residual of a limit of traces at the last sequence term.
    pub limit: f64,
    /// Rounding residual accepted when snapping a multiplicity to an integer.
    pub rounding: f64,
    /// Orthogonality of character tables.
    pub orthogonality: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { identity: 1e-9, decomposition: 1e-8, limit: 1e-6, rounding: 1e-6, orthogonality: 1e-8 }
    }
}
