use serde::{Deserialize, Serialize};

/// Resource bounds for the exponential parts of the library. Exceeding one
/// yields [`crate::Error::Resource`], never a silent wrong answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    /// Largest host for conformal bisubdivision and cross searches.
    pub search_bound: usize,
    /// Largest host for the general matching-minor search.
    pub general_minor_bound: usize,
    /// Largest boundary matching size the decomposition DP will tabulate.
    pub width_cap: usize,
    /// Largest graph the enumeration oracle accepts.
    pub oracle_bound: usize,
    /// Largest matrix dimension for Ryser's formula.
    pub ryser_bound: usize,
    /// Largest graph for the exact width search.
    pub exact_pmw_bound: usize,
    /// Backtracking steps allowed per minor search before giving up.
    pub search_steps: u64,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            search_bound: 40,
            general_minor_bound: 20,
            width_cap: 8,
            oracle_bound: 28,
            ryser_bound: 24,
            exact_pmw_bound: 10,
            search_steps: 50_000_000,
        }
    }
}
