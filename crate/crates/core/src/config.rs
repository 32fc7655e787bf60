//! Run configuration: size caps, search budgets, seed, output format.
//! Budgets live here, never in the algorithms.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Text,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunConfig {
    /// Cap on |Up(P)| when materializing upset algebras.
    pub upset_cap: usize,
    /// Cap on exhaustive poset/co-tree enumeration size.
    pub enum_cap: usize,
    /// Cap on the validity-sweep valuation count.
    pub valuation_budget: u64,
    /// Cap on backtracking-search nodes.
    pub node_budget: u64,
    /// Cap on |A| for the brute-force generator-rank search.
    pub gen_rank_cap: usize,
    /// Cap on |P| for full partition enumeration.
    pub bell_cap: usize,
    /// Seed for everything randomized; a fixed seed fixes the whole run.
    pub seed: u64,
    pub format: OutputFormat,
    /// Include wall-clock timings in reports (off keeps output byte-stable).
    pub timings: bool,
    /// Override for the source-dual size of the Jankov/subframe grids.
    pub max_source: Option<usize>,
    /// Override for the target-dual size of the Jankov/subframe grids.
    pub max_target: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            upset_cap: 1024,
            enum_cap: 10,
            valuation_budget: 20_000_000,
            node_budget: 50_000_000,
            gen_rank_cap: 12,
            bell_cap: 8,
            seed: 0,
            format: OutputFormat::Text,
            timings: false,
            max_source: None,
            max_target: None,
        }
    }
}
