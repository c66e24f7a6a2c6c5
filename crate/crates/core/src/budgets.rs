use serde::Serialize;

use crate::hull::HullBudget;

/// Limits on every exponential search. Exceeding one yields UNKNOWN, never a guess.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Budgets {
    /// Maximum vertex count for exact independent set search.
    pub independent_set: usize,
    /// Maximum vertex count for toughness subset enumeration.
    pub subsets: usize,
    /// Maximum vertex count for Hamiltonian backtracking.
    pub hamiltonian: usize,
    /// Maximum search nodes for Hamiltonian backtracking.
    pub hamiltonian_steps: u64,
    /// Maximum number of simple cycles enumerated for the angle system.
    pub cycles: usize,
    /// Maximum search nodes for one run of the light-circuit oracle.
    pub separation_nodes: u64,
    /// Maximum vertices in a face for active-set minimisation.
    pub active_set: usize,
    #[serde(skip)]
    pub hull: HullBudget,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            independent_set: 40,
            subsets: 22,
            hamiltonian: 30,
            hamiltonian_steps: 20_000_000,
            cycles: 1_000_000,
            separation_nodes: 20_000_000,
            active_set: 12,
            hull: HullBudget::default(),
        }
    }
}
