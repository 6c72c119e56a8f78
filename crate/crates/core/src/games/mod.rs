//! Analytical equilibrium engine for the four game variants under the three
//! reward models: payoff matrices, equilibrium classification, and
//! utility / wrong-acceptance evaluation.

mod groups;
mod matrix;
mod rows;

pub use groups::{
    analyze_0n, differential_report, differentials_0n, feasibility_1n, min_pv_0n,
    utility_differential_0n, DifferentialReport, Feasibility1n, GroupDifferentials, HonestOutcome,
    PvBound,
};
pub use matrix::{payoff_matrix_1v1, solve_1v1, PayoffMatrix1v1};
pub use rows::{
    analyze_1v1n, classify_1v1n, expected_master_utility_1v1n, master_payoff_by_counts,
    EquilibriumRow, ProbValue, RowKind,
};
