//! Experiment configuration and command runners.

mod commands;
mod config;

pub use commands::{
    cmd_fixed_point, cmd_iterate, cmd_multipliers, cmd_psi, cmd_verify_all, exit_code, nonincreasing_from, Check,
    Outcome, MONOTONE_RELATIVE_SLACK, NOISE_FLOOR,
};
pub use config::{parse_grid, BodySpec, ExperimentConfig, IterateSection, KernelSpec, MultipliersSection, Overrides, SweepSection, CONFIG_FORMAT};
