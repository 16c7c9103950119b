//! Robustness-based ranking of decision making units.
//!
//! A DMU's rank is `r = 1 + delta_star`, where `delta_star` measures how far
//! all data may move (relatively, simultaneously and independently) before
//! the DMU's efficiency status changes: positive for efficient units,
//! negative for inefficient ones. The crate computes it through a linear
//! program ([`ModelKind::CcrRobustLp`], [`ModelKind::BccRobustLp`]) or exactly
//! by bisection ([`ModelKind::CcrRobustExact`], [`ModelKind::BccRobustExact`]),
//! next to the classical CCR and BCC scores.

pub mod cli;
pub mod error;
pub mod exec;
pub mod fixtures;
pub mod fractional;
pub mod io;
pub mod lp;
pub mod models;
pub mod perturbation;
pub mod properties;
pub mod ranking;

pub use error::{DeaError, Result};
pub use exec::Execution;
pub use fractional::{solve_exact_delta, verify_monotone, BisectionConfig};
pub use models::{Dataset, DmuRecord, ModelKind, PerturbationMask};
pub use perturbation::{
    empirical_radius, retention_test, sample_neighborhood, LabConfig, RetentionReport, SamplingScheme,
};
pub use ranking::{
    rank_all, rank_interval, rank_one, sorted_order, EfficiencyRange, IntervalDataset, RankConfig, RankingResult,
};
