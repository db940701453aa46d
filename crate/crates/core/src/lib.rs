//! Mix-split dilution planning for digital microfluidic biochips.
//!
//! Concentration factors are exact dyadic rationals ([`cf::ConcFactor`]).
//! Planners turn a [`model::TargetSeries`] into a [`model::Plan`] of 1:1
//! mix-split steps; [`exec::execute`] replays any plan and derives its
//! statistics, so every number reported anywhere comes from the executor.
//!
//! - [`emdp`]: storage-aware multi-target planner
//! - [`baseline`]: bit-serial single target and naive per-target concatenation
//! - [`oracle`]: exact minimum-cost search for small instances
//! - [`series`]: gradient generators
//! - [`report`]: plan documents, comparison tables and DOT export

pub mod baseline;
pub mod cf;
pub mod cli;
pub mod emdp;
pub mod exec;
pub mod fixtures;
pub mod inventory;
pub mod model;
pub mod oracle;
pub mod report;
pub mod series;

pub use cf::{CfError, ConcFactor, MAX_PRECISION};
pub use emdp::{AnchorSet, EmdpConfig, PlanError, SdtStop, TargetOrder};
pub use exec::{check_conservation, execute, ExecutionTrace, Violation};
pub use model::{Disposition, Droplet, DropletSource, Plan, PlanStats, PlanStep, TargetSeries};
pub use oracle::{min_cost_plan, Objective, OracleOutcome, SearchCaps};
