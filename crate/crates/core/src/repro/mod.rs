//! Reproduction harness: builtin scenarios, curve evaluation and the
//! acceptance suite.

pub mod acceptance;
pub mod run;
pub mod scenario;

pub use acceptance::{all_pass, check_all, CriterionResult};
pub use run::{evaluate, run_scenario, write_csv, write_json, CurvePoint};
pub use scenario::{
    builtin, catalog, BoundId, OperatorSpec, Scenario, StateFamily, ThetaGrid, BUILTIN_NAMES,
};
