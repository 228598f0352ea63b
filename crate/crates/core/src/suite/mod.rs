//! Executable registry of the A-numerical radius inequalities, the random
//! instance generators behind it, equality scenarios, and campaign
//! aggregation.

mod campaign;
mod checks;
mod generate;
mod report;
mod sharpness;

use serde::{Deserialize, Serialize};

pub use campaign::{campaign, run_trial, trial_seed, CampaignConfig, RankRule};
pub use checks::{check_names, find_check, registry, run_check, CheckDef, CheckKind};
pub use generate::{generate, ClassReq, Instance, InstanceSpec, OpClass, MAX_DIM};
pub use report::{CheckSummary, Report, ReportMeta};
pub use sharpness::{
    involution_scenario, nilpotent_scenario, normal_scenario, ppp_scenario, selfadjoint_scenario, sharpness_scenarios,
    SHARPNESS_TOL,
};

/// Tolerance rule of the inequality checks.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlackPolicy {
    pub eps_abs: f64,
    pub eps_rel: f64,
}

impl Default for SlackPolicy {
    fn default() -> Self {
        SlackPolicy { eps_abs: 1e-9, eps_rel: 1e-7 }
    }
}

impl SlackPolicy {
    /// `ε_abs + ε_rel·max(1, |rhs|) + err`.
    pub fn slack(&self, rhs: f64, err: f64) -> f64 {
        self.eps_abs + self.eps_rel * rhs.abs().max(1.0) + err
    }
}

/// One evaluated statement. For inequalities `margin = rhs − lhs`; for
/// equalities and residuals `margin = −|lhs − rhs|`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    /// The part of a multi-part statement that came closest to failing.
    pub part: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub slack: f64,
    pub pass: bool,
    pub instance: Option<InstanceSpec>,
}

impl CheckResult {
    /// `margin + slack`; negative exactly when the result fails.
    pub fn headroom(&self) -> f64 {
        self.margin + self.slack
    }
}
