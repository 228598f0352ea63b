//! Campaign reports: JSON for machines, a markdown table for people.

use std::fmt::Write as _;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::Error;
use crate::radius::SweepConfig;

use super::campaign::{CampaignConfig, RankRule};
use super::checks::{CheckDef, CheckKind};
use super::generate::InstanceSpec;
use super::{CheckResult, SlackPolicy};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportMeta {
    pub tool: String,
    pub version: String,
    pub seed: u64,
    pub dims: Vec<usize>,
    pub ranks: Vec<RankRule>,
    pub combos: Vec<(usize, usize)>,
    pub trials_per_check: usize,
    pub checks: Vec<String>,
    pub slack: SlackPolicy,
    pub sweep: SweepConfig,
    /// SHA-256 of the canonical configuration JSON.
    pub config_digest: String,
    pub total_trials: usize,
    pub total_failures: usize,
}

impl ReportMeta {
    pub(crate) fn new(cfg: &CampaignConfig) -> Self {
        let canonical = serde_json::to_string(cfg).expect("config serializes");
        let config_digest = hex::encode(Sha256::digest(canonical.as_bytes()));
        let checks = cfg.selected().map(|v| v.iter().map(|d| d.name.to_string()).collect()).unwrap_or_default();
        ReportMeta {
            tool: "semihilbert".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            seed: cfg.seed,
            dims: cfg.dims.clone(),
            ranks: cfg.ranks.clone(),
            combos: cfg.combos(),
            trials_per_check: cfg.trials_per_check,
            checks,
            slack: cfg.slack,
            sweep: cfg.sweep,
            config_digest,
            total_trials: 0,
            total_failures: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckSummary {
    pub name: String,
    pub kind: CheckKind,
    pub statement: String,
    pub trials: usize,
    /// Failed trials, errors included.
    pub failures: usize,
    /// Trials that could not be evaluated.
    pub errors: usize,
    pub min_margin: Option<f64>,
    pub mean_margin: Option<f64>,
    /// Part of the trial closest to failing.
    pub worst_part: Option<String>,
    pub worst_instance: Option<InstanceSpec>,
    pub first_error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub meta: ReportMeta,
    pub checks: Vec<CheckSummary>,
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

pub(crate) fn summarize(def: &CheckDef, outcomes: &[std::result::Result<CheckResult, (InstanceSpec, Error)>]) -> CheckSummary {
    let mut s = CheckSummary {
        name: def.name.to_string(),
        kind: def.kind,
        statement: def.statement.to_string(),
        trials: outcomes.len(),
        failures: 0,
        errors: 0,
        min_margin: None,
        mean_margin: None,
        worst_part: None,
        worst_instance: None,
        first_error: None,
    };
    let (mut sum, mut count) = (0.0, 0usize);
    let mut min_margin = f64::INFINITY;
    let mut worst: Option<&CheckResult> = None;
    let mut error_spec: Option<&InstanceSpec> = None;
    for o in outcomes {
        match o {
            Ok(r) => {
                if !r.pass {
                    s.failures += 1;
                }
                if r.margin.is_finite() {
                    sum += r.margin;
                    count += 1;
                    min_margin = min_margin.min(r.margin);
                }
                if worst.is_none_or(|w| !(r.headroom() >= w.headroom())) {
                    worst = Some(r);
                }
            }
            Err((spec, e)) => {
                s.failures += 1;
                s.errors += 1;
                if s.first_error.is_none() {
                    s.first_error = Some(e.to_string());
                    error_spec = Some(spec);
                }
            }
        }
    }
    if count > 0 {
        s.min_margin = finite(min_margin);
        s.mean_margin = finite(sum / count as f64);
    }
    if let Some(spec) = error_spec {
        s.worst_part = Some("error".into());
        s.worst_instance = Some(spec.clone());
    } else if let Some(w) = worst {
        s.worst_part = Some(w.part.clone());
        s.worst_instance = w.instance.clone();
    }
    s
}

impl Report {
    pub(crate) fn with_totals(mut self) -> Self {
        self.meta.total_trials = self.checks.iter().map(|c| c.trials).sum();
        self.meta.total_failures = self.checks.iter().map(|c| c.failures).sum();
        self
    }

    pub fn success(&self) -> bool {
        self.checks.iter().all(|c| c.failures == 0)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_markdown(&self) -> String {
        let m = &self.meta;
        let mut out = String::new();
        let _ = writeln!(out, "# Verification report\n");
        let _ = writeln!(
            out,
            "seed {} · dims {:?} · ranks {} · {} trials per check · digest `{}`\n",
            m.seed,
            m.dims,
            m.ranks.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(","),
            m.trials_per_check,
            &m.config_digest[..16.min(m.config_digest.len())]
        );
        let _ = writeln!(out, "| check | kind | trials | failures | min margin | mean margin | worst part |");
        let _ = writeln!(out, "|---|---|---:|---:|---:|---:|---|");
        let fmt = |x: Option<f64>| x.map(|v| format!("{v:.3e}")).unwrap_or_else(|| "n/a".into());
        for c in &self.checks {
            let kind = match c.kind {
                CheckKind::Inequality => "inequality",
                CheckKind::Equality => "equality",
                CheckKind::Structural => "structural",
            };
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} | {} | {} | {} |",
                c.name,
                kind,
                c.trials,
                c.failures,
                fmt(c.min_margin),
                fmt(c.mean_margin),
                c.worst_part.as_deref().unwrap_or("")
            );
        }
        let status = if self.success() { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "\n**{status}**: {} failures in {} trials.", m.total_failures, m.total_trials);
        for c in self.checks.iter().filter(|c| c.first_error.is_some()) {
            let _ = writeln!(out, "\n- `{}`: {}", c.name, c.first_error.as_deref().unwrap_or(""));
        }
        out
    }
}
