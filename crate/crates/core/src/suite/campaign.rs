//! Deterministic verification campaigns.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::radius::SweepConfig;

use super::checks::{find_check, registry, CheckDef};
use super::generate::{generate, InstanceSpec, MAX_DIM};
use super::report::{summarize, Report, ReportMeta};
use super::{CheckResult, SlackPolicy};

/// Rank of `A` as a function of the dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RankRule {
    Full,
    MinusOne,
    /// `⌈n/2⌉`.
    Half,
    Fixed(usize),
}

impl RankRule {
    /// `None` when the rule gives no valid rank for `n`.
    pub fn rank(self, n: usize) -> Option<usize> {
        let r = match self {
            RankRule::Full => n,
            RankRule::MinusOne => n.checked_sub(1)?,
            RankRule::Half => n.div_ceil(2),
            RankRule::Fixed(r) => r,
        };
        (1..=n).contains(&r).then_some(r)
    }
}

impl fmt::Display for RankRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RankRule::Full => f.write_str("full"),
            RankRule::MinusOne => f.write_str("n-1"),
            RankRule::Half => f.write_str("half"),
            RankRule::Fixed(r) => write!(f, "{r}"),
        }
    }
}

impl FromStr for RankRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "full" | "n" => Ok(RankRule::Full),
            "n-1" => Ok(RankRule::MinusOne),
            "half" | "ceil(n/2)" => Ok(RankRule::Half),
            other => other
                .parse::<usize>()
                .map(RankRule::Fixed)
                .map_err(|_| Error::InvalidArgument(format!("unknown rank rule `{other}` (full, n-1, half or an integer)"))),
        }
    }
}

impl Serialize for RankRule {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for RankRule {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub dims: Vec<usize>,
    pub ranks: Vec<RankRule>,
    pub trials_per_check: usize,
    pub seed: u64,
    /// `None` runs the whole registry.
    pub checks: Option<Vec<String>>,
    pub slack: SlackPolicy,
    pub sweep: SweepConfig,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig {
            dims: vec![2, 3, 4, 6, 8],
            ranks: vec![RankRule::Full, RankRule::MinusOne, RankRule::Half],
            trials_per_check: 200,
            seed: 20_240_601,
            checks: None,
            slack: SlackPolicy::default(),
            sweep: SweepConfig::default(),
        }
    }
}

impl CampaignConfig {
    /// Distinct `(dim, rank)` pairs in configuration order.
    pub fn combos(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for &n in &self.dims {
            for rule in &self.ranks {
                if let Some(r) = rule.rank(n) {
                    if !out.contains(&(n, r)) {
                        out.push((n, r));
                    }
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials_per_check == 0 {
            return Err(Error::InvalidArgument("trials per check must be at least 1".into()));
        }
        if let Some(&n) = self.dims.iter().find(|&&n| n == 0 || n > MAX_DIM) {
            return Err(Error::InvalidArgument(format!("dimension {n} outside 1..={MAX_DIM}")));
        }
        if self.combos().is_empty() {
            return Err(Error::InvalidArgument("no valid (dim, rank) combination".into()));
        }
        self.sweep.validate()?;
        self.selected().map(|_| ())
    }

    /// Registry entries selected by the filter, in registry order.
    pub fn selected(&self) -> Result<Vec<&'static CheckDef>> {
        match &self.checks {
            None => Ok(registry().iter().collect()),
            Some(names) => {
                for n in names {
                    find_check(n)?;
                }
                Ok(registry().iter().filter(|d| names.iter().any(|n| n == d.name)).collect())
            }
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

/// Seed of trial `trial` of check `name`.
pub fn trial_seed(name: &str, seed: u64, trial: usize) -> u64 {
    splitmix64(splitmix64(fnv1a(name) ^ seed) ^ trial as u64)
}

/// Generates and evaluates one trial. Errors are reported with the spec
/// that produced them.
pub fn run_trial(
    def: &CheckDef,
    cfg: &CampaignConfig,
    trial: usize,
) -> std::result::Result<CheckResult, (InstanceSpec, Error)> {
    let combos = cfg.combos();
    let (dim, rank) = combos[trial % combos.len()];
    let spec = InstanceSpec { seed: trial_seed(def.name, cfg.seed, trial), dim, rank, classes: (def.classes)(trial) };
    let inst = generate(&spec).map_err(|e| (spec.clone(), e))?;
    let mut res = def.run(&inst.space, &inst.ops, cfg.sweep, &cfg.slack).map_err(|e| (spec.clone(), e))?;
    res.instance = Some(spec);
    Ok(res)
}

/// Runs every selected check `trials_per_check` times. The report depends
/// only on the configuration, never on scheduling.
pub fn campaign(cfg: &CampaignConfig) -> Result<Report> {
    cfg.validate()?;
    let defs = cfg.selected()?;
    let tasks: Vec<(usize, usize)> =
        (0..defs.len()).flat_map(|d| (0..cfg.trials_per_check).map(move |t| (d, t))).collect();
    let outcomes: Vec<_> = tasks.par_iter().map(|&(d, t)| run_trial(defs[d], cfg, t)).collect();
    let checks = defs
        .iter()
        .zip(outcomes.chunks(cfg.trials_per_check.max(1)))
        .map(|(def, chunk)| summarize(def, chunk))
        .collect();
    Ok(Report { meta: ReportMeta::new(cfg), checks }.with_totals())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_rules() {
        assert_eq!(RankRule::Half.rank(3), Some(2));
        assert_eq!(RankRule::MinusOne.rank(1), None);
        assert_eq!(RankRule::Fixed(5).rank(4), None);
        for s in ["full", "n-1", "half", "3"] {
            assert_eq!(s.parse::<RankRule>().unwrap().to_string(), s);
        }
        assert!("most".parse::<RankRule>().is_err());
    }

    #[test]
    fn default_combos() {
        let c = CampaignConfig::default().combos();
        assert_eq!(c.len(), 13);
        assert_eq!(&c[..3], &[(2, 2), (2, 1), (3, 3)]);
    }

    #[test]
    fn seeds_differ_across_checks_and_trials() {
        let a = trial_seed("refine1", 1, 0);
        assert_ne!(a, trial_seed("refine1", 1, 1));
        assert_ne!(a, trial_seed("apower", 1, 0));
        assert_ne!(a, trial_seed("refine1", 2, 0));
        assert_eq!(a, trial_seed("refine1", 1, 0));
    }

    #[test]
    fn empty_filter_gives_empty_report() {
        let cfg = CampaignConfig { checks: Some(vec![]), ..Default::default() };
        let r = campaign(&cfg).unwrap();
        assert!(r.checks.is_empty());
        assert!(r.success());
    }

    #[test]
    fn config_errors() {
        let bad = CampaignConfig { checks: Some(vec!["nonexistent".into()]), ..Default::default() };
        assert!(matches!(campaign(&bad), Err(Error::UnknownCheck(_))));
        let bad = CampaignConfig { trials_per_check: 0, ..Default::default() };
        assert!(matches!(campaign(&bad), Err(Error::InvalidArgument(_))));
        let bad = CampaignConfig { dims: vec![40], ..Default::default() };
        assert!(campaign(&bad).is_err());
    }
}
