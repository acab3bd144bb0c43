//! Seeded Monte Carlo trials on uniform random instances.

use std::fmt;
use std::fs;
use std::path::Path;

use maximin_core::{
    mms_exact, modified_greedy_round_robin, round_robin, verify_allocation, Allocation, Error,
    Instance, Ratio, DEFAULT_EXACT_CAP,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const DEFAULT_SCALE: u64 = 1_000_000;
pub const MIN_SCALE: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum TrialAlgorithm {
    Rr,
    RrModified,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Predicate {
    /// Each agent gets at least `v_i(M) / n`.
    Proportional,
    /// Each agent gets at least her exact maximin share.
    Mms,
}

impl fmt::Display for TrialAlgorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TrialAlgorithm::Rr => "rr",
            TrialAlgorithm::RrModified => "rr-modified",
        })
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Predicate::Proportional => "proportional",
            Predicate::Mms => "mms",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialConfig {
    pub n: usize,
    pub m: usize,
    pub trials: usize,
    pub seed: u64,
    pub scale: u64,
    pub algorithm: TrialAlgorithm,
    pub predicate: Predicate,
}

impl TrialConfig {
    pub fn new(n: usize, m: usize, trials: usize, seed: u64) -> Self {
        TrialConfig {
            n,
            m,
            trials,
            seed,
            scale: DEFAULT_SCALE,
            algorithm: TrialAlgorithm::Rr,
            predicate: Predicate::Proportional,
        }
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.n == 0 {
            return Err(Error::Input("n must be at least 1".into()));
        }
        if self.trials == 0 {
            return Err(Error::Input("trial count must be at least 1".into()));
        }
        if self.scale < MIN_SCALE {
            return Err(Error::Input(format!(
                "scale {} is below the minimum grid of {MIN_SCALE}",
                self.scale
            )));
        }
        if self.predicate == Predicate::Mms && self.m > DEFAULT_EXACT_CAP {
            return Err(Error::TooManyGoods {
                goods: self.m,
                cap: DEFAULT_EXACT_CAP,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialStats {
    pub config: TrialConfig,
    pub successes: usize,
    pub failures: usize,
    /// Smallest `v_i(S_i) / (v_i(M) / n)` over all agents and trials.
    pub min_ratio: f64,
    /// Median over trials of the per-trial smallest ratio.
    pub median_ratio: f64,
}

impl TrialStats {
    pub fn rate(&self) -> f64 {
        self.successes as f64 / self.config.trials as f64
    }
}

/// Values drawn independently and uniformly from `{0, ..., scale}`, row by row.
pub fn gen_uniform_instance(n: usize, m: usize, seed: u64, scale: u64) -> Result<Instance, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = (0..n)
        .map(|_| (0..m).map(|_| rng.gen_range(0..=scale)).collect())
        .collect();
    Instance::new(rows, scale)
}

struct Trial {
    success: bool,
    min_ratio: f64,
}

fn allocate(config: &TrialConfig, instance: &Instance, seed: u64) -> Allocation {
    match config.algorithm {
        TrialAlgorithm::Rr => round_robin(instance),
        TrialAlgorithm::RrModified => modified_greedy_round_robin(instance, seed),
    }
}

fn run_trial(config: &TrialConfig, t: usize) -> Result<Trial, Error> {
    let seed = config.seed ^ t as u64;
    let instance = gen_uniform_instance(config.n, config.m, seed, config.scale)?;
    let allocation = allocate(config, &instance, seed);
    let n = config.n as u128;
    let thresholds = (0..config.n)
        .map(|i| match config.predicate {
            Predicate::Proportional => instance.total(i).as_ratio().div_int(n),
            Predicate::Mms => Ok(mms_exact(instance.row(i), config.n)?.value.as_ratio()),
        })
        .collect::<Result<Vec<Ratio>, Error>>()?;
    let report = verify_allocation(&instance, &allocation, &thresholds)?;
    let min_ratio = report
        .agents
        .iter()
        .map(|c| {
            let fair = instance.total(c.agent).get() as f64 / config.n as f64;
            if fair == 0.0 {
                1.0
            } else {
                c.value.get() as f64 / fair
            }
        })
        .fold(f64::INFINITY, f64::min);
    Ok(Trial {
        success: report.pass,
        min_ratio,
    })
}

/// Runs every trial (in parallel) and aggregates in trial order.
pub fn run_existence_trials(config: &TrialConfig) -> Result<TrialStats, Error> {
    config.validate()?;
    let trials: Vec<Trial> = (0..config.trials)
        .into_par_iter()
        .map(|t| run_trial(config, t))
        .collect::<Result<_, _>>()?;
    let successes = trials.iter().filter(|t| t.success).count();
    let mut ratios: Vec<f64> = trials.iter().map(|t| t.min_ratio).collect();
    ratios.sort_by(f64::total_cmp);
    Ok(TrialStats {
        config: config.clone(),
        successes,
        failures: trials.len() - successes,
        min_ratio: ratios[0],
        median_ratio: ratios[ratios.len() / 2],
    })
}

/// Consecutive pairs (by ascending `m`, same `n`) where the rate drops by
/// more than `slack`. A statistical flag, not a failure.
pub fn monotone_regressions(stats: &[TrialStats], slack: f64) -> Vec<(usize, usize, usize)> {
    let mut sorted: Vec<&TrialStats> = stats.iter().collect();
    sorted.sort_by_key(|s| (s.config.n, s.config.m));
    sorted
        .windows(2)
        .filter(|w| w[0].config.n == w[1].config.n && w[1].rate() + slack < w[0].rate())
        .map(|w| (w[0].config.n, w[0].config.m, w[1].config.m))
        .collect()
}

/// One report line; field order is the CSV header.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub n: usize,
    pub m: usize,
    #[serde(rename = "T")]
    pub trials: usize,
    pub seed: u64,
    pub algo: TrialAlgorithm,
    pub predicate: Predicate,
    pub successes: usize,
    pub rate: f64,
    pub min_ratio: f64,
}

impl From<&TrialStats> for ReportRow {
    fn from(s: &TrialStats) -> Self {
        ReportRow {
            n: s.config.n,
            m: s.config.m,
            trials: s.config.trials,
            seed: s.config.seed,
            algo: s.config.algorithm,
            predicate: s.config.predicate,
            successes: s.successes,
            rate: s.rate(),
            min_ratio: s.min_ratio,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

pub fn render_report(stats: &[TrialStats], format: ReportFormat) -> std::io::Result<String> {
    let rows: Vec<ReportRow> = stats.iter().map(ReportRow::from).collect();
    match format {
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in &rows {
                w.serialize(row)?;
            }
            let bytes = w.into_inner().map_err(|e| e.into_error())?;
            Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
        }
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(&rows)?;
            s.push('\n');
            Ok(s)
        }
    }
}

pub fn emit_report(stats: &[TrialStats], format: ReportFormat, path: &Path) -> std::io::Result<()> {
    fs::write(path, render_report(stats, format)?)
}

pub fn parse_report(text: &str, format: ReportFormat) -> std::io::Result<Vec<ReportRow>> {
    match format {
        ReportFormat::Csv => csv::Reader::from_reader(text.as_bytes())
            .deserialize()
            .collect::<Result<_, _>>()
            .map_err(std::io::Error::other),
        ReportFormat::Json => Ok(serde_json::from_str(text)?),
    }
}
