//! Run configuration: built-in defaults, named presets, a flat `key = value`
//! file and command-line flags, applied in that order.
//!
//! File schema (one entry per line, `#` starts a comment):
//!
//! | key                  | value                                     |
//! |----------------------|-------------------------------------------|
//! | `n`                  | number of players                         |
//! | `alpha`              | Katz attenuation, `α·(n−1) < 1`           |
//! | `reward`             | default reward `R`                        |
//! | `cost`               | default link cost (aliases `gamma`, `delta`) |
//! | `incentivized_count` | players `1..=count` pay the discounted cost |
//! | `incentivized_cost`  | discounted link cost (alias `zeta`)       |
//! | `override`           | `id:reward:cost`, repeatable              |
//! | `seed`               | base RNG seed                             |
//! | `max_proposals`, `stall_window`, `check_cadence` | dynamics limits |
//! | `out_dir`            | artifact directory                        |
//! | `formats`            | subset of `edgelist,dot,graphml`          |
//! | `event_log`          | `all`, `accepted` or `none`               |

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::ValueEnum;
use netgame_core::{DynamicsConfig, GameConfig};

use crate::error::{CliError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Experiment {
    Homogeneous,
    Incentivized,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, ValueEnum)]
pub enum GraphFormat {
    Edgelist,
    Dot,
    Graphml,
}

impl GraphFormat {
    pub const ALL: [GraphFormat; 3] = [GraphFormat::Edgelist, GraphFormat::Dot, GraphFormat::Graphml];

    pub fn name(self) -> &'static str {
        match self {
            GraphFormat::Edgelist => "edgelist",
            GraphFormat::Dot => "dot",
            GraphFormat::Graphml => "graphml",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EventLog {
    All,
    Accepted,
    None,
}

impl EventLog {
    pub fn name(self) -> &'static str {
        match self {
            EventLog::All => "all",
            EventLog::Accepted => "accepted",
            EventLog::None => "none",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlayerOverride {
    pub player: usize,
    pub reward: f64,
    pub cost: f64,
}

impl FromStr for PlayerOverride {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let [player, reward, cost] = parts.as_slice() else {
            return Err(format!("expected id:reward:cost, got {s:?}"));
        };
        let bad = |what: &str| format!("bad {what} in {s:?}");
        Ok(PlayerOverride {
            player: player.parse().map_err(|_| bad("player id"))?,
            reward: reward.parse().map_err(|_| bad("reward"))?,
            cost: cost.parse().map_err(|_| bad("cost"))?,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub n: usize,
    pub alpha: f64,
    pub reward: f64,
    pub cost: f64,
    pub incentivized_count: usize,
    pub incentivized_cost: Option<f64>,
    pub overrides: Vec<PlayerOverride>,
    pub seed: u64,
    pub max_proposals: Option<u64>,
    pub stall_window: Option<u64>,
    pub check_cadence: Option<u64>,
    pub out_dir: Option<PathBuf>,
    pub formats: Vec<GraphFormat>,
    pub event_log: EventLog,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            n: 100,
            alpha: 0.0075,
            reward: 1.0,
            cost: 0.25,
            incentivized_count: 0,
            incentivized_cost: None,
            overrides: Vec::new(),
            seed: 0,
            max_proposals: None,
            stall_window: None,
            check_cadence: None,
            out_dir: None,
            formats: GraphFormat::ALL.to_vec(),
            event_log: EventLog::All,
        }
    }
}

/// Values given on the command line; `None` leaves the lower layers alone.
#[derive(Clone, Debug, Default)]
pub struct FlagOverrides {
    pub n: Option<usize>,
    pub alpha: Option<f64>,
    pub cost: Option<f64>,
    pub incentivized_cost: Option<f64>,
    pub incentivized_count: Option<usize>,
    pub seed: Option<u64>,
    pub max_proposals: Option<u64>,
    pub out_dir: Option<PathBuf>,
    pub formats: Option<Vec<GraphFormat>>,
    pub event_log: Option<EventLog>,
}

impl RunConfig {
    pub fn preset(experiment: Experiment) -> Self {
        let base = RunConfig::default();
        match experiment {
            Experiment::Homogeneous => base,
            Experiment::Incentivized => RunConfig {
                incentivized_count: 5,
                incentivized_cost: Some(0.20),
                ..base
            },
        }
    }

    /// Defaults, then the preset, then the file, then the flags.
    pub fn resolve(experiment: Option<Experiment>, file: Option<&Path>, flags: &FlagOverrides) -> Result<Self> {
        let cfg = RunConfig::layered(experiment, file, flags)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// As [`RunConfig::resolve`] but without validating the result.
    pub fn layered(experiment: Option<Experiment>, file: Option<&Path>, flags: &FlagOverrides) -> Result<Self> {
        let mut cfg = experiment.map(RunConfig::preset).unwrap_or_default();
        if let Some(path) = file {
            let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            cfg.apply_file(path, &text)?;
        }
        cfg.apply_flags(flags);
        Ok(cfg)
    }

    /// Flag, then config file, then `NETGAME_OUT_DIR`, then `.`.
    pub fn output_dir(&self) -> PathBuf {
        RunConfig::default_output_dir(self.out_dir.clone())
    }

    /// `explicit`, then `NETGAME_OUT_DIR`, then `.`.
    pub fn default_output_dir(explicit: Option<PathBuf>) -> PathBuf {
        explicit
            .or_else(|| std::env::var_os("NETGAME_OUT_DIR").map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("."))
    }

    pub fn apply_file(&mut self, path: &Path, text: &str) -> Result<()> {
        let mut seen: Vec<&str> = Vec::new();
        for (index, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parse_error = |message: String| CliError::Parse {
                path: path.to_path_buf(),
                line: index + 1,
                message,
            };
            let Some((key, value)) = line.split_once('=') else {
                return Err(parse_error(format!("expected key = value, got {line:?}")));
            };
            let (key, value) = (canonical_key(key.trim()), value.trim());
            if key != "override" {
                if seen.contains(&key) {
                    return Err(parse_error(format!("duplicate key {key:?}")));
                }
                seen.push(key);
            }
            self.set(key, value).map_err(parse_error)?;
        }
        Ok(())
    }

    fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        fn num<T: FromStr>(key: &str, value: &str) -> std::result::Result<T, String> {
            value.parse().map_err(|_| format!("invalid value {value:?} for {key}"))
        }
        match key {
            "n" => self.n = num(key, value)?,
            "alpha" => self.alpha = num(key, value)?,
            "reward" => self.reward = num(key, value)?,
            "cost" => self.cost = num(key, value)?,
            "incentivized_count" => self.incentivized_count = num(key, value)?,
            "incentivized_cost" => self.incentivized_cost = Some(num(key, value)?),
            "override" => self.overrides.push(value.parse()?),
            "seed" => self.seed = num(key, value)?,
            "max_proposals" => self.max_proposals = Some(num(key, value)?),
            "stall_window" => self.stall_window = Some(num(key, value)?),
            "check_cadence" => self.check_cadence = Some(num(key, value)?),
            "out_dir" => self.out_dir = Some(PathBuf::from(value)),
            "formats" => {
                self.formats = value
                    .split(',')
                    .map(|f| GraphFormat::from_str(f.trim(), true))
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| format!("invalid formats {value:?}"))?
            }
            "event_log" => {
                self.event_log =
                    EventLog::from_str(value, true).map_err(|_| format!("invalid event_log {value:?}"))?
            }
            _ => return Err(format!("unknown key {key:?}")),
        }
        Ok(())
    }

    pub fn apply_flags(&mut self, flags: &FlagOverrides) {
        let FlagOverrides {
            n,
            alpha,
            cost,
            incentivized_cost,
            incentivized_count,
            seed,
            max_proposals,
            out_dir,
            formats,
            event_log,
        } = flags.clone();
        self.n = n.unwrap_or(self.n);
        self.alpha = alpha.unwrap_or(self.alpha);
        self.cost = cost.unwrap_or(self.cost);
        self.incentivized_cost = incentivized_cost.or(self.incentivized_cost);
        self.incentivized_count = incentivized_count.unwrap_or(self.incentivized_count);
        self.seed = seed.unwrap_or(self.seed);
        self.max_proposals = max_proposals.or(self.max_proposals);
        self.out_dir = out_dir.or(self.out_dir.take());
        if let Some(formats) = formats {
            self.formats = formats;
        }
        self.event_log = event_log.unwrap_or(self.event_log);
    }

    pub fn validate(&self) -> Result<()> {
        self.game()?;
        self.dynamics()?;
        Ok(())
    }

    /// Players that pay the discounted cost.
    pub fn incentivized_players(&self) -> Vec<usize> {
        (1..=self.incentivized_count.min(self.n)).collect()
    }

    pub fn game(&self) -> Result<GameConfig> {
        if self.n == 0 {
            return Err(CliError::config("n", "must be at least 1"));
        }
        if self.incentivized_count > self.n {
            return Err(CliError::config(
                "incentivized_count",
                format!("{} exceeds n = {}", self.incentivized_count, self.n),
            ));
        }
        let mut rewards = vec![self.reward; self.n];
        let mut costs = vec![self.cost; self.n];
        if self.incentivized_count > 0 {
            let discounted = self
                .incentivized_cost
                .ok_or_else(|| CliError::config("incentivized_cost", "required when incentivized_count > 0"))?;
            costs[..self.incentivized_count].fill(discounted);
        }
        let mut touched = vec![false; self.n];
        for o in &self.overrides {
            if o.player == 0 || o.player > self.n {
                return Err(CliError::config("override", format!("player {} out of range 1..={}", o.player, self.n)));
            }
            if std::mem::replace(&mut touched[o.player - 1], true) {
                return Err(CliError::config("override", format!("player {} overridden twice", o.player)));
            }
            rewards[o.player - 1] = o.reward;
            costs[o.player - 1] = o.cost;
        }
        GameConfig::new(self.alpha, rewards, costs).map_err(|e| CliError::config(core_field(&e), e.to_string()))
    }

    pub fn dynamics(&self) -> Result<DynamicsConfig> {
        self.dynamics_for_seed(self.seed)
    }

    pub fn dynamics_for_seed(&self, seed: u64) -> Result<DynamicsConfig> {
        let d = DynamicsConfig::defaults_for(self.n, seed);
        let max_proposals = self.max_proposals.unwrap_or(d.max_proposals);
        DynamicsConfig::new(
            seed,
            max_proposals,
            self.stall_window.unwrap_or(d.stall_window.min(max_proposals)),
            self.check_cadence.unwrap_or(d.check_cadence),
        )
        .map_err(|e| CliError::config(core_field(&e), e.to_string()))
    }

    /// The resolved configuration, one `key = value` per line, in a fixed
    /// order. Dynamics limits are shown after defaults are filled in.
    pub fn echo(&self, seed: u64) -> Vec<String> {
        let d = self.dynamics_for_seed(seed).ok();
        let mut lines = vec![
            format!("n = {}", self.n),
            format!("alpha = {}", self.alpha),
            format!("reward = {}", self.reward),
            format!("cost = {}", self.cost),
            format!("incentivized_count = {}", self.incentivized_count),
        ];
        if let Some(zeta) = self.incentivized_cost {
            lines.push(format!("incentivized_cost = {zeta}"));
        }
        for o in &self.overrides {
            lines.push(format!("override = {}:{}:{}", o.player, o.reward, o.cost));
        }
        lines.push(format!("seed = {seed}"));
        if let Some(d) = d {
            lines.push(format!("max_proposals = {}", d.max_proposals));
            lines.push(format!("stall_window = {}", d.stall_window));
            lines.push(format!("check_cadence = {}", d.check_cadence));
        }
        lines.push(format!("rng = {}", netgame_core::dynamics::RNG_ALGORITHM));
        lines.extend(self.notes());
        lines
    }

    /// Remarks about a configuration that is valid but unusual.
    pub fn notes(&self) -> Vec<String> {
        match self.incentivized_cost {
            Some(zeta) if self.incentivized_count > 0 && zeta > self.cost => vec![format!(
                "note: incentivized_cost {zeta} exceeds cost {}, so the discount is a surcharge",
                self.cost
            )],
            _ => Vec::new(),
        }
    }
}

fn canonical_key(key: &str) -> &str {
    match key {
        "gamma" | "delta" => "cost",
        "zeta" => "incentivized_cost",
        other => other,
    }
}

fn core_field(e: &netgame_core::Error) -> &'static str {
    use netgame_core::Error;
    match e {
        Error::InvalidParameter { name, .. } => name,
        Error::AlphaOutOfRange(_) | Error::AlphaGuard { .. } => "alpha",
        Error::TooFewVertices { .. } | Error::SizeMismatch { .. } => "n",
        _ => "config",
    }
}

impl fmt::Display for RunConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in self.echo(self.seed) {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}
