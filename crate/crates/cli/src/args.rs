use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use doldlab::flagcomb::FlagType;
use doldlab::sweep::{Suite, SweepConfig};

#[derive(Parser, Debug)]
#[command(name = "doldlab", version, about = "Exact invariants of generalized Dold manifolds P(m, nu)")]
pub struct Cli {
    /// key=value file supplying defaults for any flag (keys as flag names).
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Ranks and 2-torsion counts of integral cohomology.
    Betti(CaseArgs),
    /// Integral homology and cohomology, degree by degree.
    Homology(CaseArgs),
    /// Generators and relations of the cohomology ring with 2 inverted.
    Presentation(CaseArgs),
    /// K-group ranks and torsion bounds.
    Ktheory(CaseArgs),
    /// Run the verification sweep.
    Verify(VerifyArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Latex,
}

#[derive(Args, Debug, Clone, Default)]
pub struct OutputArgs {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write the report to FILE instead of stdout.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct CaseArgs {
    /// Sphere dimension, at least 1.
    #[arg(long)]
    pub m: Option<usize>,
    /// Flag type as comma-separated parts, e.g. 1,2.
    #[arg(long)]
    pub nu: Option<FlagType>,
    /// Cross-check against the independent computation.
    #[arg(long)]
    pub verify: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    #[arg(long)]
    pub m_max: Option<usize>,
    #[arg(long)]
    pub n_max: Option<usize>,
    /// Suites to run (repeatable or comma-separated); all by default.
    #[arg(long = "suite", value_delimiter = ',')]
    pub suites: Vec<Suite>,
    #[command(flatten)]
    pub output: OutputArgs,
}

pub struct ConfigFile(BTreeMap<String, String>);

const KEYS: [&str; 9] = ["m", "nu", "verify", "format", "out", "m-max", "n-max", "suite", "threads"];

impl ConfigFile {
    pub fn empty() -> Self {
        ConfigFile(BTreeMap::new())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| anyhow!("config line {}: expected key=value", no + 1))?;
            let key = k.trim().replace('_', "-");
            if !KEYS.contains(&key.as_str()) {
                bail!("config line {}: unknown key '{}'", no + 1, k.trim());
            }
            map.insert(key, v.trim().to_string());
        }
        Ok(ConfigFile(map))
    }

    pub fn get<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.0
            .get(key)
            .map(|v| v.parse::<T>().map_err(|e| anyhow!("config key {key}: {e}")))
            .transpose()
    }

    fn flag(&self, key: &str) -> Result<bool> {
        Ok(self.get::<bool>(key)?.unwrap_or(false))
    }

    fn format(&self) -> Result<Option<Format>> {
        self.0
            .get("format")
            .map(|v| Format::from_str(v, true).map_err(|_| anyhow!("config key format: expected text, json or latex")))
            .transpose()
    }
}

#[derive(Debug, Clone)]
pub struct Output {
    pub format: Format,
    pub out: Option<PathBuf>,
}

fn resolve_output(o: &OutputArgs, cfg: &ConfigFile) -> Result<Output> {
    Ok(Output {
        format: o.format.or(cfg.format()?).unwrap_or(Format::Text),
        out: o.out.clone().or(cfg.get("out")?),
    })
}

#[derive(Debug, Clone)]
pub struct Case {
    pub m: usize,
    pub nu: FlagType,
    pub verify: bool,
    pub output: Output,
}

pub fn resolve_case(a: &CaseArgs, cfg: &ConfigFile) -> Result<Case> {
    let m = a.m.or(cfg.get("m")?).ok_or_else(|| anyhow!("missing --m"))?;
    let nu = match &a.nu {
        Some(nu) => nu.clone(),
        None => cfg.get("nu")?.ok_or_else(|| anyhow!("missing --nu"))?,
    };
    Ok(Case { m, nu, verify: a.verify || cfg.flag("verify")?, output: resolve_output(&a.output, cfg)? })
}

pub fn resolve_sweep(a: &VerifyArgs, cfg: &ConfigFile) -> Result<(SweepConfig, Output)> {
    let mut config = SweepConfig::default();
    if let Some(m) = a.m_max.or(cfg.get("m-max")?) {
        config.m_max = m;
    }
    if let Some(n) = a.n_max.or(cfg.get("n-max")?) {
        config.n_max = n;
    }
    let suites: Vec<Suite> = if a.suites.is_empty() {
        match cfg.0.get("suite") {
            Some(list) => list.split(',').map(str::parse).collect::<Result<_, _>>()?,
            None => Vec::new(),
        }
    } else {
        a.suites.clone()
    };
    if !suites.is_empty() {
        config.suites = suites.into_iter().collect();
    }
    config.validate()?;
    Ok((config, resolve_output(&a.output, cfg)?))
}
