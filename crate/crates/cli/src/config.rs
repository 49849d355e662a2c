//! Settings shared by all subcommands: flags first, then the config file,
//! then defaults.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Duration;

use anyhow::Context;
use clap::Args;
use ldkep_core::ld::parse_context;
use ldkep_core::protocol::{PublicParams, SecretBounds, DEFAULT_TIMEOUT, HASH_SHA256};

use crate::Usage;

#[derive(Args, Clone, Debug, Default)]
pub struct Common {
    /// File of `key=value` lines; flags take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Context descriptor or preset name.
    #[arg(long, global = true)]
    pub ctx: Option<String>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Size of Alice's public basis.
    #[arg(long, global = true)]
    pub m: Option<usize>,
    /// Size of Bob's public basis.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    #[arg(long, global = true)]
    pub leaf_min: Option<usize>,
    #[arg(long, global = true)]
    pub leaf_max: Option<usize>,
    /// Length of Alice's secret braid word.
    #[arg(long, global = true)]
    pub word_len: Option<usize>,
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    #[arg(long, global = true)]
    pub hash: Option<String>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

const KEYS: &[&str] = &[
    "ctx", "seed", "m", "n", "leaf-min", "leaf-max", "word-len", "trials", "hash", "out", "listen", "connect", "role",
    "timeout",
];

/// Parsed config file.
#[derive(Clone, Debug, Default)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).map_err(|e| anyhow::Error::new(Usage(format!("{}: {e}", path.display()))))
    }

    /// Blank lines and `#` comments are skipped; keys use the flag spelling.
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut values = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected key=value", i + 1))?;
            let k = k.trim().replace('_', "-");
            if !KEYS.contains(&k.as_str()) {
                return Err(format!("line {}: unknown key {k:?}", i + 1));
            }
            values.insert(k, v.trim().to_string());
        }
        Ok(ConfigFile { values })
    }

    pub fn get<T: FromStr>(&self, key: &str) -> anyhow::Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|e| anyhow::Error::new(Usage(format!("config key {key}: {e}")))),
        }
    }
}

/// Resolved settings.
#[derive(Clone, Debug)]
pub struct Settings {
    pub ctx: String,
    pub seed: u64,
    pub m: usize,
    pub n: usize,
    pub leaf_min: Option<usize>,
    pub leaf_max: Option<usize>,
    pub word_len: Option<usize>,
    pub trials: usize,
    pub hash: String,
    pub out: Option<PathBuf>,
    pub file: ConfigFile,
}

impl Settings {
    pub fn resolve(c: &Common) -> anyhow::Result<Self> {
        let file = match &c.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        Ok(Settings {
            ctx: pick(c.ctx.clone(), file.get("ctx")?, "laver3".to_string()),
            seed: pick(c.seed, file.get("seed")?, 0),
            m: pick(c.m, file.get("m")?, 1),
            n: pick(c.n, file.get("n")?, 1),
            leaf_min: c.leaf_min.or(file.get("leaf-min")?),
            leaf_max: c.leaf_max.or(file.get("leaf-max")?),
            word_len: c.word_len.or(file.get("word-len")?),
            trials: pick(c.trials, file.get("trials")?, 200),
            hash: pick(c.hash.clone(), file.get("hash")?, HASH_SHA256.to_string()),
            out: c.out.clone().or(file.get("out")?),
            file,
        })
    }

    /// Public parameters; bounds default per carrier and flags override them.
    pub fn params(&self) -> anyhow::Result<PublicParams> {
        let ctx = parse_context(&self.ctx)?;
        let mut b = SecretBounds::for_context(&ctx);
        b.leaf_min = self.leaf_min.unwrap_or(b.leaf_min);
        b.leaf_max = self.leaf_max.unwrap_or(b.leaf_max.max(b.leaf_min));
        b.word_len = self.word_len.unwrap_or(b.word_len);
        Ok(PublicParams::new(ctx, self.m, self.n, b, &self.hash)?)
    }

    pub fn timeout(&self, flag: Option<u64>) -> anyhow::Result<Duration> {
        Ok(match flag.or(self.file.get("timeout")?) {
            Some(s) => Duration::from_secs(s),
            None => DEFAULT_TIMEOUT,
        })
    }
}

fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}
