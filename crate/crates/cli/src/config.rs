use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Serialize};

use crate::Failure;

/// Settings shared by every command. Flags override values from `--config`.
#[derive(Args, Clone, Debug, Default)]
pub struct Flags {
    /// JSON file with any of the settings below; flags take precedence
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// System description (JSON)
    #[arg(long)]
    pub system: Option<PathBuf>,
    /// Prime bound X
    #[arg(long = "primes-up-to")]
    pub primes_up_to: Option<u64>,
    /// Epsilon grid, comma separated
    #[arg(long, value_delimiter = ',')]
    pub epsilon: Option<Vec<f64>>,
    /// Gamma grid, comma separated
    #[arg(long, value_delimiter = ',')]
    pub gamma: Option<Vec<f64>>,
    /// Values of m for the D'(m) growth table, comma separated
    #[arg(long, value_delimiter = ',')]
    pub m: Option<Vec<u64>>,
    /// Word-length cap for the depth-limited certificates
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long)]
    pub workers: Option<usize>,
    /// Cache directory
    #[arg(long)]
    pub cache: Option<PathBuf>,
    /// Output directory for reports and tables
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Deserialize, Default, Debug)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct FileConfig {
    system: Option<PathBuf>,
    primes_up_to: Option<u64>,
    epsilon: Option<Vec<f64>>,
    gamma: Option<Vec<f64>>,
    m: Option<Vec<u64>>,
    depth: Option<usize>,
    workers: Option<usize>,
    cache: Option<PathBuf>,
    out: Option<PathBuf>,
    seed: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub system: PathBuf,
    pub primes_up_to: Option<u64>,
    pub epsilon: Vec<f64>,
    pub gamma: Vec<f64>,
    pub m: Vec<u64>,
    pub depth: usize,
    #[serde(skip)]
    pub workers: usize,
    pub cache: PathBuf,
    pub out: Option<PathBuf>,
    pub seed: u64,
}

impl RunConfig {
    pub fn resolve(flags: Flags) -> Result<Self, Failure> {
        let file = match &flags.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| Failure::input(format!("cannot read config {}: {e}", path.display())))?;
                serde_json::from_str::<FileConfig>(&text).map_err(|e| {
                    Failure::input(format!(
                        "malformed config {} at line {}, column {}: {e}",
                        path.display(),
                        e.line(),
                        e.column()
                    ))
                })?
            }
            None => FileConfig::default(),
        };
        let system = flags
            .system
            .or(file.system)
            .ok_or_else(|| Failure::input("no system file given (use --system)"))?;
        let config = Self {
            system,
            primes_up_to: flags.primes_up_to.or(file.primes_up_to),
            epsilon: flags.epsilon.or(file.epsilon).unwrap_or_else(|| vec![0.1, 0.5, 1.0]),
            gamma: flags.gamma.or(file.gamma).unwrap_or_else(|| (1..=9).map(|i| i as f64 / 10.0).collect()),
            m: flags.m.or(file.m).unwrap_or_else(|| (1..=8).collect()),
            depth: flags.depth.or(file.depth).unwrap_or(3),
            workers: flags
                .workers
                .or(file.workers)
                .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())),
            cache: flags.cache.or(file.cache).unwrap_or_else(|| PathBuf::from(".semiorbit-cache")),
            out: flags.out.or(file.out),
            seed: flags.seed.or(file.seed).unwrap_or(0),
        };
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<(), Failure> {
        if self.primes_up_to.is_some_and(|x| x < 2) {
            return Err(Failure::input("--primes-up-to must be at least 2"));
        }
        if self.epsilon.is_empty() || self.gamma.is_empty() || self.m.is_empty() {
            return Err(Failure::input("the epsilon, gamma and m grids must be nonempty"));
        }
        if let Some(e) = self.epsilon.iter().find(|e| e.is_nan() || **e <= 0.0) {
            return Err(Failure::input(format!("epsilon must be positive, got {e}")));
        }
        if let Some(g) = self.gamma.iter().find(|g| !(**g > 0.0 && **g < 1.0)) {
            return Err(Failure::input(format!("gamma must lie in (0, 1), got {g}")));
        }
        if self.m.contains(&0) {
            return Err(Failure::input("m values must be at least 1"));
        }
        if self.depth == 0 {
            return Err(Failure::input("--depth must be at least 1"));
        }
        if self.workers == 0 {
            return Err(Failure::input("--workers must be at least 1"));
        }
        Ok(())
    }

    pub fn prime_bound(&self) -> Result<u64, Failure> {
        self.primes_up_to.ok_or_else(|| Failure::input("this command needs --primes-up-to"))
    }
}

/// Creates `dir` and checks that a file can be written in it.
pub fn ensure_writable(dir: &Path) -> Result<(), Failure> {
    let probe = dir.join(".semiorbit-write-check");
    fs::create_dir_all(dir)
        .and_then(|_| fs::write(&probe, b""))
        .and_then(|_| fs::remove_file(&probe))
        .map_err(|e| Failure::input(format!("directory {} is not writable: {e}", dir.display())))
}
