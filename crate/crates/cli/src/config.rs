use std::fmt;
use std::path::PathBuf;

use cayley_core::{Field, FieldError};
use serde::Serialize;

/// Largest q with comfortable runtimes; q = 5 is accepted but slow.
pub const RECOMMENDED_MAX_Q: usize = 4;
pub const SUPPORTED_Q: [usize; 4] = [2, 3, 4, 5];
pub const DEFAULT_SEED: u64 = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Counts,
    Hexagon,
    Norms,
    Omega,
    Pairs,
    Dictionary,
    PlaneCensus,
    Spread,
    LineOrbits,
    Controls,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Counts,
        Suite::Hexagon,
        Suite::Norms,
        Suite::Omega,
        Suite::Pairs,
        Suite::Dictionary,
        Suite::PlaneCensus,
        Suite::Spread,
        Suite::LineOrbits,
        Suite::Controls,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Counts => "counts",
            Suite::Hexagon => "hexagon",
            Suite::Norms => "norms",
            Suite::Omega => "omega",
            Suite::Pairs => "pairs",
            Suite::Dictionary => "dictionary",
            Suite::PlaneCensus => "plane-census",
            Suite::Spread => "spread",
            Suite::LineOrbits => "line-orbits",
            Suite::Controls => "controls",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConfigError {
    UnsupportedQ(usize),
    Field(FieldError),
    BadModulus(String),
    BadClass { class: usize, classes: usize },
    Threads(String),
    Io(String),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::UnsupportedQ(q) => write!(f, "q = {q} is not supported (choose one of {SUPPORTED_Q:?})"),
            ConfigError::Field(e) => write!(f, "field: {e}"),
            ConfigError::BadModulus(s) => write!(f, "modulus: {s}"),
            ConfigError::BadClass { class, classes } => write!(f, "class {class} out of range (0..{classes})"),
            ConfigError::Threads(s) => write!(f, "thread pool: {s}"),
            ConfigError::Io(s) => write!(f, "{s}"),
        }
    }
}

impl std::error::Error for ConfigError {}

/// Everything a run depends on. Reports are a pure function of this,
/// except for timings; `threads` never changes the payload.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub q: usize,
    /// Monic modulus of GF(q²) over GF(p), constant term first.
    pub modulus: Option<Vec<u32>>,
    pub suites: Vec<Suite>,
    /// One norm class by position, or every class.
    pub class: Option<usize>,
    /// Seed for the negative controls.
    pub seed: u64,
    /// Replace Ω by the seeded mixed-class set in the hexagon run.
    pub corrupt_seed: Option<u64>,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub timings: bool,
}

impl RunConfig {
    pub fn new(q: usize) -> RunConfig {
        RunConfig {
            q,
            modulus: None,
            suites: Suite::ALL.to_vec(),
            class: None,
            seed: DEFAULT_SEED,
            corrupt_seed: None,
            threads: None,
            out: None,
            format: Format::Json,
            timings: true,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !SUPPORTED_Q.contains(&self.q) {
            return Err(ConfigError::UnsupportedQ(self.q));
        }
        if let Some(c) = self.class {
            if c > self.q {
                return Err(ConfigError::BadClass { class: c, classes: self.q + 1 });
            }
        }
        if self.threads == Some(0) {
            return Err(ConfigError::Threads("at least one thread".into()));
        }
        Ok(())
    }

    pub fn field(&self) -> Result<Field, ConfigError> {
        self.validate()?;
        match &self.modulus {
            None => Field::new(self.q).map_err(ConfigError::Field),
            Some(m) => {
                let (p, e) = prime_power(self.q).ok_or(ConfigError::UnsupportedQ(self.q))?;
                Field::with_modulus(p, 2 * e, m).map_err(ConfigError::Field)
            }
        }
    }

    /// Positions of the norm classes to run.
    pub fn classes(&self) -> Vec<usize> {
        match self.class {
            Some(c) => vec![c],
            None => (0..=self.q).collect(),
        }
    }
}

/// `q = p^e` with `p` prime.
pub fn prime_power(q: usize) -> Option<(u32, u32)> {
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut n = q;
    let mut e = 0;
    while n % p == 0 {
        n /= p;
        e += 1;
    }
    (n == 1).then_some((p as u32, e))
}

/// Parses `"1,1,2"` as modulus coefficients.
pub fn parse_modulus(s: &str) -> Result<Vec<u32>, ConfigError> {
    s.split(',')
        .map(|t| t.trim().parse::<u32>().map_err(|e| ConfigError::BadModulus(format!("{t:?}: {e}"))))
        .collect()
}
