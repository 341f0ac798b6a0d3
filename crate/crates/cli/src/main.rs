use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use cayley::config::{parse_modulus, ConfigError, Format, RunConfig, Suite, DEFAULT_SEED, RECOMMENDED_MAX_Q};
use cayley::export::{classes_json, gamma_json, omega_line_set, spread_union_line_set, stabiliser_json, ExportKind};
use cayley::lineset::{self, LineSetError};
use cayley::report::Report;
use cayley::suites::{self, with_context};
use clap::{Args, Parser, Subcommand};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "cayley", version, about = "Certify the split Cayley hexagon model on H(3,q²) and its image on Q(6,q)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Order of the subfield GF(q); one of 2, 3, 4, 5.
    #[arg(long)]
    q: Option<usize>,
    /// Modulus of GF(q²) over GF(p), coefficients from the constant term, e.g. "2,1,1".
    #[arg(long)]
    modulus: Option<String>,
    /// Seed for the negative controls.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Worker threads for the parallel sections.
    #[arg(long)]
    threads: Option<usize>,
    /// Output file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Omit wall-clock timings, making output byte-identical across runs.
    #[arg(long)]
    no_timings: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Build Γ for one norm class, certify it and run the mixed-class control.
    Hexagon {
        #[command(flatten)]
        common: Common,
        /// Norm class position.
        #[arg(long, default_value_t = 0)]
        class: usize,
        /// Certify a seeded mixed-class Ω′ in place of the class.
        #[arg(long)]
        corrupt_seed: Option<u64>,
    },
    /// Orbit census of the lines of Q(6,q) and the plane census of the hexagon image.
    Census {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        class: Option<usize>,
    },
    /// Run the selected verification suites.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Comma-separated suites; all when omitted.
        #[arg(long, value_enum, value_delimiter = ',')]
        suite: Vec<Suite>,
        #[arg(long)]
        class: Option<usize>,
    },
    /// Certify a line set of Q(6,q) given in the interchange format.
    Certify {
        #[command(flatten)]
        common: Common,
        /// Line-set JSON file.
        #[arg(long)]
        input: PathBuf,
    },
    /// Write an interchange file.
    Export {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = ExportKind::Lines)]
        kind: ExportKind,
        #[arg(long, default_value_t = 0)]
        class: usize,
    },
}

enum Failure {
    Usage(String),
    Certification(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Failure {
        Failure::Usage(e.to_string())
    }
}

impl From<LineSetError> for Failure {
    fn from(e: LineSetError) -> Failure {
        Failure::Usage(e.to_string())
    }
}

fn config(common: &Common, q: usize) -> Result<RunConfig, Failure> {
    let mut cfg = RunConfig::new(q);
    cfg.modulus = common.modulus.as_deref().map(parse_modulus).transpose()?;
    cfg.seed = common.seed;
    cfg.threads = common.threads;
    cfg.out = common.out.clone();
    cfg.format = common.format;
    cfg.timings = !common.no_timings;
    cfg.validate()?;
    if q > RECOMMENDED_MAX_Q {
        eprintln!("warning: q = {q} is above the recommended ceiling {RECOMMENDED_MAX_Q}; expect long runtimes");
    }
    Ok(cfg)
}

fn emit(cfg: &RunConfig, text: &str) -> Result<(), Failure> {
    match &cfg.out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| Failure::Usage(e.to_string())),
    }
}

fn finish(cfg: &RunConfig, report: Report) -> Result<(), Failure> {
    let report = if cfg.timings { report } else { report.payload() };
    let text = match cfg.format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    };
    emit(cfg, &text)?;
    for s in &report.suites {
        let failed: Vec<&str> = s.failed_checks().map(|c| c.item.as_str()).collect();
        if failed.is_empty() {
            eprintln!("PASS {}", s.suite);
        } else {
            eprintln!("FAIL {}: {}", s.suite, failed.join("; "));
        }
    }
    if report.pass {
        Ok(())
    } else {
        Err(Failure::Certification(format!("{} q={}", report.command, report.q)))
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Hexagon { common, class, corrupt_seed } => {
            let mut cfg = config(&common, common.q.unwrap_or(2))?;
            cfg.class = Some(class);
            cfg.corrupt_seed = corrupt_seed;
            cfg.validate()?;
            let report = suites::run_with("hexagon", &cfg, &[Suite::Counts, Suite::Hexagon], |ctx, report| {
                let t = Instant::now();
                let mut s = cayley::SuiteResult::new("negative-control");
                suites::mixed_control(&mut s, ctx, cfg.seed);
                report.push(s, t.elapsed().as_millis() as u64);
            })?;
            finish(&cfg, report)
        }
        Command::Census { common, class } => {
            let mut cfg = config(&common, common.q.unwrap_or(2))?;
            cfg.class = class;
            cfg.validate()?;
            let report = suites::run("census", &cfg, &[Suite::LineOrbits, Suite::PlaneCensus])?;
            finish(&cfg, report)
        }
        Command::Verify { common, suite, class } => {
            let mut cfg = config(&common, common.q.unwrap_or(2))?;
            cfg.class = class;
            if !suite.is_empty() {
                cfg.suites = suite;
            }
            cfg.validate()?;
            let report = suites::run("verify", &cfg, &cfg.suites)?;
            finish(&cfg, report)
        }
        Command::Certify { common, input } => {
            let text = fs::read_to_string(&input).map_err(|e| Failure::Usage(format!("{}: {e}", input.display())))?;
            let file = lineset::parse(&text)?;
            if let Some(q) = common.q.filter(|&q| q != file.q) {
                return Err(Failure::Usage(format!("--q {q} disagrees with the file's q = {}", file.q)));
            }
            let cfg = config(&common, file.q)?;
            let lines = lineset::decode(&cfg.field()?, &file)?;
            let report = suites::run_with("certify", &cfg, &[], |ctx, report| {
                let t = Instant::now();
                report.push(suites::certify(ctx, &lines), t.elapsed().as_millis() as u64);
            })?;
            finish(&cfg, report)
        }
        Command::Export { common, kind, class } => {
            let mut cfg = config(&common, common.q.unwrap_or(2))?;
            cfg.class = Some(class);
            cfg.validate()?;
            let text = with_context(&cfg, |ctx| -> Result<String, String> {
                let value = match kind {
                    ExportKind::Lines => return omega_line_set(ctx, class).map(|f| lineset::to_json(&f)).map_err(|e| e.to_string()),
                    ExportKind::SpreadUnion => {
                        return match spread_union_line_set(ctx) {
                            Ok(Some(f)) => Ok(lineset::to_json(&f)),
                            Ok(None) => Err("no plane spread found within the search budget".into()),
                            Err(e) => Err(e.to_string()),
                        }
                    }
                    ExportKind::Gamma => gamma_json(ctx, class),
                    ExportKind::Classes => classes_json(ctx),
                    ExportKind::Stabiliser => stabiliser_json(ctx),
                };
                Ok(serde_json::to_string(&value).expect("export serialises") + "\n")
            })?
            .map_err(|e| Failure::Certification(e.to_string()))?
            .map_err(Failure::Certification)?;
            emit(&cfg, &text)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Certification(msg)) => {
            eprintln!("certification failed: {msg}");
            ExitCode::from(EXIT_FAIL)
        }
    }
}
