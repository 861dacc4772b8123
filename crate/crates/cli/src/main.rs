use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::Value;

use octic::exact::Rational;
use octic::pipeline::{self, PipelineError, Subject};
use octic::scenario::{self, ScenarioError};

/// Semistable degenerations of double octic Calabi-Yau threefolds.
#[derive(Parser)]
#[command(name = "octic", version)]
struct Cli {
    /// Print the report as JSON with sorted keys.
    #[arg(long, global = true)]
    json: bool,
    /// Compare against the scenario's expected block; exit 1 on mismatch.
    #[arg(long, global = true)]
    check: bool,
    /// Write one DOT file per blow-up step into this directory.
    #[arg(long, global = true)]
    dot_dir: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Incidence profile of the generic member or of one fiber.
    Incidence {
        subject: String,
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
    },
    /// Degenerate parameter values with their local types.
    Sigma { subject: String },
    /// Local type of the fiber at one parameter value.
    Classify {
        subject: String,
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
    },
    /// Blow-up trace of the central fiber and its residual singularities.
    Resolve {
        subject: String,
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
    },
    /// Components of the semistable central fiber.
    Reduce { scenario: String },
    /// Monodromy weight spectral sequence and limit Betti numbers.
    Ss { scenario: String },
    /// DOT text of one diagram of the trace (default: the last).
    Render {
        subject: String,
        #[arg(long)]
        step: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
    },
    /// List bundled scenarios.
    List,
}

enum Failure {
    Mismatch(Vec<String>),
    Parse(String),
    Math(String),
    Data(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Mismatch(_) => 1,
            Failure::Parse(_) => 2,
            Failure::Math(_) => 3,
            Failure::Data(_) => 4,
        }
    }
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::Parse(_) => Failure::Parse(e.to_string()),
            PipelineError::Scenario(_) | PipelineError::Input(_) => Failure::Data(e.to_string()),
            _ => Failure::Math(e.to_string()),
        }
    }
}

fn parse_at(at: &Option<String>) -> Result<Option<Rational>, Failure> {
    at.as_ref()
        .map(|s| s.parse::<Rational>().map_err(|e| Failure::Parse(format!("bad --at value {s}: {e}"))))
        .transpose()
}

fn write_atomic(path: &Path, text: &str) -> Result<(), Failure> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, text)
        .and_then(|_| std::fs::rename(&tmp, path))
        .map_err(|e| Failure::Data(format!("cannot write {}: {e}", path.display())))
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("reports are valid JSON")
}

fn text_summary(v: &Value) -> String {
    // Scalars and short arrays on one line each; nested values as compact JSON.
    let Value::Object(map) = v else { return pretty(v) };
    map.iter().map(|(k, x)| format!("{k}: {x}\n")).collect()
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let (report, text) = match &cli.cmd {
        Command::List => {
            for n in scenario::names() {
                let title = scenario::load(&n).map(|s| s.title).unwrap_or_default();
                println!("{n:16} {title}");
            }
            return Ok(());
        }
        Command::Incidence { subject, at } => {
            let r = pipeline::incidence_report(&Subject::parse(subject)?, parse_at(at)?.as_ref())?;
            (r, None)
        }
        Command::Sigma { subject } => (pipeline::sigma_report(&Subject::parse(subject)?)?, None),
        Command::Classify { subject, at } => {
            (pipeline::classify_report(&Subject::parse(subject)?, parse_at(at)?.as_ref())?, None)
        }
        Command::Resolve { subject, at } => {
            let subj = Subject::parse(subject)?;
            let (r, dots) = pipeline::resolve_report(&subj, parse_at(at)?.as_ref())?;
            if let Some(dir) = &cli.dot_dir {
                std::fs::create_dir_all(dir).map_err(|e| Failure::Data(e.to_string()))?;
                let stem = subj.scenario().map_or("trace".to_string(), |s| s.name.clone());
                for (i, d) in dots.iter().enumerate() {
                    write_atomic(&dir.join(format!("{stem}-step{i:02}.dot")), d)?;
                }
            }
            (r, None)
        }
        Command::Reduce { scenario } => (pipeline::reduce_report(&Subject::parse(scenario)?)?, None),
        Command::Ss { scenario } => {
            let (r, t) = pipeline::ss_report(&Subject::parse(scenario)?)?;
            (r, Some(t))
        }
        Command::Render { subject, step, at } => {
            let (_, dots) = pipeline::resolve_report(&Subject::parse(subject)?, parse_at(at)?.as_ref())?;
            let i = step.unwrap_or(dots.len() - 1);
            let d = dots.get(i).ok_or_else(|| Failure::Data(format!("trace has only {} diagrams", dots.len())))?;
            print!("{d}");
            return Ok(());
        }
    };

    if cli.json {
        println!("{}", pretty(&report));
    } else {
        print!("{}", text.unwrap_or_else(|| text_summary(&report)));
    }

    if cli.check {
        let name = report.get("scenario").and_then(|s| s.as_str()).ok_or_else(|| {
            Failure::Data("--check needs a scenario argument".into())
        })?;
        let s = scenario::load(name).map_err(|e: ScenarioError| Failure::Data(e.to_string()))?;
        let expected = s.expected.ok_or_else(|| Failure::Data(format!("scenario {name} has no expected block")))?;
        let diffs = pipeline::check(&expected, &report);
        if !diffs.is_empty() {
            return Err(Failure::Mismatch(diffs));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Mismatch(d) => {
                    for line in d {
                        eprintln!("mismatch {line}");
                    }
                }
                Failure::Parse(m) | Failure::Math(m) | Failure::Data(m) => eprintln!("error: {m}"),
            }
            ExitCode::from(f.code())
        }
    }
}
