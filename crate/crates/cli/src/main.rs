use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use stpro::config::{Config, ConfigError, Value};
use stpro::report::{self, EntryResult};
use stpro::scenario::{self, Prepared};
use stpro_core::check::{Focus, Status};

#[derive(Parser)]
#[command(name = "stpro", version, about = "Exact checks for Steinberg groups, odd form algebras and colocalization towers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Report format printed on stdout.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Also write the line-delimited JSON report to this file.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Also write the text report to this file.
    #[arg(long)]
    text: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct Single {
    /// Seed for sampled identities.
    #[arg(long, env = scenario::SEED_ENV)]
    seed: Option<u64>,
    #[command(flatten)]
    output: Output,
    /// Job parameters as `--key value` pairs, e.g. `--algebra m4:z4`.
    #[arg(trailing_var_arg = true, allow_hyphen_values = true, value_name = "--KEY VALUE")]
    params: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Check a root system and count its special closed subsets.
    Roots {
        /// Root system tag such as A3 or BC3.
        phi: String,
        #[command(flatten)]
        output: Output,
    },
    /// Run one check kind with parameters from the command line.
    Check {
        /// oddform, steinberg, relative, crossed-square, cosheaf, gluing,
        /// weak-action, homotope, tower, gauss, roots, chevalley or enumerate.
        kind: String,
        #[command(flatten)]
        single: Single,
    },
    /// Extract structure maps from a realization.
    Extract {
        #[command(subcommand)]
        what: Extract,
    },
    /// Enumerate a Steinberg group by coset enumeration.
    Enumerate {
        #[command(flatten)]
        single: Single,
    },
    /// Re-evaluate a single identity instance from a failure report.
    Replay {
        /// Resolved entry keys as a JSON object.
        #[arg(long)]
        spec: String,
        #[arg(long)]
        identity: String,
        #[arg(long)]
        index: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run a scenario file, or the bundled `paper-suite`.
    Run {
        scenario: String,
        #[arg(long, env = scenario::SEED_ENV)]
        seed: Option<u64>,
        /// Worker threads; defaults to the available parallelism.
        #[arg(long)]
        threads: Option<usize>,
        /// Print the bundled scenario instead of running it.
        #[arg(long)]
        print: bool,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Subcommand)]
enum Extract {
    /// Peel commutators into Chevalley maps for every root pair.
    Chevalley {
        #[command(flatten)]
        single: Single,
    },
}

/// Turns `--key value` and `--key=value` into an entry key map.
fn param_map(kind: &str, params: &[String]) -> Result<BTreeMap<String, Value>, ConfigError> {
    let err = |m: String| ConfigError::new("command line", 0, m);
    let mut map = BTreeMap::new();
    map.insert("check".to_string(), Value { text: kind.to_string(), line: 0 });
    let mut it = params.iter();
    while let Some(p) = it.next() {
        let key = p.strip_prefix("--").ok_or_else(|| err(format!("expected --KEY, found {p:?}")))?;
        let (k, v) = match key.split_once('=') {
            Some((k, v)) => (k.to_string(), v.to_string()),
            None => (key.to_string(), it.next().ok_or_else(|| err(format!("--{key} needs a value")))?.clone()),
        };
        if k == "check" || map.insert(k.clone(), Value { text: v, line: 0 }).is_some() {
            return Err(err(format!("--{k} given twice")));
        }
    }
    Ok(map)
}

fn emit(results: &[EntryResult], source: &str, out: &Output) -> anyhow::Result<()> {
    let json = report::json_lines(results);
    let text = report::text(results, source);
    if let Some(p) = &out.json {
        std::fs::write(p, &json).with_context(|| format!("writing {}", p.display()))?;
    }
    if let Some(p) = &out.text {
        std::fs::write(p, &text).with_context(|| format!("writing {}", p.display()))?;
    }
    print!("{}", match out.format {
        Format::Text => text,
        Format::Json => json,
    });
    Ok(())
}

/// Output and seed flags may also follow the job parameters.
fn runner_flags(s: &Single) -> anyhow::Result<(Vec<String>, Output, Option<u64>)> {
    let mut out = Output { format: s.output.format, json: s.output.json.clone(), text: s.output.text.clone() };
    let mut seed = s.seed;
    let mut rest = Vec::new();
    let mut it = s.params.iter();
    while let Some(p) = it.next() {
        let (flag, inline) = match p.split_once('=') {
            Some((f, v)) => (f, Some(v.to_string())),
            None => (p.as_str(), None),
        };
        if !matches!(flag, "--format" | "--json" | "--text" | "--seed") {
            rest.push(p.clone());
            continue;
        }
        let value = match inline {
            Some(v) => v,
            None => it.next().with_context(|| format!("{flag} needs a value"))?.clone(),
        };
        match flag {
            "--format" => out.format = Format::from_str(&value, false).map_err(anyhow::Error::msg)?,
            "--json" => out.json = Some(value.into()),
            "--text" => out.text = Some(value.into()),
            _ => seed = Some(value.parse().with_context(|| format!("--seed {value:?}"))?),
        }
    }
    Ok((rest, out, seed))
}

fn single(kind: &str, s: &Single) -> anyhow::Result<ExitCode> {
    let (params, output, seed) = runner_flags(s)?;
    let seed = match seed {
        Some(x) => x,
        None => scenario::default_seed()?,
    };
    let map = param_map(kind, &params)?;
    let p = scenario::prepare("command line", kind, 0, &map, seed)?;
    finish(&[scenario::run_one(&p, None)], "command line", &output)
}

fn finish(results: &[EntryResult], source: &str, out: &Output) -> anyhow::Result<ExitCode> {
    emit(results, source, out)?;
    Ok(ExitCode::from(report::exit_code(report::overall(results)) as u8))
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Roots { phi, output } => {
            let s = Single { seed: None, output, params: vec!["--phi".into(), phi] };
            single("roots", &s)
        }
        Command::Check { kind, single: s } => single(&kind, &s),
        Command::Extract { what: Extract::Chevalley { single: s } } => single("chevalley", &s),
        Command::Enumerate { single: s } => single("enumerate", &s),
        Command::Replay { spec, identity, index, format } => {
            let spec: BTreeMap<String, String> = serde_json::from_str(&spec).context("--spec must be a JSON object of strings")?;
            let seed = scenario::default_seed()?;
            let mut p: Prepared = scenario::from_spec(&spec, seed)?;
            // the identity's own status, even for negative controls
            p.expect = Status::Pass;
            let r = scenario::run_one(&p, Some(Focus { name: identity.clone(), index }));
            if r.report.outcomes.is_empty() {
                bail!("identity {identity:?} with index {index} was not evaluated; check the name and the spec");
            }
            finish(&[r], "replay", &Output { format, json: None, text: None })
        }
        Command::Run { scenario: name, seed, threads, print, output } => {
            let (source, text) = if name == scenario::SUITE_NAME {
                (name.clone(), scenario::BUNDLED_SUITE.to_string())
            } else {
                let text = std::fs::read_to_string(&name).map_err(|e| ConfigError::new(&name, 0, format!("cannot read: {e}")))?;
                (name.clone(), text)
            };
            if print {
                print!("{text}");
                return Ok(ExitCode::SUCCESS);
            }
            let seed = match seed {
                Some(x) => x,
                None => scenario::default_seed()?,
            };
            let cfg = Config::parse(&source, &text)?;
            let entries = scenario::load(&cfg, seed)?;
            let results = scenario::run_all(&entries, threads.unwrap_or_else(scenario::default_threads));
            finish(&results, &source, &output)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
