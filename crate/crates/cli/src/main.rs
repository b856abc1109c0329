//! `rwde`: seeded experiment runner.
//!
//! ```text
//! rwde <experiment> [--key value]... [--seed S] [--out DIR] [--format csv|json]
//!                   [--threads T] [--config FILE]
//! rwde list [--format csv|json]
//! ```
//!
//! Exit status: 0 when every measurement passes, 1 when some fail, 2 on errors.

mod config;
mod experiments;
mod verdict;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, ValueEnum};
use serde::Serialize;

use config::{parse_pairs, Params};
use experiments::{find, REGISTRY};
use verdict::{Verdict, MEASUREMENT_CSV_HEADER};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// Experiment-specific parameters are passed as `--key value` and checked by
/// the experiment; see `rwde list` and the README for the keys.
#[derive(Debug, Parser)]
#[command(name = "rwde", version, about = "Seeded experiments on random walks in Dirichlet environment")]
struct Cli {
    /// Experiment name, or `list`.
    experiment: String,
    /// Base seed (default 1).
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (default `rwde-out/<experiment>`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Format of the report printed on stdout.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Worker threads for replica ensembles (fallback: RWDE_THREADS, then all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Flat `key = value` file; command-line flags win.
    #[arg(long)]
    config: Option<PathBuf>,
}

const RUNNER_FLAGS: [&str; 5] = ["seed", "out", "format", "threads", "config"];

/// Split argv into what clap parses and the experiment's `--key value` pairs.
fn split_args(args: &[String]) -> (Vec<String>, Vec<String>) {
    let mut runner = vec!["rwde".to_string()];
    let mut rest = Vec::new();
    let mut have_experiment = false;
    let mut it = args.iter();
    while let Some(tok) = it.next() {
        if let Some(flag) = tok.strip_prefix("--") {
            let (name, inline) = flag.split_once('=').map_or((flag, false), |(k, _)| (k, true));
            let bare = name == "help" || name == "version";
            let target = if bare || RUNNER_FLAGS.contains(&name) { &mut runner } else { &mut rest };
            target.push(tok.clone());
            if !inline && !bare {
                if let Some(v) = it.next() {
                    target.push(v.clone());
                }
            }
        } else if tok.starts_with('-') && tok.len() > 1 {
            runner.push(tok.clone());
        } else if !have_experiment {
            have_experiment = true;
            runner.push(tok.clone());
        } else {
            rest.push(tok.clone());
        }
    }
    (runner, rest)
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Serialize)]
struct ListEntry {
    name: &'static str,
    description: &'static str,
    reference: &'static str,
    tags: Vec<&'static str>,
}

/// Print to stdout; a closed pipe (`rwde list | head`) is not an error.
fn emit(text: &str) -> Result<()> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn list(format: Format) -> Result<()> {
    let entries: Vec<ListEntry> = REGISTRY
        .iter()
        .map(|e| ListEntry {
            name: e.name,
            description: e.description,
            reference: e.reference,
            tags: e.tags.iter().map(|t| t.as_str()).collect(),
        })
        .collect();
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&entries)? + "\n",
        Format::Csv => {
            let mut s = String::from("name,tags,reference,description\n");
            for e in &entries {
                s += &format!("{},{},{},{}\n", e.name, e.tags.join(";"), csv_field(e.reference), csv_field(e.description));
            }
            s
        }
    };
    emit(&text)
}

fn resolve_threads(flag: Option<usize>, from_config: Option<String>) -> Result<Option<usize>> {
    if flag.is_some() {
        return Ok(flag);
    }
    let raw = from_config.or_else(|| std::env::var("RWDE_THREADS").ok().filter(|s| !s.is_empty()));
    raw.map(|s| s.trim().parse::<usize>().with_context(|| format!("thread count {s:?} is not an integer")))
        .transpose()
}

fn write_outputs(dir: &Path, artifacts: &[experiments::Artifact], verdict: &Verdict) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    for a in artifacts {
        let path = dir.join(&a.file);
        std::fs::write(&path, &a.contents).with_context(|| format!("writing {}", path.display()))?;
    }
    let path = dir.join("verdict.json");
    std::fs::write(&path, serde_json::to_string_pretty(verdict)? + "\n").with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn run() -> Result<bool> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (runner_args, rest) = split_args(&args);
    let cli = Cli::try_parse_from(runner_args).unwrap_or_else(|e| e.exit());
    let mut params = Params::new(cli.config.as_deref(), parse_pairs(&rest)?)?;
    let cfg_seed = params.take_common("seed");
    let cfg_out = params.take_common("out");
    let cfg_format = params.take_common("format");
    let cfg_threads = params.take_common("threads");

    let format = match (cli.format, cfg_format) {
        (Some(f), _) => f,
        (None, Some(s)) => Format::from_str(&s, true).map_err(|_| anyhow!("format {s:?} is not csv or json"))?,
        (None, None) => Format::Csv,
    };
    if cli.experiment == "list" {
        params.finish()?;
        list(format)?;
        return Ok(true);
    }
    let Some(entry) = find(&cli.experiment) else {
        bail!("unknown experiment {:?}; `rwde list` shows the registered ones", cli.experiment);
    };
    let seed = match (cli.seed, cfg_seed) {
        (Some(s), _) => s,
        (None, Some(s)) => s.trim().parse().with_context(|| format!("seed {s:?} is not an integer"))?,
        (None, None) => 1,
    };
    let out = cli
        .out
        .or(cfg_out.map(PathBuf::from))
        .unwrap_or_else(|| Path::new("rwde-out").join(entry.name));
    let threads = resolve_threads(cli.threads, cfg_threads)?;
    if threads == Some(0) {
        bail!("--threads must be positive");
    }

    let parameters = params.snapshot();
    let start = Instant::now();
    let report = match threads {
        Some(t) => rwde::par::with_threads(t, || (entry.run)(&mut params, seed)),
        None => (entry.run)(&mut params, seed),
    }
    .with_context(|| format!("experiment {}", entry.name))?;
    let files: Vec<String> = report.artifacts.iter().map(|a| a.file.clone()).collect();
    let verdict = Verdict::new(entry.name, seed, parameters, report.measurements, files, start.elapsed().as_secs_f64());
    write_outputs(&out, &report.artifacts, &verdict)?;

    let text = match format {
        Format::Json => serde_json::to_string_pretty(&verdict)? + "\n",
        Format::Csv => {
            let mut s = format!("{MEASUREMENT_CSV_HEADER}\n");
            for m in &verdict.measurements {
                s += &m.csv_row();
                s.push('\n');
            }
            s
        }
    };
    emit(&text)?;
    eprintln!(
        "{} {} in {:.1}s; output in {}",
        if verdict.pass { "PASS" } else { "FAIL" },
        entry.name,
        verdict.wall_seconds,
        out.display()
    );
    Ok(verdict.pass)
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strings(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn runner_flags_are_separated_from_parameters() {
        let (runner, rest) = split_args(&strings(&["speed", "--alpha", "3", "--seed", "7", "--beta=1", "--format", "json"]));
        assert_eq!(runner, strings(&["rwde", "speed", "--seed", "7", "--format", "json"]));
        assert_eq!(rest, strings(&["--alpha", "3", "--beta=1"]));
    }

    #[test]
    fn negative_values_stay_with_their_key() {
        let (runner, rest) = split_args(&strings(&["--seed=3", "exponent", "--first", "-1"]));
        assert_eq!(runner, strings(&["rwde", "--seed=3", "exponent"]));
        assert_eq!(rest, strings(&["--first", "-1"]));
    }

    #[test]
    fn stray_positionals_go_to_the_parameters() {
        let (runner, rest) = split_args(&strings(&["speed", "oops"]));
        assert_eq!(runner, strings(&["rwde", "speed"]));
        assert_eq!(rest, strings(&["oops"]));
    }
}
