//! `spinorlab <suite> [flags]` runs a verification suite and prints its
//! report; `spinorlab verify --input FILE` checks a described pair.
//!
//! Exit status: 0 when every check passes, 1 when a check fails, 2 on
//! usage or configuration errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::Parser;
use serde_json::{Map, Value};
use spinorlab::report::{emit_report, run_suite, ReportFormat, SUITE_NAMES};
use spinorlab::verify::verify_json;

#[derive(Debug, Parser)]
#[command(name = "spinorlab", version, about = "Verification suites for Dirac-harmonic hypersurface pairs")]
struct Args {
    /// Suite to run, `verify`, or `list`.
    suite: Option<String>,

    /// Suite name, for scripts that prefer a flag.
    #[arg(long = "suite", conflicts_with = "suite")]
    suite_flag: Option<String>,

    /// JSON config file; flags override its keys.
    #[arg(long)]
    config: Option<PathBuf>,

    #[arg(long)]
    m: Option<usize>,

    #[arg(long)]
    samples: Option<usize>,

    #[arg(long, env = "SPINORLAB_SEED")]
    seed: Option<u64>,

    /// Finite-difference step(s), comma separated or repeated.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    h: Vec<f64>,

    /// json, table or csv.
    #[arg(long)]
    format: Option<String>,

    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Input document for `verify`.
    #[arg(long)]
    input: Option<PathBuf>,
}

fn read_json(path: &PathBuf) -> Result<Value> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn take_string(map: &mut Map<String, Value>, key: &str) -> Result<Option<String>> {
    match map.remove(key) {
        None => Ok(None),
        Some(Value::String(s)) => Ok(Some(s)),
        Some(other) => bail!("config key `{key}` must be a string, got {other}"),
    }
}

fn write_out(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(args: Args) -> Result<bool> {
    let mut file = match &args.config {
        Some(p) => match read_json(p)? {
            Value::Object(m) => m,
            _ => bail!("config file must hold a JSON object"),
        },
        None => Map::new(),
    };
    let suite = args
        .suite
        .clone()
        .or(args.suite_flag.clone())
        .or(take_string(&mut file, "suite")?)
        .context("no suite given; try `spinorlab list`")?;
    let format_key = take_string(&mut file, "format")?;
    let out_key = take_string(&mut file, "out")?.map(PathBuf::from);
    let format: ReportFormat = args
        .format
        .as_deref()
        .or(format_key.as_deref())
        .unwrap_or(if suite == "verify" { "json" } else { "table" })
        .parse()?;
    let out = args.out.clone().or(out_key);

    match suite.as_str() {
        "list" => {
            write_out(&(SUITE_NAMES.join("\n") + "\n"), out.as_ref())?;
            return Ok(true);
        }
        "verify" => {
            let path = args.input.as_ref().context("`verify` needs --input FILE")?;
            if format != ReportFormat::Json {
                bail!("`verify` only writes json");
            }
            let report = verify_json(&read_json(path)?)?;
            write_out(&(serde_json::to_string_pretty(&report)? + "\n"), out.as_ref())?;
            return Ok(report.pass);
        }
        _ => {}
    }

    if let Some(m) = args.m {
        file.insert("m".into(), m.into());
    }
    if let Some(n) = args.samples {
        file.insert("samples".into(), n.into());
    }
    if let Some(s) = args.seed {
        file.insert("seed".into(), s.into());
    }
    match args.h.as_slice() {
        [] => {}
        [h] => {
            file.insert("h".into(), (*h).into());
        }
        hs => {
            file.insert("h".into(), hs.to_vec().into());
        }
    }
    let result = run_suite(&suite, &Value::Object(file))?;
    write_out(&emit_report(&result, format), out.as_ref())?;
    Ok(result.pass)
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
