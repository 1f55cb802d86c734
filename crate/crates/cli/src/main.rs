use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use atomquiver_core::quiver::to_dot;
use atomquiver_core::{
    act, check, divide, expected_spectrum, materialize, realize, Config, Error, ModuleElem, Poset, QuiverExpr, Series,
};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

/// Realize finite posets as atom spectra of quiver categories and verify the construction.
#[derive(Parser)]
#[command(name = "atomquiver", version)]
struct Cli {
    /// Materialization budget N (largest level in a window).
    #[arg(long, global = true, default_value_t = 8)]
    budget: u32,
    /// Span length L for truncated cyclic submodules.
    #[arg(long, global = true, default_value_t = 6)]
    span_len: usize,
    /// Division depth D.
    #[arg(long, global = true, default_value_t = 5)]
    depth: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write output files into this directory instead of printing them.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build the realizing quiver of a poset and its expected spectrum.
    Realize { poset: PathBuf },
    /// Run the full verification suite on a poset's realization.
    Check { poset: PathBuf },
    /// Act on a module element by a series.
    Act { quiver: PathBuf, element: PathBuf, series: PathBuf },
    /// Multiply two series, optionally truncated to an order.
    Mul {
        f: PathBuf,
        g: PathBuf,
        #[arg(long)]
        order: Option<usize>,
    },
    /// Divide z by y on a tilde quiver up to the division depth.
    Divide { quiver: PathBuf, y: PathBuf, z: PathBuf },
    /// Emit the DOT graph of a quiver's window.
    Dot { quiver: PathBuf },
    /// Whether the poset has no chain of three elements.
    CnRealizable { poset: PathBuf },
}

enum Failure {
    Input(String),
    Budget(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_budget() {
            Failure::Budget(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    serde_json::from_str(&read_text(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_poset(path: &Path) -> Result<Poset, Failure> {
    Ok(Poset::from_json_str(&read_text(path)?)?)
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

/// Named output files; printed in order when no output directory is given.
fn emit(out: Option<&Path>, files: &[(&str, String)]) -> Result<(), Failure> {
    match out {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))?;
            for (name, body) in files {
                let path = dir.join(name);
                fs::write(&path, body).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
                println!("{}", path.display());
            }
        }
        None => {
            for (_, body) in files {
                print!("{body}");
            }
        }
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<bool, Failure> {
    let out = cli.out.as_deref();
    match &cli.cmd {
        Cmd::Realize { poset } => {
            let p = read_poset(poset)?;
            let q = realize(&p)?;
            let spectrum = expected_spectrum(&q)?;
            emit(out, &[("quiver.json", pretty(&q.to_json())), ("spectrum.json", pretty(&spectrum.to_json()))])?;
        }
        Cmd::Check { poset } => {
            let config = Config {
                budget: cli.budget,
                span_len: cli.span_len,
                depth: cli.depth,
                seed: cli.seed,
                ..Config::default()
            };
            let report = check(&read_poset(poset)?, &config)?;
            emit(out, &[("report.json", pretty(&report.to_json()))])?;
            return Ok(report.pass);
        }
        Cmd::Act { quiver, element, series } => {
            let host = QuiverExpr::from_json(&read_json(quiver)?)?;
            let y = ModuleElem::from_json(&host, &read_json(element)?)?;
            let f = Series::from_json(&read_json(series)?)?;
            let r = act(&materialize(&host, cli.budget), &y, &f)?;
            let mut v = r.to_json();
            v["text"] = json!(r.to_string());
            emit(out, &[("act.json", pretty(&v))])?;
        }
        Cmd::Mul { f, g, order } => {
            let f = Series::from_json(&read_json(f)?)?;
            let g = Series::from_json(&read_json(g)?)?;
            let mut h = f.mul(&g);
            if let Some(d) = order {
                h = h.truncate(*d);
            }
            let mut v = h.to_json();
            v["text"] = json!(h.to_string());
            emit(out, &[("mul.json", pretty(&v))])?;
        }
        Cmd::Divide { quiver, y, z } => {
            let host = QuiverExpr::from_json(&read_json(quiver)?)?;
            let y = ModuleElem::from_json(&host, &read_json(y)?)?;
            let z = ModuleElem::from_json(&host, &read_json(z)?)?;
            let d = divide(&materialize(&host, cli.budget), &y, &z, cli.depth)?;
            let v = json!({
                "quotient": d.quotient.to_json(),
                "quotient_text": d.quotient.to_string(),
                "residual": d.residual.to_json(),
                "residual_text": d.residual.to_string(),
                "level": d.level,
                "pivot": d.pivot.to_string(),
            });
            emit(out, &[("divide.json", pretty(&v))])?;
        }
        Cmd::Dot { quiver } => {
            let host = QuiverExpr::from_json(&read_json(quiver)?)?;
            emit(out, &[("quiver.dot", to_dot(&materialize(&host, cli.budget)))])?;
        }
        Cmd::CnRealizable { poset } => {
            let p = read_poset(poset)?;
            emit(out, &[("cn_realizable.json", pretty(&json!({ "cn_realizable": p.cn_realizable() })))])?;
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
