//! Command-line entry point: parse a configuration, run the decomposition,
//! verify it, and emit a JSON report plus an optional SVG figure of the
//! axes in the Poincaré disk.
//!
//! Exit codes: 0 on success, 2 on a validation or input error, 3 when the
//! run stopped with a numerical breakdown.

mod report;
mod svg;

use clap::Parser;
use lamsum::cocycle::{crossing_cocycle_oracle, curve_cocycle_table, WeightedCurve};
use lamsum::engine::{self, StopReason};
use lamsum::torus::{build_config_with_bound, CurveKind, TorusParams, DEFAULT_WORD_BOUND};
use lamsum::word::Word;
use serde::Deserialize;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(
    name = "lamsum",
    version,
    about = "Decomposes the sum of two weighted crossing geodesics into boundary and product curves"
)]
struct Cli {
    /// JSON config file {"l":..,"m":..,"theta":..,"c":..,"d":..,"tol":..,"max_iter":..}
    #[arg(long)]
    config: Option<PathBuf>,

    /// length of the first curve
    #[arg(long)]
    l: Option<f64>,
    /// length of the second curve
    #[arg(long)]
    m: Option<f64>,
    /// crossing angle in (0, pi/2]
    #[arg(long)]
    theta: Option<f64>,
    /// weight of the first curve
    #[arg(long)]
    c: Option<f64>,
    /// weight of the second curve
    #[arg(long)]
    d: Option<f64>,

    /// weight floor, relative to c + d
    #[arg(long)]
    tol: Option<f64>,
    /// iteration cap
    #[arg(long = "max-iter")]
    max_iter: Option<usize>,

    /// write the JSON report here (stdout otherwise)
    #[arg(long)]
    json: Option<PathBuf>,
    /// write an SVG of the axes here
    #[arg(long)]
    svg: Option<PathBuf>,
    /// cross-check the cocycle tables against the crossing oracle with
    /// this enumeration bound (0 disables the check)
    #[arg(long = "oracle-bound", default_value_t = 0)]
    oracle_bound: usize,
}

#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    l: Option<f64>,
    m: Option<f64>,
    theta: Option<f64>,
    c: Option<f64>,
    d: Option<f64>,
    tol: Option<f64>,
    max_iter: Option<usize>,
}

struct Inputs {
    params: TorusParams<f64>,
    tol: f64,
    max_iter: usize,
}

fn gather_inputs(cli: &Cli) -> Result<Inputs, String> {
    let mut file = FileConfig::default();
    if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        file = serde_json::from_str(&text)
            .map_err(|e| format!("malformed config {}: {e}", path.display()))?;
    }
    let pick = |flag: Option<f64>, from_file: Option<f64>, name: &str| -> Result<f64, String> {
        flag.or(from_file)
            .ok_or_else(|| format!("missing required field {name}"))
    };
    let params = TorusParams {
        l: pick(cli.l, file.l, "l")?,
        m: pick(cli.m, file.m, "m")?,
        theta: pick(cli.theta, file.theta, "theta")?,
        c: pick(cli.c, file.c, "c")?,
        d: pick(cli.d, file.d, "d")?,
    };
    Ok(Inputs {
        params,
        tol: cli.tol.or(file.tol).unwrap_or(engine::TAU_WEIGHT_SCALE),
        max_iter: cli.max_iter.or(file.max_iter).unwrap_or(engine::DEFAULT_MAX_ITER),
    })
}

fn run(cli: &Cli) -> Result<u8, String> {
    let inputs = gather_inputs(cli)?;
    let bound = if cli.oracle_bound > 0 {
        cli.oracle_bound
    } else {
        DEFAULT_WORD_BOUND
    };
    let cfg = build_config_with_bound(inputs.params, bound).map_err(|e| e.to_string())?;
    let weight_tol = inputs.tol * (cfg.c + cfg.d);
    let dec = engine::run_sum_with_tol(&cfg, inputs.max_iter, weight_tol);
    let verify = engine::verify_decomposition(&dec, &cfg);
    let invariants = engine::invariant_summary(&dec, &cfg);

    let oracle = if cli.oracle_bound > 0 {
        Some(oracle_check(&cfg, cli.oracle_bound))
    } else {
        None
    };

    let rep = report::build_report(&cfg, &inputs, &dec, &verify, &invariants, oracle);
    let json = serde_json::to_string_pretty(&rep).map_err(|e| e.to_string())?;
    match &cli.json {
        Some(path) => std::fs::write(path, json.as_bytes())
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?,
        None => println!("{json}"),
    }

    if let Some(path) = &cli.svg {
        let doc = svg::render_svg(&rep);
        std::fs::write(path, doc.as_bytes())
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    }

    Ok(match dec.stop {
        StopReason::NumericalBreakdown { .. } => 3,
        _ => 0,
    })
}

/// Largest deviation between the closed-form cocycle tables and the
/// crossing oracle over the four curves and both generators.
fn oracle_check(cfg: &lamsum::TorusConfig64, bound: usize) -> report::OracleEcho {
    let mut worst: f64 = 0.0;
    let mut failures = Vec::new();
    for kind in CurveKind::ALL {
        let table = curve_cocycle_table(cfg, kind);
        let curve = WeightedCurve {
            word: kind.word(),
            weight: 1.0,
        };
        for (target, want) in [("g", table.on_gamma), ("d", table.on_delta)] {
            match crossing_cocycle_oracle(&curve, &Word::parse(target).unwrap(), cfg, bound) {
                Ok(got) => worst = worst.max((got - want).max_abs()),
                Err(e) => failures.push(format!("{kind:?}[{target}]: {e}")),
            }
        }
    }
    report::OracleEcho {
        bound,
        max_table_deviation: worst,
        failures,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
