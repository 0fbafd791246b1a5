//! `mlosc`: evaluate Mittag-Leffler functions, integrate generalized
//! oscillatory integrals and run decay-bound sweeps with CSV and SVG output.

pub mod commands;
pub mod config;
pub mod error;
pub mod poly;
pub mod report;
pub mod svg;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::parser::ValueSource;
use clap::{Arg, ArgAction, ArgMatches, Command};

use config::Settings;
use error::{CliError, EXIT_INPUT};

const COMMON: [&str; 3] = ["seed", "tol", "out"];
const EVAL_KEYS: [&str; 3] = ["alpha", "beta", "z"];
const INTEGRATE_KEYS: [&str; 7] = ["alpha", "beta", "phase", "phase-file", "domain", "amplitude", "plot"];
const VERIFY_KEYS: [&str; 21] = [
    "theorem",
    "alpha",
    "beta",
    "alphas",
    "betas",
    "phase",
    "kappa",
    "amplitude",
    "mu-min",
    "mu-max",
    "per-decade",
    "t-min",
    "t-max",
    "delta",
    "grid",
    "scale",
    "family",
    "size",
    "count",
    "plot",
    "replot",
];

fn value(name: &'static str, help: &'static str) -> Arg {
    Arg::new(name)
        .long(name)
        .help(help)
        .allow_hyphen_values(true)
        .action(ArgAction::Set)
}

fn common(cmd: Command) -> Command {
    cmd.arg(value(
        "config",
        "read `key = value` settings from FILE; flags take precedence",
    ))
    .arg(value("seed", "seed for randomised estimates [default: 0]"))
    .arg(value("tol", "absolute quadrature tolerance [default: 1e-7]"))
    .arg(value("out", "write the CSV here instead of standard output"))
}

pub fn command() -> Command {
    Command::new("mlosc")
        .about("Mittag-Leffler oscillatory integrals and decay-bound sweeps")
        .version(env!("CARGO_PKG_VERSION"))
        .subcommand_required(true)
        .arg_required_else_help(true)
        .subcommand(common(
            Command::new("eval")
                .about("evaluate E_{alpha,beta}(z), printing `re im abs`")
                .arg(value("alpha", "alpha > 0"))
                .arg(value("beta", "beta > 0"))
                .arg(
                    Arg::new("z")
                        .long("z")
                        .num_args(2)
                        .value_names(["RE", "IM"])
                        .allow_negative_numbers(true)
                        .help("complex argument"),
                ),
        ))
        .subcommand(common(
            Command::new("integrate")
                .about("integrate E_{alpha,beta}(iP(x)) psi(x) over a domain, writing one CSV row")
                .arg(value("alpha", "alpha in (0, 1] [default: 1]"))
                .arg(value("beta", "beta [default: 1]"))
                .arg(value("phase", "inline polynomial, e.g. \"3*x1^2*x2 - x2\""))
                .arg(value(
                    "phase-file",
                    "polynomial file, one `exponents... coeff` term per line",
                ))
                .arg(value("domain", "cube[:n], interval:lo,hi or disc [default: cube]"))
                .arg(value(
                    "amplitude",
                    "const:c, bump:c1,..,cn;r or poly:EXPR [default: const:1]",
                ))
                .arg(value("plot", "SVG of |integrand| against x (one-dimensional domains)")),
        ))
        .subcommand(common(
            Command::new("verify")
                .about("run a decay-bound sweep, writing a CSV report and an SVG plot")
                .arg(Arg::new("theorem").help("prop1, thm1, cor1, lem1, thm2, thm3, thm4 or lem2"))
                .arg(value("alpha", "alpha"))
                .arg(value("beta", "beta"))
                .arg(value("alphas", "comma-separated alphas (prop1)"))
                .arg(value("betas", "comma-separated betas (prop1)"))
                .arg(
                    Arg::new("phase")
                        .long("phase")
                        .action(ArgAction::Append)
                        .allow_hyphen_values(true)
                        .help("inline polynomial; repeat (or separate with ';') for several ray families"),
                )
                .arg(value("kappa", "derivative multi-index, e.g. 2 or 1,1"))
                .arg(value("amplitude", "amplitude as for `integrate`"))
                .arg(value("mu-min", "smallest mu"))
                .arg(value("mu-max", "largest mu"))
                .arg(value("per-decade", "log-grid points per decade"))
                .arg(value("t-min", "smallest t (prop1)"))
                .arg(value("t-max", "largest t (prop1)"))
                .arg(value("delta", "singularity exponent (thm3)"))
                .arg(value("grid", "(p, q) grid as NxN"))
                .arg(value("scale", "(p, q) grid half-width"))
                .arg(
                    Arg::new("family")
                        .long("family")
                        .action(ArgAction::SetTrue)
                        .help("include the double-root approach family"),
                )
                .arg(
                    Arg::new("no-family")
                        .long("no-family")
                        .action(ArgAction::SetTrue)
                        .conflicts_with("family")
                        .help("leave out the double-root approach family"),
                )
                .arg(value("size", "sublevel grid cells per axis (thm1)"))
                .arg(value("count", "number of odd multiples of pi (cor1)"))
                .arg(value("plot", "SVG path [default: the --out path with .svg]"))
                .arg(value("replot", "regenerate the SVG from an existing CSV report")),
        ))
}

/// Overlays the command-line values of `m` on the config file, if any.
fn settings(m: &ArgMatches, keys: &[&str]) -> Result<Settings, CliError> {
    let mut allowed: Vec<&str> = COMMON.to_vec();
    allowed.extend_from_slice(keys);
    let mut s = match m.get_one::<String>("config") {
        Some(path) => Settings::from_file(&PathBuf::from(path), &allowed)?,
        None => Settings::default(),
    };
    for id in m.ids() {
        let id = id.as_str();
        if id == "config" || m.value_source(id) != Some(ValueSource::CommandLine) {
            continue;
        }
        match id {
            "family" => s.set("family", "true"),
            "no-family" => s.set("family", "false"),
            _ => {
                let vals: Vec<String> = m
                    .get_raw(id)
                    .into_iter()
                    .flatten()
                    .map(|v| v.to_string_lossy().into_owned())
                    .collect();
                let sep = if id == "phase" { ";" } else { " " };
                s.set(id, vals.join(sep));
            }
        }
    }
    Ok(s)
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = match command().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { 0 };
        }
    };
    let mut out: Vec<u8> = Vec::new();
    let result = match matches.subcommand() {
        Some(("eval", m)) => settings(m, &EVAL_KEYS).and_then(|s| commands::eval(&s, &mut out)),
        Some(("integrate", m)) => settings(m, &INTEGRATE_KEYS).and_then(|s| commands::integrate(&s, &mut out)),
        Some(("verify", m)) => settings(m, &VERIFY_KEYS).and_then(|s| commands::verify(&s, &mut out)),
        _ => unreachable!("subcommand is required"),
    };
    print!("{}", String::from_utf8_lossy(&out));
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
