use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_complex::Complex64;

use mlosc_core::bounds::{
    default_theorem4_families, log_grid, verify_corollary1, verify_lemma1, verify_lemma2, verify_prop1,
    verify_theorem1, verify_theorem2, verify_theorem3, verify_theorem4, BoundReport, Verdict, DEFAULT_PER_DECADE,
    DEFAULT_TOL, LEM2_SCALE, THM3_SCALE,
};
use mlosc_core::polynomials::{MultiIndex, PolyPhase};
use mlosc_core::quadrature::{integrate_generalized, Amplitude, Domain, IntegralSpec};
use mlosc_core::special::{mittag_leffler, MLParams, MittagLeffler};
use mlosc_core::sublevel::{default_size, SublevelMethod};
use mlosc_core::Error as CoreError;

use crate::config::Settings;
use crate::error::{CliError, EXIT_BUDGET, EXIT_OK, EXIT_PRECONDITION, EXIT_UNSTABLE};
use crate::poly::{inferred_dim, parse_poly};
use crate::report::{num, report_table, theorem2_table, CsvTable};
use crate::svg::LogLogPlot;

const PLOT_SAMPLES: usize = 512;

fn ml_params(s: &Settings, alpha: f64, beta: f64) -> Result<MLParams, CliError> {
    Ok(MLParams::new(s.get_or("alpha", alpha)?, s.get_or("beta", beta)?)?)
}

fn emit(out: &mut dyn Write, s: &Settings, text: &str) -> Result<(), CliError> {
    match s.raw("out") {
        Some(path) => fs::write(path, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

/// `re im abs`, 15 significant digits each.
pub fn eval(s: &Settings, out: &mut dyn Write) -> Result<i32, CliError> {
    let params = MLParams::new(s.require("alpha")?, s.require("beta")?)?;
    let z: String = s.require("z")?;
    let parts: Vec<f64> = z
        .split_whitespace()
        .map(|v| {
            v.parse()
                .map_err(|_| CliError::Input(format!("invalid component '{v}' in --z")))
        })
        .collect::<Result<_, _>>()?;
    let [re, im] = parts[..] else {
        return Err(CliError::Input("--z takes two numbers, RE IM".into()));
    };
    let v = mittag_leffler(params, Complex64::new(re, im))?;
    let line = format!("{:.14e} {:.14e} {:.14e}\n", v.re, v.im, v.norm());
    emit(out, s, &line)?;
    Ok(EXIT_OK)
}

fn parse_pair(src: &str, what: &str) -> Result<(f64, f64), CliError> {
    let bad = || CliError::Input(format!("invalid {what} '{src}'"));
    let (a, b) = src.split_once(',').ok_or_else(bad)?;
    Ok((
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    ))
}

/// `cube`, `cube:n`, `interval:lo,hi` or `disc`; `cube` takes the phase's
/// dimension.
pub fn parse_domain(src: &str, phase_dim: usize) -> Result<Domain, CliError> {
    let (kind, arg) = match src.split_once(':') {
        Some((k, a)) => (k.trim(), Some(a.trim())),
        None => (src.trim(), None),
    };
    let domain = match (kind, arg) {
        ("cube", None) => Domain::unit_cube(phase_dim)?,
        ("cube", Some(n)) => Domain::unit_cube(
            n.parse()
                .map_err(|_| CliError::Input(format!("invalid cube dimension '{n}'")))?,
        )?,
        ("interval", Some(r)) => {
            let (lo, hi) = parse_pair(r, "interval")?;
            Domain::interval(lo, hi)?
        }
        ("disc", None) => Domain::unit_disc(),
        _ => return Err(CliError::Input(format!("unknown domain '{src}'"))),
    };
    Ok(domain)
}

fn domain_label(d: &Domain) -> String {
    match d {
        Domain::UnitCube(n) => format!("cube:{n}"),
        Domain::Interval { lo, hi } => format!("interval:{},{}", num(*lo), num(*hi)),
        Domain::UnitDisc => "disc".into(),
    }
}

/// `const:c`, `bump:c1,..,cn;r` or `poly:EXPR`.
pub fn parse_amplitude(src: &str, dim: usize) -> Result<Amplitude, CliError> {
    let (kind, arg) = src
        .split_once(':')
        .ok_or_else(|| CliError::Input(format!("amplitude '{src}' needs a kind prefix")))?;
    let bad = || CliError::Input(format!("invalid amplitude '{src}'"));
    let amp = match kind.trim() {
        "const" => Amplitude::constant(arg.trim().parse().map_err(|_| bad())?)?,
        "bump" => {
            let (c, r) = arg.split_once(';').ok_or_else(bad)?;
            let center = c
                .split(',')
                .map(|v| v.trim().parse::<f64>().map_err(|_| bad()))
                .collect::<Result<Vec<_>, _>>()?;
            Amplitude::bump(center, r.trim().parse().map_err(|_| bad())?)?
        }
        "poly" => Amplitude::polynomial(parse_poly(arg, dim)?),
        _ => return Err(bad()),
    };
    Ok(amp)
}

fn load_phase(s: &Settings) -> Result<(PolyPhase, String), CliError> {
    match (s.raw("phase"), s.raw("phase-file")) {
        (Some(_), Some(_)) => Err(CliError::Input("give either --phase or --phase-file, not both".into())),
        (Some(src), None) => {
            let dim = match s.raw("domain").map(str::trim) {
                Some("disc") => 2,
                Some(d) if d.starts_with("cube:") => parse_domain(d, 1)?.dim(),
                _ => inferred_dim(src)?,
            };
            Ok((parse_poly(src, dim)?, src.to_string()))
        }
        (None, Some(path)) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {path}: {e}")))?;
            Ok((PolyPhase::from_text(&text)?, path.to_string()))
        }
        (None, None) => Err(CliError::Input("missing --phase or --phase-file".into())),
    }
}

/// One CSV row; a budget overrun still writes the best estimate.
pub fn integrate(s: &Settings, out: &mut dyn Write) -> Result<i32, CliError> {
    let ml = ml_params(s, 1.0, 1.0)?;
    let tol = s.get_or("tol", DEFAULT_TOL)?;
    let (phase, phase_id) = load_phase(s)?;
    let domain = parse_domain(s.raw("domain").unwrap_or("cube"), phase.dim())?;
    let amplitude = parse_amplitude(s.raw("amplitude").unwrap_or("const:1"), domain.dim())?;
    let spec = IntegralSpec::new(ml, phase, amplitude, domain)?;
    let (res, status, code) = match integrate_generalized(&spec, tol) {
        Ok(r) => (r, "ok", EXIT_OK),
        Err(CoreError::BudgetExceeded { best, .. }) => (*best, "budget_exceeded", EXIT_BUDGET),
        Err(e) => return Err(e.into()),
    };
    let header = [
        ("command".to_string(), "integrate".to_string()),
        ("tol".into(), num(tol)),
        ("seed".into(), s.get_or::<u64>("seed", 0)?.to_string()),
    ];
    let mut text: String = header.iter().map(|(k, v)| format!("# {k} = {v}\n")).collect();
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record([
        "alpha", "beta", "phase_id", "domain", "re", "im", "abs", "err_est", "panels", "status",
    ])?;
    w.write_record([
        num(ml.alpha()),
        num(ml.beta()),
        phase_id,
        domain_label(&spec.domain),
        num(res.value.re),
        num(res.value.im),
        num(res.value.norm()),
        num(res.error_estimate),
        res.panels_used.to_string(),
        status.to_string(),
    ])?;
    text.push_str(&String::from_utf8(w.into_inner().map_err(|e| CliError::Io(e.into_error()))?).expect("UTF-8"));
    emit(out, s, &text)?;
    if let Some(path) = s.raw("plot") {
        write_integrand_plot(&spec, Path::new(path))?;
    }
    Ok(code)
}

fn write_integrand_plot(spec: &IntegralSpec, path: &Path) -> Result<(), CliError> {
    let [(lo, hi)] = spec.domain.bounds()[..] else {
        return Err(CliError::Input("--plot needs a one-dimensional domain".into()));
    };
    let ml = MittagLeffler::new(spec.ml);
    let mut points = Vec::with_capacity(PLOT_SAMPLES);
    for k in 0..PLOT_SAMPLES {
        let x = lo + (hi - lo) * (k as f64 + 0.5) / PLOT_SAMPLES as f64;
        let p = spec.phase.eval(&[x])?;
        let e = ml.eval_imag(p)?;
        points.push((x, e.norm() * spec.amplitude.eval(&[x]).abs()));
    }
    let plot = LogLogPlot {
        title: "|integrand| vs x".into(),
        x_label: "x".into(),
        y_label: "|integrand|".into(),
        points,
        fit: None,
        linear_x: true,
    };
    fs::write(path, plot.to_svg())?;
    Ok(())
}

/// Names accepted for each sweep.
fn theorem_key(name: &str) -> Result<&'static str, CliError> {
    Ok(match name {
        "prop1" | "proposition1" => "prop1",
        "thm1" | "theorem1" => "thm1",
        "cor1" | "corollary1" => "cor1",
        "lem1" | "lemma1" => "lem1",
        "thm2" | "theorem2" => "thm2",
        "thm3" | "theorem3" => "thm3",
        "thm4" | "theorem4" => "thm4",
        "lem2" | "lemma2" => "lem2",
        _ => return Err(CliError::Input(format!("unknown theorem '{name}'"))),
    })
}

fn theorem_keys(t: &str) -> &'static [&'static str] {
    match t {
        "prop1" => &["alphas", "betas", "t-min", "t-max", "per-decade"],
        "thm1" => &["phase", "kappa", "mu-min", "mu-max", "per-decade", "size"],
        "cor1" => &["count"],
        "lem1" => &["phase", "kappa", "alpha", "beta", "mu-min", "mu-max", "per-decade"],
        "thm2" => &["phase", "alpha", "beta", "amplitude", "mu-min", "mu-max", "per-decade"],
        "thm3" => &["delta", "grid", "scale"],
        "thm4" => &["alpha", "beta", "amplitude"],
        "lem2" => &["grid", "scale", "family"],
        _ => &[],
    }
}

const ALWAYS: [&str; 6] = ["theorem", "seed", "tol", "out", "plot", "replot"];

fn parse_grid(src: &str) -> Result<usize, CliError> {
    let bad = || CliError::Input(format!("invalid grid '{src}', expected NxN"));
    let (a, b) = src.split_once(['x', 'X']).ok_or_else(bad)?;
    let (a, b): (usize, usize) = (
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    );
    if a != b {
        return Err(CliError::Input(format!("grid '{src}' must be square")));
    }
    Ok(a)
}

fn parse_kappa(s: &Settings, phase: &PolyPhase) -> Result<MultiIndex, CliError> {
    match s.raw("kappa") {
        Some(src) => {
            let entries = src
                .split(',')
                .map(|v| {
                    v.trim()
                        .parse::<u32>()
                        .map_err(|_| CliError::Input(format!("invalid kappa '{src}'")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            if entries.len() != phase.dim() {
                return Err(CliError::Input(format!(
                    "kappa '{src}' does not match the phase dimension {}",
                    phase.dim()
                )));
            }
            Ok(MultiIndex::new(entries))
        }
        None if phase.dim() == 1 => Ok(MultiIndex::single(phase.degree())),
        None => Err(CliError::Input("--kappa is required for multivariate phases".into())),
    }
}

fn phase_list(s: &Settings, default: &str) -> Result<Vec<(String, PolyPhase)>, CliError> {
    s.raw("phase")
        .unwrap_or(default)
        .split(';')
        .map(|src| {
            let src = src.trim();
            Ok((src.to_string(), parse_poly(src, inferred_dim(src)?)?))
        })
        .collect()
}

fn single_phase(s: &Settings, default: &str) -> Result<(String, PolyPhase), CliError> {
    let mut list = phase_list(s, default)?;
    if list.len() != 1 {
        return Err(CliError::Input("this sweep takes exactly one --phase".into()));
    }
    Ok(list.remove(0))
}

fn mu_grid(s: &Settings, lo: f64, hi: f64, h: &mut Vec<(String, String)>) -> Result<Vec<f64>, CliError> {
    let lo = s.get_or("mu-min", lo)?;
    let hi = s.get_or("mu-max", hi)?;
    let per = s.get_or("per-decade", DEFAULT_PER_DECADE)?;
    h.push(("mu_min".into(), num(lo)));
    h.push(("mu_max".into(), num(hi)));
    h.push(("per_decade".into(), per.to_string()));
    Ok(log_grid(lo, hi, per)?)
}

fn kv(k: &str, v: impl ToString) -> (String, String) {
    (k.to_string(), v.to_string())
}

/// Outcome of a sweep before it is written.
struct Sweep {
    table: CsvTable,
    verdict: Verdict,
}

fn from_report(header: Vec<(String, String)>, r: &BoundReport) -> Sweep {
    Sweep {
        table: report_table(header, r),
        verdict: r.verdict,
    }
}

fn run_sweep(t: &str, s: &Settings, tol: f64, mut h: Vec<(String, String)>) -> Result<Sweep, CliError> {
    let sweep = match t {
        "prop1" => {
            h.push(kv("plot_x", "t"));
            let alphas = s.list_or("alphas", &[0.3, 0.5, 0.7, 0.9])?;
            let betas = s.list_or("betas", &[0.5, 1.0, 1.5])?;
            let (lo, hi) = (s.get_or("t-min", 1.0)?, s.get_or("t-max", 1e6)?);
            let per = s.get_or("per-decade", DEFAULT_PER_DECADE)?;
            let mut params = Vec::new();
            for &a in &alphas {
                for &b in &betas {
                    params.push(MLParams::new(a, b)?);
                }
            }
            h.push(kv(
                "alphas",
                alphas.iter().map(|v| num(*v)).collect::<Vec<_>>().join(","),
            ));
            h.push(kv("betas", betas.iter().map(|v| num(*v)).collect::<Vec<_>>().join(",")));
            h.extend([kv("t_min", num(lo)), kv("t_max", num(hi)), kv("per_decade", per)]);
            let r = verify_prop1(&params, lo, hi, per)?;
            from_report(h, &r)
        }
        "thm1" => {
            h.push(kv("plot_x", "mu"));
            let (src, p) = single_phase(s, "x^2")?;
            let kappa = parse_kappa(s, &p)?;
            let size = s.get_or("size", default_size(SublevelMethod::Grid, p.dim()))?;
            h.extend([kv("phase", &src), kv("kappa", fmt_kappa(&kappa)), kv("size", size)]);
            let mus = mu_grid(s, 1e-4, 1e-1, &mut h)?;
            from_report(h.clone(), &verify_theorem1(&p, &kappa, &mus, size)?)
        }
        "cor1" => {
            h.push(kv("plot_x", "mu"));
            let count = s.get_or("count", 79usize)?;
            h.push(kv("count", count));
            from_report(h.clone(), &verify_corollary1(count, tol)?)
        }
        "lem1" => {
            h.push(kv("plot_x", "mu"));
            let ml = ml_params(s, 0.6, 1.0)?;
            let (src, p) = single_phase(s, "x^2")?;
            let kappa = parse_kappa(s, &p)?;
            h.extend([
                kv("alpha", num(ml.alpha())),
                kv("beta", num(ml.beta())),
                kv("phase", &src),
                kv("kappa", fmt_kappa(&kappa)),
            ]);
            let mus = mu_grid(s, 10.0, 1e5, &mut h)?;
            from_report(h.clone(), &verify_lemma1(&p, &kappa, ml, &mus, tol)?)
        }
        "thm2" => {
            h.push(kv("plot_x", "mu"));
            let ml = ml_params(s, 0.5, 1.0)?;
            let phases = phase_list(s, "x^2;x^3")?;
            let amp_src = s.raw("amplitude").unwrap_or("const:1");
            let dim = phases.iter().map(|(_, p)| p.dim()).max().unwrap_or(1);
            let amplitude = parse_amplitude(amp_src, dim)?;
            h.extend([
                kv("alpha", num(ml.alpha())),
                kv("beta", num(ml.beta())),
                kv(
                    "phase",
                    phases.iter().map(|(s, _)| s.as_str()).collect::<Vec<_>>().join(";"),
                ),
                kv("amplitude", amp_src),
            ]);
            let mus = mu_grid(s, 10.0, 1e5, &mut h)?;
            let families: Vec<PolyPhase> = phases.into_iter().map(|(_, p)| p).collect();
            let r = verify_theorem2(ml, &amplitude, &families, &mus, tol)?;
            Sweep {
                table: theorem2_table(h, &r),
                verdict: r.by_degree.verdict,
            }
        }
        "thm3" => {
            h.push(kv("plot_x", "rhs"));
            let delta = s.get_or("delta", 0.45)?;
            let n = parse_grid(s.raw("grid").unwrap_or("9x9"))?;
            let scale = s.get_or("scale", THM3_SCALE)?;
            h.extend([
                kv("delta", num(delta)),
                kv("grid", format!("{n}x{n}")),
                kv("scale", num(scale)),
            ]);
            from_report(h.clone(), &verify_theorem3(delta, n, scale, tol)?)
        }
        "thm4" => {
            h.push(kv("plot_x", "rhs"));
            let ml = ml_params(s, 0.5, 1.0)?;
            let amp_src = s.raw("amplitude").unwrap_or("const:1");
            let amplitude = parse_amplitude(amp_src, 2)?;
            h.extend([
                kv("alpha", num(ml.alpha())),
                kv("beta", num(ml.beta())),
                kv("amplitude", amp_src),
            ]);
            from_report(
                h.clone(),
                &verify_theorem4(&default_theorem4_families(), ml, &amplitude, tol)?,
            )
        }
        "lem2" => {
            h.push(kv("plot_x", "rhs"));
            let n = parse_grid(s.raw("grid").unwrap_or("9x9"))?;
            let scale = s.get_or("scale", LEM2_SCALE)?;
            let family = s.flag("family", true)?;
            h.extend([
                kv("grid", format!("{n}x{n}")),
                kv("scale", num(scale)),
                kv("family", family),
            ]);
            from_report(h.clone(), &verify_lemma2(n, scale, family, tol)?)
        }
        _ => unreachable!("theorem names are normalised"),
    };
    Ok(sweep)
}

fn fmt_kappa(k: &MultiIndex) -> String {
    k.entries().iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",")
}

fn plot_path(s: &Settings) -> Option<PathBuf> {
    s.raw("plot")
        .map(PathBuf::from)
        .or_else(|| s.raw("out").map(|o| Path::new(o).with_extension("svg")))
}

fn replot(s: &Settings, csv_path: &str) -> Result<i32, CliError> {
    let text = fs::read_to_string(csv_path).map_err(|e| CliError::Input(format!("cannot read {csv_path}: {e}")))?;
    let table = CsvTable::from_csv(&text)?;
    let target = s
        .raw("plot")
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(csv_path).with_extension("svg"));
    fs::write(target, table.plot().to_svg())?;
    Ok(EXIT_OK)
}

/// Sweep, CSV and plot; the exit code follows the verdict.
pub fn verify(s: &Settings, out: &mut dyn Write) -> Result<i32, CliError> {
    if let Some(csv_path) = s.raw("replot") {
        return replot(s, csv_path);
    }
    let t = theorem_key(
        s.raw("theorem")
            .ok_or_else(|| CliError::Input("missing theorem name".into()))?,
    )?;
    for key in [
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
    ] {
        if s.raw(key).is_some() && !theorem_keys(t).contains(&key) && !ALWAYS.contains(&key) {
            return Err(CliError::Input(format!("'{key}' does not apply to {t}")));
        }
    }
    let tol = s.get_or("tol", DEFAULT_TOL)?;
    let seed = s.get_or::<u64>("seed", 0)?;
    let header = vec![
        kv("command", "verify"),
        kv("theorem", t),
        kv("tol", num(tol)),
        kv("seed", seed),
    ];
    let (table, code) = match run_sweep(t, s, tol, header.clone()) {
        Ok(sweep) => {
            let code = match sweep.verdict {
                Verdict::Bounded => EXIT_OK,
                Verdict::Unstable => EXIT_UNSTABLE,
                Verdict::ViolatedPreconditions => EXIT_PRECONDITION,
            };
            (sweep.table, code)
        }
        Err(CliError::Precondition(msg)) => {
            eprintln!("error: {msg}");
            let table = CsvTable {
                header,
                footer: vec![
                    kv("verdict", Verdict::ViolatedPreconditions.as_str()),
                    kv("error", &msg),
                ],
                ..Default::default()
            };
            (table, EXIT_PRECONDITION)
        }
        Err(e) => return Err(e),
    };
    emit(out, s, &table.to_csv()?)?;
    if code != EXIT_PRECONDITION {
        if let Some(path) = plot_path(s) {
            fs::write(path, table.plot().to_svg())?;
        }
    }
    if s.raw("out").is_some() {
        let verdict = table.footer_value("verdict").unwrap_or("unknown");
        let c_fit = table.footer_value("c_fit").unwrap_or("none");
        writeln!(out, "{t}: verdict {verdict}, c_fit {c_fit}")?;
    }
    Ok(code)
}
