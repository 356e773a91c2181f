mod report;
mod scan;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use lsl_core::catalog::{self, CatalogSurface, Params};
use lsl_core::finite_type::Roots;
use lsl_core::verify::{fit_surface, verify_surface, VerifyConfig};
use lsl_core::{Error, Tolerances};
use serde::Serialize;

use report::{Report, SurfaceReport};
use scan::num;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Command {
    /// Run the full identity suite and the closed-form comparisons.
    Verify,
    /// Fit the spectral models and report the verdict.
    Fit,
    /// Sweep one parameter given as KEY=start:stop:step.
    Scan,
    /// List the catalog, or describe one entry.
    Catalog,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Json,
    Csv,
}

/// Finite-type analysis of surfaces in De Sitter and anti De Sitter space.
///
/// Exit codes: 0 success, 1 a check failed, 2 usage error (unknown surface,
/// bad flag, empty scan range), 3 the surface could not be constructed.
#[derive(Debug, Parser)]
#[command(name = "lsl", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Catalog entry; `verify` and `fit` run the whole catalog without it.
    #[arg(long)]
    surface: Option<String>,
    /// Construction parameter, repeatable.
    #[arg(long = "param", value_name = "K=V")]
    params: Vec<String>,
    /// Space form: +1 for De Sitter, -1 for anti De Sitter.
    #[arg(long, allow_hyphen_values = true, value_name = "+1|-1")]
    c: Option<String>,
    /// Grid for identities and constancy scans.
    #[arg(long, default_value = "8x8", value_parser = parse_grid, value_name = "NxM")]
    grid: (usize, usize),
    /// Seed of the random sample points.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Number of random sample points used by the fit.
    #[arg(long, default_value_t = 20)]
    samples: usize,
    /// Tolerance override, repeatable.
    #[arg(long = "tol", value_name = "NAME=V")]
    tols: Vec<String>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    emit: Option<Emit>,
}

fn parse_grid(text: &str) -> Result<(usize, usize), String> {
    let (n, m) = text
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("`{text}` is not of the form NxM"))?;
    let parse = |s: &str| s.trim().parse::<usize>().map_err(|e| format!("`{s}`: {e}"));
    Ok((parse(n)?, parse(m)?))
}

/// A failure with its exit code.
struct Fail {
    code: u8,
    message: String,
}

impl Fail {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    fn build(err: Error) -> Self {
        let code = if matches!(err, Error::UnknownSurface(_)) { 2 } else { 3 };
        Self {
            code,
            message: err.to_string(),
        }
    }

    fn eval(err: Error) -> Self {
        Self {
            code: 1,
            message: format!("evaluation failed: {err}"),
        }
    }
}

const KEYS: [(&str, &str); 5] = [
    (
        "umbilical",
        "c=+1|-1 (default +1), a=x1,x2,x3,x4 (default 1,0,0,0), a1..a4 override one component, tau (default 1)",
    ),
    ("product", "c=+1|-1 (default +1), j=2|3|4 (default 2), rho=+1|-1 (default 1), r (default 0.6)"),
    ("complex-circle", "a (default 0.75), b (default sqrt(a^2+1)); c must be -1"),
    (
        "b-scroll",
        "c=+1|-1 (default +1), a0 (default 1), kappa=const:K|poly:c0,c1,.. (default const:1), s0, s1 (default 0, 1), width (default 0.5), step (default 1e-3)",
    ),
    ("generic-perturbed", "c=+1|-1 (default +1)"),
];

struct Setup {
    params: Params,
    config: VerifyConfig,
    tol: Tolerances,
}

fn setup(cli: &Cli) -> Result<Setup, Fail> {
    if let Ok(threads) = std::env::var("LSL_THREADS") {
        let n: usize = threads
            .parse()
            .ok()
            .filter(|n| *n > 0)
            .ok_or_else(|| Fail::usage(format!("LSL_THREADS=`{threads}` is not a positive integer")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Fail::usage(e.to_string()))?;
    }
    let mut tol = Tolerances::default();
    for pair in &cli.tols {
        let (name, value) = pair
            .split_once('=')
            .ok_or_else(|| Fail::usage(format!("--tol `{pair}`: expected NAME=V")))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| Fail::usage(format!("--tol `{pair}`: `{value}` is not a number")))?;
        tol.set(name.trim(), value).map_err(|e| Fail::usage(e.to_string()))?;
    }
    let mut params = Params::new();
    for pair in &cli.params {
        params.insert_pair(pair).map_err(|e| Fail::usage(e.to_string()))?;
    }
    if let Some(c) = &cli.c {
        params.set("c", c.as_str());
    }
    let (n, m) = cli.grid;
    if n < 3 || m < 3 {
        return Err(Fail::usage(format!("grid {n}x{m} is smaller than 3x3")));
    }
    if cli.samples < 3 {
        return Err(Fail::usage("at least 3 samples are needed"));
    }
    Ok(Setup {
        params,
        config: VerifyConfig {
            grid: cli.grid,
            samples: cli.samples,
            seed: cli.seed,
        },
        tol,
    })
}

fn build_named(name: &str, params: &Params) -> Result<CatalogSurface, Fail> {
    if !catalog::NAMES.contains(&name) {
        return Err(Fail::usage(format!(
            "unknown surface `{name}`; expected one of {}",
            catalog::NAMES.join(", ")
        )));
    }
    catalog::build(name, params).map_err(Fail::build)
}

/// The requested surface, or the whole catalog (optionally restricted by `--c`).
fn surfaces(cli: &Cli, params: &Params) -> Result<Vec<CatalogSurface>, Fail> {
    if let Some(name) = &cli.surface {
        return Ok(vec![build_named(name, params)?]);
    }
    if !cli.params.is_empty() {
        return Err(Fail::usage("--param requires --surface"));
    }
    let wanted = params
        .space_form_or(lsl_core::SpaceForm::DeSitter)
        .map_err(|e| Fail::usage(e.to_string()))?;
    let mut out = Vec::new();
    for (name, p) in catalog::default_suite() {
        let s = catalog::build(name, &p).map_err(Fail::build)?;
        if cli.c.is_none() || s.space_form() == wanted {
            out.push(s);
        }
    }
    Ok(out)
}

fn emit_document(cli: &Cli, text: &str) -> Result<(), Fail> {
    match &cli.out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| Fail::usage(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Human-readable lines go to stdout when the document goes to a file.
fn say(cli: &Cli, line: &str) {
    if cli.out.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report types serialize");
    text.push('\n');
    text
}

fn checks_csv(report: &Report) -> String {
    let mut out = String::from("surface,check,max_residual,tolerance,pass\n");
    for s in &report.surfaces {
        for c in &s.checks {
            out.push_str(&format!(
                "\"{}\",{},{},{},{}\n",
                s.surface.label,
                c.name,
                num(c.max_residual),
                num(c.tolerance),
                c.pass
            ));
        }
    }
    out
}

fn cmd_report(cli: &Cli, st: &Setup, command: Command) -> Result<u8, Fail> {
    let list = surfaces(cli, &st.params)?;
    let mut reports = Vec::with_capacity(list.len());
    for s in &list {
        let v = match command {
            Command::Verify => verify_surface(s, &st.config, &st.tol),
            _ => fit_surface(s, &st.config, &st.tol),
        }
        .map_err(Fail::eval)
        .map_err(|f| Fail {
            message: format!("{}: {}", s.chart.label(), f.message),
            ..f
        })?;
        reports.push(SurfaceReport::new(s, v));
    }
    let name = if command == Command::Verify { "verify" } else { "fit" };
    let report = Report::new(name, &st.config, &st.tol, reports);
    let text = match cli.emit.unwrap_or(Emit::Json) {
        Emit::Json => json(&report),
        Emit::Csv => checks_csv(&report),
    };
    emit_document(cli, &text)?;

    for s in &report.surfaces {
        let fit = &s.fit;
        let status = if s.pass { "PASS" } else { "FAIL" };
        say(
            cli,
            &format!(
                "{status} {} ({} checks, verdict {})",
                s.surface.label,
                s.checks.len(),
                fit.verdict
            ),
        );
        if command == Command::Fit {
            let roots = match fit.roots {
                Roots::Real { lambda1, lambda2 } => format!("{}, {}", num(lambda1), num(lambda2)),
                Roots::Complex { re, im } => format!("{} ± {}i", num(re), num(im)),
            };
            say(
                cli,
                &format!("  sigma = {}, pi = {}, roots {roots}", num(fit.sigma), num(fit.pi)),
            );
            say(
                cli,
                &format!(
                    "  one-type: lambda = {}, residual {:.3e}; two-type residual {:.3e}",
                    num(fit.one_type.lambda),
                    fit.one_type.max_residual,
                    fit.max_residual
                ),
            );
            if let Some(a) = fit.a {
                say(
                    cli,
                    &format!("  a = ({}, {}, {}, {})", num(a[0]), num(a[1]), num(a[2]), num(a[3])),
                );
            }
        }
    }
    for (s, c) in report.failed_checks() {
        say(
            cli,
            &format!(
                "  failed: {} {} = {:e} > {:e}",
                s.surface.label, c.name, c.max_residual, c.tolerance
            ),
        );
    }
    Ok(if report.pass { 0 } else { 1 })
}

fn cmd_scan(cli: &Cli, st: &Setup) -> Result<u8, Fail> {
    let name = cli
        .surface
        .as_deref()
        .ok_or_else(|| Fail::usage("scan requires --surface"))?;
    if !catalog::NAMES.contains(&name) {
        return Err(build_named(name, &st.params).expect_err("unknown names fail"));
    }
    let sweep = scan::find_sweep(&st.params).map_err(|e| Fail::usage(e.to_string()))?;
    let rows = scan::run(name, &st.params, &sweep, &st.config, &st.tol);
    let text = match cli.emit.unwrap_or(Emit::Csv) {
        Emit::Csv => scan::to_csv(&sweep.key, &rows),
        Emit::Json => json(&rows),
    };
    emit_document(cli, &text)?;
    for r in &rows {
        if let Some(e) = &r.error {
            say(cli, &format!("{} = {}: {e}", sweep.key, r.value));
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct Entry<'a> {
    name: &'a str,
    params: &'a str,
}

#[derive(Serialize)]
struct Description<'a> {
    name: &'a str,
    label: &'a str,
    space_form: lsl_core::SpaceForm,
    domain: lsl_core::Domain,
    params: &'a Params,
    provenance: &'a str,
    expected: &'a catalog::Expected,
    notes: &'a [String],
}

fn cmd_catalog(cli: &Cli, st: &Setup) -> Result<u8, Fail> {
    let emit = cli.emit.unwrap_or(Emit::Json);
    let Some(name) = &cli.surface else {
        let text = match emit {
            Emit::Json => json(&KEYS.map(|(name, params)| Entry { name, params })),
            Emit::Csv => KEYS.iter().fold(String::from("name,params\n"), |acc, (n, p)| {
                acc + &format!("{n},\"{p}\"\n")
            }),
        };
        emit_document(cli, &text)?;
        return Ok(0);
    };
    let s = build_named(name, &st.params)?;
    let desc = Description {
        name: &s.name,
        label: s.chart.label(),
        space_form: s.space_form(),
        domain: s.chart.domain(),
        params: &s.params,
        provenance: &s.provenance,
        expected: &s.expected,
        notes: &s.notes,
    };
    if emit == Emit::Csv {
        return Err(Fail::usage("catalog descriptions are emitted as json"));
    }
    emit_document(cli, &json(&desc))?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = setup(&cli).and_then(|st| match cli.command {
        Command::Verify | Command::Fit => cmd_report(&cli, &st, cli.command),
        Command::Scan => cmd_scan(&cli, &st),
        Command::Catalog => cmd_catalog(&cli, &st),
    });
    let _ = std::io::stdout().flush();
    match result {
        Ok(code) => ExitCode::from(code),
        Err(fail) => {
            eprintln!("lsl: {}", fail.message);
            ExitCode::from(fail.code)
        }
    }
}
