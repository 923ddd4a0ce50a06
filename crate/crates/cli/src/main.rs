//! `nullx`: classify potentials, sample extremal null curves, run the
//! residual suite.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use nullx_core::closed_form::{self, ClosedForm};
use nullx_core::oracle::{integrate_frame_on_grid, uniform_grid};
use nullx_core::potential::{classify, h_from_k};
use nullx_core::verify::{momentum_drift, run_suite, SuiteConfig};
use nullx_core::weierstrass::{cubic_roots, half_periods, DiscriminantClass};
use nullx_core::{Branch, Complex64, Error, FrameSample, Invariants, ModelParams, Potential, Spin};

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_DOMAIN: u8 = 3;
const EXIT_IO: u8 = 4;

#[derive(Parser)]
#[command(name = "nullx", version, about = "Extremal null curves in de Sitter 3-space")]
#[command(args_conflicts_with_subcommands = true, allow_negative_numbers = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report the potential case, domain, discriminant, half-periods and roots.
    Classify(RunArgs),
    /// Sample a trajectory to CSV or JSON.
    Trajectory(RunArgs),
    /// Run the residual suite; exits 1 if any residual exceeds --tol.
    Verify(RunArgs),
    /// Sample the null helix of constant curvature --helix-k.
    Helix(RunArgs),
}

#[derive(Args, Clone)]
#[command(allow_negative_numbers = true)]
struct RunArgs {
    #[arg(long, default_value_t = 0.0)]
    g2: f64,
    #[arg(long, default_value_t = 0.0)]
    g3: f64,
    /// Lagrange multiplier.
    #[arg(long, default_value_t = 0.0)]
    m: f64,
    /// Spin, +1 or -1.
    #[arg(long, default_value = "+1", value_parser = parse_spin)]
    eps: Spin,
    #[arg(long, value_enum, default_value_t = BranchArg::Auto)]
    branch: BranchArg,
    #[arg(long, value_enum, default_value_t = Method::Closed)]
    method: Method,
    /// Start of the sample interval (default: inside the domain).
    #[arg(long)]
    s0: Option<f64>,
    /// End of the sample interval (default: inside the domain).
    #[arg(long)]
    s1: Option<f64>,
    /// Number of samples.
    #[arg(long, default_value_t = 100)]
    n: usize,
    /// RK4 step.
    #[arg(long, default_value_t = 1e-3)]
    step: f64,
    /// Constant curvature; replaces the potential given by --g2/--g3.
    #[arg(long)]
    helix_k: Option<f64>,
    /// Residual bound for `verify`.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    /// Output file (default: standard output).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Build the closed-form frame with the wrong spin (negative control).
    #[arg(long, hide = true)]
    debug_corrupt_sign: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum BranchArg {
    Auto,
    Wp,
    Wp3,
}

impl From<BranchArg> for Branch {
    fn from(b: BranchArg) -> Self {
        match b {
            BranchArg::Auto => Branch::Auto,
            BranchArg::Wp => Branch::Wp,
            BranchArg::Wp3 => Branch::Wp3,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Closed,
    Rk4,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

fn parse_spin(s: &str) -> Result<Spin, String> {
    match s {
        "+1" | "1" => Ok(Spin::Positive),
        "-1" => Ok(Spin::Negative),
        _ => Err(format!("expected +1 or -1, got {s:?}")),
    }
}

/// A failure with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidConfig(_) => EXIT_USAGE,
            _ => EXIT_DOMAIN,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    let result = match cli.command {
        Command::Classify(a) => cmd_classify(&a),
        Command::Trajectory(a) => cmd_trajectory(&a),
        Command::Helix(a) => {
            if a.helix_k.is_none() {
                Err(usage("helix needs --helix-k"))
            } else {
                cmd_trajectory(&a)
            }
        }
        Command::Verify(a) => cmd_verify(&a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("nullx: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

impl RunArgs {
    fn params(&self) -> ModelParams {
        ModelParams::new(self.m, self.eps)
    }

    fn potential(&self) -> Result<Potential, Failure> {
        if !(self.g2.is_finite() && self.g3.is_finite() && self.m.is_finite()) {
            return Err(usage("--g2, --g3 and --m must be finite"));
        }
        match self.helix_k {
            Some(k0) if k0.is_finite() => Ok(Potential::constant(h_from_k(k0, &self.params()))),
            Some(_) => Err(usage("--helix-k must be finite")),
            None => Ok(Potential::new(Invariants::new(self.g2, self.g3), self.branch.into())?),
        }
    }

    fn window(&self, p: &Potential) -> Result<(f64, f64), Failure> {
        let (lo, hi) = p.sample_window(0.5, 2.5);
        let (s0, s1) = (self.s0.unwrap_or(lo), self.s1.unwrap_or(hi));
        if !(s0 < s1) {
            return Err(usage(format!("need s0 < s1, got s0 = {s0}, s1 = {s1}")));
        }
        if self.n < 2 {
            return Err(usage(format!("need n ≥ 2, got {}", self.n)));
        }
        if !(self.step > 0.0) {
            return Err(usage(format!("need a positive step, got {}", self.step)));
        }
        for s in [s0, s1] {
            if !p.domain().contains_with_guard(s, p.weierstrass().pole_guard()) {
                return Err(Error::OutOfDomain { s, domain: p.domain().to_string() }.into());
            }
        }
        Ok((s0, s1))
    }
}

fn cmd_classify(a: &RunArgs) -> Result<u8, Failure> {
    let inv = Invariants::new(a.g2, a.g3);
    let case = classify(&inv, a.branch.into())?;
    let mut out = String::new();
    let _ = writeln!(out, "case: {}", case.tag);
    if let Some(v) = case.a {
        let _ = writeln!(out, "a: {v}");
    }
    let _ = writeln!(out, "domain: {}", case.domain);
    let _ = writeln!(out, "discriminant: {}", inv.discriminant());
    let _ = writeln!(out, "half-periods: {}", half_periods(&inv));
    let roots: Vec<String> = cubic_roots(&inv).iter().map(|r| format_complex(*r)).collect();
    let _ = writeln!(out, "roots: {}", roots.join(", "));
    if inv.class() == DiscriminantClass::Negative {
        let mut branches = Vec::new();
        for b in [Branch::Wp, Branch::Wp3] {
            let c = classify(&inv, b)?;
            branches.push(format!("{} {}", c.tag, c.domain));
        }
        let _ = writeln!(out, "branches: {}", branches.join("; "));
    }
    print!("{out}");
    Ok(0)
}

fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im < 0.0 {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

#[derive(Serialize)]
struct Metadata {
    g2: f64,
    g3: f64,
    m: f64,
    eps: f64,
    case: String,
    nu_re: f64,
    nu_im: f64,
    max_momentum_drift: f64,
}

#[derive(Serialize)]
struct Row {
    s: f64,
    k: f64,
    h: f64,
    h1: f64,
    h2: f64,
    x0: f64,
    x1: f64,
    x2: f64,
    x3: f64,
    det_drift: f64,
}

impl From<&FrameSample> for Row {
    fn from(x: &FrameSample) -> Self {
        let [x0, x1, x2, x3] = x.point.to_array();
        Row { s: x.s, k: x.k, h: x.jet.h, h1: x.jet.h1, h2: x.jet.h2, x0, x1, x2, x3, det_drift: x.det_drift() }
    }
}

#[derive(Serialize)]
struct Document {
    metadata: Metadata,
    samples: Vec<Row>,
}

const CSV_HEADER: &str = "s,k,h,h1,h2,x0,x1,x2,x3,det_drift";

fn cmd_trajectory(a: &RunArgs) -> Result<u8, Failure> {
    let p = a.potential()?;
    let params = a.params();
    let (s0, s1) = a.window(&p)?;
    let grid = uniform_grid(s0, s1, a.n);
    let cf = ClosedForm::new(&p, &params)?;
    let track = match a.method {
        Method::Closed => grid.iter().map(|&s| cf.sample(s)).collect::<Result<Vec<_>, _>>()?,
        Method::Rk4 => integrate_frame_on_grid(&p, &params, &grid, a.step, &cf.frame(s0)?, false)?,
    };
    let nu = closed_form::nu(&p.invariants(), &params);
    let inv = p.invariants();
    let metadata = Metadata {
        g2: inv.g2,
        g3: inv.g3,
        m: a.m,
        eps: a.eps.sign(),
        case: cf.tag().to_string(),
        nu_re: nu.re,
        nu_im: nu.im,
        max_momentum_drift: momentum_drift(&track, &params),
    };
    let rows: Vec<Row> = track.iter().map(Row::from).collect();
    let text = match a.format {
        Format::Csv => {
            let mut out = String::with_capacity(rows.len() * 200);
            out.push_str(CSV_HEADER);
            out.push('\n');
            for r in &rows {
                let cols = [r.s, r.k, r.h, r.h1, r.h2, r.x0, r.x1, r.x2, r.x3, r.det_drift];
                let cols: Vec<String> = cols.iter().map(|v| format!("{v:?}")).collect();
                out.push_str(&cols.join(","));
                out.push('\n');
            }
            out
        }
        Format::Json => {
            let doc = Document { metadata, samples: rows };
            let mut s =
                serde_json::to_string_pretty(&doc).map_err(|e| Failure { code: EXIT_IO, message: e.to_string() })?;
            s.push('\n');
            s
        }
    };
    write_output(a.out.as_ref(), &text)?;
    Ok(0)
}

fn write_output(path: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    let io_failure = |what: String, e: io::Error| Failure { code: EXIT_IO, message: format!("{what}: {e}") };
    match path {
        Some(p) => fs::write(p, text).map_err(|e| io_failure(format!("cannot write {}", p.display()), e)),
        None => io::stdout().lock().write_all(text.as_bytes()).map_err(|e| io_failure("stdout".into(), e)),
    }
}

fn cmd_verify(a: &RunArgs) -> Result<u8, Failure> {
    let p = a.potential()?;
    let params = a.params();
    let (s0, s1) = a.window(&p)?;
    let cfg =
        SuiteConfig { params, s0, s1, samples: a.n, step: a.step, tol: a.tol, corrupt_spin: a.debug_corrupt_sign };
    let checks = run_suite(&p, &cfg)?;
    let mut report = format!("potential {} on [{s0}, {s1}], m = {}, eps = {}\n", p.tag(), a.m, a.eps);
    for c in &checks {
        let _ = writeln!(report, "{c}");
    }
    let failed = checks.iter().filter(|c| !c.passed()).count();
    let _ = writeln!(report, "{} checks, {failed} failed", checks.len());
    write_output(a.out.as_ref(), &report)?;
    Ok(if failed == 0 { 0 } else { EXIT_VERIFY_FAILED })
}
