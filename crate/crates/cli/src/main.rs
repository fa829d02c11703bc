use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lsq3::bench::{
    argmin, builtin_suite, convergence_rates, emit_report, f_n_curve, format_sig, grid,
    run_benchmark, BenchConfig, BenchMethod, Format,
};
use lsq3::{parse, solve, solve_baseline, BaselineConfig, Method, PowerMode, SolveOutcome, SolverConfig, Status};

const SIG: usize = 15;

#[derive(Parser, Debug)]
#[command(name = "lsq3", version, about = "Three-point least-squares root finding")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Find a root of one expression.
    Solve(SolveArgs),
    /// Run the built-in problem suite and report against the published tables.
    Bench(BenchArgs),
    /// Print the convergence-rate sequence of one solve.
    Rate(RateArgs),
    /// Tabulate f(n) = E^(n/4) + E^(1/n) - E over a grid of n.
    Fncurve(CurveArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Newton,
    Secant,
    Lsq3,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Markdown,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Markdown => Format::Markdown,
        }
    }
}

fn parse_n(s: &str) -> Result<PowerMode, String> {
    if s == "variable" {
        return Ok(PowerMode::Variable);
    }
    let v = s
        .strip_prefix("fixed:")
        .ok_or_else(|| format!("expected `variable` or `fixed:REAL`, got `{s}`"))?;
    let n: f64 = v.parse().map_err(|_| format!("`{v}` is not a number"))?;
    if !n.is_finite() || n == 0.0 {
        return Err("fixed N must be finite and non-zero".into());
    }
    Ok(PowerMode::Fixed(n))
}

#[derive(Args, Debug)]
struct Tuning {
    /// Initial probe spacing, in (0, 1).
    #[arg(long)]
    delta0: Option<f64>,
    /// Stopping tolerance for |x_k - x_(k-1)| + |y_k|.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long = "max-iter")]
    max_iter: Option<usize>,
}

impl Tuning {
    fn lsq3(&self, mode: PowerMode) -> SolverConfig {
        let mut c = SolverConfig {
            mode,
            ..SolverConfig::default()
        };
        if let Some(d) = self.delta0 {
            c.delta0 = d;
        }
        if let Some(t) = self.tol {
            c.tolerance = t;
        }
        if let Some(m) = self.max_iter {
            c.max_iter = m;
        }
        c
    }

    fn baseline(&self) -> BaselineConfig {
        let mut c = BaselineConfig::default();
        if let Some(t) = self.tol {
            c.tolerance = t;
        }
        if let Some(m) = self.max_iter {
            c.max_iter = m;
        }
        c
    }
}

#[derive(Args, Debug)]
struct Problem {
    #[arg(long)]
    expr: String,
    #[arg(long, allow_hyphen_values = true)]
    x0: f64,
    /// Secant's second start (default x0 + 0.1).
    #[arg(long, allow_hyphen_values = true)]
    x1: Option<f64>,
    #[arg(long, value_enum, default_value = "lsq3")]
    method: MethodArg,
    /// Power for lsq3: `variable` or `fixed:REAL`.
    #[arg(long, value_parser = parse_n, default_value = "fixed:1")]
    n: PowerMode,
    #[command(flatten)]
    tuning: Tuning,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[command(flatten)]
    problem: Problem,
    /// Also print one line per iteration.
    #[arg(long)]
    trace: bool,
    /// Layout of the iteration table.
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    tuning: Tuning,
    /// Report elapsed time on stderr.
    #[arg(long)]
    timing: bool,
}

#[derive(Args, Debug)]
struct RateArgs {
    #[command(flatten)]
    problem: Problem,
    /// Reference root; defaults to the converged root.
    #[arg(long, allow_hyphen_values = true)]
    root: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CurveArgs {
    #[arg(long = "E")]
    e: f64,
    #[arg(long)]
    from: f64,
    #[arg(long)]
    to: f64,
    #[arg(long)]
    step: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Solver(String),
}

fn run_problem(p: &Problem) -> Result<SolveOutcome, Failure> {
    let f = parse(&p.expr).map_err(|e| Failure::Usage(format!("--expr: {e}")))?;
    Ok(match p.method {
        MethodArg::Newton => solve_baseline(Method::Newton, &f, p.x0, None, &p.tuning.baseline()),
        MethodArg::Secant => solve_baseline(Method::Secant, &f, p.x0, p.x1, &p.tuning.baseline()),
        MethodArg::Lsq3 => {
            let cfg = p.tuning.lsq3(p.n);
            cfg.validate().map_err(|e| Failure::Usage(e.to_string()))?;
            solve(&f, p.x0, &cfg)
        }
    })
}

fn opt(v: Option<f64>) -> String {
    v.map(|v| format_sig(v, SIG)).unwrap_or_default()
}

fn trace_table(out: &SolveOutcome, format: FormatArg) -> String {
    let mut s = String::new();
    let cols = ["k", "x", "y", "delta", "n", "x_next"];
    match format {
        FormatArg::Csv => s.push_str(&cols.join(",")),
        FormatArg::Markdown => {
            let _ = write!(s, "| {} |\n|{}", cols.join(" | "), "---:|".repeat(cols.len()));
        }
    }
    s.push('\n');
    for r in &out.trace {
        let fields = [
            r.k.to_string(),
            format_sig(r.x, SIG),
            format_sig(r.y, SIG),
            opt(r.probe.map(|p| p.delta)),
            opt(r.probe.map(|p| p.n_used)),
            format_sig(r.x_next, SIG),
        ];
        match format {
            FormatArg::Csv => s.push_str(&fields.join(",")),
            FormatArg::Markdown => {
                let _ = write!(s, "| {} |", fields.join(" | "));
            }
        }
        s.push('\n');
    }
    s
}

fn cmd_solve(a: &SolveArgs) -> Result<String, Failure> {
    let out = run_problem(&a.problem)?;
    let mut s = String::new();
    let _ = writeln!(s, "status: {}", out.status);
    let _ = writeln!(s, "root: {}", format_sig(out.root, SIG));
    let _ = writeln!(s, "residual: {}", opt(out.residual));
    let _ = writeln!(s, "iterations: {}", out.iterations);
    if let Some(x1) = out.x1 {
        let _ = writeln!(s, "x1: {}", format_sig(x1, SIG));
    }
    if let Some(note) = out.note {
        let _ = writeln!(s, "note: {note}");
    }
    if a.trace {
        s.push_str(&trace_table(&out, a.format));
    }
    if out.status == Status::DomainError && out.iterations == 0 {
        emit(&s, a.out.as_ref())?;
        return Err(Failure::Solver(format!("f is undefined at x0 = {}", a.problem.x0)));
    }
    Ok(s)
}

fn cmd_bench(a: &BenchArgs) -> Result<String, Failure> {
    let config = BenchConfig {
        lsq3: a.tuning.lsq3(PowerMode::Variable),
        baseline: a.tuning.baseline(),
        ..BenchConfig::default()
    };
    config.lsq3.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    let t = Instant::now();
    let report = run_benchmark(&builtin_suite(), &BenchMethod::ALL, &config);
    if a.timing {
        eprintln!("elapsed: {:.3} s", t.elapsed().as_secs_f64());
    }
    Ok(emit_report(&report, a.format.into()))
}

fn cmd_rate(a: &RateArgs) -> Result<String, Failure> {
    let out = run_problem(&a.problem)?;
    let r = match (a.root, out.status) {
        (Some(r), _) => r,
        (None, Status::Converged) => out.root,
        (None, status) => {
            return Err(Failure::Solver(format!("no root to measure against: run ended {status}; pass --root")))
        }
    };
    let rates = convergence_rates(&out.iterates(), r).map_err(|e| Failure::Solver(e.to_string()))?;
    let mut s = String::from("k,rate\n");
    for (k, c) in rates.iter().enumerate() {
        let _ = writeln!(s, "{},{}", k + 1, format_sig(*c, SIG));
    }
    Ok(s)
}

fn cmd_curve(a: &CurveArgs) -> Result<String, Failure> {
    let usage = |e: lsq3::bench::CurveError| Failure::Usage(e.to_string());
    let g = grid(a.from, a.to, a.step).map_err(usage)?;
    let curve = f_n_curve(a.e, &g).map_err(usage)?;
    let mut s = String::from("n,f\n");
    for (n, f) in &curve {
        let _ = writeln!(s, "{},{}", format_sig(*n, SIG), format_sig(*f, SIG));
    }
    if let Some((n, f)) = argmin(&curve) {
        eprintln!("argmin: n = {}, f = {}", format_sig(n, SIG), format_sig(f, SIG));
    }
    Ok(s)
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (result, out) = match &cli.command {
        Command::Solve(a) => (cmd_solve(a), a.out.as_ref()),
        Command::Bench(a) => (cmd_bench(a), a.out.as_ref()),
        Command::Rate(a) => (cmd_rate(a), a.out.as_ref()),
        Command::Fncurve(a) => (cmd_curve(a), a.out.as_ref()),
    };
    match result.and_then(|text| emit(&text, out)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}\n\nUsage: lsq3 <solve|bench|rate|fncurve> [OPTIONS]; see lsq3 --help");
            ExitCode::from(1)
        }
        Err(Failure::Solver(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
