use std::io::Read as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use axc_core::exec::Execution;
use axc_core::io::{format_form, read_form, report_to_json, JsonForm};
use axc_core::polyring::parse_rational;
use axc_core::suite::{run_identity_suite, SuiteConfig};
use axc_core::{
    Context, DecompositionMode, Error, Form, OperatorTag, SolveOptions, SolveReport, SpaceTag, VacuumDiracClass,
};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

/// Exact exterior calculus with homotopy operators on polynomial forms.
///
/// Forms are read from files (`-` for stdin) in text syntax, e.g.
/// `(3/2*x1^2 - 1) dx1^dx2 + dx3`, or as JSON documents starting with `{`.
#[derive(Parser)]
#[command(name = "axc", version)]
struct Cli {
    /// Dimension of the chart.
    #[arg(long, global = true)]
    dim: Option<usize>,
    /// Metric signature as a string of `+`/`-`, e.g. `+---`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    metric: Option<String>,
    /// Star center as comma-separated rationals.
    #[arg(long, global = true, allow_hyphen_values = true)]
    center: Option<String>,
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Op {
    D,
    Delta,
    #[value(name = "H")]
    BigH,
    #[value(name = "h")]
    SmallH,
    Star,
    StarInv,
    Eta,
    Dirac,
    Antidirac,
    Laplace,
    Antilaplace,
    Hbar,
}

#[derive(Clone, Copy, ValueEnum)]
enum Problem {
    Maxwell,
    MaxwellMagnetic,
    KalbRamond,
    DiracSource,
}

#[derive(Clone, Copy, ValueEnum)]
enum Classification {
    VacuumDirac,
}

#[derive(Subcommand)]
enum Command {
    /// Apply one operator.
    Apply {
        #[arg(long)]
        op: Op,
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Split a form into exact + antiexact or coexact + anticoexact parts.
    Decompose {
        #[arg(long, default_value = "exact")]
        mode: String,
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Membership test; the exit code carries the verdict.
    Member {
        #[arg(long)]
        space: String,
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Antiexact potential `H w` of a closed form.
    Potential {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Anticoexact copotential `h w` of a coclosed form.
    Copotential {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Run the randomized exact identity suite.
    Identities {
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 3)]
        max_degree: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Evaluate samples on one thread.
        #[arg(long)]
        sequential: bool,
    },
    /// Field-equation solvers.
    Solve {
        problem: Problem,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        approach: u8,
    },
    /// Classify a candidate solution.
    Classify {
        kind: Classification,
        #[arg(long)]
        alpha: PathBuf,
        #[arg(long)]
        beta: PathBuf,
        #[arg(long)]
        grade: usize,
    },
    /// Split a form into eigenvectors of `h delta - delta h`.
    Oscillator {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

/// Failure with its exit code.
struct Fail(u8, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotClosed | Error::NotCoclosed | Error::NoCopotential { .. } | Error::NotASolution { .. } => 1,
            Error::InconsistentSystem { .. } => 3,
            _ => 2,
        };
        Fail(code, e.to_string())
    }
}

fn input_error(msg: impl Into<String>) -> Fail {
    Fail(2, msg.into())
}

struct Env {
    dim: Option<usize>,
    metric: Option<String>,
    center: Option<String>,
    json: bool,
}

impl Env {
    fn context(&self) -> Result<Option<Context>, Fail> {
        let center = match &self.center {
            Some(c) => Some(
                c.split(',')
                    .map(|t| parse_rational(t.trim()))
                    .collect::<Result<Vec<_>, _>>()?,
            ),
            None => None,
        };
        let signature = match &self.metric {
            Some(m) => Some(Context::parse_metric(m)?),
            None => None,
        };
        let n = self
            .dim
            .or(signature.as_ref().map(Vec::len))
            .or(center.as_ref().map(Vec::len));
        let Some(n) = n else {
            return Ok(None);
        };
        let signature = signature.unwrap_or_else(|| vec![1; n]);
        let center = center.unwrap_or_else(|| vec![parse_rational("0").expect("literal"); n]);
        for len in [signature.len(), center.len()] {
            if len != n {
                return Err(Error::DimensionMismatch { expected: n, found: len }.into());
            }
        }
        Ok(Some(Context::new(center, signature)?))
    }

    fn read(&self, path: &Path) -> Result<(Context, Form), Fail> {
        let text = if path.as_os_str() == "-" {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| input_error(format!("stdin: {e}")))?;
            s
        } else {
            std::fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))?
        };
        let flags = self.context()?;
        if text.trim_start().starts_with('{') {
            let (ctx, form) = read_form(&text, &Context::euclidean(1))?;
            if let Some(f) = &flags {
                if f.dim() != ctx.dim() {
                    return Err(Error::DimensionMismatch {
                        expected: f.dim(),
                        found: ctx.dim(),
                    }
                    .into());
                }
            }
            Ok((ctx, form))
        } else {
            let ctx = flags.ok_or_else(|| input_error("text input needs --dim, --metric or --center"))?;
            Ok(read_form(&text, &ctx)?)
        }
    }

    fn form_out(&self, form: &Form, ctx: &Context) -> String {
        if self.json {
            axc_core::io::form_to_json(form, ctx)
        } else {
            format_form(form, ctx)
        }
    }

    fn json_form(form: &Form, ctx: &Context) -> serde_json::Value {
        serde_json::to_value(JsonForm::from_form(form, ctx)).expect("serializable")
    }
}

fn solve_options() -> Result<SolveOptions, Fail> {
    match std::env::var("AXC_MAX_DEGREE") {
        Ok(v) => {
            let bound = v
                .trim()
                .parse()
                .map_err(|_| input_error(format!("AXC_MAX_DEGREE must be a non-negative integer, got `{v}`")))?;
            Ok(SolveOptions {
                min_degree_bound: Some(bound),
            })
        }
        Err(_) => Ok(SolveOptions::default()),
    }
}

fn print_report(env: &Env, report: &SolveReport, ctx: &Context) {
    if env.json {
        println!("{}", report_to_json(report, ctx));
        return;
    }
    println!("problem: {}", report.problem);
    for (name, f) in &report.outputs {
        println!("{name} = {}", format_form(f, ctx));
    }
    for (name, f) in &report.residuals {
        println!("residual {name} = {}", format_form(f, ctx));
    }
    for note in &report.gauge_notes {
        println!("gauge: {note}");
    }
    println!("success: {}", report.success());
}

fn run(cli: Cli) -> Result<u8, Fail> {
    let env = Env {
        dim: cli.dim,
        metric: cli.metric,
        center: cli.center,
        json: cli.json,
    };
    match cli.command {
        Command::Apply { op, input } => {
            let (ctx, w) = env.read(&input)?;
            let out = match op {
                Op::D => w.d(),
                Op::Delta => ctx.delta(&w),
                Op::BigH => ctx.homotopy(&w),
                Op::SmallH => ctx.cohomotopy(&w),
                Op::Star => ctx.star(&w),
                Op::StarInv => ctx.star_inv(&w),
                Op::Eta => w.eta(),
                Op::Dirac => ctx.apply_operator(OperatorTag::Dirac, &w),
                Op::Antidirac => ctx.apply_operator(OperatorTag::AntiDirac, &w),
                Op::Laplace => ctx.apply_operator(OperatorTag::LaplaceBeltrami, &w),
                Op::Antilaplace => ctx.apply_operator(OperatorTag::AntiLaplace, &w),
                Op::Hbar => ctx.apply_operator(OperatorTag::OscillatorHbar, &w),
            };
            println!("{}", env.form_out(&out, &ctx));
            Ok(0)
        }
        Command::Decompose { mode, input } => {
            let mode: DecompositionMode = mode.parse()?;
            let (ctx, w) = env.read(&input)?;
            let parts = ctx.decompose(&w, mode);
            let (a, b) = match mode {
                DecompositionMode::ExactAntiexact => ("exact", "antiexact"),
                DecompositionMode::CoexactAnticoexact => ("coexact", "anticoexact"),
            };
            if env.json {
                let v = json!({
                    a: Env::json_form(&parts.first, &ctx),
                    b: Env::json_form(&parts.second, &ctx),
                });
                println!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
            } else {
                println!("{a}: {}", format_form(&parts.first, &ctx));
                println!("{b}: {}", format_form(&parts.second, &ctx));
            }
            Ok(0)
        }
        Command::Member { space, input } => {
            let tag: SpaceTag = space.parse()?;
            let (ctx, w) = env.read(&input)?;
            let verdict = ctx.is_member(&w, tag);
            if env.json {
                println!("{}", json!({ "space": tag.to_string(), "member": verdict }));
            } else {
                println!("{verdict}");
            }
            Ok(if verdict { 0 } else { 1 })
        }
        Command::Potential { input } => {
            let (ctx, w) = env.read(&input)?;
            println!("{}", env.form_out(&ctx.potential(&w)?, &ctx));
            Ok(0)
        }
        Command::Copotential { input } => {
            let (ctx, w) = env.read(&input)?;
            println!("{}", env.form_out(&ctx.copotential(&w)?, &ctx));
            Ok(0)
        }
        Command::Identities {
            samples,
            max_degree,
            seed,
            sequential,
        } => {
            let mut cfg = SuiteConfig {
                samples,
                max_degree,
                seed,
                exec: if sequential { Execution::Sequential } else { Execution::Parallel },
                ..SuiteConfig::default()
            };
            if let Some(n) = env.dim {
                if n == 0 || n > 8 {
                    return Err(input_error("identities supports --dim between 1 and 8"));
                }
                cfg.dims = vec![n];
            }
            let report = run_identity_suite(&cfg);
            if env.json {
                println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
            } else {
                print!("{}", report.render());
            }
            Ok(if report.all_passed() { 0 } else { 1 })
        }
        Command::Solve {
            problem,
            input,
            approach,
        } => {
            let (ctx, source) = env.read(&input)?;
            let opts = solve_options()?;
            let report = match problem {
                Problem::Maxwell => ctx.maxwell_solve(&source, &opts)?,
                Problem::MaxwellMagnetic => ctx.maxwell_solve_magnetic(&source, &opts)?,
                Problem::KalbRamond => ctx.kalb_ramond_solve(&source, &opts)?,
                Problem::DiracSource => ctx.dirac_source_solve(&source, approach, &opts)?,
            };
            print_report(&env, &report, &ctx);
            Ok(if report.success() { 0 } else { 1 })
        }
        Command::Classify {
            kind: Classification::VacuumDirac,
            alpha,
            beta,
            grade,
        } => {
            let (ctx, a) = env.read(&alpha)?;
            let (ctx_b, b) = env.read(&beta)?;
            if ctx_b != ctx {
                return Err(input_error("alpha and beta must share one chart"));
            }
            let res = ctx.vacuum_dirac_classify(&a, &b, grade)?;
            if env.json {
                let residuals: serde_json::Map<String, serde_json::Value> = res
                    .residuals
                    .iter()
                    .map(|(k, f)| (k.clone(), Env::json_form(f, &ctx)))
                    .collect();
                let checks: serde_json::Map<String, serde_json::Value> =
                    res.checks.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
                let v = json!({
                    "class": res.class.to_string(),
                    "failing": res.failing(),
                    "residuals": residuals,
                    "checks": checks,
                });
                println!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
            } else {
                println!("class: {}", res.class);
                for (name, f) in &res.residuals {
                    println!("residual {name} = {}", format_form(f, &ctx));
                }
                for (name, ok) in &res.checks {
                    println!("check {name}: {ok}");
                }
            }
            Ok(match res.class {
                VacuumDiracClass::NotASolution => 1,
                _ if res.checks.iter().all(|(_, ok)| *ok) => 0,
                _ => 1,
            })
        }
        Command::Oscillator { input } => {
            let (ctx, w) = env.read(&input)?;
            let rep = ctx.oscillator_eigencheck(&w)?;
            let eigen = rep.eigenvalue.map_or("none".to_string(), |e| format!("{e:+}"));
            if env.json {
                let v = json!({
                    "grade": rep.grade,
                    "eigenvalue": rep.eigenvalue,
                    "coexact": Env::json_form(&rep.coexact, &ctx),
                    "anticoexact": Env::json_form(&rep.anticoexact, &ctx),
                    "coexact_verified": rep.coexact_verified,
                    "anticoexact_verified": rep.anticoexact_verified,
                });
                println!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
            } else {
                println!("grade: {}", rep.grade);
                println!("coexact (eigenvalue -1): {}", format_form(&rep.coexact, &ctx));
                println!("anticoexact (eigenvalue +1): {}", format_form(&rep.anticoexact, &ctx));
                println!("verified: {}", rep.coexact_verified && rep.anticoexact_verified);
                println!("eigenvalue: {eigen}");
            }
            Ok(if rep.coexact_verified && rep.anticoexact_verified { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Fail(code, msg)) => {
            eprintln!("axc: {msg}");
            ExitCode::from(code)
        }
    }
}
