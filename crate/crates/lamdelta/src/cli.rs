//! Command-line front end.
//!
//! Exit codes are a stable contract for scripting: 0 success, 1 user error
//! (parse or type errors, `eq` deciding "not equal"), 2 resource or
//! mismatch (fuel exhaustion, `eq` on terms of different types).

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use lambda_delta::ast::{Context, Term};
use lambda_delta::hereditary::{decide_eq, norm, ctype, EqError, NormError};
use lambda_delta::reduction::{reduce_to_nf, trace_to_nf, ReduceError, Trace, TraceOutcome};
use lambda_delta::typing::{check_context, infer};

use crate::deffile::{expand, parse_deffile};
use crate::gen::{gen_term, gen_type, GenConfig};
use crate::suite::{run_suite, DEFAULT_CASES, DEFAULT_FUEL};
use crate::syntax::{parse_context, parse_term, parse_type, print_type};

#[derive(Parser)]
#[command(
    name = "lamdelta",
    about = "Type checker, reducer and hereditary-substitution normalizer for the lambda-delta calculus",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    /// Normalize through hereditary substitution.
    Hs,
    /// Normalize through the small-step reducer.
    Step,
}

#[derive(Subcommand)]
enum Cmd {
    /// Type-check a definition file or an expression
    Check {
        /// Definition file to check
        file: Option<PathBuf>,
        /// Inline expression instead of a file
        #[arg(short = 'e', long = "expr")]
        expr: Option<String>,
        /// Context for free variables, e.g. "x:b, y:b -> b"
        #[arg(long, default_value = "")]
        ctx: String,
        /// Print types with negation sugar
        #[arg(long)]
        sugar: bool,
    },
    /// Normalize a definition file or an expression
    Norm {
        file: Option<PathBuf>,
        #[arg(short = 'e', long = "expr")]
        expr: Option<String>,
        #[arg(long, value_enum, default_value_t = Method::Hs)]
        method: Method,
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: usize,
        #[arg(long, default_value = "")]
        ctx: String,
    },
    /// Print every reduction step to normal form
    Trace {
        file: Option<PathBuf>,
        #[arg(short = 'e', long = "expr")]
        expr: Option<String>,
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: usize,
        #[arg(long, default_value = "")]
        ctx: String,
    },
    /// Decide equality of two expressions of the same type
    Eq {
        left: String,
        right: String,
        #[arg(long, default_value = "")]
        ctx: String,
    },
    /// Evaluate ctype: the type of a head-normal application spine
    Ctype {
        /// The cut type, e.g. "(b->b)->(b->b)"
        cut: String,
        /// The head variable
        var: String,
        /// The spine expression
        expr: String,
        #[arg(long)]
        sugar: bool,
    },
    /// Run the lemma property suite
    Selftest {
        #[arg(long, value_parser = parse_seed, default_value = "0xC0FFEE")]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_CASES)]
        cases: usize,
        #[arg(long = "max-size", default_value_t = 30)]
        max_size: usize,
    },
    /// Print random well-typed terms
    Gen {
        #[arg(long, value_parser = parse_seed, default_value = "0xC0FFEE")]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        count: usize,
        /// Goal type; random when omitted
        #[arg(long)]
        goal: Option<String>,
        #[arg(long, default_value = "")]
        ctx: String,
        #[arg(long = "max-size", default_value_t = 30)]
        max_size: usize,
    },
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.map_err(|_| format!("invalid seed `{s}`"))
}

struct Failure {
    message: String,
    code: i32,
    /// Output produced before the failure (partial traces, the selftest
    /// report); still written to stdout.
    partial: String,
}

fn user(message: impl Into<String>) -> Failure {
    Failure {
        message: message.into(),
        code: 1,
        partial: String::new(),
    }
}

fn resource(message: impl Into<String>) -> Failure {
    Failure {
        message: message.into(),
        code: 2,
        partial: String::new(),
    }
}

/// Parses argv and runs one command, writing regular output to `out` and
/// diagnostics to `err`; returns the exit code.
pub fn run<W: Write, E: Write>(
    args: impl IntoIterator<Item = String>,
    out: &mut W,
    err: &mut E,
) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{e}");
                    1
                }
            }
        }
    };
    match dispatch(cli.cmd) {
        Ok(output) => {
            let _ = out.write_all(output.as_bytes());
            0
        }
        Err(Failure {
            message,
            code,
            partial,
        }) => {
            let _ = out.write_all(partial.as_bytes());
            let _ = writeln!(err, "{message}");
            code
        }
    }
}

fn dispatch(cmd: Cmd) -> Result<String, Failure> {
    match cmd {
        Cmd::Check {
            file,
            expr,
            ctx,
            sugar,
        } => cmd_check(&input(file, expr)?, &context(&ctx)?, sugar),
        Cmd::Norm {
            file,
            expr,
            method,
            fuel,
            ctx,
        } => cmd_norm(&input(file, expr)?, &context(&ctx)?, method, fuel),
        Cmd::Trace {
            file,
            expr,
            fuel,
            ctx,
        } => cmd_trace(&input(file, expr)?, &context(&ctx)?, fuel),
        Cmd::Eq { left, right, ctx } => cmd_eq(&left, &right, &context(&ctx)?),
        Cmd::Ctype {
            cut,
            var,
            expr,
            sugar,
        } => cmd_ctype(&cut, &var, &expr, sugar),
        Cmd::Selftest {
            seed,
            cases,
            max_size,
        } => cmd_selftest(seed, cases, max_size),
        Cmd::Gen {
            seed,
            count,
            goal,
            ctx,
            max_size,
        } => cmd_gen(seed, count, goal.as_deref(), &context(&ctx)?, max_size),
    }
}

/// The resolved input of check/norm/trace: named definitions from a file,
/// or one anonymous inline expression.
enum Input {
    Defs(Vec<(String, Term)>, Vec<(String, Option<lambda_delta::ast::Type>)>),
    Expr(Term),
}

fn input(file: Option<PathBuf>, expr: Option<String>) -> Result<Input, Failure> {
    match (file, expr) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| user(format!("cannot read {}: {e}", path.display())))?;
            let parsed = parse_deffile(&text).map_err(|e| user(e.to_string()))?;
            let defs = expand(&parsed);
            let bodies = defs.iter().map(|d| (d.name.clone(), d.body.clone())).collect();
            let ascriptions = defs
                .iter()
                .map(|d| (d.name.clone(), d.ascription.clone()))
                .collect();
            Ok(Input::Defs(bodies, ascriptions))
        }
        (None, Some(text)) => Ok(Input::Expr(
            parse_term(&text).map_err(|e| user(e.to_string()))?,
        )),
        (None, None) => Err(user("no input: pass a file or -e <expr>")),
        (Some(_), Some(_)) => Err(user("pass either a file or -e <expr>, not both")),
    }
}

fn context(text: &str) -> Result<Context, Failure> {
    let ctx = parse_context(text).map_err(|e| user(format!("--ctx: {e}")))?;
    check_context(&ctx).map_err(|e| user(format!("--ctx: {e}")))?;
    Ok(ctx)
}

fn cmd_check(input: &Input, ctx: &Context, sugar: bool) -> Result<String, Failure> {
    let mut out = String::new();
    match input {
        Input::Expr(t) => {
            let ty = infer(ctx, t).map_err(|e| user(e.to_string()))?;
            let _ = writeln!(out, "{}", print_type(&ty, sugar));
        }
        Input::Defs(defs, ascriptions) => {
            for ((name, body), (_, ascription)) in defs.iter().zip(ascriptions) {
                let ty = infer(ctx, body)
                    .map_err(|e| user(format!("in definition `{name}`: {e}")))?;
                if let Some(want) = ascription {
                    if want != &ty {
                        return Err(user(format!(
                            "definition `{name}` is ascribed `{}` but has type `{}`",
                            print_type(want, sugar),
                            print_type(&ty, sugar)
                        )));
                    }
                }
                let _ = writeln!(out, "{name} : {}", print_type(&ty, sugar));
            }
        }
    }
    Ok(out)
}

fn cmd_norm(input: &Input, ctx: &Context, method: Method, fuel: usize) -> Result<String, Failure> {
    let items: Vec<(Option<&str>, &Term)> = match input {
        Input::Expr(t) => vec![(None, t)],
        Input::Defs(defs, _) => defs.iter().map(|(n, t)| (Some(n.as_str()), t)).collect(),
    };
    let mut out = String::new();
    for (name, term) in items {
        infer(ctx, term).map_err(|e| match name {
            Some(n) => user(format!("in definition `{n}`: {e}")),
            None => user(e.to_string()),
        })?;
        let nf = match method {
            Method::Hs => norm(ctx, term).map_err(|e| match e {
                NormError::TypingRequired(e) => user(e.to_string()),
                NormError::Hs(e) => user(e.to_string()),
            })?,
            Method::Step => reduce_to_nf(term, fuel).map_err(|e| match e {
                ReduceError::FuelExhausted { last } => {
                    resource(format!("fuel exhausted; last term: {last}"))
                }
                ReduceError::Stuck { last } => user(format!("stuck non-normal term: {last}")),
            })?,
        };
        match name {
            Some(n) => {
                let _ = writeln!(out, "{n} = {nf}");
            }
            None => {
                let _ = writeln!(out, "{nf}");
            }
        }
    }
    Ok(out)
}

fn render_trace(out: &mut String, trace: &Trace) {
    for (i, step) in trace.steps.iter().enumerate() {
        let path = if step.path.is_empty() {
            ".".to_string()
        } else {
            step.path
                .iter()
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join(".")
        };
        let _ = writeln!(out, "{} {} {} -> {}", i + 1, step.rule, path, step.result);
    }
}

fn cmd_trace(input: &Input, _ctx: &Context, fuel: usize) -> Result<String, Failure> {
    let items: Vec<(Option<&str>, &Term)> = match input {
        Input::Expr(t) => vec![(None, t)],
        Input::Defs(defs, _) => defs.iter().map(|(n, t)| (Some(n.as_str()), t)).collect(),
    };
    let mut out = String::new();
    for (name, term) in items {
        if let Some(n) = name {
            let _ = writeln!(out, "== {n}");
        }
        let (trace, outcome) = trace_to_nf(term, fuel);
        match outcome {
            TraceOutcome::Normal => {
                if trace.steps.is_empty() {
                    let _ = writeln!(out, "already normal");
                } else {
                    render_trace(&mut out, &trace);
                }
            }
            TraceOutcome::FuelExhausted => {
                render_trace(&mut out, &trace);
                return Err(Failure {
                    message: format!("fuel exhausted after {} steps", trace.steps.len()),
                    code: 2,
                    partial: out,
                });
            }
            TraceOutcome::Stuck => {
                render_trace(&mut out, &trace);
                return Err(Failure {
                    message: format!(
                        "stuck: `{}` has no redex but is not normal (ill-typed input)",
                        trace.end
                    ),
                    code: 1,
                    partial: out,
                });
            }
        }
    }
    Ok(out)
}

fn cmd_eq(left: &str, right: &str, ctx: &Context) -> Result<String, Failure> {
    let t1 = parse_term(left).map_err(|e| user(e.to_string()))?;
    let t2 = parse_term(right).map_err(|e| user(e.to_string()))?;
    match decide_eq(ctx, &t1, &t2) {
        Ok(true) => Ok("equal\n".to_string()),
        Ok(false) => Err(user("not equal")),
        Err(EqError::TypeMismatch { left, right }) => Err(resource(format!(
            "type mismatch: `{left}` vs `{right}`"
        ))),
        Err(EqError::Norm(e)) => Err(user(e.to_string())),
    }
}

fn cmd_ctype(cut: &str, var: &str, expr: &str, sugar: bool) -> Result<String, Failure> {
    let cut = parse_type(cut).map_err(|e| user(format!("cut type: {e}")))?;
    let term = parse_term(expr).map_err(|e| user(e.to_string()))?;
    Ok(match ctype(&cut, var, &term) {
        Some(ty) => format!("{}\n", print_type(&ty, sugar)),
        None => "undefined\n".to_string(),
    })
}

fn cmd_selftest(seed: u64, cases: usize, max_size: usize) -> Result<String, Failure> {
    let cfg = GenConfig {
        seed,
        max_term_size: max_size,
        ..GenConfig::default()
    };
    let result = run_suite(&cfg, cases);
    let rendered = result.render();
    if result.passed() {
        Ok(rendered)
    } else {
        Err(Failure {
            message: "selftest failed".to_string(),
            code: 1,
            partial: rendered,
        })
    }
}

fn cmd_gen(
    seed: u64,
    count: usize,
    goal: Option<&str>,
    ctx: &Context,
    max_size: usize,
) -> Result<String, Failure> {
    let cfg = GenConfig {
        seed,
        max_term_size: max_size,
        ..GenConfig::default()
    };
    let goal_ty = goal
        .map(|g| parse_type(g).map_err(|e| user(format!("--goal: {e}"))))
        .transpose()?;
    let mut out = String::new();
    let mut produced = 0usize;
    let mut attempt = 0u64;
    while produced < count && attempt < (count as u64) * 32 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt));
        attempt += 1;
        let ty = match &goal_ty {
            Some(t) => t.clone(),
            None => gen_type(&cfg, &mut rng),
        };
        if let Ok(t) = gen_term(&cfg, &mut rng, ctx, &ty, max_size) {
            let _ = writeln!(out, "{t} : {ty}");
            produced += 1;
        }
    }
    if produced < count {
        return Err(Failure {
            message: format!(
                "gave up after generating {produced} of {count} terms; the goal may be uninhabited in this context"
            ),
            code: 1,
            partial: out,
        });
    }
    Ok(out)
}
