#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod input;
mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fracseries::laplace::{
    generalized_laplace_of, laplace_caputo, laplace_rl_derivative, laplace_rl_integral, laplace_shifted,
    laplace_standard, GeneralizedKind, LaplaceExpr,
};
use fracseries::leibniz::{compare_rule, LeibnizRule, DEFAULT_LEIBNIZ_TERMS};
use fracseries::operators::{caputo_extended, rl_differintegral};
use fracseries::quadrature::{caputo_quad, rl_derivative_quad, MIN_NODES};
use fracseries::series::{eval_frac_series_with, DEFAULT_TOL, DEFAULT_TRUNCATION};
use fracseries::worked::{run_examples, ExampleConfig};
use fracseries::{EvalResult, FracError, FracPowerSeries, Order, TaylorSeries};
use serde_json::json;

use input::{check_grid, parse_grid, Input};
use output::{fmt_num, fmt_value, Table};

#[derive(Debug)]
pub struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> CliError {
        CliError { code: 2, message: message.into() }
    }

    pub fn numerical(message: impl Into<String>) -> CliError {
        CliError { code: 3, message: message.into() }
    }
}

impl From<FracError> for CliError {
    fn from(e: FracError) -> CliError {
        let message = e.to_string();
        match e {
            FracError::Divergence { .. } | FracError::Singular(_) | FracError::NonConvergence { .. } => {
                CliError::numerical(message)
            }
            _ => CliError::usage(message),
        }
    }
}

#[derive(Parser)]
#[command(name = "fracseries", version, about = "Fractional differintegrals, product rules and Laplace transforms by series")]
struct Cli {
    /// Highest derivative kept when expanding non-polynomial functions.
    #[arg(long, global = true, default_value_t = DEFAULT_TRUNCATION)]
    trunc: usize,

    /// Relative tolerance of the series tail test.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a differintegral on a grid.
    Eval(EvalArgs),
    /// Compare a fractional product rule with the direct derivative of f*g.
    Leibniz(LeibnizArgs),
    /// Print the Laplace transform of f or of one of its differintegrals.
    Laplace(LaplaceArgs),
    /// Check series values against Gauss-Jacobi quadrature.
    Oracle(OracleArgs),
    /// Run the three worked examples against their closed forms.
    Examples(ExamplesArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Definition {
    Rl,
    Caputo,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Args)]
struct Common {
    /// Function in the catalog grammar (e.g. `poly:0,1+exp:2`) or `@file.json`.
    f: String,

    /// Order; negative values are integrals.
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.5)]
    alpha: f64,

    /// Lower terminal (defaults to the center of a JSON input, else 0).
    #[arg(long, allow_negative_numbers = true)]
    a: Option<f64>,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    common: Common,

    #[arg(long, value_enum, default_value = "rl")]
    def: Definition,

    /// Evaluation points as lo:hi:count.
    #[arg(long, allow_hyphen_values = true, default_value = "0.5:2:4")]
    grid: String,

    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct LeibnizArgs {
    #[command(flatten)]
    common: Common,

    /// Second factor.
    g: String,

    /// Evaluation point, right of the terminal.
    #[arg(long, allow_negative_numbers = true)]
    t: f64,

    #[arg(long, value_enum, default_value = "corrected")]
    rule: RuleArg,

    /// Cap on the number of product-rule terms for non-polynomial f.
    #[arg(long, default_value_t = DEFAULT_LEIBNIZ_TERMS)]
    terms: usize,

    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RuleArg {
    Rl,
    Wrong,
    Corrected,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LaplaceOp {
    Series,
    RlInt,
    Caputo,
    RlDer,
    Generalized,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Plain,
    RlInt,
    Caputo,
}

#[derive(Args)]
struct LaplaceArgs {
    #[command(flatten)]
    common: Common,

    #[arg(long, value_enum, default_value = "series")]
    op: LaplaceOp,

    /// Operator inside the generalized transform.
    #[arg(long, value_enum, default_value = "plain")]
    kind: KindArg,

    /// Also evaluate the transform at this s.
    #[arg(long)]
    at: Option<f64>,

    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    common: Common,

    #[arg(long, value_enum, default_value = "rl")]
    def: Definition,

    #[arg(long, allow_hyphen_values = true, default_value = "0.5:2:4")]
    grid: String,

    /// Starting node count for the doubling sequence.
    #[arg(long, default_value_t = MIN_NODES)]
    nodes: usize,

    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct ExamplesArgs {
    /// Orders to run, comma separated.
    #[arg(long, value_delimiter = ',')]
    alpha: Vec<f64>,

    /// Use the uncorrected Caputo product rule.
    #[arg(long)]
    wrong_rule: bool,

    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

fn operator_series(f: &TaylorSeries, ord: Order, def: Definition) -> FracPowerSeries {
    match def {
        Definition::Rl => rl_differintegral(f, ord),
        Definition::Caputo => caputo_extended(f, ord),
    }
}

fn cmd_eval(args: &EvalArgs, trunc: usize, tol: f64) -> Result<String, CliError> {
    let input = Input::load(&args.common.f)?;
    let a = input.center(args.common.a);
    let ord = Order::new(args.common.alpha)?;
    let grid = parse_grid(&args.grid)?;
    check_grid(&grid, a)?;
    let f = input.taylor(a, trunc)?;
    let s = operator_series(&f, ord, args.def);
    let values = grid
        .iter()
        .map(|&t| eval_frac_series_with(&s, t, tol))
        .collect::<Result<Vec<EvalResult>, _>>()?;
    Ok(match args.format {
        Format::Json => {
            let rows: Vec<_> = grid.iter().zip(&values).map(|(t, v)| json!({ "t": t, "value": v })).collect();
            serde_json::to_string_pretty(&rows).expect("serializable") + "\n"
        }
        fmt => {
            let mut table = Table::new(&["t", "value"]);
            for (t, v) in grid.iter().zip(&values) {
                table.row(vec![fmt_num(*t), fmt_value(v)]);
            }
            table.render(fmt == Format::Csv)
        }
    })
}

fn cmd_leibniz(args: &LeibnizArgs, trunc: usize) -> Result<String, CliError> {
    let f = Input::load(&args.common.f)?;
    let g = Input::load(&args.g)?;
    let a = args.common.a.unwrap_or_else(|| g.center(None));
    let ord = Order::new(args.common.alpha)?;
    let rule = match args.rule {
        RuleArg::Rl => LeibnizRule::Rl,
        RuleArg::Wrong => LeibnizRule::Wrong,
        RuleArg::Corrected => LeibnizRule::Corrected,
    };
    let f_a = f.taylor(a, trunc)?;
    let f_t = f.taylor_about(a, args.t, trunc)?;
    let g_a = g.taylor(a, trunc)?;
    let report = compare_rule(rule, &f_a, &f_t, &g_a, ord, args.t, args.terms)?;
    Ok(match args.format {
        Format::Json => serde_json::to_string_pretty(&json!({
            "alpha": ord.alpha,
            "a": a,
            "t": args.t,
            "report": report,
        }))
        .expect("serializable") + "\n",
        fmt => {
            let mut table = Table::new(&["field", "value"]);
            let name = serde_json::to_value(report.rule).expect("serializable");
            table.row(vec!["rule".into(), name.as_str().unwrap_or_default().to_string()]);
            table.row(vec!["alpha".into(), fmt_num(ord.alpha)]);
            table.row(vec!["a".into(), fmt_num(a)]);
            table.row(vec!["t".into(), fmt_num(args.t)]);
            table.row(vec!["rule_value".into(), fmt_value(&report.rule_value)]);
            table.row(vec!["reference".into(), fmt_value(&report.reference_value)]);
            table.row(vec!["residual".into(), fmt_num(report.residual)]);
            table.row(vec!["R1".into(), fmt_num(report.correction_value)]);
            table.row(vec!["terms".into(), report.terms_used.to_string()]);
            table.render(fmt == Format::Csv)
        }
    })
}

fn laplace_expr(args: &LaplaceArgs, trunc: usize) -> Result<LaplaceExpr, CliError> {
    let input = Input::load(&args.common.f)?;
    let a = input.center(args.common.a);
    let alpha = args.common.alpha;
    let src = input.source(a, trunc)?;
    let src = src.as_ref();
    if args.op == LaplaceOp::Generalized {
        let kind = match args.kind {
            KindArg::Plain => GeneralizedKind::Plain,
            KindArg::RlInt => GeneralizedKind::RlIntegral(alpha),
            KindArg::Caputo => GeneralizedKind::Caputo(alpha),
        };
        return Ok(generalized_laplace_of(src, kind)?);
    }
    if args.op == LaplaceOp::Series || a == 0.0 {
        return Ok(match args.op {
            LaplaceOp::Series => laplace_standard(src)?,
            LaplaceOp::RlInt => laplace_rl_integral(src, alpha)?,
            LaplaceOp::Caputo => laplace_caputo(src, Order::new(alpha)?)?,
            LaplaceOp::RlDer => laplace_rl_derivative(src, Order::new(alpha)?)?,
            LaplaceOp::Generalized => unreachable!(),
        });
    }
    if a > 0.0 {
        return Err(CliError::usage(format!(
            "the standard transform needs a <= 0, got a = {a}; use --op generalized"
        )));
    }
    if input.has_fractional_power() {
        return Err(CliError::usage("shifted transforms of fractional powers are not supported; use --op generalized"));
    }
    let f = input.taylor(a, trunc)?;
    Ok(match args.op {
        LaplaceOp::RlInt => {
            if !(alpha > 0.0) {
                return Err(FracError::InvalidParameter(format!("integral order must be positive, got {alpha}")).into());
            }
            laplace_shifted(&f, Order::new(-alpha)?)?
        }
        LaplaceOp::Caputo => laplace_standard(&caputo_extended(&f, Order::new(alpha)?))?,
        _ => laplace_shifted(&f, Order::new(alpha)?)?,
    })
}

fn cmd_laplace(args: &LaplaceArgs, trunc: usize) -> Result<String, CliError> {
    let expr = laplace_expr(args, trunc)?;
    let value = match args.at {
        Some(s) => {
            if let Some(reason) = &expr.singular {
                return Err(CliError::numerical(format!("transform is singular ({reason}); cannot evaluate at s = {s}")));
            }
            Some(expr.eval(s)?)
        }
        None => None,
    };
    Ok(match args.format {
        Format::Json => {
            let mut out = json!({ "rendered": expr.to_string(), "expr": expr });
            if let (Some(s), Some(v)) = (args.at, value) {
                out["s"] = json!(s);
                out["value"] = json!(v);
            }
            serde_json::to_string_pretty(&out).expect("serializable") + "\n"
        }
        Format::Csv => {
            let mut table = Table::new(&["expr", "s", "value"]);
            let (s, v) = match (args.at, value) {
                (Some(s), Some(v)) => (fmt_num(s), fmt_num(v)),
                _ => (String::new(), String::new()),
            };
            table.row(vec![expr.to_string(), s, v]);
            table.render(true)
        }
        Format::Text => match (args.at, value) {
            (Some(s), Some(v)) => format!("{expr}\nF({s}) = {}\n", fmt_num(v)),
            _ => format!("{expr}\n"),
        },
    })
}

fn cmd_oracle(args: &OracleArgs, trunc: usize, tol: f64) -> Result<String, CliError> {
    let input = Input::load(&args.common.f)?;
    let a = input.center(args.common.a);
    let ord = Order::new(args.common.alpha)?;
    let grid = parse_grid(&args.grid)?;
    check_grid(&grid, a)?;
    if let Some(t) = grid.iter().find(|&&t| t == a) {
        return Err(CliError::usage(format!("oracle needs t > a, got t = {t}")));
    }
    let f = input.taylor(a, trunc)?;
    let s = operator_series(&f, ord, args.def);
    let mut rows = Vec::new();
    for &t in &grid {
        let series = eval_frac_series_with(&s, t, tol)?.expect_finite()?;
        let q = match args.def {
            Definition::Rl => rl_derivative_quad(&f, ord, t, args.nodes)?,
            Definition::Caputo => caputo_quad(&f, ord, t, args.nodes)?,
        };
        rows.push((t, series, q));
    }
    Ok(match args.format {
        Format::Json => {
            let rows: Vec<_> = rows
                .iter()
                .map(|(t, s, q)| json!({ "t": t, "series": s, "quadrature": q, "abs_diff": (s - q.value).abs() }))
                .collect();
            serde_json::to_string_pretty(&rows).expect("serializable") + "\n"
        }
        fmt => {
            let mut table = Table::new(&["t", "series", "quadrature", "abs_diff", "estimate", "nodes"]);
            for (t, s, q) in &rows {
                table.row(vec![
                    fmt_num(*t),
                    fmt_num(*s),
                    fmt_num(q.value),
                    fmt_num((s - q.value).abs()),
                    fmt_num(q.estimate),
                    q.nodes.to_string(),
                ]);
            }
            table.render(fmt == Format::Csv)
        }
    })
}

fn cmd_examples(args: &ExamplesArgs) -> Result<(String, bool), CliError> {
    let mut cfg = ExampleConfig { wrong_rule: args.wrong_rule, ..Default::default() };
    if !args.alpha.is_empty() {
        cfg.alphas = args.alpha.clone();
    }
    let outcomes = run_examples(&cfg)?;
    let passed = outcomes.iter().filter(|o| o.passed).count();
    let all = passed == outcomes.len();
    let text = match args.format {
        Format::Json => serde_json::to_string_pretty(&json!({ "config": cfg, "examples": outcomes })).expect("serializable") + "\n",
        Format::Csv => {
            let mut table = Table::new(&["example", "passed", "max_residual", "max_gap", "title"]);
            for o in &outcomes {
                table.row(vec![
                    o.id.to_string(),
                    o.passed.to_string(),
                    fmt_num(o.max_residual),
                    fmt_num(o.max_gap),
                    o.title.to_string(),
                ]);
            }
            table.render(true)
        }
        Format::Text => {
            let mut out = String::new();
            for o in &outcomes {
                out += &format!(
                    "example {} {}  {}  max residual {:.3e}  max gap {:.3e}\n",
                    o.id,
                    if o.passed { "PASS" } else { "FAIL" },
                    o.title,
                    o.max_residual,
                    o.max_gap
                );
                if !o.passed {
                    let notes: Vec<&str> = o.detail.split("; ").collect();
                    for note in notes.iter().take(3) {
                        out += &format!("  {note}\n");
                    }
                    if notes.len() > 3 {
                        out += &format!("  ... {} more\n", notes.len() - 3);
                    }
                }
            }
            out + &format!("{passed}/{} examples passed\n", outcomes.len())
        }
    };
    Ok((text, all))
}

fn run(cli: &Cli) -> Result<(String, bool), CliError> {
    if cli.trunc == 0 {
        return Err(CliError::usage("--trunc must be at least 1"));
    }
    if !(cli.tol > 0.0) {
        return Err(CliError::usage("--tol must be positive"));
    }
    match &cli.command {
        Command::Eval(args) => cmd_eval(args, cli.trunc, cli.tol).map(|s| (s, true)),
        Command::Leibniz(args) => cmd_leibniz(args, cli.trunc).map(|s| (s, true)),
        Command::Laplace(args) => cmd_laplace(args, cli.trunc).map(|s| (s, true)),
        Command::Oracle(args) => cmd_oracle(args, cli.trunc, cli.tol).map(|s| (s, true)),
        Command::Examples(args) => cmd_examples(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((text, ok)) => {
            print!("{text}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
