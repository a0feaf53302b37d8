//! Command-line front end: classify fusion rules, check associators against
//! all three pentagon formulations, enumerate candidates over finite
//! fields, test gauge equivalence, and print the classification table.
//!
//! Exit codes: 0 completed, 1 verification failed, 2 usage error,
//! 3 search budget exceeded.

use clap::{Parser, Subcommand, ValueEnum};
use fusion2::gauge::{are_equivalent, EquivalenceVerdict, Strategy};
use fusion2::pentagon::{
    check_ass4, check_biedenharn_elliot, check_block_system, AssociatorData,
};
use fusion2::scalar::FieldSpec;
use fusion2::solver::{
    brute_force_search, classify, nonexistence_certificate, table_report, BruteError,
    BruteForceOptions,
};
use fusion2::FusionRule;
use std::fmt::Write as _;
use std::io::Write as _;
use std::process::ExitCode;


// ignore broken pipes so that piping into head works
macro_rules! emit {
    ($($arg:tt)*) => {
        let _ = writeln!(std::io::stdout(), $($arg)*);
    };
}

macro_rules! emit_raw {
    ($($arg:tt)*) => {
        let _ = write!(std::io::stdout(), $($arg)*);
    };
}

const EXIT_OK: u8 = 0;
const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(
    name = "fusion2",
    about = "Exact classification toolkit for rank-two tensor categories",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify associators for a fusion rule over a field.
    Classify {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        /// Field spec: Q, F5, Q[t^2=5], F2[t^2+t+1], ...
        #[arg(long)]
        field: String,
        #[arg(long)]
        json: bool,
        /// Also emit the nonexistence certificate when one applies.
        #[arg(long)]
        certificate: bool,
    },
    /// Check an associator file against all three pentagon formulations.
    Check {
        /// JSON file with {rule, field, lambda1, lambda2}.
        #[arg(long)]
        associator: String,
        #[arg(long)]
        json: bool,
    },
    /// Enumerate all candidates over a finite field.
    Solve {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        field: String,
        /// Candidate budget; FUSION2_BUDGET overrides the default.
        #[arg(long)]
        budget: Option<u128>,
        #[arg(long)]
        include_singular: bool,
        #[arg(long)]
        json: bool,
    },
    /// Test gauge equivalence of two associator files.
    GaugeEquiv {
        a: String,
        b: String,
        #[arg(long, value_enum, default_value_t = StrategyArg::Exhaustive)]
        strategy: StrategyArg,
        #[arg(long)]
        json: bool,
    },
    /// Print the classification table over a field.
    Table {
        #[arg(long)]
        field: String,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Exhaustive,
    ParametricScaling,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Classify {
            m,
            n,
            field,
            json,
            certificate,
        } => cmd_classify(m, n, &field, json, certificate),
        Command::Check { associator, json } => cmd_check(&associator, json),
        Command::Solve {
            m,
            n,
            field,
            budget,
            include_singular,
            json,
        } => cmd_solve(m, n, &field, budget, include_singular, json),
        Command::GaugeEquiv {
            a,
            b,
            strategy,
            json,
        } => cmd_gauge_equiv(&a, &b, strategy, json),
        Command::Table { field, json } => cmd_table(&field, json),
    };
    ExitCode::from(code)
}

fn usage_error(msg: impl std::fmt::Display) -> u8 {
    eprintln!("error: {msg}");
    EXIT_USAGE
}

fn parse_field(s: &str) -> Result<FieldSpec, u8> {
    FieldSpec::parse(s).map_err(|e| usage_error(e))
}

fn parse_rule(m: usize, n: usize) -> Result<FusionRule, u8> {
    FusionRule::new(m, n).map_err(|e| usage_error(e))
}

fn read_associator(path: &str) -> Result<AssociatorData, u8> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage_error(format!("cannot read {path}: {e}")))?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| {
        usage_error(format!(
            "{path}: invalid JSON at line {}, column {}: {e}",
            e.line(),
            e.column()
        ))
    })?;
    AssociatorData::from_json(&value).map_err(|e| usage_error(format!("{path}: {e}")))
}

fn cmd_classify(m: usize, n: usize, field: &str, json: bool, with_cert: bool) -> u8 {
    let field = match parse_field(field) {
        Ok(f) => f,
        Err(c) => return c,
    };
    let rule = match parse_rule(m, n) {
        Ok(r) => r,
        Err(c) => return c,
    };
    let cls = classify(rule, &field);
    let cert = if with_cert {
        nonexistence_certificate(rule).ok()
    } else {
        None
    };
    if json {
        let mut v = cls.to_json();
        if let Some(cert) = cert {
            v["certificate"] = cert.to_json();
        }
        emit!("{}", serde_json::to_string_pretty(&v).unwrap());
    } else {
        emit_raw!("{cls}");
        if let Some(cert) = cert {
            emit!("certificate ({} steps):", cert.steps.len());
            for step in &cert.steps {
                emit!("  [{}] {}: {}", step.kind, step.name, step.statement);
            }
        }
    }
    EXIT_OK
}

fn cmd_check(path: &str, json: bool) -> u8 {
    let data = match read_associator(path) {
        Ok(d) => d,
        Err(c) => return c,
    };
    let mut out = String::new();
    let mut all_ok = true;

    let invertible = data.is_invertible();
    let mut ass4 = Vec::new();
    for i1 in 1..=2u8 {
        for i2 in 1..=2u8 {
            for i3 in 1..=2u8 {
                for i4 in 1..=2u8 {
                    let idx = [i1 as usize, i2 as usize, i3 as usize, i4 as usize];
                    let r = check_ass4(&data, idx);
                    all_ok &= r.holds;
                    ass4.push((idx, r.holds));
                }
            }
        }
    }
    let mut recoupling = Vec::new();
    for j0 in 1..=2u8 {
        for j5 in 1..=2u8 {
            for j6 in 1..=2u8 {
                for j7 in 1..=2u8 {
                    for j8 in 1..=2u8 {
                        let idx = [
                            j0 as usize,
                            j5 as usize,
                            j6 as usize,
                            j7 as usize,
                            j8 as usize,
                        ];
                        let r = check_biedenharn_elliot(&data, idx);
                        all_ok &= r.holds;
                        recoupling.push((idx, r.holds));
                    }
                }
            }
        }
    }
    let blocks = check_block_system(&data);
    all_ok &= blocks.all_hold();

    if json {
        let v = serde_json::json!({
            "rule": {"m": data.rule().m(), "n": data.rule().n()},
            "field": data.field().to_string(),
            "invertible": invertible,
            "coherence": ass4.iter().map(|(idx, ok)| serde_json::json!({
                "indices": idx, "holds": ok,
            })).collect::<Vec<_>>(),
            "recoupling": recoupling.iter().map(|(idx, ok)| serde_json::json!({
                "indices": idx, "holds": ok,
            })).collect::<Vec<_>>(),
            "block_system": blocks.equations.iter().map(|e| serde_json::json!({
                "equation": e.label, "holds": e.holds,
            })).collect::<Vec<_>>(),
            "all_hold": all_ok,
        });
        emit!("{}", serde_json::to_string_pretty(&v).unwrap());
    } else {
        let _ = writeln!(
            out,
            "associator for rule {} over {} ({})",
            data.rule(),
            data.field(),
            if invertible { "invertible" } else { "singular" }
        );
        let passed = |v: &[( [usize; 4], bool)]| v.iter().filter(|(_, ok)| *ok).count();
        let _ = writeln!(
            out,
            "  four-factor coherence: {}/{} index tuples hold",
            passed(&ass4),
            ass4.len()
        );
        for (idx, _) in ass4.iter().filter(|(_, ok)| !ok) {
            let _ = writeln!(out, "    FAIL at {idx:?}");
        }
        let rec_passed = recoupling.iter().filter(|(_, ok)| *ok).count();
        let _ = writeln!(
            out,
            "  recoupling identity: {}/{} index tuples hold",
            rec_passed,
            recoupling.len()
        );
        for (idx, _) in recoupling.iter().filter(|(_, ok)| !ok) {
            let _ = writeln!(out, "    FAIL at {idx:?}");
        }
        let blocks_passed = blocks.equations.iter().filter(|e| e.holds).count();
        let _ = writeln!(
            out,
            "  block system: {}/{} equations hold",
            blocks_passed,
            blocks.equations.len()
        );
        for e in &blocks.equations {
            let _ = writeln!(
                out,
                "    ({}) {}",
                e.label,
                if e.holds { "ok" } else { "FAIL" }
            );
        }
        let _ = writeln!(out, "verdict: {}", if all_ok { "PASS" } else { "FAIL" });
        emit_raw!("{out}");
    }
    if all_ok {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}

fn cmd_solve(
    m: usize,
    n: usize,
    field: &str,
    budget: Option<u128>,
    include_singular: bool,
    json: bool,
) -> u8 {
    let field = match parse_field(field) {
        Ok(f) => f,
        Err(c) => return c,
    };
    let rule = match parse_rule(m, n) {
        Ok(r) => r,
        Err(c) => return c,
    };
    let mut opts = BruteForceOptions {
        include_singular,
        ..Default::default()
    };
    if let Ok(env_budget) = std::env::var("FUSION2_BUDGET") {
        match env_budget.parse() {
            Ok(b) => opts.budget = b,
            Err(_) => return usage_error("FUSION2_BUDGET must be an integer"),
        }
    }
    if let Some(b) = budget {
        opts.budget = b;
    }
    let report = match brute_force_search(rule, &field, &opts) {
        Ok(r) => r,
        Err(e @ BruteError::BudgetExceeded { .. }) => {
            eprintln!("error: {e}");
            return EXIT_BUDGET;
        }
        Err(e) => return usage_error(e),
    };
    if json {
        let v = serde_json::json!({
            "rule": {"m": m, "n": n},
            "field": field.to_string(),
            "enumerated": report.enumerated.to_string(),
            "invertible": report.invertible_count.to_string(),
            "solutions": report.solutions.iter().map(|s| s.to_json()).collect::<Vec<_>>(),
            "singular_solutions": report.singular_solutions.iter().map(|s| s.to_json()).collect::<Vec<_>>(),
            "singular_solution_count": report.singular_solution_count.to_string(),
        });
        emit!("{}", serde_json::to_string_pretty(&v).unwrap());
    } else {
        emit!(
            "enumerated {} candidates over {} ({} invertible)",
            report.enumerated, field, report.invertible_count
        );
        emit!("solutions: {}", report.solutions.len());
        for (i, s) in report.solutions.iter().enumerate() {
            emit!("  solution {}:", i + 1);
            if s.lambda1().rows() > 0 {
                emit_raw!("{}", indent(&s.lambda1().to_string(), 4));
            }
            emit_raw!("{}", indent(&s.lambda2().to_string(), 4));
        }
        if include_singular {
            emit!(
                "singular candidates satisfying the equations: {}",
                report.singular_solution_count
            );
        }
    }
    EXIT_OK
}

fn cmd_gauge_equiv(a: &str, b: &str, strategy: StrategyArg, json: bool) -> u8 {
    let a = match read_associator(a) {
        Ok(d) => d,
        Err(c) => return c,
    };
    let b = match read_associator(b) {
        Ok(d) => d,
        Err(c) => return c,
    };
    let strat = match strategy {
        StrategyArg::Exhaustive => Strategy::Exhaustive,
        StrategyArg::ParametricScaling => Strategy::ParametricScaling,
    };
    let verdict = match are_equivalent(&a, &b, strat) {
        Ok(v) => v,
        Err(e) => return usage_error(e),
    };
    match verdict {
        EquivalenceVerdict::Equivalent(g) => {
            if json {
                let v = serde_json::json!({"verdict": "equivalent", "witness": g.to_json()});
                emit!("{}", serde_json::to_string_pretty(&v).unwrap());
            } else {
                emit!("EQUIVALENT");
                emit!("witness gauge: {}", g.to_json());
            }
        }
        EquivalenceVerdict::Inequivalent => {
            if json {
                emit!("{}", serde_json::json!({"verdict": "inequivalent"}));
            } else {
                emit!("NO (exhaustive search found no witness)");
            }
        }
        EquivalenceVerdict::Inconclusive { residual_system } => {
            if json {
                let v = serde_json::json!({
                    "verdict": "inconclusive",
                    "residual_system": residual_system,
                });
                emit!("{}", serde_json::to_string_pretty(&v).unwrap());
            } else {
                emit!("INCONCLUSIVE (no witness in the searched family)");
                emit!("residual system: {residual_system}");
            }
        }
    }
    EXIT_OK
}

fn cmd_table(field: &str, json: bool) -> u8 {
    let field = match parse_field(field) {
        Ok(f) => f,
        Err(c) => return c,
    };
    let report = table_report(&field);
    if json {
        emit!(
            "{}",
            serde_json::to_string_pretty(&report.to_json()).unwrap()
        );
    } else {
        emit_raw!("{report}");
    }
    EXIT_OK
}

fn indent(s: &str, by: usize) -> String {
    let pad = " ".repeat(by);
    s.lines()
        .map(|l| format!("{pad}{l}\n"))
        .collect::<Vec<_>>()
        .join("")
}
