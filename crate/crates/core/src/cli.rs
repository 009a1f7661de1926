//! The `ssmi` command line.

use std::io::{IsTerminal, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::diagram::emit_dot;
use crate::eval::{eval_model, format_number, random_overrides, verify_equivalence, EquivalenceReport, Overrides, Value};
use crate::formula::{render_display_with, DisplayLocale};
use crate::layout::plan_workbook;
use crate::model::{
    golden_rule_lint, parse_model, parse_model_unchecked, validate, Diagnostic, Model, Severity,
};
use crate::pipeline::{build_workbook, BuildError};
use crate::xlsx::EmitOptions;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success,
    Invalid,
    VerifyFailed,
    Usage,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        match self {
            ExitStatus::Success => 0,
            ExitStatus::Invalid => 1,
            ExitStatus::VerifyFailed => 2,
            ExitStatus::Usage => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "ssmi", version, about = "Compile structured spreadsheet models to xlsx")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Locale {
    En,
    Fr,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse, validate and lint a model.
    #[command(alias = "lint")]
    Check {
        model: PathBuf,
        /// Treat warnings as errors.
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        json: bool,
    },
    /// Compile a model to an xlsx workbook.
    Build {
        model: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, default_value = "$")]
        currency_symbol: String,
        /// Locale of the printed formula list.
        #[arg(long, value_enum, default_value = "en")]
        locale_display: Locale,
    },
    /// Write the formula diagram as Graphviz DOT.
    Diagram {
        model: PathBuf,
        /// Output file; standard output when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        split_submodels: bool,
    },
    /// Evaluate a model and print every variable.
    Eval {
        model: PathBuf,
        /// Override a parameter or input, as Name=value.
        #[arg(long = "set", value_name = "NAME=VALUE", value_parser = parse_assignment)]
        set: Vec<(String, f64)>,
        #[arg(long)]
        json: bool,
    },
    /// Compare model and workbook evaluation over random inputs.
    Verify {
        model: PathBuf,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

fn parse_assignment(text: &str) -> Result<(String, f64), String> {
    let (name, value) = text
        .split_once('=')
        .ok_or_else(|| format!("expected NAME=VALUE, got {text:?}"))?;
    let value: f64 = value
        .trim()
        .parse()
        .map_err(|_| format!("{:?} is not a number", value.trim()))?;
    if !value.is_finite() {
        return Err(format!("{value} is not a finite number"));
    }
    Ok((name.trim().to_string(), value))
}

/// Runs the command line `args` (program name first), writing to the
/// given streams.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> ExitStatus
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    ExitStatus::Success
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    ExitStatus::Usage
                }
            };
        }
    };
    let color = std::env::var_os("SSMI_NO_COLOR").is_none() && std::io::stderr().is_terminal();
    let mut ctx = Context { out, err, color };
    let result = match cli.command {
        Command::Check { model, strict, json } => ctx.check(&model, strict, json),
        Command::Build {
            model,
            output,
            currency_symbol,
            locale_display,
        } => ctx.build(&model, &output, currency_symbol, locale_display),
        Command::Diagram {
            model,
            output,
            split_submodels,
        } => ctx.diagram(&model, output.as_deref(), split_submodels),
        Command::Eval { model, set, json } => ctx.eval(&model, set, json),
        Command::Verify {
            model,
            trials,
            seed,
            json,
        } => ctx.verify(&model, trials, seed, json),
    };
    match result {
        Ok(status) => status,
        Err(Failure(status, message)) => {
            if !message.is_empty() {
                let _ = writeln!(ctx.err, "error: {message}");
            }
            status
        }
    }
}

struct Failure(ExitStatus, String);

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure(ExitStatus::Usage, e.to_string())
    }
}

type CmdResult = Result<ExitStatus, Failure>;

struct Context<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    color: bool,
}

#[derive(Serialize)]
struct CheckReport<'a> {
    file: String,
    ok: bool,
    errors: usize,
    warnings: usize,
    diagnostics: &'a [Diagnostic],
}

impl Context<'_> {
    fn read(&mut self, path: &Path) -> Result<String, Failure> {
        std::fs::read_to_string(path).map_err(|e| Failure(ExitStatus::Usage, format!("{}: {e}", path.display())))
    }

    /// Parses and validates, printing diagnostics to stderr on failure.
    fn load(&mut self, path: &Path) -> Result<Model, Failure> {
        let source = self.read(path)?;
        match parse_model(&source) {
            Ok(parsed) => Ok(parsed.model),
            Err(diagnostics) => {
                for d in diagnostics.iter().filter(|d| d.is_error()) {
                    self.diagnostic(path, d, true)?;
                }
                Err(Failure(ExitStatus::Invalid, String::new()))
            }
        }
    }

    fn diagnostic(&mut self, path: &Path, d: &Diagnostic, to_stderr: bool) -> std::io::Result<()> {
        let (on, off) = match (self.color, d.severity) {
            (false, _) => ("", ""),
            (true, Severity::Error) => ("\x1b[31m", "\x1b[0m"),
            (true, Severity::Warning) => ("\x1b[33m", "\x1b[0m"),
        };
        let location = d.location.map(|l| format!(":{l}")).unwrap_or_default();
        let line = format!(
            "{}{location}: {on}{}{off}[{}]: {}",
            path.display(),
            d.severity,
            d.code,
            d.message
        );
        if to_stderr {
            writeln!(self.err, "{line}")
        } else {
            writeln!(self.out, "{line}")
        }
    }

    fn check(&mut self, path: &Path, strict: bool, json: bool) -> CmdResult {
        let source = self.read(path)?;
        let (model, mut diagnostics) = parse_model_unchecked(&source);
        diagnostics.extend(validate(&model));
        diagnostics.extend(golden_rule_lint(&model));
        let errors = diagnostics.iter().filter(|d| d.is_error()).count();
        let warnings = diagnostics.len() - errors;
        let ok = errors == 0 && !(strict && warnings > 0);
        if json {
            let report = CheckReport {
                file: path.display().to_string(),
                ok,
                errors,
                warnings,
                diagnostics: &diagnostics,
            };
            writeln!(self.out, "{}", serde_json::to_string_pretty(&report).expect("serializable"))?;
        } else {
            for d in &diagnostics {
                self.diagnostic(path, d, false)?;
            }
            writeln!(self.out, "{errors} error(s), {warnings} warning(s)")?;
        }
        Ok(if ok { ExitStatus::Success } else { ExitStatus::Invalid })
    }

    fn build(&mut self, path: &Path, output: &Path, currency_symbol: String, locale: Locale) -> CmdResult {
        let model = self.load(path)?;
        let build = match build_workbook(&model, &EmitOptions { currency_symbol }) {
            Ok(build) => build,
            Err(BuildError::Verify { report, overrides }) => {
                self.report_failure(&report, &overrides)?;
                return Err(Failure(
                    ExitStatus::VerifyFailed,
                    format!("verification failed, {} not written", output.display()),
                ));
            }
            Err(BuildError::Plan(e)) => return Err(Failure(ExitStatus::Invalid, e.to_string())),
            Err(BuildError::Grid(e)) => return Err(Failure(ExitStatus::VerifyFailed, e.to_string())),
            Err(e @ BuildError::Emit(_)) => return Err(Failure(ExitStatus::Usage, e.to_string())),
        };
        std::fs::write(output, &build.bytes)
            .map_err(|e| Failure(ExitStatus::Usage, format!("{}: {e}", output.display())))?;

        let locale = match locale {
            Locale::En => DisplayLocale::En,
            Locale::Fr => DisplayLocale::Fr,
        };
        for decl in &model.declarations {
            let definition = match (&decl.formula, decl.initial_value) {
                (Some(formula), _) => render_display_with(formula, locale),
                (None, Some(v)) => localize(&format_number(v), locale),
                (None, None) => String::new(),
            };
            writeln!(self.out, "{}\t{}\t{definition}", decl.label, decl.kind.keyword())?;
        }
        writeln!(
            self.out,
            "wrote {} ({} sheets, {} defined names); verified {} input vectors",
            output.display(),
            build.plan.sheets.len(),
            build.plan.defined_names.len(),
            build.verified_vectors
        )?;
        Ok(ExitStatus::Success)
    }

    fn diagram(&mut self, path: &Path, output: Option<&Path>, split: bool) -> CmdResult {
        let model = self.load(path)?;
        let dot = emit_dot(&model, split);
        match output {
            Some(file) => std::fs::write(file, dot)
                .map_err(|e| Failure(ExitStatus::Usage, format!("{}: {e}", file.display())))?,
            None => self.out.write_all(dot.as_bytes())?,
        }
        Ok(ExitStatus::Success)
    }

    fn eval(&mut self, path: &Path, set: Vec<(String, f64)>, json: bool) -> CmdResult {
        let model = self.load(path)?;
        let overrides: Overrides = set.into_iter().collect();
        let values = eval_model(&model, &overrides).map_err(|e| Failure(ExitStatus::Invalid, e.to_string()))?;
        if json {
            let variables: Vec<_> = model
                .declarations
                .iter()
                .map(|d| {
                    let value = values.get(&d.name).expect("evaluated");
                    json!({
                        "name": d.name,
                        "label": d.label,
                        "kind": d.kind.keyword(),
                        "value": value_json(value),
                        "text": value.to_string(),
                    })
                })
                .collect();
            let doc = json!({ "file": path.display().to_string(), "variables": variables });
            writeln!(self.out, "{}", serde_json::to_string_pretty(&doc).expect("serializable"))?;
        } else {
            for (name, value) in values.iter() {
                writeln!(self.out, "{name} {value}")?;
            }
        }
        Ok(ExitStatus::Success)
    }

    fn verify(&mut self, path: &Path, trials: usize, seed: u64, json: bool) -> CmdResult {
        let model = self.load(path)?;
        let plan = plan_workbook(&model).map_err(|e| Failure(ExitStatus::Invalid, e.to_string()))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut passed = 0;
        let mut failures = Vec::new();
        for trial in 0..trials {
            let overrides = random_overrides(&model, &mut rng);
            let report = verify_equivalence(&model, &plan, &overrides);
            if report.passed() {
                passed += 1;
            } else {
                if !json {
                    writeln!(self.out, "trial {trial}:")?;
                    self.report_failure(&report, &overrides)?;
                }
                failures.push((trial, overrides, report));
            }
        }
        let ok = failures.is_empty();
        if json {
            let failures: Vec<_> = failures
                .iter()
                .map(|(trial, overrides, report)| {
                    let inputs: serde_json::Map<String, serde_json::Value> =
                        overrides.iter().map(|(n, v)| (n.to_string(), json!(v))).collect();
                    json!({ "trial": trial, "inputs": inputs, "report": report })
                })
                .collect();
            let doc = json!({
                "file": path.display().to_string(),
                "seed": seed,
                "trials": trials,
                "passed": passed,
                "ok": ok,
                "failures": failures,
            });
            writeln!(self.out, "{}", serde_json::to_string_pretty(&doc).expect("serializable"))?;
        } else {
            let verdict = if ok { "PASS" } else { "FAIL" };
            writeln!(
                self.out,
                "{verdict}: {passed}/{trials} trials matched on all {} variables (seed {seed})",
                model.declarations.len()
            )?;
        }
        Ok(if ok { ExitStatus::Success } else { ExitStatus::VerifyFailed })
    }

    fn report_failure(&mut self, report: &EquivalenceReport, overrides: &Overrides) -> std::io::Result<()> {
        let inputs: Vec<String> = overrides.iter().map(|(n, v)| format!("{n}={}", format_number(*v))).collect();
        writeln!(self.out, "  inputs: {}", inputs.join(" "))?;
        writeln!(self.out, "  {report}")?;
        for m in &report.mismatches {
            writeln!(self.out, "  mismatch: {m}")?;
        }
        Ok(())
    }
}

fn value_json(value: Value) -> serde_json::Value {
    match value {
        Value::Number(v) => json!(v),
        Value::Boolean(b) => json!(b),
        Value::Error(code) => json!({ "error": code.spreadsheet_text() }),
    }
}

fn localize(number: &str, locale: DisplayLocale) -> String {
    match locale {
        DisplayLocale::En => number.to_string(),
        DisplayLocale::Fr => number.replace('.', ","),
    }
}
