//! The `emzv` command line: `reduce`, `eval`, `verify`, `table`, `selftest`.
//!
//! Exit codes: 0 success, 1 other failure, 2 parse or usage error, 3 fuel
//! exhausted, 4 numeric failure, 5 verification failure.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::json;

use crate::error::{Error, Result};
use crate::index::Index;
use crate::numerics::{Estimate, Evaluator, NumericsConfig, Tau};
use crate::reduction::{reduce, DEFAULT_FUEL};
use crate::verify::{
    kronecker_checks, reduction_table, run_sweep, verify_reduction_with, write_reports, write_table,
    Family, Sweep,
};
use crate::word::{antipode_split, shuffle};

pub const EXIT_OTHER: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_FUEL: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;
pub const EXIT_VERIFY: i32 = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Parser, Debug)]
#[command(name = "emzv", version, about = "Reduce and evaluate elliptic multiple zeta values")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Rewrite I(k) in admissible and {0,1}-index atoms.
    Reduce {
        #[arg(long)]
        index: String,
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: usize,
        /// Print every rule application.
        #[arg(long)]
        trace: bool,
        /// Compare the result numerically with I(k).
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value = "0+1i")]
        tau: String,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Evaluate I(k; tau).
    Eval {
        #[arg(long)]
        index: String,
        #[arg(long)]
        tau: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Check a relation family over all indices within the bounds.
    Verify {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long, default_value_t = 4)]
        max_weight: u32,
        #[arg(long, default_value_t = 4)]
        max_length: usize,
        #[arg(long, default_value = "0+1i")]
        tau: String,
        /// Defaults to 1e-10 for kronecker, 0 for prop-mat and 1e-6 otherwise.
        #[arg(long)]
        tol: Option<f64>,
        /// JSON-lines report; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: usize,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Reduction table as JSON lines.
    Table {
        #[arg(long, default_value_t = 3)]
        max_weight: u32,
        #[arg(long, default_value_t = 3)]
        max_length: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: usize,
    },
    /// Quick end-to-end checks.
    Selftest,
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::IndexParse(_) | Error::EntryOverflow(_) | Error::TauParse(_) | Error::Config(_) => {
            EXIT_PARSE
        }
        Error::FuelExhausted { .. } => EXIT_FUEL,
        e if e.is_numeric() => EXIT_NUMERIC,
        _ => EXIT_OTHER,
    }
}

fn fmt_real(x: f64) -> String {
    if x != 0.0 && x.abs() < 1e-4 {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

/// `a+bi` with shortest round-trip digits.
pub fn fmt_complex(z: Complex64) -> String {
    let im = fmt_real(z.im);
    let sep = if im.starts_with('-') { "" } else { "+" };
    format!("{}{sep}{im}i", fmt_real(z.re))
}

fn fmt_estimate(v: &Estimate) -> String {
    format!("{} ± {:.1e}", fmt_complex(v.value), v.error)
}

fn estimate_json(v: &Estimate) -> serde_json::Value {
    json!({"re": v.value.re, "im": v.value.im, "error": v.error})
}

fn load_config(path: Option<&Path>) -> Result<NumericsConfig> {
    match path {
        Some(p) => NumericsConfig::load(p),
        None => Ok(NumericsConfig::default()),
    }
}

fn open_out<'a>(path: Option<&Path>, stdout: &'a mut dyn Write) -> Result<Box<dyn Write + 'a>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(stdout),
    })
}

/// Runs the command line with explicit output streams; returns the exit
/// code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return e.exit_code();
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

/// [`run_with`] on the process streams.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let mut out = std::io::stdout().lock();
    let mut err = std::io::stderr().lock();
    let code = run_with(args, &mut out, &mut err);
    let _ = out.flush();
    code
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Reduce {
            index,
            fuel,
            trace,
            verify,
            tau,
            tol,
            format,
            config,
        } => {
            let k: Index = index.parse()?;
            let (expr, tr) = reduce(&k, fuel)?;
            let check = if verify {
                let tau: Tau = tau.parse()?;
                let ev = Evaluator::new(tau, load_config(config.as_deref())?)?;
                Some(verify_reduction_with(&ev, &k, tol, fuel)?)
            } else {
                None
            };
            match format {
                Format::Text => {
                    writeln!(out, "{expr}")?;
                    if trace {
                        for s in &tr.steps {
                            writeln!(out, "{} {}: {}", s.rule, s.input, s.identity)?;
                        }
                    }
                    if let Some(rep) = &check {
                        writeln!(
                            out,
                            "residual {:e} ({})",
                            rep.residual.unwrap_or(f64::NAN),
                            if rep.pass { "pass" } else { "FAIL" }
                        )?;
                    }
                }
                Format::Json => {
                    let mut v = json!({"index": k, "expression": expr});
                    if trace {
                        v["trace"] = serde_json::to_value(&tr)?;
                    }
                    if let Some(rep) = &check {
                        v["verify"] = serde_json::to_value(rep)?;
                    }
                    writeln!(out, "{v}")?;
                }
            }
            Ok(match check {
                Some(rep) if !rep.pass => EXIT_VERIFY,
                _ => 0,
            })
        }
        Command::Eval {
            index,
            tau,
            format,
            config,
        } => {
            let k: Index = index.parse()?;
            let tau: Tau = tau.parse()?;
            let cfg = load_config(config.as_deref())?;
            let ev = Evaluator::new(tau, cfg)?;
            let v = ev.emzv(&k)?;
            match format {
                Format::Text => writeln!(out, "{}", fmt_estimate(&v))?,
                Format::Json => {
                    let j = json!({"index": k, "tau": tau, "value": estimate_json(&v)});
                    writeln!(out, "{j}")?;
                }
            }
            Ok(0)
        }
        Command::Verify {
            family,
            max_weight,
            max_length,
            tau,
            tol,
            out: path,
            fuel,
            config,
        } => {
            let tolerance = tol.unwrap_or(match family {
                Family::Kronecker => 1e-10,
                Family::PropMat => 0.0,
                _ => 1e-6,
            });
            let sweep = Sweep {
                family,
                max_weight,
                max_length,
                tolerance,
                fuel,
            };
            let ev = if family.is_exact() {
                None
            } else {
                let tau: Tau = tau.parse()?;
                Some(Evaluator::new(tau, load_config(config.as_deref())?)?)
            };
            let reports = run_sweep(&sweep, ev.as_ref())?;
            {
                let mut w = open_out(path.as_deref(), out)?;
                write_reports(&reports, &mut w)?;
                w.flush()?;
            }
            let passed = reports.iter().filter(|r| r.pass).count();
            writeln!(err, "{family:?}: {passed}/{} passed", reports.len())?;
            Ok(if passed == reports.len() { 0 } else { EXIT_VERIFY })
        }
        Command::Table {
            max_weight,
            max_length,
            out: path,
            fuel,
        } => {
            let rows = reduction_table(max_weight, max_length, fuel)?;
            let mut w = open_out(path.as_deref(), out)?;
            write_table(&rows, &mut w)?;
            w.flush()?;
            Ok(0)
        }
        Command::Selftest => selftest(out),
    }
}

fn selftest(out: &mut dyn Write) -> Result<i32> {
    let mut failed = 0;
    let mut report = |out: &mut dyn Write, name: &str, ok: Result<bool>| -> Result<()> {
        let line = match ok {
            Ok(true) => "ok".to_string(),
            Ok(false) => {
                failed += 1;
                "FAIL".to_string()
            }
            Err(e) => {
                failed += 1;
                format!("FAIL ({e})")
            }
        };
        writeln!(out, "{line:<6} {name}")?;
        Ok(())
    };

    let w: Index = "1,2,0".parse()?;
    let v: Index = "3".parse()?;
    report(
        out,
        "shuffle and antipode",
        Ok(antipode_split(&w).is_zero() && shuffle(&w, &v) == shuffle(&v, &w)),
    )?;
    let sweep = Sweep {
        family: Family::PropMat,
        max_weight: 6,
        max_length: 2,
        tolerance: 0.0,
        fuel: DEFAULT_FUEL,
    };
    report(
        out,
        "closed length-2 Fay formula",
        run_sweep(&sweep, None).map(|r| r.iter().all(|x| x.pass)),
    )?;

    let ev = Evaluator::new(Tau::imaginary(1.0)?, NumericsConfig::default())?;
    let pi2 = std::f64::consts::PI.powi(2);
    report(
        out,
        "I(2) = -pi^2/3",
        ev.emzv(&"2".parse()?).map(|x| (x.value + pi2 / 3.0).norm() < 1e-8),
    )?;
    report(
        out,
        "I(0,0,0) = 1/6",
        ev.emzv(&"0,0,0".parse()?).map(|x| (x.value - 1.0 / 6.0).norm() < 1e-10),
    )?;
    report(
        out,
        "Kronecker function identities",
        kronecker_checks(ev.kronecker(), 5, 7)
            .map(|c| c.iter().all(|(_, l, r)| (l - r).norm() <= 1e-9 * l.norm().max(1.0))),
    )?;
    report(
        out,
        "reduction of (1,2,2)",
        verify_reduction_with(&ev, &"1,2,2".parse()?, 1e-6, DEFAULT_FUEL).map(|r| r.pass),
    )?;
    Ok(if failed == 0 { 0 } else { EXIT_VERIFY })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["emzv"];
        full.extend_from_slice(args);
        let code = run_with(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn reduce_terminal() {
        let (code, out, _) = run_capture(&["reduce", "--index", "0,2"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), "1 * I(0,2)");
        let (_, out, _) = run_capture(&["reduce", "--index", "1"]);
        assert_eq!(out.trim(), "1 * I(1)");
    }

    #[test]
    fn parse_errors() {
        assert_eq!(run_capture(&["reduce", "--index", "1,x"]).0, EXIT_PARSE);
        assert_eq!(run_capture(&["eval", "--index", "2", "--tau", "0-1i"]).0, EXIT_PARSE);
        assert_eq!(run_capture(&["bogus"]).0, EXIT_PARSE);
    }

    #[test]
    fn eval_json() {
        let (code, out, _) = run_capture(&["eval", "--index", "0,0", "--tau", "0+1i", "--format", "json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
        assert!((v["value"]["re"].as_f64().unwrap() - 0.5).abs() < 1e-12);
        assert!(v["value"]["error"].as_f64().unwrap() < 1e-10);
    }

    #[test]
    fn complex_formatting() {
        assert_eq!(fmt_complex(Complex64::new(0.5, 0.0)), "0.5+0i");
        assert_eq!(fmt_complex(Complex64::new(-1.0, -2e-17)), "-1-2e-17i");
    }
}
