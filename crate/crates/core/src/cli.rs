//! Command-line driver.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bianchi::{check_tables_consistency, BianchiType, TableSet};
use crate::jacobi::{
    jacobi_op, verify_classical_lie, verify_closed_form, verify_closed_form_specializations,
    verify_quantum_lie_types, Hbar, Vec3,
};
use crate::operad::OperadError;
use crate::oscillator::{verify_derivation_ideal, verify_matrix_lax, verify_operadic_lax};
use crate::report::VerificationReport;
use crate::scalars::ScalarPoly;
use crate::syntax::parse_scalar;

#[derive(Parser, Debug)]
#[command(name = "oplax", version, about = "Exact verification of operadic Lax representations")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Keep the Planck constant symbolic or set it to zero.
    #[arg(long, global = true, value_enum, default_value_t = HbarArg::Symbolic)]
    hbar: HbarArg,
    /// Load table data from a JSON file instead of the built-in tables.
    #[arg(long, global = true, value_name = "FILE")]
    tables: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum HbarArg {
    Symbolic,
    #[value(name = "0")]
    Zero,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a verification suite.
    Verify {
        #[command(subcommand)]
        suite: Suite,
    },
    /// Compute a quantity and print it.
    Compute {
        #[command(subcommand)]
        what: ComputeCmd,
    },
    /// Print the table data as JSON.
    ExportTables,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Suite {
    All,
    MatrixLax,
    OperadicLax {
        #[arg(long = "type")]
        kind: Option<BianchiType>,
    },
    Tables,
    JacobiClassical,
    JacobiQuantum,
    #[command(name = "theorem-9-1")]
    ClosedForm,
}

#[derive(Subcommand, Debug)]
enum ComputeCmd {
    /// Jacobi operator of a quantum row.
    Jacobi {
        #[arg(long = "type")]
        kind: BianchiType,
        #[arg(long, required_unless_present = "symbolic", conflicts_with = "symbolic")]
        x: Option<String>,
        #[arg(long, required_unless_present = "symbolic", conflicts_with = "symbolic")]
        y: Option<String>,
        #[arg(long, required_unless_present = "symbolic", conflicts_with = "symbolic")]
        z: Option<String>,
        /// Use symbolic components x1..x3, y1..y3, z1..z3.
        #[arg(long)]
        symbolic: bool,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Operad(#[from] OperadError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn parse_vec(name: &str, src: &str) -> Result<Vec3, CliError> {
    let parts: Vec<&str> = src.split(',').collect();
    if parts.len() != 3 {
        return Err(CliError::Usage(format!("--{name} needs three comma-separated components, got `{src}`")));
    }
    let mut out: [ScalarPoly; 3] = Default::default();
    for (slot, part) in out.iter_mut().zip(parts) {
        let v = parse_scalar(part.trim()).map_err(|e| CliError::Usage(format!("--{name}: {e}")))?;
        match v.as_constant() {
            Some(c) if num_traits::Zero::is_zero(&c.im) => *slot = v,
            _ => return Err(CliError::Usage(format!("--{name}: `{part}` is not a rational number"))),
        }
    }
    Ok(Vec3(out))
}

fn load_tables(path: &Option<PathBuf>) -> Result<TableSet, CliError> {
    match path {
        None => Ok(TableSet::reference()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", p.display())))?;
            TableSet::from_json(&text).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))
        }
    }
}

fn run_suite(suite: Suite, tables: &TableSet, hbar: Hbar) -> Result<VerificationReport, CliError> {
    let mut report = VerificationReport::new();
    let all = matches!(suite, Suite::All);
    if all || matches!(suite, Suite::MatrixLax) {
        report.extend(verify_matrix_lax());
        report.extend(verify_derivation_ideal());
    }
    if all || matches!(suite, Suite::Tables) {
        report.extend(check_tables_consistency(tables));
    }
    if let Suite::OperadicLax { kind } = suite {
        let kinds = kind.map_or(BianchiType::ALL.to_vec(), |k| vec![k]);
        for k in kinds {
            report.extend(verify_operadic_lax(&tables.row(k).dynamical_op(), k.name())?);
        }
    } else if all {
        for k in BianchiType::ALL {
            report.extend(verify_operadic_lax(&tables.row(k).dynamical_op(), k.name())?);
        }
    }
    if all || matches!(suite, Suite::JacobiClassical) {
        report.extend(verify_classical_lie(tables)?);
    }
    if all || matches!(suite, Suite::JacobiQuantum) {
        report.extend(verify_quantum_lie_types(tables, hbar)?);
    }
    if all || matches!(suite, Suite::ClosedForm) {
        report.extend(verify_closed_form(hbar)?);
        report.extend(verify_closed_form_specializations(tables, hbar)?);
    }
    Ok(report)
}

#[derive(Serialize)]
struct JacobiJson {
    #[serde(rename = "type")]
    kind: String,
    #[serde(rename = "J1")]
    j1: String,
    #[serde(rename = "J2")]
    j2: String,
    #[serde(rename = "J3")]
    j3: String,
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    let tables = load_tables(&cli.tables)?;
    let hbar = match cli.hbar {
        HbarArg::Symbolic => Hbar::Symbolic,
        HbarArg::Zero => Hbar::Zero,
    };
    match cli.command {
        Command::Verify { suite } => {
            let report = run_suite(suite, &tables, hbar)?;
            match cli.format {
                Format::Text => out.write_all(report.to_text().as_bytes())?,
                Format::Json => writeln!(out, "{}", report.to_json())?,
            }
            Ok(if report.all_passed() { 0 } else { 1 })
        }
        Command::Compute { what: ComputeCmd::Jacobi { kind, x, y, z, symbolic } } => {
            let (x, y, z) = if symbolic {
                (Vec3::symbolic_x(), Vec3::symbolic_y(), Vec3::symbolic_z())
            } else {
                let get = |name: &str, v: Option<String>| parse_vec(name, &v.unwrap_or_default());
                (get("x", x)?, get("y", y)?, get("z", z)?)
            };
            let j = hbar.apply3(&jacobi_op(&x, &y, &z, &tables.row(kind).quantum_op())?);
            match cli.format {
                Format::Text => {
                    for (k, c) in j.iter().enumerate() {
                        writeln!(out, "J{} = {}", k + 1, c.render_factored())?;
                    }
                }
                Format::Json => {
                    let [j1, j2, j3] = j.map(|c| c.to_string());
                    let doc = JacobiJson { kind: kind.name().to_string(), j1, j2, j3 };
                    writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("serializes"))?;
                }
            }
            Ok(0)
        }
        Command::ExportTables => {
            out.write_all(tables.to_json().as_bytes())?;
            Ok(0)
        }
    }
}

/// Runs the command line `args` (including the program name) and returns
/// the exit status: 0 if every check passed, 1 if any failed, 2 on usage
/// errors.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let mut argv = vec!["oplax"];
        argv.extend_from_slice(args);
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn compute_jacobi_for_type_v() {
        let (code, out, _) = call(&["compute", "jacobi", "--type", "V", "--x", "1,0,0", "--y", "0,1,0", "--z", "0,0,1"]);
        assert_eq!(code, 0);
        assert_eq!(out, "J1 = 0\nJ2 = 0\nJ3 = 2*s^-2 * (Ah+ Ah- - Ah- Ah+)\n");
    }

    #[test]
    fn operadic_lax_for_type_two() {
        let (code, out, _) = call(&["verify", "operadic-lax", "--type", "II"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().filter(|l| l.starts_with("[PASS] operadic-lax.II.")).count(), 27);
        assert!(out.ends_with("27 checks: 27 passed, 0 failed\n"));
    }

    #[test]
    fn usage_errors_exit_two() {
        for args in [
            &["verify", "nonsense"][..],
            &["verify", "operadic-lax", "--type", "X"],
            &["compute", "jacobi", "--type", "V", "--x", "1,0", "--y", "0,1,0", "--z", "0,0,1"],
            &["compute", "jacobi", "--type", "V", "--x", "q,0,0", "--y", "0,1,0", "--z", "0,0,1"],
            &["--format", "yaml", "verify", "all"],
            &["--tables", "/nonexistent/tables.json", "verify", "tables"],
        ] {
            let (code, out, err) = call(args);
            assert_eq!(code, 2, "{args:?}");
            assert!(out.is_empty());
            assert!(!err.is_empty());
        }
    }

    #[test]
    fn hbar_zero_is_accepted() {
        let (code, out, _) = call(&["--hbar", "0", "--format", "json", "compute", "jacobi", "--type", "II", "--symbolic"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["J1"], "0");
        assert_eq!(v["type"], "II");
    }
}
