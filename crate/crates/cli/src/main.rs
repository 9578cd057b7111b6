//! `hphi`: batch front-end for (h,φ)-entropies and inequality audits.
//!
//! Exit codes: 0 success, 1 I/O error, 2 schema error (including bad
//! command-line usage), 3 domain error, 4 audit violations.

mod input;
mod output;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use hphi::audit::{run_audit, AuditConfig, AuditReport, DimRange, Suite};
use hphi::classical::{compare, entropy_finite, entropy_sequence, EntropyResult, ProbVector, SequenceSource};
use hphi::functionals::{validate_functional, EntropicFunctional, BUILTIN_FAMILIES, DEFAULT_GRID};
use hphi::gpt::{gpt_entropy, ConvexModel, GptStatus};
use hphi::quantum::{quantum_entropy, DensityOperator};

use output::{text, write_record, write_rows, Field, Format, Row};

#[derive(Debug)]
pub enum CliError {
    Io(String),
    Schema(String),
    Domain(String),
    Violations(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Schema(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Violations(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Io(m) | CliError::Schema(m) | CliError::Domain(m) | CliError::Violations(m) => m,
        }
    }
}

impl From<hphi::Error> for CliError {
    fn from(e: hphi::Error) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

#[derive(Parser)]
#[command(name = "hphi", version, about = "Generalized (h,phi)-entropies and majorization audits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Classical,
    Quantum,
    Gpt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Schur,
    Pinching,
    Isometry,
    Ensemble,
    GptArgmin,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Schur => Suite::Schur,
            SuiteArg::Pinching => Suite::Pinching,
            SuiteArg::Isometry => Suite::Isometry,
            SuiteArg::Ensemble => Suite::Ensemble,
            SuiteArg::GptArgmin => Suite::GptArgmin,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Entropy of a probability vector, sequence, density operator or GPT state.
    Entropy {
        /// Vector file (classical), density file (quantum) or model file (gpt).
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "classical")]
        kind: Kind,
        /// Functional spec such as `shannon` or `renyi:alpha=2`.
        #[arg(long, default_value = "shannon")]
        functional: String,
        /// Infinite source (classical only): `geometric:r=0.5`, `zeta:s=2`, `log-squared`.
        #[arg(long, conflicts_with = "input")]
        sequence: Option<String>,
        /// GPT state file (JSON array of coordinates).
        #[arg(long)]
        state: Option<PathBuf>,
        #[arg(long, default_value_t = 100_000)]
        max_terms: usize,
        #[arg(long, default_value_t = 1e-12)]
        increment_tol: f64,
        /// Rescale a classical vector to unit total instead of rejecting it.
        #[arg(long)]
        renormalize: bool,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Majorization verdict between two vector files.
    Majorize {
        p: PathBuf,
        q: PathBuf,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Randomized audit of an entropy inequality.
    Audit {
        #[arg(value_enum)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Dimension `d` or inclusive range `lo:hi`.
        #[arg(long)]
        dims: Option<String>,
        /// Repeatable; defaults to one representative set of every family.
        #[arg(long = "functional")]
        functionals: Vec<String>,
        /// Ensembles per state (ensemble) or sampled decompositions per point (gpt-argmin).
        #[arg(long, default_value_t = 20)]
        samples: usize,
        /// Exit 0 even when violations are found.
        #[arg(long)]
        no_fail: bool,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// List built-in functional families or validate a functional.
    Functional {
        #[command(subcommand)]
        action: FunctionalAction,
    },
}

#[derive(Subcommand)]
enum FunctionalAction {
    List {
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    Validate {
        spec: String,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
}

fn parse_functional(spec: &str) -> Result<EntropicFunctional, CliError> {
    Ok(spec.parse::<EntropicFunctional>()?)
}

fn result_fields(row: &mut Row, r: &EntropyResult) {
    row.push(("value", Field::Num(r.value)));
    row.push(("status", text(r.status.to_string())));
    row.push(("terms_used", Field::Int(r.terms_used as u64)));
}

#[allow(clippy::too_many_arguments)]
fn cmd_entropy(
    out: &mut impl Write,
    input: Option<PathBuf>,
    kind: Kind,
    functional: &str,
    sequence: Option<String>,
    state: Option<PathBuf>,
    max_terms: usize,
    increment_tol: f64,
    renormalize: bool,
    format: Format,
) -> Result<(), CliError> {
    let f = parse_functional(functional)?;
    let mut row: Row = vec![("functional", text(f.name()))];
    let need_input = || input.clone().ok_or_else(|| CliError::Schema("missing input file".into()));
    match kind {
        Kind::Classical => {
            row.insert(0, ("kind", text("classical")));
            if let Some(spec) = sequence {
                let src: SequenceSource = spec.parse()?;
                let r = entropy_sequence(&src, &f, max_terms, increment_tol)?;
                row.push(("source", text(src.label())));
                result_fields(&mut row, &r);
                row.push(("increment_at_stop", Field::Num(r.increment_at_stop)));
            } else {
                let entries = input::read_vector(&need_input()?)?;
                let p = if renormalize {
                    ProbVector::renormalized(entries)?
                } else {
                    ProbVector::new(entries)?
                };
                result_fields(&mut row, &entropy_finite(&p, &f));
            }
        }
        Kind::Quantum => {
            row.insert(0, ("kind", text("quantum")));
            let rho = DensityOperator::new(input::read_density(&need_input()?)?)?;
            row.push(("dim", Field::Int(rho.dim() as u64)));
            result_fields(&mut row, &quantum_entropy(&rho, &f));
            row.push(("spectrum", Field::Nums(rho.spectrum().eigenvalues().to_vec())));
        }
        Kind::Gpt => {
            row.insert(0, ("kind", text("gpt")));
            let file = input::read_model(&need_input()?)?;
            let state = state.ok_or_else(|| CliError::Schema("gpt entropy needs --state".into()))?;
            let x = input::read_state(&state, file.dim)?;
            let model = ConvexModel::new(file.dim, file.vertices)?;
            let g = gpt_entropy(&model, &x, &f)?;
            row.push(("value", Field::Num(g.value)));
            row.push((
                "status",
                text(match g.status {
                    GptStatus::Attained => "attained",
                    GptStatus::Infeasible => "infeasible",
                }),
            ));
            let (support, weights) = g.argmin.map_or((vec![], vec![]), |d| (d.support, d.weights));
            row.push(("support", Field::Ints(support)));
            row.push(("weights", Field::Nums(weights)));
        }
    }
    write_record(out, format, row)?;
    Ok(())
}

fn cmd_majorize(out: &mut impl Write, p: PathBuf, q: PathBuf, format: Format) -> Result<(), CliError> {
    let p = input::read_vector(&p)?;
    let q = input::read_vector(&q)?;
    let verdict = compare(&p, &q)?;
    write_record(out, format, vec![("verdict", text(verdict.to_string()))])?;
    Ok(())
}

fn audit_record_rows(report: &AuditReport) -> Vec<Row> {
    report
        .records
        .iter()
        .map(|r| {
            vec![
                ("trial", Field::Int(r.trial as u64)),
                ("dim", Field::Int(r.dim as u64)),
                ("check", text(r.check.clone())),
                ("functional", text(r.functional.clone())),
                ("lhs", Field::Num(r.lhs)),
                ("rhs", Field::Num(r.rhs)),
                ("margin", Field::Num(r.margin)),
                ("tolerance", Field::Num(r.tolerance)),
                ("passed", Field::Bool(r.passed)),
            ]
        })
        .collect()
}

/// Per-check totals for the table view.
fn audit_summary_rows(report: &AuditReport) -> Vec<Row> {
    let mut checks: Vec<&str> = Vec::new();
    for r in &report.records {
        if !checks.contains(&r.check.as_str()) {
            checks.push(&r.check);
        }
    }
    checks
        .into_iter()
        .map(|c| {
            let recs: Vec<_> = report.records_for(c).collect();
            vec![
                ("check", text(c)),
                ("records", Field::Int(recs.len() as u64)),
                ("violations", Field::Int(recs.iter().filter(|r| !r.passed).count() as u64)),
                ("worst_margin", Field::Num(recs.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min))),
            ]
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn cmd_audit(
    out: &mut impl Write,
    suite: Suite,
    trials: usize,
    seed: u64,
    dims: Option<String>,
    functionals: Vec<String>,
    samples: usize,
    no_fail: bool,
    format: Format,
) -> Result<(), CliError> {
    let mut config = AuditConfig::new(suite, trials, seed).with_samples(samples);
    if let Some(d) = dims {
        config = config.with_dims(d.parse::<DimRange>()?);
    }
    if !functionals.is_empty() {
        let fs = functionals.iter().map(|s| parse_functional(s)).collect::<Result<_, _>>()?;
        config = config.with_functionals(fs);
    }
    let report = run_audit(&config)?;
    let header: Row = vec![
        ("suite", text(report.suite.as_str())),
        ("trials", Field::Int(report.trials as u64)),
        ("seed", Field::Int(report.seed)),
        ("dims", text(report.dims.to_string())),
        ("violations", Field::Int(report.violations as u64)),
        ("worst_margin", Field::Num(report.worst_margin)),
    ];
    match format {
        Format::Json => {
            let mut row = header;
            row.push(("functionals", Field::Text(report.functionals.join(","))));
            row.push(("records", Field::Rows(audit_record_rows(&report))));
            write_record(out, format, row)?;
        }
        Format::Csv => write_rows(out, format, &audit_record_rows(&report))?,
        Format::Table => {
            write_record(out, format, header)?;
            writeln!(out)?;
            write_rows(out, format, &audit_summary_rows(&report))?;
        }
    }
    check_violations(&report, no_fail)
}

fn check_violations(report: &AuditReport, no_fail: bool) -> Result<(), CliError> {
    if report.violations > 0 && !no_fail {
        return Err(CliError::Violations(format!(
            "{} violations in {} audit (worst margin {:e})",
            report.violations, report.suite, report.worst_margin
        )));
    }
    Ok(())
}

fn cmd_functional(out: &mut impl Write, action: FunctionalAction) -> Result<(), CliError> {
    match action {
        FunctionalAction::List { format } => {
            let rows: Vec<Row> = BUILTIN_FAMILIES
                .iter()
                .map(|fam| {
                    let params: Vec<String> = fam.params.iter().map(|(k, c)| format!("{k} ({c})")).collect();
                    vec![
                        ("name", text(fam.name)),
                        ("params", text(params.join("; "))),
                        ("phi", text(fam.phi)),
                        ("h", text(fam.h)),
                    ]
                })
                .collect();
            write_rows(out, format, &rows)?;
        }
        FunctionalAction::Validate { spec, grid, format } => {
            let f = parse_functional(&spec)?;
            let report = validate_functional(&f, grid)?;
            let checks: Vec<Row> = report
                .checks
                .iter()
                .map(|c| {
                    vec![
                        ("check", text(c.name.clone())),
                        ("passed", Field::Bool(c.passed)),
                        ("worst_margin", Field::Num(c.worst_margin)),
                    ]
                })
                .collect();
            let header: Row = vec![
                ("functional", text(report.functional.clone())),
                ("case", text(report.case.to_string())),
                ("grid_size", Field::Int(report.grid_size as u64)),
                ("passed", Field::Bool(report.passed())),
            ];
            match format {
                Format::Json => {
                    let mut row = header;
                    row.push(("checks", Field::Rows(checks)));
                    write_record(out, format, row)?;
                }
                Format::Csv => write_rows(out, format, &checks)?,
                Format::Table => {
                    write_record(out, format, header)?;
                    writeln!(out)?;
                    write_rows(out, format, &checks)?;
                }
            }
            if !report.passed() {
                return Err(CliError::Violations(format!("{} failed validation", report.functional)));
            }
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = match cli.command {
        Command::Entropy {
            input,
            kind,
            functional,
            sequence,
            state,
            max_terms,
            increment_tol,
            renormalize,
            format,
        } => cmd_entropy(
            &mut out,
            input,
            kind,
            &functional,
            sequence,
            state,
            max_terms,
            increment_tol,
            renormalize,
            format,
        ),
        Command::Majorize { p, q, format } => cmd_majorize(&mut out, p, q, format),
        Command::Audit {
            suite,
            trials,
            seed,
            dims,
            functionals,
            samples,
            no_fail,
            format,
        } => cmd_audit(&mut out, suite.into(), trials, seed, dims, functionals, samples, no_fail, format),
        Command::Functional { action } => cmd_functional(&mut out, action),
    };
    out.flush()?;
    result
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use hphi::functionals::Case;

    #[test]
    fn violations_map_to_exit_four_unless_no_fail() {
        let bad = EntropicFunctional::custom("x-squared", |x| x * x, |y| y, Case::IncreasingConcave);
        let config = AuditConfig::new(Suite::Schur, 10, 1)
            .with_dims(DimRange::single(4))
            .with_functionals(vec![bad]);
        let report = run_audit(&config).unwrap();
        assert!(report.violations > 0);
        assert_eq!(check_violations(&report, false).unwrap_err().exit_code(), 4);
        assert!(check_violations(&report, true).is_ok());

        let clean = run_audit(&AuditConfig::new(Suite::Schur, 10, 1)).unwrap();
        assert!(check_violations(&clean, false).is_ok());
    }
}
