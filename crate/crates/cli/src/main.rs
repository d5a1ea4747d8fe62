//! Command-line front end for the invariant Mandel parameter.

mod parse;
mod report;

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use mandelq::closed_forms::{validate_family, write_ledger, Reading, Verdict, CLOSED_FORM_TOLERANCE};
use mandelq::fock::read_density_matrix;
use mandelq::sweep::{preset, preset_names, run_sweep, write_csv, write_json, Axis, Format, SweepSpec};
use mandelq::{invariant_mandel_q, CrossCheck, Error, Family, QOptions, TruncationPolicy, TwoModeState};

#[derive(Parser)]
#[command(name = "mandelq", version, about = "U(2)-invariant Mandel parameter of two-mode states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Common {
    /// Fixed n_max per mode instead of the adaptive cutoff.
    #[arg(long, global = true, env = "MANDELQ_CUTOFF")]
    cutoff: Option<usize>,
}

impl Common {
    fn policy(&self) -> TruncationPolicy {
        match self.cutoff {
            Some(n) => TruncationPolicy::fixed(n),
            None => TruncationPolicy::default(),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Q(ρ) for one parametric state.
    Point {
        #[command(subcommand)]
        state: PointState,
        #[command(flatten)]
        common: Common,
        /// Closed-form cross-check policy.
        #[arg(long, value_enum, default_value_t = CheckArg::IfValidated, global = true)]
        cross_check: CheckArg,
        /// Print JSON instead of text.
        #[arg(long, global = true)]
        json: bool,
    },
    /// Evaluate Q(ρ) over a parameter grid.
    Sweep(SweepArgs),
    /// Q(ρ) for a density matrix read from a file.
    Custom {
        path: PathBuf,
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        json: bool,
    },
    /// Compare a family's closed form with the Fock-space oracle.
    Validate {
        #[arg(value_enum)]
        family: FamilyArg,
        #[arg(long, value_enum, default_value_t = ReadingArg::Resolved)]
        reading: ReadingArg,
        #[arg(long, default_value_t = CLOSED_FORM_TOLERANCE)]
        tolerance: f64,
        /// Write mismatching points to this JSON file.
        #[arg(long)]
        ledger: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum PointState {
    Fock {
        #[arg(long)]
        n1: usize,
        #[arg(long)]
        n2: usize,
    },
    SqueezedCoherent {
        /// `re`, `re,im` or `mag@phase`.
        #[arg(long, value_parser = parse::complex, allow_hyphen_values = true)]
        z1: Complex64,
        #[arg(long, value_parser = parse::complex, allow_hyphen_values = true)]
        z2: Complex64,
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
    },
    SqueezedThermal {
        #[arg(long, allow_hyphen_values = true)]
        beta: f64,
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
    },
    Superposition {
        #[arg(long, allow_hyphen_values = true)]
        u1: f64,
        #[arg(long, allow_hyphen_values = true)]
        u2: f64,
        #[arg(long, allow_hyphen_values = true)]
        v1: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        v2: f64,
        #[arg(long)]
        r: f64,
        #[arg(long, allow_hyphen_values = true)]
        eta: f64,
    },
}

impl PointState {
    fn state(&self) -> TwoModeState {
        match *self {
            PointState::Fock { n1, n2 } => TwoModeState::Fock { n1, n2 },
            PointState::SqueezedCoherent { z1, z2, a, b } => TwoModeState::SqueezedCoherent { z1, z2, a, b },
            PointState::SqueezedThermal { beta, a, b } => TwoModeState::SqueezedThermal { beta, a, b },
            PointState::Superposition { u1, u2, v1, v2, r, eta } => {
                TwoModeState::CoherentSuperposition { u1, u2, v1, v2, r, eta }
            }
        }
    }
}

#[derive(Args)]
struct SweepArgs {
    /// Start from a figure preset.
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(preset_names().iter().copied()))]
    preset: Option<String>,
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
    /// Fixed parameter `name=value`; repeatable, overrides the preset.
    #[arg(long = "fix", value_parser = parse::assignment, allow_hyphen_values = true)]
    fixed: Vec<(String, f64)>,
    /// Swept parameter `name=min:max:steps[:periodic]` or `name=v1,v2,...`.
    #[arg(long = "axis", value_parser = parse::axis, allow_hyphen_values = true)]
    axes: Vec<(String, mandelq::sweep::AxisValues)>,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// Output file; standard output when omitted.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Confirm each point against a validated closed form.
    #[arg(long)]
    cross_check: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(ValueEnum, Clone, Copy)]
enum FamilyArg {
    Fock,
    SqueezedCoherent,
    SqueezedThermal,
    Superposition,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::Fock => Family::Fock,
            FamilyArg::SqueezedCoherent => Family::SqueezedCoherent,
            FamilyArg::SqueezedThermal => Family::SqueezedThermal,
            FamilyArg::Superposition => Family::Superposition,
        }
    }
}

#[derive(ValueEnum, Clone, Copy)]
enum ReadingArg {
    Printed,
    Resolved,
}

#[derive(ValueEnum, Clone, Copy)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum CheckArg {
    Off,
    IfValidated,
    Require,
}

/// Exit status for each library error.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::ZeroIntensity(_) | Error::ZeroModeIntensity(_) => 2,
        Error::Parse(_)
        | Error::Validation(_)
        | Error::ClosedFormMismatch { .. }
        | Error::InvalidTemperature(_)
        | Error::InvalidWeight(_)
        | Error::InvalidParameter { .. }
        | Error::DimensionMismatch { .. } => 3,
        Error::CutoffTooSmall(_) | Error::ConvergenceFailure(_) | Error::NumericalFailure(_) => 4,
    }
}

enum Failure {
    Lib(Error),
    Io(io::Error),
    /// Already reported; exit with this code.
    Code(u8),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
        Err(Failure::Code(c)) => ExitCode::from(c),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Point { state, common, cross_check, json } => {
            let options = QOptions {
                truncation: common.policy(),
                cross_check: match cross_check {
                    CheckArg::Off => CrossCheck::Off,
                    CheckArg::IfValidated => CrossCheck::IfValidated,
                    CheckArg::Require => CrossCheck::Require,
                },
                ..QOptions::default()
            };
            let state = state.state();
            let result = invariant_mandel_q(&state, &options)?;
            let label = state.family().to_string();
            print_result(&label, &result, json);
        }
        Command::Custom { path, common, json } => {
            let rho = read_density_matrix(&path)?;
            let options = QOptions { truncation: common.policy(), ..QOptions::default() };
            let result = invariant_mandel_q(&TwoModeState::ExplicitDensityMatrix(rho), &options)?;
            print_result(&path.display().to_string(), &result, json);
        }
        Command::Sweep(args) => sweep(args)?,
        Command::Validate { family, reading, tolerance, ledger, common } => {
            let reading = match reading {
                ReadingArg::Printed => Reading::Printed,
                ReadingArg::Resolved => Reading::Resolved,
            };
            let summary = validate_family(family.into(), reading, &common.policy(), tolerance)?;
            println!(
                "{} ({} reading): {} points, {} match, {} mismatch, {} unchecked, max |diff| = {:.3e}",
                summary.family,
                reading.name(),
                summary.points.len(),
                summary.count(Verdict::Match),
                summary.count(Verdict::Mismatch),
                summary.count(Verdict::Unchecked),
                summary.max_abs_diff()
            );
            if let Some(path) = ledger {
                write_ledger(&summary, BufWriter::new(File::create(&path)?))?;
                println!("ledger written to {}", path.display());
            }
            if summary.count(Verdict::Mismatch) > 0 {
                return Err(Failure::Code(3));
            }
        }
    }
    Ok(())
}

fn print_result(label: &str, result: &mandelq::QResult, json: bool) {
    if json {
        println!("{}", report::json(label, result));
    } else {
        print!("{}", report::human(label, result));
    }
}

fn sweep(args: SweepArgs) -> Result<(), Failure> {
    let mut spec = match (&args.preset, args.family) {
        (Some(name), None) => preset(name).expect("clap restricts preset names"),
        (None, Some(family)) => SweepSpec {
            family: family.into(),
            fixed: BTreeMap::new(),
            axes: Vec::new(),
            cutoff: None,
            cross_check: false,
            format: Format::Csv,
            preset: None,
            notes: Vec::new(),
        },
        _ => return Err(Error::Parse("give exactly one of --preset or --family".to_string()).into()),
    };
    for (name, value) in args.fixed {
        spec.axes.retain(|a| a.name != name);
        spec.fixed.insert(name, value);
    }
    for (name, values) in args.axes {
        spec.fixed.remove(&name);
        match spec.axes.iter_mut().find(|a| a.name == name) {
            Some(axis) => axis.values = values,
            None => spec.axes.push(Axis { name, values }),
        }
    }
    spec.cutoff = args.common.cutoff;
    spec.cross_check = args.cross_check;
    spec.format = match args.format {
        FormatArg::Csv => Format::Csv,
        FormatArg::Json => Format::Json,
    };

    let output = run_sweep(&spec)?;
    let sink: Box<dyn Write> = match &args.output {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(io::stdout().lock()),
    };
    let mut sink = BufWriter::new(sink);
    match spec.format {
        Format::Csv => write_csv(&output, &mut sink)?,
        Format::Json => write_json(&output, &mut sink)?,
    }
    sink.flush()?;
    Ok(())
}
