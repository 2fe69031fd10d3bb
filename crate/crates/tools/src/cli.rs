//! `chm6` subcommands. Usage errors exit with 2, module errors with 1 and the
//! error name on stderr.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use chm6_core::equivalence::{are_equivalent_with, EquivalenceOptions};
use chm6_core::families::{
    border_h, dita_corner, dita_d6, family_h, family_h_with_signs, fourier_f6, fourier_f6_transposed,
    interpolation, self_adjoint_h, symmetric_m, BorderAxis, ParamPoint, Sign, SignPattern,
};
use chm6_core::search::{SearchError, SearchOutcome};
use chm6_core::{classify, compose12, project_search, SearchConfig, UnitMatrix, DEFAULT_PRECISION};
use clap::error::ErrorKind;
use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::format::{
    to_json, write_scan_csv, ClassificationJson, ComposeSpecJson, MatrixJson, ScanRow, WitnessJson,
};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "chm6", version, about = "Order-6 complex Hadamard matrices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a family member and print it as matrix JSON.
    Gen(GenArgs),
    /// Report modulus and unitarity defects.
    Verify {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long, env = "HADAMARD_TOL", default_value_t = 1e-10)]
        tol: f64,
    },
    /// Bring a matrix to dephased form.
    Dephase {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the dephasing witness here.
        #[arg(long, value_name = "FILE")]
        witness: Option<PathBuf>,
    },
    /// Decide equivalence of two order-6 matrices.
    Equiv {
        #[arg(long, value_name = "FILE")]
        a: PathBuf,
        #[arg(long, value_name = "FILE")]
        b: PathBuf,
        #[arg(long, env = "HADAMARD_TOL", default_value_t = 1e-10)]
        tol: f64,
        /// Skip the fingerprint screen and always search.
        #[arg(long)]
        no_screen: bool,
    },
    /// Print the rounded Haagerup fingerprint.
    Fingerprint {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        precision: u32,
    },
    /// Defects over a uniform grid on (-pi/2, pi/2]^2, as CSV.
    Scan {
        #[arg(long, value_enum, default_value_t = ScanFamily::H)]
        family: ScanFamily,
        #[arg(long, default_value_t = 33)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Alternating-projection search from random phases, with classification.
    Search {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 2000)]
        max_iter: usize,
        /// Run `k` uses seed `seed + k`.
        #[arg(long, default_value_t = 1)]
        runs: u64,
        /// Grid resolution handed to the classifier.
        #[arg(long, default_value_t = 17)]
        grid: usize,
        /// Writes `PREFIX-k.json` and `PREFIX-k.classification.json` per converged run.
        #[arg(long, value_name = "PREFIX")]
        out: Option<PathBuf>,
    },
    /// Match a matrix against the known families.
    Classify {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long, default_value_t = 17)]
        grid: usize,
    },
    /// Order-12 block construction from a compose spec JSON.
    Compose12 {
        #[arg(long, value_name = "FILE")]
        spec: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenFamily {
    /// H(x1, x2); optional `--signs`.
    H,
    /// F6(a, b).
    F6,
    /// F6(a, b) transposed.
    F6t,
    /// D6(c), |c| <= pi/4.
    D6,
    /// Corner limit of H, parameter x.
    DitaCorner,
    /// Symmetric slice, parameter x.
    Sym,
    /// Self-adjoint slice H(x, -x).
    SelfAdjoint,
    /// H(x, pi/2).
    BorderX2,
    /// H(pi/2, x).
    BorderX1,
    /// H(xi x, (1 - xi) x).
    Interpolation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScanFamily {
    H,
    F6,
    F6t,
}

#[derive(Debug, clap::Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub family: GenFamily,
    #[arg(long, allow_hyphen_values = true)]
    pub x1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub x2: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<f64>,
    /// Path position in [0, 1] for `interpolation`; never scaled by `--turns`.
    #[arg(long, allow_hyphen_values = true)]
    pub xi: Option<f64>,
    /// Sign pattern s11 s12 s21 s22 for `h`, e.g. `++--`.
    #[arg(long, allow_hyphen_values = true)]
    pub signs: Option<String>,
    /// Read angles as fractions of a full turn instead of radians.
    #[arg(long)]
    pub turns: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses `std::env::args` and runs; returns the process exit code.
pub fn main() -> i32 {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}: {e}", e.name());
            1
        }
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Gen(args) => {
            let m = generate(&args)?;
            emit(&to_json(&MatrixJson::from_matrix(&m)), args.out.as_deref())
        }
        Command::Verify { input, tol } => {
            let m = read_matrix(&input)?;
            #[derive(Serialize)]
            struct Report {
                modulus_defect: f64,
                unitarity_defect: f64,
                hadamard: bool,
            }
            let report = Report {
                modulus_defect: m.modulus_defect(),
                unitarity_defect: m.unitarity_defect(),
                hadamard: m.is_hadamard(tol),
            };
            emit(&to_json(&report), None)
        }
        Command::Dephase { input, out, witness } => {
            let (d, w) = read_matrix(&input)?.dephase()?;
            if let Some(path) = witness {
                emit(&to_json(&WitnessJson::from_witness(&w)), Some(&path))?;
            }
            emit(&to_json(&MatrixJson::from_matrix(&d)), out.as_deref())
        }
        Command::Equiv { a, b, tol, no_screen } => {
            let (ma, mb) = (read_matrix(&a)?, read_matrix(&b)?);
            let opts = EquivalenceOptions { tol, screen: !no_screen, ..Default::default() };
            let r = are_equivalent_with(&ma, &mb, &opts)?;
            #[derive(Serialize)]
            struct Report {
                decision: &'static str,
                witness: Option<WitnessJson>,
                screened_by: Option<String>,
            }
            let report = Report {
                decision: r.decision.as_str(),
                witness: r.witness.as_ref().map(WitnessJson::from_witness),
                screened_by: r.screened_by,
            };
            emit(&to_json(&report), None)
        }
        Command::Fingerprint { input, precision } => {
            let fp = read_matrix(&input)?.fingerprint(precision)?;
            #[derive(Serialize)]
            struct Report {
                precision: u32,
                values: Vec<f64>,
            }
            emit(&to_json(&Report { precision: fp.precision, values: fp.values }), None)
        }
        Command::Scan { family, grid, out } => {
            if grid == 0 {
                usage_error("--grid must be at least 1");
            }
            let rows = scan(family, grid);
            match out {
                Some(path) => write_scan_csv(io::BufWriter::new(fs::File::create(path)?), &rows),
                None => write_scan_csv(io::stdout().lock(), &rows),
            }
        }
        Command::Search { seed, tol, max_iter, runs, grid, out } => search(seed, tol, max_iter, runs, grid, out),
        Command::Classify { input, grid } => {
            let c = classify(&read_matrix(&input)?, grid)?;
            emit(&to_json(&ClassificationJson::from(&c)), None)
        }
        Command::Compose12 { spec, out } => {
            let parsed: ComposeSpecJson = serde_json::from_str(&read_text(&spec)?)?;
            let m = compose12(&parsed.to_spec()?)?;
            emit(&to_json(&MatrixJson::from_matrix(&m)), out.as_deref())
        }
    }
}

fn usage_error(msg: &str) -> ! {
    Cli::command().error(ErrorKind::ValueValidation, msg).exit()
}

fn require(value: Option<f64>, flag: &str, family: GenFamily) -> f64 {
    match value {
        Some(v) => v,
        None => Cli::command()
            .error(
                ErrorKind::MissingRequiredArgument,
                format!("--family {} needs --{flag}", family.to_possible_value().unwrap().get_name()),
            )
            .exit(),
    }
}

fn generate(args: &GenArgs) -> Result<UnitMatrix, CliError> {
    let f = args.family;
    let angle = |v: Option<f64>, flag: &str| {
        let v = require(v, flag, f);
        if args.turns {
            v * TAU
        } else {
            v
        }
    };
    if args.signs.is_some() && f != GenFamily::H {
        usage_error("--signs only applies to --family h");
    }
    Ok(match f {
        GenFamily::H => {
            let p = ParamPoint::new(angle(args.x1, "x1"), angle(args.x2, "x2"));
            match &args.signs {
                Some(s) => family_h_with_signs(p, parse_signs(s))?,
                None => family_h(p)?,
            }
        }
        GenFamily::F6 => fourier_f6(angle(args.a, "a"), angle(args.b, "b")),
        GenFamily::F6t => fourier_f6_transposed(angle(args.a, "a"), angle(args.b, "b")),
        GenFamily::D6 => dita_d6(angle(args.c, "c"))?,
        GenFamily::DitaCorner => dita_corner(angle(args.x, "x"))?,
        GenFamily::Sym => symmetric_m(angle(args.x, "x"))?,
        GenFamily::SelfAdjoint => self_adjoint_h(angle(args.x, "x"))?,
        GenFamily::BorderX2 => border_h(BorderAxis::X2HalfPi, angle(args.x, "x"))?,
        GenFamily::BorderX1 => border_h(BorderAxis::X1HalfPi, angle(args.x, "x"))?,
        GenFamily::Interpolation => interpolation(angle(args.x, "x"), require(args.xi, "xi", f))?,
    })
}

fn parse_signs(s: &str) -> SignPattern {
    let signs: Vec<Sign> = s
        .chars()
        .map(|c| match c {
            '+' => Sign::Plus,
            '-' => Sign::Minus,
            _ => usage_error("--signs takes four of '+' or '-'"),
        })
        .collect();
    match signs[..] {
        [s11, s12, s21, s22] => SignPattern { s11, s12, s21, s22 },
        _ => usage_error("--signs takes four of '+' or '-'"),
    }
}

/// `x_k = -pi/2 + pi (k + 1) / grid`, rows ordered by `x1` then `x2`.
fn scan(family: ScanFamily, grid: usize) -> Vec<ScanRow> {
    let axis: Vec<f64> = (0..grid).map(|k| -FRAC_PI_2 + PI * (k + 1) as f64 / grid as f64).collect();
    let mut rows = Vec::with_capacity(grid * grid);
    for &x1 in &axis {
        for &x2 in &axis {
            let m = match family {
                ScanFamily::H => family_h(ParamPoint::new(x1, x2)).ok(),
                ScanFamily::F6 => Some(fourier_f6(x1, x2)),
                ScanFamily::F6t => Some(fourier_f6_transposed(x1, x2)),
            };
            let defects = m.map(|m| (m.modulus_defect(), m.unitarity_defect()));
            rows.push(ScanRow { x1, x2, defects });
        }
    }
    rows
}

#[derive(Serialize)]
struct RunRecord {
    run: u64,
    rng_seed: u64,
    status: &'static str,
    iterations: usize,
    defect: f64,
    matrix: MatrixJson,
    classification: Option<ClassificationJson>,
}

fn search(seed: u64, tol: f64, max_iter: usize, runs: u64, grid: usize, out: Option<PathBuf>) -> Result<(), CliError> {
    if runs == 0 {
        usage_error("--runs must be at least 1");
    }
    let mut records = Vec::new();
    let mut last_failure = None;
    for run in 0..runs {
        let rng_seed = seed.wrapping_add(run);
        let (status, outcome, class) = match project_search(&SearchConfig::random(rng_seed, tol, max_iter)) {
            Ok(found) => {
                let c = ClassificationJson::from(&classify(&found.matrix, grid)?);
                ("converged", found, Some(c))
            }
            Err(SearchError::MaxIterExceeded(best)) => {
                last_failure = Some(SearchError::MaxIterExceeded(best.clone()));
                ("max_iter_exceeded", *best, None)
            }
            Err(e) => return Err(e.into()),
        };
        let SearchOutcome { matrix, iterations, defect, .. } = outcome;
        let matrix = MatrixJson::from_matrix(&matrix);
        if let (Some(prefix), Some(c)) = (&out, &class) {
            let base = prefix.to_string_lossy();
            emit(&to_json(&matrix), Some(Path::new(&format!("{base}-{run}.json"))))?;
            emit(&to_json(c), Some(Path::new(&format!("{base}-{run}.classification.json"))))?;
        }
        records.push(RunRecord { run, rng_seed, status, iterations, defect, matrix, classification: class });
    }
    emit(&to_json(&records), None)?;
    match last_failure {
        Some(e) if records.iter().all(|r| r.classification.is_none()) => Err(e.into()),
        _ => Ok(()),
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        Ok(fs::read_to_string(path)?)
    }
}

fn read_matrix(path: &Path) -> Result<UnitMatrix, CliError> {
    let parsed: MatrixJson = serde_json::from_str(&read_text(path)?)?;
    parsed.to_matrix()
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}
