//! Command-line front end for the symmetry test suite.

use clap::{Args, Parser, Subcommand, ValueEnum};
use ot_symmetry::confset::{confidence_grid, confidence_hull, GridSpec};
use ot_symmetry::group::SymmetryGroup;
use ot_symmetry::io::{self, fmt_sig, round_sig};
use ot_symmetry::reference::{Construction, ErdKind, ReferenceSet};
use ot_symmetry::simulate::{self, AreLaw, Method, ScenarioSpec};
use ot_symmetry::stats::{self, Calibration, TestKind};
use ot_symmetry::{seed, Real};
use std::fs::File;
use std::io::BufReader;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "ot-symmetry", version, about = "Distribution-free tests of multivariate symmetry")]
struct Cli {
    /// Worker threads (default: available parallelism; env OT_SYMMETRY_THREADS)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ErdArg {
    Gaussian,
    Uniform,
    #[value(name = "spherical-uniform")]
    SphericalUniform,
}

impl From<ErdArg> for ErdKind {
    fn from(e: ErdArg) -> Self {
        match e {
            ErdArg::Gaussian => ErdKind::Gaussian,
            ErdArg::Uniform => ErdKind::Uniform,
            ErdArg::SphericalUniform => ErdKind::SphericalUniform,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConstructionArg {
    Random,
    Halton,
}

impl From<ConstructionArg> for Construction {
    fn from(c: ConstructionArg) -> Self {
        match c {
            ConstructionArg::Random => Construction::RandomSample,
            ConstructionArg::Halton => Construction::HaltonTransformed,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CalibrationArg {
    Asymptotic,
    Exact,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScoreArg {
    Identity,
    #[value(name = "gaussian-plugin")]
    GaussianPlugin,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TestArg {
    Gwsr,
    Sign,
    Hotelling,
}

impl From<TestArg> for TestKind {
    fn from(t: TestArg) -> Self {
        match t {
            TestArg::Gwsr => TestKind::Gwsr,
            TestArg::Sign => TestKind::GeneralizedSign,
            TestArg::Hotelling => TestKind::HotellingT2,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputArg {
    Json,
    Csv,
}

#[derive(Args)]
struct CommonTestArgs {
    /// Symmetry group: central, sign, spherical, or finite:<matrix-file>
    #[arg(long, default_value = "central")]
    group: String,
    #[arg(long, value_enum, default_value_t = ErdArg::Gaussian)]
    erd: ErdArg,
    #[arg(long, value_enum, default_value_t = ConstructionArg::Halton)]
    construction: ConstructionArg,
    #[arg(long, value_enum, default_value_t = ScoreArg::Identity)]
    score: ScoreArg,
    #[arg(long, value_enum, default_value_t = CalibrationArg::Exact)]
    calibration: CalibrationArg,
    /// Monte-Carlo replications for exact calibration
    #[arg(long, default_value_t = 999)]
    b: usize,
    #[arg(long, default_value_t = 0.05)]
    alpha: Real,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Run a symmetry test on a CSV dataset
    Test {
        #[arg(long)]
        input: String,
        #[arg(long, value_enum, default_value_t = TestArg::Gwsr)]
        test: TestArg,
        /// Use these reference points instead of constructing them
        #[arg(long)]
        reference_file: Option<String>,
        /// Exit with status 2 when the test rejects
        #[arg(long)]
        fail_on_reject: bool,
        #[command(flatten)]
        common: CommonTestArgs,
    },
    /// Emit the sorted Monte-Carlo null distribution of a statistic
    NullDist {
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        p: usize,
        #[arg(long, value_enum, default_value_t = TestArg::Gwsr)]
        test: TestArg,
        #[command(flatten)]
        common: CommonTestArgs,
    },
    /// Reproduce a power-table cell by simulation
    Power {
        /// Scenario name (C1-C10, S1-S10, Sp1-Sp10)
        #[arg(long)]
        scenario: Option<String>,
        #[arg(long, default_value_t = 0.0)]
        lambda: Real,
        /// Shorthand scenario:lambda, e.g. C1:0.2
        #[arg(long)]
        table_row: Option<String>,
        #[arg(long, default_value_t = 1000)]
        reps: usize,
        /// Comma-separated list from {gwsr, sign, hotelling}
        #[arg(long, default_value = "gwsr,sign,hotelling")]
        method: String,
        #[arg(long, value_enum, default_value_t = OutputArg::Csv)]
        output: OutputArg,
        #[command(flatten)]
        common: CommonTestArgs,
    },
    /// Compare signed-rank power at n with Hotelling power at ratio*n
    Are {
        #[arg(long, value_enum, default_value_t = AreLawArg::Gaussian)]
        law: AreLawArg,
        #[arg(long, default_value_t = 2)]
        p: usize,
        #[arg(long, default_value_t = 0.1)]
        shift: Real,
        #[arg(long, default_value_t = 500)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        ratio: Real,
        #[arg(long, default_value_t = 1000)]
        reps: usize,
        #[arg(long, value_enum, default_value_t = OutputArg::Csv)]
        output: OutputArg,
        #[command(flatten)]
        common: CommonTestArgs,
    },
    /// Confidence set for the center of symmetry by test inversion
    Confset {
        #[arg(long)]
        input: String,
        #[arg(long, value_enum, default_value_t = TestArg::Gwsr)]
        test: TestArg,
        #[arg(long, value_enum, default_value_t = ConfsetModeArg::Grid)]
        mode: ConfsetModeArg,
        /// Grid points per axis
        #[arg(long, default_value_t = 41)]
        grid_steps: usize,
        /// Comma-separated lower grid bounds (default: data mean - 3 sd)
        #[arg(long, allow_hyphen_values = true)]
        grid_lower: Option<String>,
        /// Comma-separated upper grid bounds
        #[arg(long, allow_hyphen_values = true)]
        grid_upper: Option<String>,
        #[arg(long, value_enum, default_value_t = OutputArg::Json)]
        output: OutputArg,
        #[command(flatten)]
        common: CommonTestArgs,
    },
    /// Construct a reference set and emit it as CSV
    Reference {
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        p: usize,
        #[arg(long, default_value_t = true)]
        emit: bool,
        #[command(flatten)]
        common: CommonTestArgs,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AreLawArg {
    Gaussian,
    Epanechnikov,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConfsetModeArg {
    Grid,
    Hull,
}

fn fail(msg: &str) -> ExitCode {
    eprintln!("{}", serde_json::json!({ "error": msg }));
    ExitCode::from(1)
}

fn parse_group(spec: &str, p: usize) -> Result<SymmetryGroup, String> {
    match spec {
        "central" => Ok(SymmetryGroup::central(p)),
        "sign" => Ok(SymmetryGroup::sign_change(p)),
        "spherical" => Ok(SymmetryGroup::spherical(p)),
        other => {
            let path = other
                .strip_prefix("finite:")
                .ok_or_else(|| format!("unknown group `{other}`"))?;
            let rows = read_csv(path)?;
            let matrices = rows
                .into_iter()
                .enumerate()
                .map(|(k, row)| {
                    if row.len() != p * p {
                        return Err(format!(
                            "matrix row {} has {} entries, expected {}",
                            k + 1,
                            row.len(),
                            p * p
                        ));
                    }
                    Ok(nalgebra_matrix(p, &row))
                })
                .collect::<Result<Vec<_>, String>>()?;
            SymmetryGroup::finite(matrices).map_err(|e| e.to_string())
        }
    }
}

fn nalgebra_matrix(p: usize, row_major: &[Real]) -> nalgebra::DMatrix<Real> {
    nalgebra::DMatrix::from_row_slice(p, p, row_major)
}

fn read_csv(path: &str) -> Result<Vec<Vec<Real>>, String> {
    let file = File::open(path).map_err(|e| format!("{path}: {e}"))?;
    io::read_points_csv(BufReader::new(file)).map_err(|e| format!("{path}: {e}"))
}

fn calibration_of(args: &CommonTestArgs) -> Calibration {
    match args.calibration {
        CalibrationArg::Asymptotic => Calibration::Asymptotic,
        CalibrationArg::Exact => Calibration::Exact(args.b),
    }
}

fn build_reference(
    args: &CommonTestArgs,
    group: &SymmetryGroup,
    n: usize,
) -> Result<ReferenceSet, String> {
    ReferenceSet::build(group, args.erd.into(), n, args.construction.into(), args.seed)
        .map_err(|e| e.to_string())
}

/// Round every number in a JSON tree to the shared output precision.
fn round_json(value: &mut serde_json::Value) {
    match value {
        serde_json::Value::Number(num) => {
            if let Some(f) = num.as_f64() {
                if num.as_i64().is_none() && num.as_u64().is_none() {
                    if let Some(rounded) = serde_json::Number::from_f64(round_sig(f)) {
                        *num = rounded;
                    }
                }
            }
        }
        serde_json::Value::Array(items) => items.iter_mut().for_each(round_json),
        serde_json::Value::Object(map) => map.values_mut().for_each(round_json),
        _ => {}
    }
}

fn emit_power_results(
    results: &[simulate::PowerResult],
    output: OutputArg,
) -> Result<(), String> {
    match output {
        OutputArg::Csv => print!("{}", simulate::power_csv(results)),
        OutputArg::Json => {
            let mut value = serde_json::to_value(results).map_err(|e| e.to_string())?;
            round_json(&mut value);
            println!("{}", serde_json::to_string_pretty(&value).map_err(|e| e.to_string())?);
        }
    }
    Ok(())
}

fn emit_report(report: &stats::TestReport) -> Result<(), String> {
    let mut value = serde_json::to_value(report).map_err(|e| e.to_string())?;
    value["version"] = serde_json::Value::String(ot_symmetry::VERSION.to_string());
    round_json(&mut value);
    println!("{}", serde_json::to_string_pretty(&value).map_err(|e| e.to_string())?);
    Ok(())
}

fn run() -> Result<ExitCode, String> {
    let cli = Cli::parse();
    let threads = cli
        .threads
        .or_else(|| {
            std::env::var("OT_SYMMETRY_THREADS").ok().and_then(|v| v.parse().ok())
        })
        .unwrap_or(0);
    rayon_pool(threads)?;

    match cli.command {
        Command::Test { input, test, reference_file, fail_on_reject, common } => {
            if common.erd == ErdArg::Uniform && common.group == "spherical" {
                return Err("uniform ERD is not permissible with the spherical group".into());
            }
            let data = read_csv(&input)?;
            let p = data[0].len();
            let test_kind: TestKind = test.into();
            let group = parse_group(&common.group, p)?;
            let mut reference = match &reference_file {
                Some(path) => {
                    let points = read_csv(path)?;
                    ReferenceSet::from_points(group, points, common.erd.into())
                        .map_err(|e| e.to_string())?
                }
                None => build_reference(&common, &group, data.len())?,
            };
            if common.score == ScoreArg::GaussianPlugin {
                let score = stats::plug_in_score(&data).map_err(|e| e.to_string())?;
                reference = reference.with_score(score);
            }
            let report = stats::run_test(
                &data,
                &reference,
                test_kind,
                common.alpha,
                calibration_of(&common),
                common.seed,
            )
            .map_err(|e| e.to_string())?;
            emit_report(&report)?;
            if fail_on_reject && report.reject {
                return Ok(ExitCode::from(2));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::NullDist { n, p, test, common } => {
            let group = parse_group(&common.group, p)?;
            let reference = build_reference(&common, &group, n)?;
            let mut rng = seed::rng(common.seed, seed::Stream::Null, 0);
            let null = stats::exact_null(&reference, test.into(), common.b, &mut rng)
                .map_err(|e| e.to_string())?;
            println!("value");
            for v in null {
                println!("{}", fmt_sig(v));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Power { scenario, lambda, table_row, reps, method, output, common } => {
            if reps == 0 {
                return Err("--reps must be positive".into());
            }
            let (name, lambda) = match (&table_row, &scenario) {
                (Some(row), _) => {
                    let (name, lam) = row
                        .split_once(':')
                        .ok_or_else(|| format!("bad --table-row `{row}`, expected NAME:LAMBDA"))?;
                    (
                        name.to_string(),
                        lam.parse::<Real>().map_err(|e| format!("bad lambda: {e}"))?,
                    )
                }
                (None, Some(name)) => (name.clone(), lambda),
                (None, None) => return Err("need --scenario or --table-row".into()),
            };
            let spec = ScenarioSpec::named(&name, lambda).map_err(|e| e.to_string())?;
            let methods: Vec<Method> = method
                .split(',')
                .map(|m| {
                    let test = match m.trim() {
                        "gwsr" => TestKind::Gwsr,
                        "sign" => TestKind::GeneralizedSign,
                        "hotelling" => TestKind::HotellingT2,
                        other => return Err(format!("unknown method `{other}`")),
                    };
                    Ok(Method {
                        test,
                        erd: common.erd.into(),
                        construction: common.construction.into(),
                        calibration: calibration_of(&common),
                    })
                })
                .collect::<Result<_, String>>()?;
            let results =
                simulate::power_study(&spec, &methods, reps, common.alpha, common.seed)
                    .map_err(|e| e.to_string())?;
            emit_power_results(&results, output)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Are { law, p, shift, n, ratio, reps, output, common } => {
            if reps == 0 {
                return Err("--reps must be positive".into());
            }
            let law = match law {
                AreLawArg::Gaussian => AreLaw::Gaussian,
                AreLawArg::Epanechnikov => AreLaw::Epanechnikov,
            };
            let (gwsr, hotelling) = simulate::are_check(
                law,
                common.erd.into(),
                p,
                shift,
                n,
                ratio,
                reps,
                common.alpha,
                common.seed,
            )
            .map_err(|e| e.to_string())?;
            emit_power_results(&[gwsr, hotelling], output)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Confset {
            input,
            test,
            mode,
            grid_steps,
            grid_lower,
            grid_upper,
            output,
            common,
        } => {
            let data = read_csv(&input)?;
            let p = data[0].len();
            let group = parse_group(&common.group, p)?;
            let parse_bounds = |s: &str| -> Result<Vec<Real>, String> {
                let v: Result<Vec<Real>, _> =
                    s.split(',').map(|f| f.trim().parse::<Real>()).collect();
                let v = v.map_err(|e| format!("bad grid bound: {e}"))?;
                if v.len() != p {
                    return Err(format!("grid bound needs {p} coordinates"));
                }
                Ok(v)
            };
            let (set, candidates, flags) = match mode {
                ConfsetModeArg::Grid => {
                    let mut grid = GridSpec::from_data(&data, grid_steps);
                    if let Some(s) = &grid_lower {
                        grid.lower = parse_bounds(s)?;
                    }
                    if let Some(s) = &grid_upper {
                        grid.upper = parse_bounds(s)?;
                    }
                    confidence_grid(
                        &data,
                        &group,
                        common.erd.into(),
                        common.construction.into(),
                        test.into(),
                        common.alpha,
                        &grid,
                        calibration_of(&common),
                        common.seed,
                    )
                    .map_err(|e| e.to_string())?
                }
                ConfsetModeArg::Hull => confidence_hull(
                    &data,
                    &group,
                    common.erd.into(),
                    common.construction.into(),
                    test.into(),
                    common.alpha,
                    calibration_of(&common),
                    common.seed,
                )
                .map_err(|e| e.to_string())?,
            };
            match output {
                OutputArg::Csv => print!("{}", set.csv(&candidates, &flags)),
                OutputArg::Json => {
                    let mut value = serde_json::to_value(&set).map_err(|e| e.to_string())?;
                    value["version"] =
                        serde_json::Value::String(ot_symmetry::VERSION.to_string());
                    round_json(&mut value);
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&value).map_err(|e| e.to_string())?
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Reference { n, p, emit, common } => {
            let group = parse_group(&common.group, p)?;
            let reference = build_reference(&common, &group, n)?;
            if emit {
                print!("{}", io::reference_csv(&reference));
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn rayon_pool(threads: usize) -> Result<(), String> {
    if threads == 0 {
        return Ok(());
    }
    ot_symmetry::build_thread_pool(threads).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(msg) => fail(&msg),
    }
}
