//! Command execution: argument resolution, computation, output.

use std::fs::File;
use std::io::Write;
use std::num::NonZeroUsize;
use std::path::{Path, PathBuf};
use std::thread;

use qcnoise_core::bernoulli::BernoulliError;
use qcnoise_core::bounds::{self, ApReport, DivergenceReport, Preconditions};
use qcnoise_core::exact::{self, EnumerationCaps, ExactError};
use qcnoise_core::experiments::{
    self, WeightAccumulator, chunk_count, chunk_trials, weight_chunk, weight_stats_from,
};
use qcnoise_core::ring::RingError;
use qcnoise_core::{BiasExponent, NoiseSpec, RingElement, WeightStats};

use crate::cli::{
    BoundsArgs, Command, ExactArgs, LambdaArgs, PairArgs, PolyArgs, SandwichArgs, TableFormat,
    WeightsArgs,
};
use crate::io;
use crate::report::{
    AnalysisReport, LambdaReport, PairCells, PairReport, Render, SandwichCheck, SandwichReport,
    WeightReport,
};

/// Slack for the sandwich comparisons: the exact KL and TV of two tables
/// that agree to f64 rounding can land a few ulps on either side of zero,
/// and the theorem itself holds with room everywhere else.
const SANDWICH_EPS: f64 = 1e-12;

#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Resource(String),
    #[error("sandwich check failed: {0}")]
    Violation(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl AppError {
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Usage(_) | AppError::Io(_) => 1,
            AppError::Resource(_) => 2,
            AppError::Violation(_) => 3,
        }
    }
}

impl From<ExactError> for AppError {
    fn from(err: ExactError) -> Self {
        match err {
            ExactError::TableTooLarge { .. } | ExactError::JointTooLarge { .. } => {
                AppError::Resource(err.to_string())
            }
            other => AppError::Usage(other.to_string()),
        }
    }
}

impl From<RingError> for AppError {
    fn from(err: RingError) -> Self {
        AppError::Usage(err.to_string())
    }
}

impl From<BernoulliError> for AppError {
    fn from(err: BernoulliError) -> Self {
        AppError::Usage(err.to_string())
    }
}

pub fn execute(command: Command) -> Result<(), AppError> {
    match command {
        Command::Exact(args) => cmd_exact(args),
        Command::Bounds(args) => cmd_bounds(args),
        Command::Lambda(args) => cmd_lambda(args),
        Command::Pair(args) => cmd_pair(args),
        Command::Weights(args) => cmd_weights(args),
        Command::Sandwich(args) => cmd_sandwich(args),
    }
}

fn parse_terms(n: usize, inputs: &[String], dense: bool) -> Result<Vec<RingElement>, AppError> {
    inputs
        .iter()
        .map(|raw| {
            if dense {
                RingElement::parse_dense_hex(n, raw)
            } else {
                RingElement::parse_support(n, raw)
            }
            .map_err(AppError::from)
        })
        .collect()
}

fn build_spec(poly: &PolyArgs, omega: BiasExponent) -> Result<NoiseSpec, AppError> {
    if poly.t.is_empty() {
        return Err(AppError::Usage(
            "at least one --t polynomial is required".into(),
        ));
    }
    if let Some(s) = poly.s
        && s != poly.t.len()
    {
        return Err(AppError::Usage(format!(
            "--s {} disagrees with the {} repeated --t flags",
            s,
            poly.t.len()
        )));
    }
    let terms = parse_terms(poly.n, &poly.t, poly.dense)?;
    NoiseSpec::new(terms, omega).map_err(AppError::from)
}

fn support_strings(spec: &NoiseSpec) -> Vec<String> {
    spec.terms().iter().map(|t| t.to_string()).collect()
}

fn write_output(out: &Option<PathBuf>, content: &str) -> Result<(), AppError> {
    match out {
        Some(path) => {
            let mut file = File::create(path)?;
            file.write_all(content.as_bytes())?;
        }
        None => {
            std::io::stdout().write_all(content.as_bytes())?;
        }
    }
    Ok(())
}

fn export_table(
    path: &Path,
    format: TableFormat,
    table: &qcnoise_core::DistTable,
) -> Result<(), AppError> {
    let file = File::create(path)?;
    let mut writer = std::io::BufWriter::new(file);
    match format {
        TableFormat::Csv => io::write_dist_csv(&mut writer, table)?,
        TableFormat::Bin => io::write_dist_bin(&mut writer, table)?,
    }
    writer.flush()?;
    Ok(())
}

fn cmd_exact(args: ExactArgs) -> Result<(), AppError> {
    let spec = build_spec(&args.poly, args.omega)?;
    let caps = EnumerationCaps::with_table_n(args.caps.cap_n);
    let table = exact::dist_sum(&spec, caps)?;
    let model = exact::ideal_table(spec.n(), spec.tau(), spec.omega(), caps)?;
    let divergence = DivergenceReport::from_tables(&spec, &table, &model)?;
    if let Some(path) = &args.dist_out {
        export_table(path, args.dist_format, &table)?;
    }
    let report = AnalysisReport {
        t: Some(support_strings(&spec)),
        divergence,
    };
    write_output(&args.output.out, &report.render(args.output.format))
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn cmd_bounds(args: BoundsArgs) -> Result<(), AppError> {
    let n = args.n;
    let terms = if args.t.is_empty() {
        None
    } else {
        Some(parse_terms(n, &args.t, args.dense)?)
    };
    let derived_tau = terms
        .as_ref()
        .map(|ts| ts.iter().map(RingElement::weight).sum::<usize>());
    let tau = match (args.tau, derived_tau) {
        (Some(tau), Some(derived)) if tau != derived => {
            return Err(AppError::Usage(format!(
                "--tau {tau} disagrees with the total weight {derived} of the --t polynomials"
            )));
        }
        (Some(tau), _) => tau,
        (None, Some(derived)) => derived,
        (None, None) => {
            return Err(AppError::Usage("either --tau or --t is required".into()));
        }
    };
    let s = match (args.s, terms.as_ref()) {
        (Some(s), Some(ts)) if s != ts.len() => {
            return Err(AppError::Usage(format!(
                "--s {s} disagrees with the {} repeated --t flags",
                ts.len()
            )));
        }
        (Some(s), _) => s,
        (None, Some(ts)) => ts.len(),
        (None, None) => 1,
    };
    if s == 0 {
        return Err(AppError::Usage("--s must be at least 1".into()));
    }
    let spec = terms.map(|ts| NoiseSpec::new(ts, args.omega)).transpose()?;
    let spanning = spec.as_ref().map(NoiseSpec::spanning);

    let mut divergence = DivergenceReport::closed_form(n, s, tau, args.omega);
    divergence.preconditions = Preconditions::evaluate(n, args.omega, spanning);

    if args.a.is_some() && !args.ap {
        return Err(AppError::Usage(
            "--a is only meaningful together with --ap".into(),
        ));
    }
    if args.ap {
        let a = args.a.unwrap_or(1);
        if n.is_multiple_of(2) {
            return Err(AppError::Usage(format!(
                "the arithmetic-progression bound needs odd n, got {n}"
            )));
        }
        let g = gcd(a % n, n);
        if g != 1 {
            return Err(AppError::Usage(format!(
                "the common difference {a} shares the factor {g} with n = {n}"
            )));
        }
        if let Some(spec) = &spec {
            exact::check_ap_supports(spec, a)?;
        }
        let lower = bounds::ap_divergence_lower(n, tau, s, args.omega);
        if lower.vacuous {
            divergence
                .vacuous_flags
                .push("ap_lower_bound_vacuous".into());
        }
        divergence.ap = Some(ApReport {
            a,
            lower_bound: lower.value,
            vacuous: lower.vacuous,
            n_prime: exact::is_prime(n),
        });
    }

    let report = AnalysisReport {
        t: spec.as_ref().map(support_strings),
        divergence,
    };
    write_output(&args.output.out, &report.render(args.output.format))
}

fn cmd_lambda(args: LambdaArgs) -> Result<(), AppError> {
    let omega = args.omega.unwrap_or(BiasExponent::ZERO);
    let spec = build_spec(&args.poly, omega)?;
    let profile = exact::lambda_profile(&spec);
    let report = LambdaReport {
        n: spec.n(),
        s: spec.s(),
        tau: spec.tau(),
        t: support_strings(&spec),
        lambda: profile.values().to_vec(),
    };
    write_output(&args.output.out, &report.render(args.output.format))
}

fn cmd_pair(args: PairArgs) -> Result<(), AppError> {
    let spec = build_spec(&args.poly, args.omega)?;
    let caps = EnumerationCaps::with_table_n(args.caps.cap_n);
    let pair = exact::pair_table(&spec, args.i, args.j)?;
    let residual = if spec.n() <= caps.max_table_n {
        let table = exact::dist_sum(&spec, caps)?;
        let exact_pair = table.pair_marginal(args.i, args.j);
        let closed = pair.probs();
        let mut worst = 0.0f64;
        for a in 0..2 {
            for b in 0..2 {
                worst = worst.max((closed[a][b] - exact_pair[a][b]).abs());
            }
        }
        Some(worst)
    } else {
        None
    };
    let cells = pair.probs();
    let report = PairReport {
        n: spec.n(),
        s: spec.s(),
        tau: spec.tau(),
        omega: spec.omega(),
        t: support_strings(&spec),
        i: args.i,
        j: args.j,
        lambda: pair.lambda(),
        table: PairCells {
            p00: cells[0][0],
            p01: cells[0][1],
            p10: cells[1][0],
            p11: cells[1][1],
        },
        marginal: pair.marginal(),
        residual,
    };
    write_output(&args.output.out, &report.render(args.output.format))
}

/// Chunks are dealt to workers round-robin and merged in worker order; the
/// accumulators are integers, so any schedule yields the same result as the
/// sequential run.
pub fn weight_experiment_parallel(
    spec: &NoiseSpec,
    trials: u64,
    seed: u64,
    threads: usize,
) -> WeightStats {
    let chunks = chunk_count(trials);
    if threads <= 1 || chunks <= 1 {
        return experiments::weight_experiment(spec, trials, seed);
    }
    let workers = threads.min(chunks as usize);
    let merged = thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|worker| {
                scope.spawn(move || {
                    let mut local = WeightAccumulator::new(spec.n());
                    let mut chunk = worker as u64;
                    while chunk < chunks {
                        local.merge(&weight_chunk(
                            spec,
                            seed,
                            chunk,
                            chunk_trials(trials, chunk),
                        ));
                        chunk += workers as u64;
                    }
                    local
                })
            })
            .collect();
        let mut acc = WeightAccumulator::new(spec.n());
        for handle in handles {
            acc.merge(&handle.join().expect("worker panicked"));
        }
        acc
    });
    weight_stats_from(spec, &merged)
}

fn cmd_weights(args: WeightsArgs) -> Result<(), AppError> {
    if args.trials == 0 {
        return Err(AppError::Usage("--trials must be at least 1".into()));
    }
    let spec = build_spec(&args.poly, args.omega)?;
    let threads = args
        .threads
        .threads
        .map(NonZeroUsize::get)
        .unwrap_or_else(|| thread::available_parallelism().map_or(1, NonZeroUsize::get));
    let stats = weight_experiment_parallel(&spec, args.trials, args.seed, threads);
    let report = WeightReport {
        n: spec.n(),
        s: spec.s(),
        tau: spec.tau(),
        omega: spec.omega(),
        t: support_strings(&spec),
        trials: args.trials,
        seed: args.seed,
        mean: stats.mean,
        variance: stats.variance,
        expected_mean: stats.expected_mean,
        z_score: stats.z_score,
        histogram: stats.nonzero_bins().collect(),
        stats: stats.clone(),
    };
    write_output(&args.output.out, &report.render(args.output.format))
}

fn cmd_sandwich(args: SandwichArgs) -> Result<(), AppError> {
    let spec = build_spec(&args.poly, args.omega)?;
    let caps = EnumerationCaps::with_table_n(args.caps.cap_n);
    let table = exact::dist_sum(&spec, caps)?;
    let model = exact::ideal_table(spec.n(), spec.tau(), spec.omega(), caps)?;
    let divergence = DivergenceReport::from_tables(&spec, &table, &model)?;
    let checked = divergence.preconditions.all_met();
    let lower = divergence.reverse_pinsker_lower;
    let upper = divergence.pinsker_upper;
    let tv = divergence.tv_exact.expect("exact run fills tv");
    let pass = checked.then_some(lower - SANDWICH_EPS <= tv && tv <= upper + SANDWICH_EPS);
    let report = SandwichReport {
        t: support_strings(&spec),
        divergence,
        sandwich: SandwichCheck {
            checked,
            lower_bound: lower,
            upper_bound: upper,
            pass,
        },
    };
    write_output(&args.output.out, &report.render(args.output.format))?;
    if pass == Some(false) {
        return Err(AppError::Violation(format!(
            "expected {lower} <= {tv} <= {upper}"
        )));
    }
    Ok(())
}
