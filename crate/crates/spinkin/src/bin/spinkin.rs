use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use nalgebra::Complex;
use num_complex::Complex64;

use spinkin::averages::{
    lambda_coefficients, lambda_coefficients_cg, monomial_sphere_average, speed_excess_axes,
    total_acceleration_closed, total_acceleration_design, total_acceleration_exact,
    total_acceleration_mixed, total_speed_excess, total_variance_bures, total_variance_pure,
    SphericalDesign22,
};
use spinkin::bures::bures_sq_dittmann;
use spinkin::matrix::{commutator, CMatrix};
use spinkin::spin_algebra::{spin_matrices, Spin};
use spinkin::states::{constellation_to_state, parse_state, symmetric_embed, LoadedState, PureState};
use spinkin::{Error, Result};

#[derive(Parser)]
#[command(name = "spinkin", about = "Rotational kinematics of spin states", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MixedBackend {
    Eigen,
    Dittmann,
}

#[derive(Clone, Copy, ValueEnum)]
enum AccelRoute {
    Exact,
    Design,
    Closed,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum Metric {
    Bures,
    Trace,
}

#[derive(Subcommand)]
enum Command {
    /// Total variance (3x the axis-averaged squared rotational speed).
    Variance {
        #[arg(long)]
        input: PathBuf,
        /// Metric solver for density inputs.
        #[arg(long, value_enum, default_value = "eigen")]
        mixed_backend: MixedBackend,
    },
    /// Axis-averaged squared total acceleration.
    Accel {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "all")]
        route: AccelRoute,
    },
    /// Speed excess of a symmetric two-qubit state over its reduced states.
    Excess {
        #[arg(long)]
        input: PathBuf,
    },
    /// Coefficients of the closed acceleration formula for one spin.
    Lambda {
        #[arg(long)]
        spin: f64,
    },
    /// Verify the six-axis quadrature against all quartic sphere averages.
    DesignCheck,
    /// Random-state survey with measures, kinematics and figure data files.
    Survey {
        #[arg(long, default_value_t = 3000)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        components: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "bures")]
        metric: Metric,
    },
    /// Equal-angle acceleration landscape grid for the two-star-pair family.
    Contour {
        #[arg(long, default_value_t = 25)]
        resolution: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex::new(re, im)
}

/// 12 significant digits.
fn sig12(v: f64) -> String {
    format!("{v:.11e}")
}

fn load(path: &PathBuf) -> Result<LoadedState> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))?;
    parse_state(&text)
}

fn as_pure(state: LoadedState) -> Result<PureState> {
    match state {
        LoadedState::Ket(psi) => Ok(psi),
        LoadedState::Stars(con) => constellation_to_state(&con),
        LoadedState::Density { .. } => Err(Error::Invalid(
            "this command needs a pure state (ket or constellation)".into(),
        )),
    }
}

fn run_variance(input: &PathBuf, backend: MixedBackend) -> Result<()> {
    match load(input)? {
        LoadedState::Density { spin, rho } => {
            let (sx, sy, sz) = spin_matrices(spin);
            let rho = &rho.matrix;
            let total = match backend {
                MixedBackend::Eigen => total_variance_bures(rho, &[sx, sy, sz])?,
                MixedBackend::Dittmann => {
                    if rho.nrows() != 4 {
                        return Err(Error::Invalid(
                            "the dittmann backend needs a dimension-4 density".into(),
                        ));
                    }
                    let mut acc = 0.0;
                    for g in [&sx, &sy, &sz] {
                        let v = commutator(g, rho) * c(0.0, -1.0);
                        acc += bures_sq_dittmann(rho, &v)?;
                    }
                    acc
                }
            };
            println!("total_variance = {}", sig12(total));
            println!("avg_speed_sq = {}", sig12(total / 3.0));
        }
        other => {
            let psi = as_pure(other)?;
            let total = total_variance_pure(&psi);
            println!("total_variance = {}", sig12(total));
            println!("avg_speed_sq = {}", sig12(total / 3.0));
        }
    }
    Ok(())
}

fn run_accel(input: &PathBuf, route: AccelRoute) -> Result<()> {
    match load(input)? {
        LoadedState::Density { spin, rho } => {
            if !matches!(route, AccelRoute::Design | AccelRoute::All) {
                return Err(Error::Invalid(
                    "density inputs support only the design route".into(),
                ));
            }
            let (sx, sy, sz) = spin_matrices(spin);
            let v = total_acceleration_mixed(&rho.matrix, &[sx, sy, sz])?;
            println!("accel_design = {}", sig12(v));
        }
        other => {
            let psi = as_pure(other)?;
            match route {
                AccelRoute::Exact => println!("accel_exact = {}", sig12(total_acceleration_exact(&psi))),
                AccelRoute::Design => {
                    println!("accel_design = {}", sig12(total_acceleration_design(&psi)))
                }
                AccelRoute::Closed => {
                    println!("accel_closed = {}", sig12(total_acceleration_closed(&psi)?))
                }
                AccelRoute::All => {
                    println!("accel_exact = {}", sig12(total_acceleration_exact(&psi)));
                    println!("accel_design = {}", sig12(total_acceleration_design(&psi)));
                    println!("accel_closed = {}", sig12(total_acceleration_closed(&psi)?));
                }
            }
        }
    }
    Ok(())
}

fn run_excess(input: &PathBuf) -> Result<()> {
    let rho: CMatrix = match load(input)? {
        LoadedState::Density { rho, .. } => rho.matrix,
        other => as_pure(other)?.projector(),
    };
    // spin-1 states live in the symmetric two-qubit sector
    let rho = match rho.nrows() {
        3 => symmetric_embed(&rho)?,
        4 => rho,
        d => {
            return Err(Error::DimensionMismatch {
                expected: 4,
                found: d,
            })
        }
    };
    let axes = speed_excess_axes(&rho)?;
    for (name, v) in ["x", "y", "z"].iter().zip(axes.iter()) {
        println!("excess_{name} = {}", sig12(*v));
    }
    println!("excess_avg = {}", sig12(total_speed_excess(&rho)?));
    Ok(())
}

fn run_lambda(s: f64) -> Result<()> {
    let spin = Spin::new(s)?;
    let closed = lambda_coefficients(spin);
    let assembled = lambda_coefficients_cg(spin);
    for (name, a, b) in [
        ("lambda1", closed.l1, assembled.l1),
        ("lambda2", closed.l2, assembled.l2),
        ("lambda3", closed.l3, assembled.l3),
        ("lambda4", closed.l4, assembled.l4),
        ("lambda5", closed.l5, assembled.l5),
    ] {
        println!("{name} = {} (assembled route {})", sig12(a), sig12(b));
    }
    Ok(())
}

fn run_design_check() -> Result<()> {
    let design = SphericalDesign22::icosahedral();
    let mut worst = 0.0f64;
    let mut count = 0;
    for i in 0..=4u32 {
        for j in 0..=(4 - i) {
            let k = 4 - i - j;
            let sample = design.average(|n| {
                n[0].powi(i as i32) * n[1].powi(j as i32) * n[2].powi(k as i32)
            });
            let exact = monomial_sphere_average(&[i, j, k]);
            worst = worst.max((sample - exact).abs());
            count += 1;
        }
    }
    println!("monomials_checked = {count}");
    println!("max_error = {}", sig12(worst));
    if worst > 1e-13 {
        return Err(Error::Invalid("design quadrature check failed".into()));
    }
    println!("design-check: pass");
    Ok(())
}

fn run_survey(samples: usize, seed: u64, components: usize, out: &PathBuf, metric: Metric) -> Result<()> {
    use spinkin::survey::{
        correlation_csv, emit_figure_data, run_survey, survey_csv, SurveyConfig, FIGURE_IDS,
    };
    let cfg = SurveyConfig {
        samples,
        master_seed: seed,
        components,
        trace_metric: matches!(metric, Metric::Trace),
        ..SurveyConfig::default()
    };
    let result = run_survey(&cfg)?;
    std::fs::create_dir_all(out)
        .map_err(|e| Error::Invalid(format!("cannot create {}: {e}", out.display())))?;
    let write = |name: &str, text: String| {
        std::fs::write(out.join(name), text)
            .map_err(|e| Error::Invalid(format!("write failure: {e}")))
    };
    write("survey.csv", survey_csv(&result))?;
    write("correlations.csv", correlation_csv(&result))?;
    for id in FIGURE_IDS {
        emit_figure_data(&result.records, id, out)?;
    }
    let failed = result.records.iter().filter(|r| r.flag == 2).count();
    println!("records = {}", result.records.len());
    println!("solver_failures = {failed}");
    println!("negative_excess_fraction = {}", sig12(result.negative_f_fraction));
    println!("min_pure_excess = {}", sig12(result.min_pure_f));
    println!("output_dir = {}", out.display());
    Ok(())
}

fn run_contour(resolution: usize, out: &PathBuf) -> Result<()> {
    let grid = spinkin::survey::contour_grid(resolution)?;
    std::fs::write(out, grid)
        .map_err(|e| Error::Invalid(format!("cannot write {}: {e}", out.display())))?;
    println!("output_file = {}", out.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Variance { input, mixed_backend } => run_variance(input, *mixed_backend),
        Command::Accel { input, route } => run_accel(input, *route),
        Command::Excess { input } => run_excess(input),
        Command::Lambda { spin } => run_lambda(*spin),
        Command::DesignCheck => run_design_check(),
        Command::Survey {
            samples,
            seed,
            components,
            out,
            metric,
        } => run_survey(*samples, *seed, *components, out, *metric),
        Command::Contour { resolution, out } => run_contour(*resolution, out),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ Error::Degenerate { .. }) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
