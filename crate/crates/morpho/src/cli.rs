//! Command-line interface.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use log::info;
use morpho_core::objectives::evaluate_phenotype;
use morpho_core::{
    evolve_with, quadcopter_baseline, EvolutionConfig, HoverOptions, PhysicalParams, RunRecord,
};

use crate::config::load_config;
use crate::design::load_design;
use crate::error::{Error, Result};
use crate::export::{front_csv, front_json, front_svg, Axes};
use crate::parallel::PoolEvaluator;
use crate::records::{emit, read_front, read_manifest, write_run};
use crate::report::{report_design, report_phenotype};

#[derive(Debug, Parser)]
#[command(
    name = "morpho",
    version,
    about = "Evolutionary design of multirotor propeller layouts"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run an evolution and write its records to a directory.
    Evolve {
        /// TOML run configuration; defaults apply when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Overrides the configured seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate one design file and print its report.
    Eval { design: PathBuf },
    /// Print the reference quadcopter and its evaluation.
    Baseline,
    /// Export front 0 of a finished run.
    Front {
        run_dir: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Objective pair for the plot, `X:Y` from alpha, lambda, size.
        #[arg(long, default_value = "lambda:alpha")]
        axes: String,
        /// Also write an SVG scatter plot here.
        #[arg(long)]
        plot: Option<PathBuf>,
        /// Write the export here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Evolution on a pool of `threads` workers (`None`: one per core).
/// Returns the record, the pool size, and the wall time in seconds.
pub fn run_evolution(config: &EvolutionConfig, threads: Option<usize>) -> Result<(RunRecord, usize, f64)> {
    let evaluator = PoolEvaluator::new(threads);
    let start = Instant::now();
    let run = evolve_with(config, &evaluator, |s| {
        info!(
            "generation {}: front {} hypervolume {:.6e}",
            s.generation, s.front0_size, s.hypervolume
        )
    })
    .map_err(|e| Error::validation(format!("invalid config: {e}")))?;
    Ok((run, evaluator.threads(), start.elapsed().as_secs_f64()))
}

fn cmd_evolve(config: Option<&Path>, seed: Option<u64>, out: &Path, threads: Option<usize>) -> Result<()> {
    let mut config = match config {
        Some(p) => load_config(p)?,
        None => EvolutionConfig::default(),
    };
    if let Some(s) = seed {
        config.seed = s;
    }
    let (run, threads, wall) = run_evolution(&config, threads)?;
    write_run(&run, out, threads, wall)?;
    info!(
        "wrote {} ({} front members, {:.1} s)",
        out.display(),
        run.front().count(),
        wall
    );
    Ok(())
}

fn cmd_eval(path: &Path) -> Result<()> {
    let design = load_design(path)?;
    emit(None, &report_design(&design).to_json())
}

fn cmd_baseline() -> Result<()> {
    let params = PhysicalParams::default();
    let ph = quadcopter_baseline();
    emit(
        None,
        &report_phenotype(&ph, &params, &HoverOptions::default()).to_json(),
    )
}

fn cmd_front(
    run_dir: &Path,
    format: Format,
    axes: &str,
    plot: Option<&Path>,
    out: Option<&Path>,
) -> Result<()> {
    let axes: Axes = axes.parse()?;
    if !run_dir.is_dir() {
        return Err(Error::io(
            run_dir,
            std::io::Error::new(std::io::ErrorKind::NotFound, "run directory not found"),
        ));
    }
    let front = read_front(run_dir)?;
    if let Some(plot) = plot {
        let (params, hover) = match read_manifest(run_dir) {
            Ok(m) => (m.config.params, m.config.hover),
            Err(_) => (PhysicalParams::default(), HoverOptions::default()),
        };
        let baseline = evaluate_phenotype(&quadcopter_baseline(), &params, &hover)
            .map_err(|e| Error::validation(format!("baseline: {e}")))?
            .objectives;
        let svg = front_svg(&front, axes, &baseline)?;
        emit(Some(plot), svg.as_bytes())?;
    }
    let bytes = match format {
        Format::Csv => front_csv(&front)?,
        Format::Json => front_json(&front),
    };
    emit(out, &bytes)
}

pub fn run(cli: Cli, threads: Option<usize>) -> Result<()> {
    match cli.command {
        Command::Evolve { config, seed, out } => cmd_evolve(config.as_deref(), seed, &out, threads),
        Command::Eval { design } => cmd_eval(&design),
        Command::Baseline => cmd_baseline(),
        Command::Front {
            run_dir,
            format,
            axes,
            plot,
            out,
        } => cmd_front(&run_dir, format, &axes, plot.as_deref(), out.as_deref()),
    }
}
