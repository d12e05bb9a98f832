//! On-disk layout of a finished run.
//!
//! ```text
//! out_dir/
//!   manifest.json    configuration echo, seed, thread count, wall time,
//!                    initial-population statistics
//!   stats.jsonl      one GenerationStats record per generation
//!   population.json  final population
//!   front.json       front 0 of the final population
//! ```

use std::fs;
use std::io::Write;
use std::path::Path;

use morpho_core::evolution::GenerationStats;
use morpho_core::objectives::ObjectiveVector;
use morpho_core::{decode, EvolutionConfig, Genotype, Individual, Phenotype, RunRecord};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MANIFEST: &str = "manifest.json";
pub const STATS: &str = "stats.jsonl";
pub const POPULATION: &str = "population.json";
pub const FRONT: &str = "front.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndividualRecord {
    pub id: u64,
    pub rank: usize,
    /// `None` stands for an infinite crowding distance.
    pub crowding: Option<f64>,
    pub n_props: usize,
    pub genes: Vec<f64>,
    /// Absent when the genotype maps to coincident propellers.
    pub phenotype: Option<Phenotype>,
    pub objectives: ObjectiveVector,
}

impl IndividualRecord {
    pub fn from_individual(ind: &Individual, config: &EvolutionConfig) -> Self {
        Self {
            id: ind.id,
            rank: ind.rank,
            crowding: ind.crowding.is_finite().then_some(ind.crowding),
            n_props: ind.genotype.prop_count(),
            genes: ind.genotype.genes().to_vec(),
            phenotype: decode(&ind.genotype, &config.params).ok(),
            objectives: ind.objectives,
        }
    }

    pub fn genotype(&self) -> Result<Genotype> {
        Genotype::new(self.genes.clone()).map_err(|e| Error::validation(format!("record {}: {e}", self.id)))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub config: EvolutionConfig,
    pub seed: u64,
    pub threads: usize,
    pub wall_time_s: f64,
    pub generations: usize,
    pub front_size: usize,
    pub initial: GenerationStats,
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

fn to_json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(value).expect("records serialize");
    out.push(b'\n');
    out
}

pub fn population_records(run: &RunRecord) -> Vec<IndividualRecord> {
    run.population
        .iter()
        .map(|i| IndividualRecord::from_individual(i, &run.config))
        .collect()
}

/// Front 0 in population order.
pub fn front_records(run: &RunRecord) -> Vec<IndividualRecord> {
    run.front()
        .map(|i| IndividualRecord::from_individual(i, &run.config))
        .collect()
}

pub fn stats_jsonl(history: &[GenerationStats]) -> Vec<u8> {
    let mut out = Vec::new();
    for s in history {
        serde_json::to_writer(&mut out, s).expect("stats serialize");
        out.push(b'\n');
    }
    out
}

pub fn write_run(run: &RunRecord, out_dir: &Path, threads: usize, wall_time_s: f64) -> Result<()> {
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let front = front_records(run);
    let manifest = Manifest {
        config: run.config.clone(),
        seed: run.config.seed,
        threads,
        wall_time_s,
        generations: run.history.len(),
        front_size: front.len(),
        initial: run.initial.clone(),
    };
    write_file(&out_dir.join(MANIFEST), &to_json(&manifest))?;
    write_file(&out_dir.join(STATS), &stats_jsonl(&run.history))?;
    write_file(&out_dir.join(POPULATION), &to_json(&population_records(run)))?;
    write_file(&out_dir.join(FRONT), &to_json(&front))?;
    Ok(())
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::validation(format!("{}: {e}", path.display())))
}

pub fn read_front(run_dir: &Path) -> Result<Vec<IndividualRecord>> {
    read_json(&run_dir.join(FRONT))
}

pub fn read_manifest(run_dir: &Path) -> Result<Manifest> {
    read_json(&run_dir.join(MANIFEST))
}

pub fn read_stats(run_dir: &Path) -> Result<Vec<GenerationStats>> {
    let path = run_dir.join(STATS);
    let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(|e| Error::validation(format!("{}: {e}", path.display()))))
        .collect()
}

/// Writes `bytes` to `path`, or to stdout when `path` is `None`.
pub fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => write_file(p, bytes),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| Error::io("<stdout>", e)),
    }
}
