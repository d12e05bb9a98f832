//! NSGA-II over genotypes with hover-tiered dominance.
//!
//! Random streams: the run seed keys a ChaCha8 generator; stream 0 feeds the
//! initial Latin hypercube and stream `t` feeds selection and variation of
//! generation `t`. Fitness evaluation never draws random numbers, so any
//! [`Evaluator`] that returns results in input order gives identical runs.

pub mod hypervolume;
pub mod lhs;
pub mod operators;
pub mod ranking;

use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::genotype::{Genotype, GENOME_LEN, MIN_PROPS};
use crate::hover::{HoverClass, HoverOptions};
use crate::objectives::{evaluate, ObjectiveVector};
use crate::params::PhysicalParams;

pub use hypervolume::{hypervolume, Reference};
pub use lhs::latin_hypercube;
pub use operators::{arithmetic_crossover, binary_tournament, mutate};
pub use ranking::{crowding_distance, dominates, fast_non_dominated_sort, tier};

#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    /// Birth order within the run; unique.
    pub id: u64,
    pub genotype: Genotype,
    pub objectives: ObjectiveVector,
    pub rank: usize,
    pub crowding: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct EvolutionConfig {
    pub pop_size: usize,
    pub generations: usize,
    /// Per-gene mutation probability.
    pub mutation_rate: f64,
    /// Standard deviation of the Gaussian mutation, in gene units.
    pub mutation_sigma: f64,
    pub crossover_rate: f64,
    pub seed: u64,
    pub params: PhysicalParams,
    pub hover: HoverOptions,
}

impl Default for EvolutionConfig {
    fn default() -> Self {
        Self {
            pop_size: 600,
            generations: 2000,
            mutation_rate: 0.20,
            mutation_sigma: 0.2,
            crossover_rate: 1.0,
            seed: 0,
            params: PhysicalParams::default(),
            hover: HoverOptions::default(),
        }
    }
}

/// A rejected configuration value and why.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{key}: {message}")]
pub struct ConfigError {
    pub key: String,
    pub message: String,
}

impl ConfigError {
    fn new(key: &str, message: impl Into<String>) -> Self {
        Self {
            key: key.into(),
            message: message.into(),
        }
    }
}

impl EvolutionConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        use alloc::format;
        if self.pop_size < 4 || !self.pop_size.is_multiple_of(2) {
            return Err(ConfigError::new(
                "pop_size",
                format!("must be even and at least 4, got {}", self.pop_size),
            ));
        }
        for (key, v) in [
            ("mutation_rate", self.mutation_rate),
            ("crossover_rate", self.crossover_rate),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(ConfigError::new(key, format!("must lie in [0, 1], got {v}")));
            }
        }
        if !(self.mutation_sigma.is_finite() && self.mutation_sigma >= 0.0) {
            return Err(ConfigError::new(
                "mutation_sigma",
                format!("must be finite and non-negative, got {}", self.mutation_sigma),
            ));
        }
        if !(self.hover.tol_eq.is_finite() && self.hover.tol_eq > 0.0) {
            return Err(ConfigError::new("hover.tol_eq", "must be finite and positive"));
        }
        if self.hover.max_iter == 0 {
            return Err(ConfigError::new("hover.max_iter", "must be positive"));
        }
        self.params.validate().map_err(|e| match e {
            crate::ModelError::InvalidParam { key, value } => ConfigError::new(
                &format!("params.{key}"),
                format!("must be finite and positive, got {value}"),
            ),
            other => ConfigError::new("params", format!("{other}")),
        })
    }
}

/// Maps a batch of genotypes to objective vectors, in order.
pub trait Evaluator {
    fn evaluate_batch(
        &self,
        genotypes: &[Genotype],
        params: &PhysicalParams,
        opts: &HoverOptions,
    ) -> Vec<ObjectiveVector>;
}

/// Evaluates one genotype after the other on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct SerialEvaluator;

impl Evaluator for SerialEvaluator {
    fn evaluate_batch(
        &self,
        genotypes: &[Genotype],
        params: &PhysicalParams,
        opts: &HoverOptions,
    ) -> Vec<ObjectiveVector> {
        genotypes.iter().map(|g| evaluate(g, params, opts)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Extrema {
    pub min: f64,
    pub max: f64,
}

impl Extrema {
    fn of(values: impl Iterator<Item = f64>) -> Option<Self> {
        values.fold(None, |acc: Option<Extrema>, v| {
            Some(match acc {
                None => Extrema { min: v, max: v },
                Some(e) => Extrema {
                    min: e.min.min(v),
                    max: e.max.max(v),
                },
            })
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GenerationStats {
    /// 0 for the initial population.
    pub generation: usize,
    pub front0_size: usize,
    pub alpha: Option<Extrema>,
    pub lambda: Option<Extrema>,
    pub size: Option<Extrema>,
    /// Individuals per expressed propeller count, 4 through 8.
    pub prop_histogram: [usize; 5],
    /// Individuals per tier: static, spinning, no hover, invalid.
    pub tier_counts: [usize; 4],
    /// Hypervolume of the static-hover members of front 0.
    pub hypervolume: f64,
}

impl GenerationStats {
    pub fn prop_share(&self, count: usize) -> f64 {
        let total: usize = self.prop_histogram.iter().sum();
        if total == 0 || !(MIN_PROPS..MIN_PROPS + 5).contains(&count) {
            return 0.0;
        }
        self.prop_histogram[count - MIN_PROPS] as f64 / total as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub config: EvolutionConfig,
    pub initial: GenerationStats,
    /// One entry per completed generation.
    pub history: Vec<GenerationStats>,
    pub population: Vec<Individual>,
}

impl RunRecord {
    /// Front 0 of the final population.
    pub fn front(&self) -> impl Iterator<Item = &Individual> {
        self.population.iter().filter(|i| i.rank == 0)
    }
}

/// Points entering the per-generation hypervolume: static-hover members of
/// front 0.
pub fn front_points<'a>(front: impl Iterator<Item = &'a Individual>) -> Vec<[f64; 3]> {
    front
        .filter(|i| !i.objectives.invalid && i.objectives.hover_class == HoverClass::Static)
        .map(|i| [i.objectives.alpha, i.objectives.lambda, i.objectives.size])
        .collect()
}

pub fn generation_stats(generation: usize, population: &[Individual]) -> GenerationStats {
    let front: Vec<&Individual> = population.iter().filter(|i| i.rank == 0).collect();
    let mut prop_histogram = [0usize; 5];
    let mut tier_counts = [0usize; 4];
    for ind in population {
        prop_histogram[ind.genotype.prop_count() - MIN_PROPS] += 1;
        tier_counts[tier(&ind.objectives) as usize] += 1;
    }
    let valid = || {
        front
            .iter()
            .filter(|i| !i.objectives.invalid)
            .map(|i| i.objectives)
    };
    GenerationStats {
        generation,
        front0_size: front.len(),
        alpha: Extrema::of(valid().map(|o| o.alpha)),
        lambda: Extrema::of(valid().map(|o| o.lambda)),
        size: Extrema::of(valid().map(|o| o.size)),
        prop_histogram,
        tier_counts,
        hypervolume: hypervolume(&front_points(front.iter().copied()), &Reference::default()),
    }
}

/// Generator for stream `stream` of the run keyed by `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Rank assigned to offspring that have not been through selection yet.
pub const UNRANKED: usize = usize::MAX;

/// Sorts `pool` and keeps the best `keep` individuals front by front,
/// breaking the last front by descending crowding distance. Rank and
/// crowding of the survivors are those computed on the whole pool.
///
/// Members of `pool` with rank 0 are the incumbent front. When the new
/// front 0 alone overflows `keep`, each incumbent objective vector is kept
/// first: the incumbent itself if it is still non-dominated, otherwise the
/// most isolated member that dominates it. Front 0 therefore never loses
/// ground between generations.
pub fn environmental_selection(pool: Vec<Individual>, keep: usize) -> Vec<Individual> {
    let objs: Vec<ObjectiveVector> = pool.iter().map(|i| i.objectives).collect();
    let incumbents: Vec<usize> = (0..pool.len()).filter(|&i| pool[i].rank == 0).collect();
    let fronts = fast_non_dominated_sort(&objs);
    let mut slots: Vec<Option<Individual>> = pool.into_iter().map(Some).collect();
    let mut next = Vec::with_capacity(keep);
    for (rank, front) in fronts.iter().enumerate() {
        if next.len() >= keep {
            break;
        }
        let crowd = crowding_distance(&objs, front);
        let mut members: Vec<(usize, f64)> = front.iter().copied().zip(crowd).collect();
        if next.len() + members.len() > keep {
            let protected = if rank == 0 {
                protected_members(&objs, &members, &incumbents)
            } else {
                Vec::new()
            };
            let mut order: Vec<usize> = (0..members.len()).collect();
            order.sort_by(|&a, &b| {
                protected[..]
                    .contains(&b)
                    .cmp(&protected.contains(&a))
                    .then(members[b].1.total_cmp(&members[a].1))
                    .then(members[a].0.cmp(&members[b].0))
            });
            order.truncate(keep - next.len());
            order.sort_unstable();
            members = order.into_iter().map(|k| members[k]).collect();
        }
        for (idx, crowding) in members {
            let mut ind = slots[idx].take().expect("each index appears in one front");
            ind.rank = rank;
            ind.crowding = crowding;
            next.push(ind);
        }
    }
    next
}

/// Positions in `members` (front 0 with crowding) that cover every
/// incumbent objective vector, one position per distinct vector.
fn protected_members(objs: &[ObjectiveVector], members: &[(usize, f64)], incumbents: &[usize]) -> Vec<usize> {
    let mut protected: Vec<usize> = Vec::new();
    for &inc in incumbents {
        let target = match members.iter().position(|m| m.0 == inc) {
            Some(pos) => Some(pos),
            None => (0..members.len())
                .filter(|&k| dominates(&objs[members[k].0], &objs[inc]))
                .min_by(|&a, &b| members[b].1.total_cmp(&members[a].1).then(a.cmp(&b))),
        };
        let Some(pos) = target else { continue };
        let covered = protected
            .iter()
            .any(|&k| objs[members[k].0] == objs[members[pos].0]);
        if !covered {
            protected.push(pos);
        }
    }
    protected
}

fn make_offspring(
    population: &[Individual],
    config: &EvolutionConfig,
    rng: &mut ChaCha8Rng,
) -> Vec<Genotype> {
    let ranks: Vec<usize> = population.iter().map(|i| i.rank).collect();
    let crowding: Vec<f64> = population.iter().map(|i| i.crowding).collect();
    let mut children = Vec::with_capacity(config.pop_size);
    while children.len() < config.pop_size {
        let a = binary_tournament(&ranks, &crowding, rng);
        let b = binary_tournament(&ranks, &crowding, rng);
        let p1 = population[a].genotype.genes();
        let p2 = population[b].genotype.genes();
        let (mut c1, mut c2) = if rng.random::<f64>() < config.crossover_rate {
            arithmetic_crossover(p1, p2, rng)
        } else {
            (p1.to_vec(), p2.to_vec())
        };
        mutate(&mut c1, config.mutation_rate, config.mutation_sigma, rng);
        mutate(&mut c2, config.mutation_rate, config.mutation_sigma, rng);
        for c in [c1, c2] {
            if children.len() < config.pop_size {
                children.push(Genotype::clamped(c).expect("offspring keep the genome length"));
            }
        }
    }
    children
}

fn assemble(genotypes: Vec<Genotype>, objectives: Vec<ObjectiveVector>, first_id: u64) -> Vec<Individual> {
    assert_eq!(
        genotypes.len(),
        objectives.len(),
        "evaluator must return one result per genotype"
    );
    genotypes
        .into_iter()
        .zip(objectives)
        .enumerate()
        .map(|(k, (genotype, objectives))| Individual {
            id: first_id + k as u64,
            genotype,
            objectives,
            rank: UNRANKED,
            crowding: 0.0,
        })
        .collect()
}

/// Runs the full evolution. `on_generation` sees every completed
/// generation's statistics, starting with the initial population.
pub fn evolve_with<E: Evaluator + ?Sized>(
    config: &EvolutionConfig,
    evaluator: &E,
    mut on_generation: impl FnMut(&GenerationStats),
) -> Result<RunRecord, ConfigError> {
    config.validate()?;
    let n = config.pop_size;

    let mut rng = stream_rng(config.seed, 0);
    let genotypes: Vec<Genotype> = latin_hypercube(n, GENOME_LEN, &mut rng)
        .into_iter()
        .map(|g| Genotype::new(g).expect("hypercube samples lie in [-1, 1]"))
        .collect();
    let objectives = evaluator.evaluate_batch(&genotypes, &config.params, &config.hover);
    let mut population = environmental_selection(assemble(genotypes, objectives, 0), n);
    let mut next_id = n as u64;

    let initial = generation_stats(0, &population);
    on_generation(&initial);
    let mut history = Vec::with_capacity(config.generations);

    for generation in 1..=config.generations {
        let mut rng = stream_rng(config.seed, generation as u64);
        let children = make_offspring(&population, config, &mut rng);
        let objectives = evaluator.evaluate_batch(&children, &config.params, &config.hover);
        let offspring = assemble(children, objectives, next_id);
        next_id += offspring.len() as u64;

        let mut pool = population;
        pool.extend(offspring);
        population = environmental_selection(pool, n);

        let stats = generation_stats(generation, &population);
        on_generation(&stats);
        history.push(stats);
    }

    Ok(RunRecord {
        config: config.clone(),
        initial,
        history,
        population,
    })
}

/// [`evolve_with`] on the calling thread without progress reporting.
pub fn evolve(config: &EvolutionConfig) -> Result<RunRecord, ConfigError> {
    evolve_with(config, &SerialEvaluator, |_| {})
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(generations: usize, seed: u64) -> EvolutionConfig {
        EvolutionConfig {
            pop_size: 12,
            generations,
            seed,
            ..Default::default()
        }
    }

    #[test]
    fn validation_names_the_key() {
        let c = EvolutionConfig {
            mutation_rate: 1.5,
            ..Default::default()
        };
        assert_eq!(c.validate().unwrap_err().key, "mutation_rate");
        let c = EvolutionConfig {
            pop_size: 7,
            ..Default::default()
        };
        assert_eq!(c.validate().unwrap_err().key, "pop_size");
        let mut c = EvolutionConfig::default();
        c.params.k_f = -1.0;
        assert_eq!(c.validate().unwrap_err().key, "params.k_f");
        EvolutionConfig::default().validate().unwrap();
    }

    #[test]
    fn zero_generations_keeps_initial_population() {
        let run = evolve(&small(0, 1)).unwrap();
        assert!(run.history.is_empty());
        assert_eq!(run.population.len(), 12);
        let mut ids: Vec<u64> = run.population.iter().map(|i| i.id).collect();
        ids.sort_unstable();
        assert_eq!(ids, (0..12).collect::<Vec<_>>());
    }

    #[test]
    fn short_run_invariants() {
        let run = evolve(&small(4, 2)).unwrap();
        assert_eq!(run.history.len(), 4);
        assert_eq!(run.population.len(), 12);
        assert!(run.front().count() >= 1);
        let mut ids: Vec<u64> = run.population.iter().map(|i| i.id).collect();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), 12);
        for ind in &run.population {
            assert!(ind.genotype.genes().iter().all(|g| (-1.0..=1.0).contains(g)));
        }
    }

    #[test]
    fn seeded_runs_repeat() {
        let a = evolve(&small(3, 7)).unwrap();
        let b = evolve(&small(3, 7)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn streams_are_independent() {
        let mut a = stream_rng(1, 0);
        let mut b = stream_rng(1, 1);
        let x: u64 = a.random();
        let y: u64 = b.random();
        assert_ne!(x, y);
    }
}
