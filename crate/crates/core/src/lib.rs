#![no_std]
//! Model-based evaluation and multi-objective evolution of multicopter
//! body layouts.
//!
//! Everything here is pure computation on owned data; file formats,
//! parallel evaluation and the command-line driver live in the `morpho`
//! crate.

extern crate alloc;

pub mod effectiveness;
pub mod error;
pub mod evolution;
pub mod genotype;
pub mod hover;
pub mod hull;
pub mod mass;
pub mod objectives;
pub mod params;
pub mod phenotype;

pub use effectiveness::{effectiveness, ActuatorMatrices};
pub use error::{ModelError, Result};
pub use evolution::{evolve, evolve_with, Evaluator, EvolutionConfig, Individual, RunRecord};
pub use genotype::{decode, decode_raw, encode, Genotype, GENOME_LEN};
pub use hover::{classify_hover, HoverClass, HoverOptions, HoverReport, HoverSolution};
pub use mass::{angular_accel_diagnostic, mass_properties, MassProperties};
pub use objectives::{evaluate, evaluate_phenotype, DesignEvaluation, ObjectiveVector};
pub use params::PhysicalParams;
pub use phenotype::{quadcopter_baseline, resolve_collisions, Direction, Phenotype, PropellerSpec};
