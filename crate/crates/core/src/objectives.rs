//! The three design objectives and the full evaluation pipeline.

use alloc::vec::Vec;

use nalgebra::{Matrix3, Matrix3xX, SymmetricEigen, Vector3};

use crate::effectiveness::{effectiveness, ActuatorMatrices};
use crate::error::{ModelError, Result};
use crate::genotype::{decode, Genotype};
use crate::hover::{classify_hover, HoverClass, HoverOptions, HoverReport};
use crate::hull::hull_area;
use crate::mass::{mass_properties, MassProperties};
use crate::params::PhysicalParams;
use crate::phenotype::Phenotype;
use nalgebra::DVector;

/// Objective values of one design plus the information the ranking needs.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ObjectiveVector {
    /// Thrust-to-weight ratio (maximise). Zero when the design cannot hover.
    pub alpha: f64,
    /// Smallest eigenvalue of the moment Gramian (maximise).
    pub lambda: f64,
    /// Planform convex-hull area, m^2 (minimise).
    pub size: f64,
    pub hover_class: HoverClass,
    /// Violation left by the hover solver when `hover_class` is `None`.
    pub residual: f64,
    /// Set when the genotype maps to coincident propellers.
    pub invalid: bool,
}

impl ObjectiveVector {
    pub fn invalid() -> Self {
        Self {
            alpha: 0.0,
            lambda: 0.0,
            size: 0.0,
            hover_class: HoverClass::None,
            residual: 0.0,
            invalid: true,
        }
    }
}

/// Everything computed for a single design.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignEvaluation {
    pub phenotype: Phenotype,
    pub mass: MassProperties,
    pub matrices: ActuatorMatrices,
    pub hover: HoverReport,
    pub objectives: ObjectiveVector,
}

/// Thrust-to-weight ratio reached by scaling the hover command until the
/// busiest motor saturates.
pub fn thrust_to_weight(b_f: &Matrix3xX<f64>, eta_hat: &DVector<f64>, g: f64) -> Result<f64> {
    let peak = eta_hat.amax();
    if peak <= 0.0 {
        return Err(ModelError::ZeroCommand);
    }
    let eta_max = eta_hat / peak;
    Ok((b_f * eta_max).norm() / g)
}

/// Gramian `B_m B_m^T` of the moment effectiveness matrix.
pub fn gramian(b_m: &Matrix3xX<f64>) -> Matrix3<f64> {
    let w = b_m * b_m.transpose();
    (w + w.transpose()) * 0.5
}

/// Eigenvalues of the Gramian in ascending order with matching unit
/// eigenvectors as columns.
pub fn gramian_eigen(b_m: &Matrix3xX<f64>) -> (Vector3<f64>, Matrix3<f64>) {
    let eig = SymmetricEigen::new(gramian(b_m));
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = Vector3::from_fn(|i, _| eig.eigenvalues[order[i]]);
    let vectors = Matrix3::from_fn(|r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Maneuverability: the smallest Gramian eigenvalue, clipped at zero.
pub fn maneuverability(b_m: &Matrix3xX<f64>) -> f64 {
    gramian_eigen(b_m).0[0].max(0.0)
}

/// Area of the convex hull of the propeller centres.
pub fn planform_size(ph: &Phenotype) -> f64 {
    let pts: Vec<(f64, f64)> = ph.positions().map(|p| (p.x, p.y)).collect();
    hull_area(&pts)
}

/// Evaluates an already expressed phenotype.
pub fn evaluate_phenotype(
    ph: &Phenotype,
    params: &PhysicalParams,
    opts: &HoverOptions,
) -> Result<DesignEvaluation> {
    let mass = mass_properties(ph, params);
    let matrices = effectiveness(ph, &mass, params)?;
    let hover = classify_hover(&matrices, params.g, opts);
    let alpha = match &hover.solution {
        Some(sol) => thrust_to_weight(&matrices.b_f, &sol.eta_hat, params.g).unwrap_or(0.0),
        None => 0.0,
    };
    let objectives = ObjectiveVector {
        alpha,
        lambda: maneuverability(&matrices.b_m),
        size: planform_size(ph),
        hover_class: hover.hover_class,
        residual: hover.residual,
        invalid: false,
    };
    Ok(DesignEvaluation {
        phenotype: ph.clone(),
        mass,
        matrices,
        hover,
        objectives,
    })
}

/// Decode and evaluate. Never fails: layouts that cannot be expressed come
/// back flagged invalid.
pub fn evaluate(genotype: &Genotype, params: &PhysicalParams, opts: &HoverOptions) -> ObjectiveVector {
    decode(genotype, params)
        .and_then(|ph| evaluate_phenotype(&ph, params, opts))
        .map_or_else(|_| ObjectiveVector::invalid(), |e| e.objectives)
}
