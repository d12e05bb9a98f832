//! Single-design evaluation report.

use morpho_core::objectives::{evaluate_phenotype, ObjectiveVector};
use morpho_core::{HoverOptions, Phenotype, PhysicalParams};
use serde::Serialize;

use crate::design::LoadedDesign;
use crate::export::tier_label;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub thrust: f64,
    pub moment: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub invalid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub hover_class: &'static str,
    pub alpha: f64,
    pub lambda: f64,
    /// Hull area, m^2.
    pub size: f64,
    /// Spinning-hover violation for designs that cannot hover, else 0.
    pub residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta_hat: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cost: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residuals: Option<ResidualReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mass: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cg: Option<[f64; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inertia_diag: Option<[f64; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phenotype: Option<Phenotype>,
}

impl EvalReport {
    fn invalid(reason: String) -> Self {
        let o = ObjectiveVector::invalid();
        Self {
            invalid: true,
            reason: Some(reason),
            hover_class: tier_label(&o),
            alpha: o.alpha,
            lambda: o.lambda,
            size: o.size,
            residual: o.residual,
            eta_hat: None,
            cost: None,
            residuals: None,
            mass: None,
            cg: None,
            inertia_diag: None,
            phenotype: None,
        }
    }

    pub fn to_json(&self) -> Vec<u8> {
        let mut out = serde_json::to_vec_pretty(self).expect("report serializes");
        out.push(b'\n');
        out
    }
}

pub fn report_phenotype(ph: &Phenotype, params: &PhysicalParams, opts: &HoverOptions) -> EvalReport {
    let eval = match evaluate_phenotype(ph, params, opts) {
        Ok(e) => e,
        Err(e) => return EvalReport::invalid(e.to_string()),
    };
    let sol = eval.hover.solution.as_ref();
    let m = &eval.mass;
    EvalReport {
        invalid: false,
        reason: None,
        hover_class: tier_label(&eval.objectives),
        alpha: eval.objectives.alpha,
        lambda: eval.objectives.lambda,
        size: eval.objectives.size,
        residual: eval.objectives.residual,
        eta_hat: sol.map(|s| s.eta_hat.iter().copied().collect()),
        cost: sol.map(|s| s.cost),
        residuals: sol.map(|s| ResidualReport {
            thrust: s.residuals.thrust,
            moment: s.residuals.moment,
        }),
        mass: Some(m.total_mass),
        cg: Some([m.cg.x, m.cg.y, m.cg.z]),
        inertia_diag: Some([m.inertia[(0, 0)], m.inertia[(1, 1)], m.inertia[(2, 2)]]),
        phenotype: Some(eval.phenotype),
    }
}

/// Report for a loaded design file. Layouts that cannot be expressed
/// (coincident propellers) come back as invalid rather than as errors.
pub fn report_design(design: &LoadedDesign) -> EvalReport {
    match design.phenotype() {
        Ok(ph) => report_phenotype(&ph, &design.params, &design.hover),
        Err(e) => EvalReport::invalid(e.to_string()),
    }
}
