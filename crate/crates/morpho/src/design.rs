//! Single-design files for `morpho eval`.
//!
//! A design is either an explicit phenotype or a 41-gene genotype, with
//! optional `params` and `hover` overrides. TOML is the default; files
//! ending in `.json` are read as JSON.
//!
//! ```toml
//! [[phenotype.props]]
//! arm_length = 0.11
//! arm_angle = 45.0
//! inclination = 0.0
//! azimuth = 0.0
//! direction = "CCW"
//! ```

use std::path::Path;

use morpho_core::{decode, Genotype, HoverOptions, Phenotype, PhysicalParams};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignFile {
    #[serde(default)]
    pub params: PhysicalParams,
    #[serde(default)]
    pub hover: HoverOptions,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phenotype: Option<PhenotypeInput>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub genes: Option<Vec<f64>>,
}

/// Phenotype as written by hand: `n` and `scale_applied` may be omitted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhenotypeInput {
    #[serde(default)]
    pub n: Option<usize>,
    pub props: Vec<morpho_core::PropellerSpec>,
    #[serde(default)]
    pub scale_applied: Option<f64>,
}

/// What a design file resolves to.
#[derive(Debug, Clone, PartialEq)]
pub enum Design {
    Phenotype(Phenotype),
    Genotype(Genotype),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoadedDesign {
    pub design: Design,
    pub params: PhysicalParams,
    pub hover: HoverOptions,
}

impl LoadedDesign {
    /// Expressed layout, or the reason there is none.
    pub fn phenotype(&self) -> morpho_core::Result<Phenotype> {
        match &self.design {
            Design::Phenotype(p) => morpho_core::resolve_collisions(p, &self.params),
            Design::Genotype(g) => decode(g, &self.params),
        }
    }
}

pub fn parse_design(text: &str, json: bool) -> Result<LoadedDesign> {
    let file: DesignFile = if json {
        serde_json::from_str(text).map_err(|e| Error::validation(format!("invalid design: {e}")))?
    } else {
        toml::from_str(text).map_err(|e| Error::validation(format!("invalid design: {}", e.message())))?
    };
    file.params
        .validate()
        .map_err(|e| Error::validation(format!("invalid design params: {e}")))?;
    let design = match (file.phenotype, file.genes) {
        (Some(p), None) => {
            let ph = Phenotype {
                n: p.n.unwrap_or(p.props.len()),
                props: p.props,
                scale_applied: p.scale_applied.unwrap_or(1.0),
            };
            ph.validate()
                .map_err(|e| Error::validation(format!("invalid design: {e}")))?;
            Design::Phenotype(ph)
        }
        (None, Some(genes)) => Design::Genotype(
            Genotype::new(genes).map_err(|e| Error::validation(format!("invalid design: {e}")))?,
        ),
        _ => {
            return Err(Error::validation(
                "invalid design: give exactly one of `phenotype` or `genes`",
            ))
        }
    };
    Ok(LoadedDesign {
        design,
        params: file.params,
        hover: file.hover,
    })
}

pub fn load_design(path: &Path) -> Result<LoadedDesign> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    parse_design(&text, json)
}

/// TOML design file for a phenotype under the given constants.
pub fn design_toml(ph: &Phenotype, params: &PhysicalParams) -> String {
    let file = DesignFile {
        params: *params,
        hover: HoverOptions::default(),
        phenotype: Some(PhenotypeInput {
            n: Some(ph.n),
            props: ph.props.clone(),
            scale_applied: Some(ph.scale_applied),
        }),
        genes: None,
    };
    toml::to_string(&file).expect("design serializes")
}
