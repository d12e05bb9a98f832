//! Run configuration files (TOML).
//!
//! Every field of [`EvolutionConfig`] is a top-level key; physical
//! constants sit in a `[params]` table and solver settings in `[hover]`.
//! Missing keys take their defaults and unknown keys are rejected.
//!
//! ```toml
//! pop_size = 100
//! generations = 200
//! mutation_rate = 0.2
//! seed = 1
//!
//! [params]
//! k_f = 2.4e-6
//! fc_dims = [0.105, 0.035, 0.030]
//! ```

use std::path::Path;

use morpho_core::EvolutionConfig;

use crate::error::{Error, Result};

pub fn parse_config(text: &str) -> Result<EvolutionConfig> {
    let config: EvolutionConfig =
        toml::from_str(text).map_err(|e| Error::validation(format!("invalid config: {}", e.message())))?;
    config
        .validate()
        .map_err(|e| Error::validation(format!("invalid config: {e}")))?;
    Ok(config)
}

pub fn load_config(path: &Path) -> Result<EvolutionConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config(&text)
}
