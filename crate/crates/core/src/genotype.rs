//! Fixed-length real-valued genome and its mapping onto a phenotype.
//!
//! Layout: gene 0 selects the propeller count, followed by eight blocks of
//! five genes each (arm length, arm angle, inclination, azimuth, spin
//! direction). Blocks past the active count are carried along unexpressed.

use alloc::vec::Vec;

use crate::error::{ModelError, Result};
use crate::params::PhysicalParams;
use crate::phenotype::{resolve_collisions, Direction, Phenotype, PropellerSpec};

pub const MAX_PROPS: usize = 8;
pub const MIN_PROPS: usize = 4;
pub const GENES_PER_PROP: usize = 5;
pub const GENOME_LEN: usize = 1 + MAX_PROPS * GENES_PER_PROP;

pub const ARM_LENGTH_RANGE: (f64, f64) = (0.1, 0.3);
pub const ARM_ANGLE_RANGE: (f64, f64) = (-180.0, 180.0);
pub const INCLINATION_RANGE: (f64, f64) = (0.0, 15.0);
pub const AZIMUTH_RANGE: (f64, f64) = (-90.0, 90.0);

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "Vec<f64>", into = "Vec<f64>"))]
pub struct Genotype(Vec<f64>);

impl Genotype {
    pub fn new(genes: Vec<f64>) -> Result<Self> {
        if genes.len() != GENOME_LEN {
            return Err(ModelError::GenotypeLength {
                expected: GENOME_LEN,
                got: genes.len(),
            });
        }
        if let Some((index, &value)) = genes.iter().enumerate().find(|(_, g)| !(-1.0..=1.0).contains(*g)) {
            return Err(ModelError::GeneOutOfRange { index, value });
        }
        Ok(Self(genes))
    }

    /// Builds a genotype from arbitrary reals by clamping into `[-1, 1]`.
    /// NaN genes become 0.
    pub fn clamped(mut genes: Vec<f64>) -> Result<Self> {
        for g in &mut genes {
            *g = if g.is_nan() { 0.0 } else { g.clamp(-1.0, 1.0) };
        }
        Self::new(genes)
    }

    pub fn genes(&self) -> &[f64] {
        &self.0
    }

    pub fn into_genes(self) -> Vec<f64> {
        self.0
    }

    /// Number of propellers expressed by the count gene.
    pub fn prop_count(&self) -> usize {
        count_from_gene(self.0[0])
    }

    /// Gene block of propeller `i` (0-based), expressed or not.
    pub fn block(&self, i: usize) -> &[f64] {
        let start = 1 + i * GENES_PER_PROP;
        &self.0[start..start + GENES_PER_PROP]
    }
}

impl TryFrom<Vec<f64>> for Genotype {
    type Error = ModelError;

    fn try_from(genes: Vec<f64>) -> Result<Self> {
        Self::new(genes)
    }
}

impl From<Genotype> for Vec<f64> {
    fn from(g: Genotype) -> Self {
        g.0
    }
}

/// Maps a gene in `[-1, 1]` linearly onto `[lo, hi]`.
pub fn map_linear(gene: f64, (lo, hi): (f64, f64)) -> f64 {
    lo + (gene + 1.0) * 0.5 * (hi - lo)
}

/// Inverse of [`map_linear`].
pub fn unmap_linear(value: f64, (lo, hi): (f64, f64)) -> f64 {
    2.0 * (value - lo) / (hi - lo) - 1.0
}

/// Five equal bins over `[-1, 1]`; the upper edge falls into the top bin.
pub fn count_from_gene(gene: f64) -> usize {
    let bins = (MAX_PROPS - MIN_PROPS + 1) as f64;
    let bin = libm::floor((gene + 1.0) * 0.5 * bins) as usize;
    MIN_PROPS + bin.min(MAX_PROPS - MIN_PROPS)
}

pub fn direction_from_gene(gene: f64) -> Direction {
    if gene < 0.0 {
        Direction::Ccw
    } else {
        Direction::Cw
    }
}

fn prop_from_block(block: &[f64]) -> PropellerSpec {
    PropellerSpec {
        arm_length: map_linear(block[0], ARM_LENGTH_RANGE),
        arm_angle: map_linear(block[1], ARM_ANGLE_RANGE),
        inclination: map_linear(block[2], INCLINATION_RANGE),
        azimuth: map_linear(block[3], AZIMUTH_RANGE),
        direction: direction_from_gene(block[4]),
    }
}

/// Expresses the genotype without collision scaling.
pub fn decode_raw(genotype: &Genotype) -> Phenotype {
    let n = genotype.prop_count();
    Phenotype::new((0..n).map(|i| prop_from_block(genotype.block(i))).collect())
}

/// Genotype-to-phenotype mapping including collision scaling.
///
/// Fails only for layouts with coincident propellers, which no arm scale
/// can separate.
pub fn decode(genotype: &Genotype, params: &PhysicalParams) -> Result<Phenotype> {
    resolve_collisions(&decode_raw(genotype), params)
}

/// Writes a phenotype back into gene space. Unused blocks are zero. Arm
/// lengths outside the mapped range (scaled phenotypes) are clamped.
pub fn encode(ph: &Phenotype) -> Result<Genotype> {
    let n = ph.props.len();
    if !(MIN_PROPS..=MAX_PROPS).contains(&n) {
        return Err(ModelError::InvalidPhenotype("propeller count outside 4..=8"));
    }
    let mut genes = alloc::vec![0.0; GENOME_LEN];
    // centre of the count bin
    genes[0] = ((n - MIN_PROPS) as f64 + 0.5) / 5.0 * 2.0 - 1.0;
    for (i, p) in ph.props.iter().enumerate() {
        let start = 1 + i * GENES_PER_PROP;
        genes[start] = unmap_linear(p.arm_length, ARM_LENGTH_RANGE);
        genes[start + 1] = unmap_linear(p.arm_angle, ARM_ANGLE_RANGE);
        genes[start + 2] = unmap_linear(p.inclination, INCLINATION_RANGE);
        genes[start + 3] = unmap_linear(p.azimuth, AZIMUTH_RANGE);
        genes[start + 4] = match p.direction {
            Direction::Ccw => -1.0,
            Direction::Cw => 1.0,
        };
    }
    Genotype::clamped(genes)
}
