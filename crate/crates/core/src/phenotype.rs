//! Decoded drone layouts.

use alloc::vec::Vec;

use nalgebra::Vector3;

use crate::error::{ModelError, Result};
use crate::params::PhysicalParams;

/// Pairs closer than this are treated as coincident and cannot be separated
/// by scaling the arms.
pub const COINCIDENT_TOL: f64 = 1e-6;

/// Spin direction seen from above the propeller.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Direction {
    #[cfg_attr(feature = "serde", serde(rename = "CCW"))]
    Ccw,
    #[cfg_attr(feature = "serde", serde(rename = "CW"))]
    Cw,
}

impl Direction {
    /// Sign of the reaction moment about the thrust axis.
    pub fn torque_sign(self) -> f64 {
        match self {
            Direction::Ccw => -1.0,
            Direction::Cw => 1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Direction::Ccw => Direction::Cw,
            Direction::Cw => Direction::Ccw,
        }
    }
}

/// One propeller on the body x-y plane. Angles are in degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct PropellerSpec {
    /// Distance from the body origin to the motor, m.
    pub arm_length: f64,
    /// Arm heading from body x about body z.
    pub arm_angle: f64,
    /// Tilt of the thrust axis away from body z.
    pub inclination: f64,
    /// Heading of the tilt relative to the arm.
    pub azimuth: f64,
    pub direction: Direction,
}

impl PropellerSpec {
    /// Motor position in the body frame.
    pub fn position(&self) -> Vector3<f64> {
        let theta = self.arm_angle.to_radians();
        Vector3::new(
            self.arm_length * libm::cos(theta),
            self.arm_length * libm::sin(theta),
            0.0,
        )
    }

    /// Unit thrust axis: tilt about body y by the inclination, then rotate
    /// about body z by arm angle plus azimuth.
    pub fn thrust_axis(&self) -> Vector3<f64> {
        let phi = self.inclination.to_radians();
        let heading = (self.arm_angle + self.azimuth).to_radians();
        let (sp, cp) = (libm::sin(phi), libm::cos(phi));
        let (sh, ch) = (libm::sin(heading), libm::cos(heading));
        Vector3::new(ch * sp, sh * sp, cp)
    }
}

/// A drone body: its active propellers and the arm scale applied to keep
/// the discs apart.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct Phenotype {
    pub n: usize,
    pub props: Vec<PropellerSpec>,
    #[cfg_attr(feature = "serde", serde(default = "unit_scale"))]
    pub scale_applied: f64,
}

#[cfg(feature = "serde")]
fn unit_scale() -> f64 {
    1.0
}

impl Phenotype {
    pub fn new(props: Vec<PropellerSpec>) -> Self {
        Self {
            n: props.len(),
            props,
            scale_applied: 1.0,
        }
    }

    pub fn positions(&self) -> impl Iterator<Item = Vector3<f64>> + '_ {
        self.props.iter().map(PropellerSpec::position)
    }

    /// Structural checks for layouts that did not come from a genotype.
    pub fn validate(&self) -> Result<()> {
        if self.props.is_empty() {
            return Err(ModelError::InvalidPhenotype("no propellers"));
        }
        if self.n != self.props.len() {
            return Err(ModelError::InvalidPhenotype("n differs from the propeller count"));
        }
        if !(self.scale_applied.is_finite() && self.scale_applied >= 1.0) {
            return Err(ModelError::InvalidPhenotype("scale_applied must be >= 1"));
        }
        for p in &self.props {
            let finite = [p.arm_length, p.arm_angle, p.inclination, p.azimuth]
                .iter()
                .all(|v| v.is_finite());
            if !finite {
                return Err(ModelError::InvalidPhenotype("non-finite propeller field"));
            }
            if p.arm_length <= 0.0 {
                return Err(ModelError::InvalidPhenotype("arm_length must be positive"));
            }
        }
        Ok(())
    }

    /// Smallest planar distance between two propeller centres, or `None`
    /// for a single propeller.
    pub fn min_pair_distance(&self) -> Option<(f64, usize, usize)> {
        let pos: Vec<_> = self.positions().collect();
        let mut best: Option<(f64, usize, usize)> = None;
        for i in 0..pos.len() {
            for j in i + 1..pos.len() {
                let d = planar_distance(&pos[i], &pos[j]);
                if best.is_none_or(|(b, _, _)| d < b) {
                    best = Some((d, i, j));
                }
            }
        }
        best
    }
}

fn planar_distance(a: &Vector3<f64>, b: &Vector3<f64>) -> f64 {
    libm::hypot(a.x - b.x, a.y - b.y)
}

/// Scales every arm by the smallest factor `s >= 1` that puts all disc
/// centres at least `2 * prop_radius + clearance_margin` apart.
pub fn resolve_collisions(raw: &Phenotype, params: &PhysicalParams) -> Result<Phenotype> {
    let required = params.min_separation();
    let Some((closest, i, j)) = raw.min_pair_distance() else {
        return Ok(raw.clone());
    };
    if closest < COINCIDENT_TOL {
        return Err(ModelError::DegenerateLayout { first: i, second: j });
    }
    if closest >= required {
        return Ok(raw.clone());
    }

    let mut scale = required / closest;
    let scaled = loop {
        let candidate = with_scaled_arms(raw, scale);
        // guard against the product landing one ulp short of the bound
        match candidate.min_pair_distance() {
            Some((d, _, _)) if d < required => scale *= 1.0 + 4.0 * f64::EPSILON,
            _ => break candidate,
        }
    };
    Ok(scaled)
}

fn with_scaled_arms(raw: &Phenotype, scale: f64) -> Phenotype {
    let props = raw
        .props
        .iter()
        .map(|p| PropellerSpec {
            arm_length: p.arm_length * scale,
            ..*p
        })
        .collect();
    Phenotype {
        n: raw.n,
        props,
        scale_applied: raw.scale_applied * scale,
    }
}

/// Reference 5-inch quadcopter in X configuration with a 220 mm wheelbase.
pub fn quadcopter_baseline() -> Phenotype {
    let dirs = [Direction::Ccw, Direction::Cw, Direction::Ccw, Direction::Cw];
    let angles = [45.0, 135.0, -135.0, -45.0];
    let props = angles
        .iter()
        .zip(dirs)
        .map(|(&arm_angle, direction)| PropellerSpec {
            arm_length: 0.110,
            arm_angle,
            inclination: 0.0,
            azimuth: 0.0,
            direction,
        })
        .collect();
    Phenotype::new(props)
}
