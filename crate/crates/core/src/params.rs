//! Physical constants of the airframe components.

use crate::error::{ModelError, Result};

/// Propeller, motor and frame constants shared by every design in a run.
///
/// All quantities are SI. The defaults describe a typical 5-inch racing
/// build: 15 N peak thrust per motor, a 250 g flight-controller and battery
/// stack, and 0.1 kg/m carbon arms.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct PhysicalParams {
    /// Thrust coefficient, N/(rad/s)^2.
    pub k_f: f64,
    /// Reaction moment coefficient, N m/(rad/s)^2.
    pub k_m: f64,
    /// Maximum propeller speed, rad/s.
    pub omega_max: f64,
    /// Motor plus propeller mass, kg.
    pub m_motor: f64,
    /// Arm mass per unit length, kg/m.
    pub mu_arm: f64,
    /// Flight-controller and battery stack mass, kg.
    pub m_fc: f64,
    /// Stack box dimensions along body x, y, z, m.
    pub fc_dims: [f64; 3],
    /// Propeller disc radius, m.
    pub prop_radius: f64,
    /// Minimum gap between neighbouring discs, m.
    pub clearance_margin: f64,
    /// Gravitational acceleration, m/s^2.
    pub g: f64,
}

impl Default for PhysicalParams {
    fn default() -> Self {
        Self {
            k_f: 2.4e-6,
            k_m: 3.84e-8,
            omega_max: 2500.0,
            m_motor: 0.035,
            mu_arm: 0.10,
            m_fc: 0.250,
            fc_dims: [0.105, 0.035, 0.030],
            prop_radius: 0.0635,
            clearance_margin: 0.01,
            g: 9.81,
        }
    }
}

impl PhysicalParams {
    /// Peak thrust of one motor, `k_f * omega_max^2`.
    pub fn max_thrust(&self) -> f64 {
        self.k_f * self.omega_max * self.omega_max
    }

    /// Peak reaction moment of one motor, `k_m * omega_max^2`.
    pub fn max_moment(&self) -> f64 {
        self.k_m * self.omega_max * self.omega_max
    }

    /// Smallest admissible distance between two propeller centres.
    pub fn min_separation(&self) -> f64 {
        2.0 * self.prop_radius + self.clearance_margin
    }

    /// Principal moment of inertia of the stack about body y.
    pub fn stack_inertia_yy(&self) -> f64 {
        let [a, _, c] = self.fc_dims;
        self.m_fc * (a * a + c * c) / 12.0
    }

    /// Checks that every constant is finite and strictly positive.
    pub fn validate(&self) -> Result<()> {
        let scalars = [
            ("k_f", self.k_f),
            ("k_m", self.k_m),
            ("omega_max", self.omega_max),
            ("m_motor", self.m_motor),
            ("mu_arm", self.mu_arm),
            ("m_fc", self.m_fc),
            ("fc_dims", self.fc_dims[0]),
            ("fc_dims", self.fc_dims[1]),
            ("fc_dims", self.fc_dims[2]),
            ("prop_radius", self.prop_radius),
            ("clearance_margin", self.clearance_margin),
            ("g", self.g),
        ];
        for (key, value) in scalars {
            if !(value.is_finite() && value > 0.0) {
                return Err(ModelError::InvalidParam { key, value });
            }
        }
        Ok(())
    }
}
