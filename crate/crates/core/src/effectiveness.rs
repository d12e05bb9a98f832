//! Linear maps from actuator commands to specific force and moment.

use nalgebra::{Matrix3xX, Vector3};

use crate::error::{ModelError, Result};
use crate::mass::MassProperties;
use crate::params::PhysicalParams;
use crate::phenotype::Phenotype;

/// Force and moment effectiveness matrices, one column per propeller.
///
/// A command of 1 means full speed (`omega_max^2`); the response of the
/// airframe to a command vector `eta` is `b_f * eta` in m/s^2 and
/// `b_m * eta` in rad/s^2, taken about the centre of gravity.
#[derive(Debug, Clone, PartialEq)]
pub struct ActuatorMatrices {
    pub b_f: Matrix3xX<f64>,
    pub b_m: Matrix3xX<f64>,
}

impl ActuatorMatrices {
    pub fn new(b_f: Matrix3xX<f64>, b_m: Matrix3xX<f64>) -> Self {
        assert_eq!(b_f.ncols(), b_m.ncols(), "column count mismatch");
        Self { b_f, b_m }
    }

    pub fn n(&self) -> usize {
        self.b_f.ncols()
    }

    pub fn is_finite(&self) -> bool {
        self.b_f.iter().chain(self.b_m.iter()).all(|v| v.is_finite())
    }
}

pub fn effectiveness(
    ph: &Phenotype,
    mp: &MassProperties,
    params: &PhysicalParams,
) -> Result<ActuatorMatrices> {
    let inv_inertia = mp.inertia.try_inverse().ok_or(ModelError::SingularInertia)?;
    let thrust = params.max_thrust();
    let reaction = params.max_moment();
    let n = ph.props.len();
    let mut b_f = Matrix3xX::zeros(n);
    let mut b_m = Matrix3xX::zeros(n);

    for (i, prop) in ph.props.iter().enumerate() {
        let axis = prop.thrust_axis();
        let arm: Vector3<f64> = prop.position() - mp.cg;
        let force = axis * thrust;
        let moment = arm.cross(&force) + axis * (prop.direction.torque_sign() * reaction);
        b_f.set_column(i, &(force / mp.total_mass));
        b_m.set_column(i, &(inv_inertia * moment));
    }
    Ok(ActuatorMatrices { b_f, b_m })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mass::mass_properties;
    use crate::phenotype::{quadcopter_baseline, Direction, PropellerSpec};
    use alloc::vec;
    use approx::assert_relative_eq;
    use nalgebra::DVector;

    fn matrices(ph: &Phenotype) -> ActuatorMatrices {
        let p = PhysicalParams::default();
        let mp = mass_properties(ph, &p);
        effectiveness(ph, &mp, &p).unwrap()
    }

    #[test]
    fn flat_quad_thrusts_straight_up() {
        let b = matrices(&quadcopter_baseline());
        let per_motor = 15.0 / 0.434;
        for col in b.b_f.column_iter() {
            assert!(col.x.abs() < 1e-15 && col.y.abs() < 1e-15);
            assert_relative_eq!(col.z, per_motor, max_relative = 1e-14);
        }
    }

    #[test]
    fn alternating_quad_cancels_moments() {
        let b = matrices(&quadcopter_baseline());
        let ones = DVector::from_element(4, 1.0);
        let m = &b.b_m * ones;
        assert!(m.norm() < 1e-10, "{m}");
    }

    #[test]
    fn yaw_column_sign_follows_direction() {
        let b = matrices(&quadcopter_baseline());
        // props 0 and 2 spin CCW and push the body clockwise
        assert!(b.b_m[(2, 0)] < 0.0);
        assert!(b.b_m[(2, 1)] > 0.0);
    }

    #[test]
    fn tilted_columns_keep_their_norm() {
        let p = PhysicalParams::default();
        let ph = Phenotype::new(vec![
            PropellerSpec {
                arm_length: 0.2,
                arm_angle: 10.0,
                inclination: 15.0,
                azimuth: 40.0,
                direction: Direction::Cw,
            },
            PropellerSpec {
                arm_length: 0.25,
                arm_angle: 130.0,
                inclination: 3.0,
                azimuth: -70.0,
                direction: Direction::Ccw,
            },
            PropellerSpec {
                arm_length: 0.15,
                arm_angle: -100.0,
                inclination: 9.0,
                azimuth: 0.0,
                direction: Direction::Cw,
            },
        ]);
        let mp = mass_properties(&ph, &p);
        let b = effectiveness(&ph, &mp, &p).unwrap();
        for col in b.b_f.column_iter() {
            assert_relative_eq!(col.norm(), p.max_thrust() / mp.total_mass, max_relative = 1e-14);
        }
        assert!(b.is_finite());
        assert_eq!(b.n(), 3);
    }
}
