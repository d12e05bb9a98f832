//! Mass, centre of gravity and inertia of an assembled airframe.

use nalgebra::{Matrix3, Vector3};

use crate::params::PhysicalParams;
use crate::phenotype::Phenotype;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MassProperties {
    pub total_mass: f64,
    /// Body-frame centre of gravity, m.
    pub cg: Vector3<f64>,
    /// Inertia tensor about the centre of gravity, kg m^2.
    pub inertia: Matrix3<f64>,
}

/// Inertia of a point mass at `r` about the origin.
fn point_inertia(mass: f64, r: &Vector3<f64>) -> Matrix3<f64> {
    (Matrix3::identity() * r.norm_squared() - r * r.transpose()) * mass
}

/// Lumped model: the stack is a solid box centred on the origin with its
/// long side on body x, each motor is a point mass at its arm tip and each
/// arm is a slender rod from the origin to the motor.
pub fn mass_properties(ph: &Phenotype, params: &PhysicalParams) -> MassProperties {
    let [a, b, c] = params.fc_dims;
    let stack = Matrix3::from_diagonal(&Vector3::new(b * b + c * c, a * a + c * c, a * a + b * b))
        * (params.m_fc / 12.0);

    let mut total_mass = params.m_fc;
    let mut moment = Vector3::zeros();
    let mut inertia_origin = stack;

    for p in ph.positions() {
        let length = p.norm();
        let arm_mass = params.mu_arm * length;
        let mid = p * 0.5;

        total_mass += params.m_motor + arm_mass;
        moment += p * params.m_motor + mid * arm_mass;

        inertia_origin += point_inertia(params.m_motor, &p);
        // slender rod: m L^2 / 12 about its centre, perpendicular to the rod
        if length > 0.0 {
            let u = p / length;
            let about_centre =
                (Matrix3::identity() - u * u.transpose()) * (arm_mass * length * length / 12.0);
            inertia_origin += about_centre + point_inertia(arm_mass, &mid);
        }
    }

    let cg = moment / total_mass;
    let inertia = inertia_origin - point_inertia(total_mass, &cg);
    MassProperties {
        total_mass,
        cg,
        inertia: (inertia + inertia.transpose()) * 0.5,
    }
}

/// Angular acceleration a single propeller on an arm of length `l` can
/// produce, up to a constant factor: moment arm over the rotational inertia
/// of motor, arm and stack.
pub fn angular_accel_diagnostic(l: f64, params: &PhysicalParams) -> f64 {
    let denom = params.m_motor * l * l + params.mu_arm / 3.0 * l * l * l + params.stack_inertia_yy();
    l / denom
}

/// Arm length maximising [`angular_accel_diagnostic`], by golden-section
/// search. The kernel is unimodal on `(0, inf)`.
pub fn peak_angular_accel_arm(params: &PhysicalParams) -> f64 {
    let f = |l: f64| angular_accel_diagnostic(l, params);
    let inv_phi = (libm::sqrt(5.0) - 1.0) / 2.0;
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    // widen until the peak is bracketed
    while f(hi) > f(hi * 0.5) {
        hi *= 2.0;
    }
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > 1e-12 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    0.5 * (lo + hi)
}
