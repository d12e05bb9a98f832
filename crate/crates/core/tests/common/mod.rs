//! Independent reference implementations used as test oracles.
#![allow(dead_code)]

use morpho_core::hover::HoverClass;
use morpho_core::{Genotype, ObjectiveVector, GENOME_LEN};
use nalgebra::{DVector, Matrix3, Matrix3xX, Vector3};
use rand::Rng;

/// Ranking key: hover tier first, then the no-hover residual.
fn oracle_tier(o: &ObjectiveVector) -> u8 {
    match (o.invalid, o.hover_class) {
        (true, _) => 3,
        (false, HoverClass::Static) => 0,
        (false, HoverClass::Spinning) => 1,
        (false, HoverClass::None) => 2,
    }
}

pub fn oracle_dominates(a: &ObjectiveVector, b: &ObjectiveVector) -> bool {
    let (ta, tb) = (oracle_tier(a), oracle_tier(b));
    if ta != tb {
        return ta < tb;
    }
    if ta == 2 && a.residual != b.residual {
        return a.residual < b.residual;
    }
    if ta == 3 {
        return false;
    }
    let ge = [a.alpha >= b.alpha, a.lambda >= b.lambda, a.size <= b.size];
    let gt = [a.alpha > b.alpha, a.lambda > b.lambda, a.size < b.size];
    ge.iter().all(|&x| x) && gt.iter().any(|&x| x)
}

/// Fronts by repeatedly peeling off the members nobody left dominates.
/// Each front is sorted by index.
pub fn brute_force_fronts(objs: &[ObjectiveVector]) -> Vec<Vec<usize>> {
    let mut remaining: Vec<usize> = (0..objs.len()).collect();
    let mut fronts = Vec::new();
    while !remaining.is_empty() {
        let front: Vec<usize> = remaining
            .iter()
            .copied()
            .filter(|&i| !remaining.iter().any(|&j| oracle_dominates(&objs[j], &objs[i])))
            .collect();
        remaining.retain(|i| !front.contains(i));
        fronts.push(front);
    }
    fronts
}

/// Random objective vectors over all four tiers. Values are drawn from a
/// coarse lattice so that ties and duplicates are common.
pub fn mixed_population<R: Rng>(n: usize, rng: &mut R) -> Vec<ObjectiveVector> {
    (0..n)
        .map(|_| {
            let tier = rng.random_range(0..4u8);
            if tier == 3 {
                return ObjectiveVector::invalid();
            }
            let hover_class = [HoverClass::Static, HoverClass::Spinning, HoverClass::None][tier as usize];
            let none = hover_class == HoverClass::None;
            ObjectiveVector {
                alpha: if none {
                    0.0
                } else {
                    rng.random_range(0..12) as f64 * 1.5
                },
                lambda: rng.random_range(0..12) as f64 * 1e4,
                size: rng.random_range(1..12) as f64 * 0.01,
                hover_class,
                residual: if none { rng.random_range(1..6) as f64 } else { 0.0 },
                invalid: false,
            }
        })
        .collect()
}

/// Smallest root of the characteristic polynomial of a symmetric 3x3
/// matrix: trigonometric solution of the depressed cubic, refined by Newton
/// steps on `det(A - x I)`.
pub fn charpoly_min_root(a: &Matrix3<f64>) -> f64 {
    let p1 = a[(0, 1)].powi(2) + a[(0, 2)].powi(2) + a[(1, 2)].powi(2);
    let q = a.trace() / 3.0;
    let p2 = (a[(0, 0)] - q).powi(2) + (a[(1, 1)] - q).powi(2) + (a[(2, 2)] - q).powi(2) + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    if p == 0.0 {
        return q;
    }
    let bm = (a - Matrix3::identity() * q) / p;
    let r = (bm.determinant() / 2.0).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    let mut x = q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();

    let char_poly = |x: f64| {
        let m = a - Matrix3::identity() * x;
        let minors = m[(1, 1)] * m[(2, 2)] - m[(1, 2)] * m[(2, 1)] + m[(0, 0)] * m[(2, 2)]
            - m[(0, 2)] * m[(2, 0)]
            + m[(0, 0)] * m[(1, 1)]
            - m[(0, 1)] * m[(1, 0)];
        (m.determinant(), -minors)
    };
    for _ in 0..3 {
        let (f, df) = char_poly(x);
        if df == 0.0 {
            break;
        }
        let step = f / df;
        if !step.is_finite() {
            break;
        }
        x -= step;
    }
    x
}

/// Hover violation of a command: thrust magnitude error and the moment
/// component normal to the thrust.
pub fn spinning_violation(
    b_f: &Matrix3xX<f64>,
    b_m: &Matrix3xX<f64>,
    g: f64,
    eta: &DVector<f64>,
) -> (f64, f64) {
    let f: Vector3<f64> = b_f * eta;
    let m: Vector3<f64> = b_m * eta;
    let fnorm = f.norm();
    let normal = if fnorm > 0.0 {
        f.cross(&m).norm() / fnorm
    } else {
        m.norm()
    };
    ((fnorm - g).abs(), normal)
}

/// Exhaustive search of the command grid `{0, step, .., 1}^n` for a point
/// that hovers (static or spinning) within `tol` on both residuals. Both
/// conditions only constrain the direction of `eta`, so each grid point is
/// also tried rescaled onto the thrust target when that stays in the box.
pub fn grid_hover_feasible(b_f: &Matrix3xX<f64>, b_m: &Matrix3xX<f64>, g: f64, step: f64, tol: f64) -> bool {
    let n = b_f.ncols();
    let levels = (1.0 / step).round() as usize + 1;
    let mut idx = vec![0usize; n];
    let mut eta = DVector::zeros(n);
    loop {
        for k in 0..n {
            eta[k] = (idx[k] as f64 * step).min(1.0);
        }
        let (thrust, normal) = spinning_violation(b_f, b_m, g, &eta);
        if thrust <= tol && normal <= tol {
            return true;
        }
        let fnorm = (b_f * &eta).norm();
        if fnorm > 0.0 {
            let s = g / fnorm;
            if eta.amax() * s <= 1.0 && normal * s <= tol {
                return true;
            }
        }
        let mut k = 0;
        loop {
            if k == n {
                return false;
            }
            idx[k] += 1;
            if idx[k] < levels {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Uniform random genotype with the count gene restricted to `counts`.
pub fn random_genotype<R: Rng>(rng: &mut R, counts: std::ops::RangeInclusive<usize>) -> Genotype {
    let mut genes: Vec<f64> = (0..GENOME_LEN).map(|_| rng.random_range(-1.0..=1.0)).collect();
    let lo = -1.0 + 0.4 * (*counts.start() - 4) as f64;
    let hi = -1.0 + 0.4 * (*counts.end() - 3) as f64;
    genes[0] = rng.random_range(lo..hi);
    Genotype::new(genes).unwrap()
}
