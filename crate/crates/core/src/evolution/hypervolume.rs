//! Exact hypervolume for three objectives (two maximised, one minimised).

use alloc::vec::Vec;

/// Reference point: designs must beat `alpha = 0`, `lambda = 0` and
/// `size = size` to contribute.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Reference {
    pub alpha: f64,
    pub lambda: f64,
    pub size: f64,
}

impl Default for Reference {
    fn default() -> Self {
        Self {
            alpha: 0.0,
            lambda: 0.0,
            size: 1.0,
        }
    }
}

/// Volume dominated by `points` (alpha, lambda, size) and bounded by the
/// reference point. Computed by slicing along size and sweeping the
/// dominated staircase in the alpha-lambda plane.
pub fn hypervolume(points: &[[f64; 3]], reference: &Reference) -> f64 {
    let mut pts: Vec<[f64; 3]> = points
        .iter()
        .copied()
        .filter(|p| p[0] > reference.alpha && p[1] > reference.lambda && p[2] < reference.size)
        .collect();
    if pts.is_empty() {
        return 0.0;
    }
    pts.sort_by(|a, b| {
        a[2].total_cmp(&b[2])
            .then(b[0].total_cmp(&a[0]))
            .then(b[1].total_cmp(&a[1]))
    });

    let mut volume = 0.0;
    let mut active: Vec<(f64, f64)> = Vec::with_capacity(pts.len());
    let mut i = 0;
    while i < pts.len() {
        let level = pts[i][2];
        while i < pts.len() && pts[i][2] == level {
            active.push((pts[i][0], pts[i][1]));
            i += 1;
        }
        let next = if i < pts.len() { pts[i][2] } else { reference.size };
        volume += staircase_area(&mut active, reference) * (next - level);
    }
    volume
}

/// Area of the union of boxes `[ref, alpha] x [ref, lambda]`.
fn staircase_area(boxes: &mut [(f64, f64)], reference: &Reference) -> f64 {
    boxes.sort_by(|a, b| b.0.total_cmp(&a.0).then(b.1.total_cmp(&a.1)));
    let mut area = 0.0;
    let mut best_lambda = reference.lambda;
    for (k, &(alpha, lambda)) in boxes.iter().enumerate() {
        if lambda > best_lambda {
            best_lambda = lambda;
        }
        let next_alpha = boxes.get(k + 1).map_or(reference.alpha, |b| b.0);
        area += (alpha - next_alpha) * (best_lambda - reference.lambda);
    }
    area
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Grid-cell oracle: every cell of the grid spanned by all coordinates
    /// counts once if some point dominates its far corner.
    fn cell_oracle(points: &[[f64; 3]], r: &Reference) -> f64 {
        let mut xs: Vec<f64> = points.iter().map(|p| p[0]).chain([r.alpha]).collect();
        let mut ys: Vec<f64> = points.iter().map(|p| p[1]).chain([r.lambda]).collect();
        let mut zs: Vec<f64> = points.iter().map(|p| p[2]).chain([r.size]).collect();
        for v in [&mut xs, &mut ys, &mut zs] {
            v.sort_by(f64::total_cmp);
            v.dedup();
        }
        let mut total = 0.0;
        for xi in 0..xs.len() - 1 {
            for yi in 0..ys.len() - 1 {
                for zi in 0..zs.len() - 1 {
                    let (x_hi, y_hi, z_lo) = (xs[xi + 1], ys[yi + 1], zs[zi]);
                    if x_hi <= r.alpha || y_hi <= r.lambda || z_lo >= r.size {
                        continue;
                    }
                    let covered = points
                        .iter()
                        .any(|p| p[0] >= x_hi && p[1] >= y_hi && p[2] <= z_lo);
                    if covered {
                        total += (x_hi - xs[xi]) * (y_hi - ys[yi]) * (zs[zi + 1] - z_lo);
                    }
                }
            }
        }
        total
    }

    #[test]
    fn single_box() {
        let r = Reference::default();
        assert!((hypervolume(&[[2.0, 3.0, 0.5]], &r) - 3.0).abs() < 1e-15);
        assert_eq!(hypervolume(&[[2.0, 3.0, 1.5]], &r), 0.0);
    }

    #[test]
    fn matches_cell_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let r = Reference::default();
        for trial in 0..200 {
            let n = 1 + trial % 12;
            let pts: Vec<[f64; 3]> = (0..n)
                .map(|_| {
                    [
                        rng.random_range(-0.5..3.0),
                        rng.random_range(-0.5..3.0),
                        rng.random_range(0.0..1.2),
                    ]
                })
                .collect();
            let fast = hypervolume(&pts, &r);
            let slow = cell_oracle(&pts, &r);
            assert!((fast - slow).abs() <= 1e-12 * slow.max(1.0), "{fast} vs {slow}");
        }
    }

    #[test]
    fn dominated_point_adds_nothing() {
        let r = Reference::default();
        let base = vec![[2.0, 2.0, 0.2], [1.0, 3.0, 0.4]];
        let mut more = base.clone();
        more.push([1.5, 1.5, 0.3]);
        assert_eq!(hypervolume(&base, &r), hypervolume(&more, &r));
    }
}
