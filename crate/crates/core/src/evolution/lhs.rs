use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

/// Latin hypercube sample of `count` points in `[-1, 1]^dim`.
///
/// In every dimension each of the `count` equal-width strata holds exactly
/// one point, placed uniformly within its stratum; strata are assigned to
/// points by an independent permutation per dimension.
pub fn latin_hypercube<R: Rng + ?Sized>(count: usize, dim: usize, rng: &mut R) -> Vec<Vec<f64>> {
    let mut samples = alloc::vec![alloc::vec![0.0; dim]; count];
    if count == 0 {
        return samples;
    }
    let width = 2.0 / count as f64;
    let mut strata: Vec<usize> = (0..count).collect();
    for d in 0..dim {
        strata.shuffle(rng);
        for (sample, &stratum) in samples.iter_mut().zip(&strata) {
            let u: f64 = rng.random();
            sample[d] = (-1.0 + (stratum as f64 + u) * width).clamp(-1.0, 1.0);
        }
    }
    samples
}
