//! Selection and variation operators on real-valued genomes.

use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{Distribution, Normal};

/// Binary tournament on precomputed rank and crowding: lower rank wins,
/// then larger crowding, then the first pick. Returns the winner's index.
pub fn binary_tournament<R: Rng + ?Sized>(ranks: &[usize], crowding: &[f64], rng: &mut R) -> usize {
    let n = ranks.len();
    assert!(n >= 2, "tournament needs two contestants");
    let a = rng.random_range(0..n);
    let mut b = rng.random_range(0..n - 1);
    if b >= a {
        b += 1;
    }
    tournament_winner(a, b, ranks, crowding)
}

pub fn tournament_winner(a: usize, b: usize, ranks: &[usize], crowding: &[f64]) -> usize {
    if ranks[b] < ranks[a] || (ranks[b] == ranks[a] && crowding[b] > crowding[a]) {
        b
    } else {
        a
    }
}

/// Value-wise arithmetic crossover with an independent blend weight per
/// gene. Children are convex combinations of the parents.
pub fn arithmetic_crossover<R: Rng + ?Sized>(p1: &[f64], p2: &[f64], rng: &mut R) -> (Vec<f64>, Vec<f64>) {
    assert_eq!(p1.len(), p2.len());
    let mut c1 = Vec::with_capacity(p1.len());
    let mut c2 = Vec::with_capacity(p1.len());
    for (&a, &b) in p1.iter().zip(p2) {
        let beta: f64 = rng.random();
        c1.push(beta * a + (1.0 - beta) * b);
        c2.push((1.0 - beta) * a + beta * b);
    }
    (c1, c2)
}

/// Adds `N(0, sigma)` noise to each gene with probability `rate`, clipping
/// the result to `[-1, 1]`. Returns how many genes were touched.
pub fn mutate<R: Rng + ?Sized>(genes: &mut [f64], rate: f64, sigma: f64, rng: &mut R) -> usize {
    let noise = Normal::new(0.0, sigma).expect("sigma must be finite and non-negative");
    let mut touched = 0;
    for g in genes.iter_mut() {
        if rng.random::<f64>() < rate {
            *g = (*g + noise.sample(rng)).clamp(-1.0, 1.0);
            touched += 1;
        }
    }
    touched
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn tournament_rules() {
        assert_eq!(tournament_winner(0, 1, &[0, 3], &[0.1, 5.0]), 0);
        assert_eq!(tournament_winner(0, 1, &[3, 0], &[5.0, 0.1]), 1);
        assert_eq!(tournament_winner(0, 1, &[1, 1], &[f64::INFINITY, 0.4]), 0);
        assert_eq!(tournament_winner(0, 1, &[1, 1], &[0.4, f64::INFINITY]), 1);
        assert_eq!(tournament_winner(0, 1, &[2, 2], &[0.4, 0.4]), 0);
        assert_eq!(tournament_winner(1, 0, &[2, 2], &[0.4, 0.4]), 1);
    }

    #[test]
    fn tournament_favours_front_zero() {
        let ranks: Vec<usize> = (0..20).map(|i| i % 4).collect();
        let crowding = vec![1.0; 20];
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let trials = 100_000;
        let wins = (0..trials)
            .filter(|_| ranks[binary_tournament(&ranks, &crowding, &mut rng)] == 0)
            .count();
        let share = 5.0 / 20.0;
        assert!(wins as f64 / trials as f64 > share);
    }

    #[test]
    fn crossover_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = vec![0.3, -0.7, 1.0, -1.0];
        let (c1, c2) = arithmetic_crossover(&p, &p, &mut rng);
        assert_eq!(c1, p);
        assert_eq!(c2, p);

        let q = vec![-0.2, 0.9, 0.1, 0.5];
        let (c1, c2) = arithmetic_crossover(&p, &q, &mut rng);
        for i in 0..4 {
            assert!((c1[i] + c2[i] - (p[i] + q[i])).abs() < 1e-15);
        }
    }

    #[test]
    fn crossover_stays_in_box() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10_000 {
            let p: Vec<f64> = (0..41).map(|_| rng.random_range(-1.0..=1.0)).collect();
            let q: Vec<f64> = (0..41).map(|_| rng.random_range(-1.0..=1.0)).collect();
            let (c1, c2) = arithmetic_crossover(&p, &q, &mut rng);
            assert!(c1.iter().chain(&c2).all(|v| (-1.0..=1.0).contains(v)));
        }
    }

    #[test]
    fn mutation_degenerate_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let orig: Vec<f64> = (0..41).map(|i| (i as f64 / 20.0) - 1.0).collect();
        let mut g = orig.clone();
        assert_eq!(mutate(&mut g, 0.0, 0.5, &mut rng), 0);
        assert_eq!(g, orig);
        mutate(&mut g, 1.0, 1e-15, &mut rng);
        for (a, b) in g.iter().zip(&orig) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn mutation_count_matches_rate() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let trials = 10_000;
        let total: usize = (0..trials)
            .map(|_| {
                let mut g = vec![0.0; 41];
                mutate(&mut g, 0.2, 0.2, &mut rng)
            })
            .sum();
        let mean = total as f64 / trials as f64;
        assert!((mean - 8.2).abs() < 0.3, "mean {mean}");
    }

    #[test]
    fn mutation_clips() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..1000 {
            let mut g = vec![0.99; 41];
            mutate(&mut g, 0.5, 2.0, &mut rng);
            assert!(g.iter().all(|v| (-1.0..=1.0).contains(v)));
        }
    }
}
