//! Tiered Pareto dominance, non-dominated sorting and crowding distance.

use alloc::vec;
use alloc::vec::Vec;

use crate::hover::HoverClass;
use crate::objectives::ObjectiveVector;

/// Hover tier used as the primary ranking key: static, spinning, no hover,
/// invalid layout.
pub fn tier(o: &ObjectiveVector) -> u8 {
    if o.invalid {
        return 3;
    }
    match o.hover_class {
        HoverClass::Static => 0,
        HoverClass::Spinning => 1,
        HoverClass::None => 2,
    }
}

fn pareto_dominates(a: &ObjectiveVector, b: &ObjectiveVector) -> bool {
    let no_worse = a.alpha >= b.alpha && a.lambda >= b.lambda && a.size <= b.size;
    let better = a.alpha > b.alpha || a.lambda > b.lambda || a.size < b.size;
    no_worse && better
}

/// `a` dominates `b`: a better hover tier always wins; within the
/// non-hovering tier a smaller solver residual wins; otherwise plain Pareto
/// dominance with alpha and lambda maximised and size minimised.
pub fn dominates(a: &ObjectiveVector, b: &ObjectiveVector) -> bool {
    let (ta, tb) = (tier(a), tier(b));
    if ta != tb {
        return ta < tb;
    }
    match ta {
        3 => false,
        2 if a.residual != b.residual => a.residual < b.residual,
        _ => pareto_dominates(a, b),
    }
}

/// Fronts of indices into `objs`, best first.
pub fn fast_non_dominated_sort(objs: &[ObjectiveVector]) -> Vec<Vec<usize>> {
    let n = objs.len();
    let mut dominated_by: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut counts = vec![0usize; n];
    let mut fronts: Vec<Vec<usize>> = Vec::new();
    let mut current = Vec::new();

    for p in 0..n {
        for q in p + 1..n {
            if dominates(&objs[p], &objs[q]) {
                dominated_by[p].push(q);
                counts[q] += 1;
            } else if dominates(&objs[q], &objs[p]) {
                dominated_by[q].push(p);
                counts[p] += 1;
            }
        }
    }
    current.extend((0..n).filter(|&p| counts[p] == 0));
    while !current.is_empty() {
        let mut next = Vec::new();
        for &p in &current {
            for &q in &dominated_by[p] {
                counts[q] -= 1;
                if counts[q] == 0 {
                    next.push(q);
                }
            }
        }
        next.sort_unstable();
        fronts.push(core::mem::replace(&mut current, next));
    }
    fronts
}

/// Crowding distance of every member of `front`, in the same order.
pub fn crowding_distance(objs: &[ObjectiveVector], front: &[usize]) -> Vec<f64> {
    let m = front.len();
    let mut dist = vec![0.0; m];
    if m <= 2 {
        dist.fill(f64::INFINITY);
        return dist;
    }
    let keys: [fn(&ObjectiveVector) -> f64; 3] = [|o| o.alpha, |o| o.lambda, |o| o.size];
    let mut order: Vec<usize> = (0..m).collect();
    for key in keys {
        order.sort_by(|&a, &b| {
            key(&objs[front[a]])
                .total_cmp(&key(&objs[front[b]]))
                .then(a.cmp(&b))
        });
        let lo = key(&objs[front[order[0]]]);
        let hi = key(&objs[front[order[m - 1]]]);
        dist[order[0]] = f64::INFINITY;
        dist[order[m - 1]] = f64::INFINITY;
        let range = hi - lo;
        if range.is_nan() || range <= 0.0 {
            continue;
        }
        for w in 1..m - 1 {
            let gap = key(&objs[front[order[w + 1]]]) - key(&objs[front[order[w - 1]]]);
            dist[order[w]] += gap / range;
        }
    }
    dist
}
