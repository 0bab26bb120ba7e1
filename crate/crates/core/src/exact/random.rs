//! Seeded random chains for property tests.

use rand::seq::SliceRandom;
use rand::Rng;

use super::InducedChain;

/// A random chain with `1..=max_states` states.
///
/// Rows have one to three successors with random weights; about a third of
/// the states are accepting and some states are made absorbing so that
/// chains mix good, bad and transient regions.
pub fn chain<R: Rng + ?Sized>(rng: &mut R, max_states: usize) -> InducedChain {
    let n = rng.gen_range(1..=max_states.max(1));
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        if rng.gen_bool(0.15) {
            rows.push(vec![(i, 1.0)]);
            continue;
        }
        let k = rng.gen_range(1..=n.min(3));
        let mut targets: Vec<usize> = (0..n).collect();
        targets.shuffle(rng);
        targets.truncate(k);
        let weights: Vec<f64> = (0..k).map(|_| rng.gen_range(0.05..1.0)).collect();
        let total: f64 = weights.iter().sum();
        let mut row: Vec<(usize, f64)> = targets.into_iter().zip(weights.iter().map(|w| w / total)).collect();
        // push rounding error into the last entry so the row sums to one
        let err = 1.0 - row.iter().map(|x| x.1).sum::<f64>();
        row.last_mut().unwrap().1 += err;
        rows.push(row);
    }
    let accepting = (0..n).map(|_| rng.gen_bool(0.35)).collect();
    let initial = if n > 1 && rng.gen_bool(0.3) {
        let a = rng.gen_range(0.1..0.9);
        vec![(0, a), (1, 1.0 - a)]
    } else {
        vec![(0, 1.0)]
    };
    InducedChain::new(rows, accepting, initial).expect("generated chain is stochastic")
}
