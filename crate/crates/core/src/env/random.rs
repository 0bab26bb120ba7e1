use rand::seq::SliceRandom;
use rand::Rng;

use super::LabelledMdp;
use crate::ltl::{Alphabet, Letter};

/// A small random labelled MDP over a given alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomMdp {
    ap: Alphabet,
    labels: Vec<Letter>,
    // rows[s][a] = distribution
    rows: Vec<Vec<Vec<(usize, f64)>>>,
}

impl RandomMdp {
    /// `2..=max_states` states, one to three actions each, one or two
    /// successors per action and uniformly random labels.
    pub fn generate<R: Rng + ?Sized>(rng: &mut R, ap: Alphabet, max_states: usize) -> Self {
        let n = rng.gen_range(2..=max_states.max(2));
        let letters: Vec<Letter> = ap.letters().collect();
        let labels = (0..n).map(|_| *letters.choose(rng).expect("nonempty alphabet")).collect();
        let rows = (0..n)
            .map(|_| {
                (0..rng.gen_range(1..=3))
                    .map(|_| {
                        let a = rng.gen_range(0..n);
                        if rng.gen_bool(0.5) {
                            vec![(a, 1.0)]
                        } else {
                            let b = (a + rng.gen_range(1..n)) % n;
                            let p = rng.gen_range(0.1..0.9);
                            vec![(a, p), (b, 1.0 - p)]
                        }
                    })
                    .collect()
            })
            .collect();
        RandomMdp { ap, labels, rows }
    }

    /// An explicit MDP: `rows[s][a]` is the successor distribution of `a` in
    /// `s`; state 0 is initial.
    pub fn from_parts(ap: Alphabet, labels: Vec<Letter>, rows: Vec<Vec<Vec<(usize, f64)>>>) -> Self {
        assert_eq!(labels.len(), rows.len(), "one label per state");
        RandomMdp { ap, labels, rows }
    }
}

impl LabelledMdp for RandomMdp {
    fn name(&self) -> &str {
        "random"
    }

    fn ap(&self) -> &Alphabet {
        &self.ap
    }

    fn num_states(&self) -> usize {
        self.rows.len()
    }

    fn num_actions(&self, s: usize) -> usize {
        self.rows[s].len()
    }

    fn transition_distribution(&self, s: usize, a: usize) -> Vec<(usize, f64)> {
        self.rows[s][a].clone()
    }

    fn initial_distribution(&self) -> Vec<(usize, f64)> {
        vec![(0, 1.0)]
    }

    fn label(&self, s: usize) -> Letter {
        self.labels[s]
    }
}
