//! Tabular learners for the eventually discounted objective.
//!
//! Both learners keep one value per (product state, action) in a dense
//! [`Table`]. Actions are indexed as in [`Product::actions`]: MDP actions
//! first, then the automaton's jumps.

mod pg;
mod q;

pub use pg::{train_pg, PgRun, SoftmaxPolicy};
pub use q::{q_update, train_q, QRun, QTable};

use rand::{Rng, RngCore};
use serde::Deserialize;

use crate::exact::{satisfaction_probability, ExactError, InducedChain};
use crate::product::{rollout, DiscountMode, DiscountSpec, Product, ProductAction, ProductError, ProductState};

/// Evaluation rollouts averaged by the curve metric.
pub const EVAL_WINDOW: usize = 20;
/// Accepting arrivals needed for an evaluation rollout to count as a success.
pub const SUCCESS_VISITS: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecayKind {
    Linear,
    Exponential,
}

/// ε-greedy exploration schedule, updated every `freq` episodes.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EpsilonSchedule {
    pub initial: f64,
    pub min: f64,
    pub decay: DecayKind,
    pub rate: f64,
    pub freq: usize,
}

impl EpsilonSchedule {
    pub fn constant(eps: f64) -> Self {
        EpsilonSchedule {
            initial: eps,
            min: eps,
            decay: DecayKind::Linear,
            rate: 0.0,
            freq: 1,
        }
    }

    /// ε in effect during `episode`.
    pub fn at(&self, episode: usize) -> f64 {
        let k = episode / self.freq.max(1);
        let eps = match self.decay {
            DecayKind::Linear => self.initial - self.rate * k as f64,
            DecayKind::Exponential => self.initial * self.rate.powi(k.min(i32::MAX as usize) as i32),
        };
        eps.max(self.min)
    }
}

/// Learner hyperparameters.
#[derive(Debug, Clone, PartialEq)]
pub struct LearnerConfig {
    pub gamma: f64,
    pub mode: DiscountMode,
    pub lr: f64,
    pub epsilon: EpsilonSchedule,
    pub batch_size: usize,
    /// Sampled batches (Q-learning) per episode.
    pub k_steps: usize,
    pub horizon: usize,
    pub episodes: usize,
    pub lcer: bool,
    pub seed: u64,
    pub replay_capacity: usize,
    /// Step size of the per-state baseline (policy gradient).
    pub baseline_rate: f64,
}

impl Default for LearnerConfig {
    fn default() -> Self {
        LearnerConfig {
            gamma: 0.99,
            mode: DiscountMode::Eventual,
            lr: 0.3,
            epsilon: EpsilonSchedule::constant(0.1),
            batch_size: 128,
            k_steps: 5,
            horizon: 20,
            episodes: 100,
            lcer: true,
            seed: 0,
            replay_capacity: 100_000,
            baseline_rate: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LearnError {
    #[error("{field} = {value} is out of range")]
    Range { field: &'static str, value: f64 },
    #[error(transparent)]
    Product(#[from] ProductError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

impl LearnerConfig {
    pub fn discount(&self) -> Result<DiscountSpec, LearnError> {
        Ok(DiscountSpec::new(self.gamma, self.mode)?)
    }

    pub fn validate(&self) -> Result<(), LearnError> {
        let unit = |field, v: f64| {
            if v > 0.0 && v <= 1.0 {
                Ok(())
            } else {
                Err(LearnError::Range { field, value: v })
            }
        };
        let prob = |field, v: f64| {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(LearnError::Range { field, value: v })
            }
        };
        self.discount()?;
        unit("lr", self.lr)?;
        unit("baseline_rate", self.baseline_rate)?;
        prob("epsilon.initial", self.epsilon.initial)?;
        prob("epsilon.min", self.epsilon.min)?;
        if self.horizon == 0 {
            return Err(LearnError::Range {
                field: "horizon",
                value: 0.0,
            });
        }
        if self.replay_capacity == 0 {
            return Err(LearnError::Range {
                field: "replay_capacity",
                value: 0.0,
            });
        }
        Ok(())
    }
}

/// Dense per-(state, action) storage over a product.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    num_b: usize,
    offsets: Vec<usize>,
    values: Vec<f64>,
}

impl Table {
    pub fn zeros(product: &Product) -> Self {
        let num_b = product.aut().num_states();
        let mut offsets = Vec::with_capacity(product.env().num_states() * num_b + 1);
        let mut n = 0;
        for s in 0..product.env().num_states() {
            for b in 0..num_b {
                offsets.push(n);
                n += product.num_actions(ProductState::new(s, b));
            }
        }
        offsets.push(n);
        Table {
            num_b,
            offsets,
            values: vec![0.0; n],
        }
    }

    fn key(&self, z: ProductState) -> usize {
        z.s * self.num_b + z.b
    }

    pub fn row(&self, z: ProductState) -> &[f64] {
        let k = self.key(z);
        &self.values[self.offsets[k]..self.offsets[k + 1]]
    }

    pub fn row_mut(&mut self, z: ProductState) -> &mut [f64] {
        let k = self.key(z);
        let (lo, hi) = (self.offsets[k], self.offsets[k + 1]);
        &mut self.values[lo..hi]
    }

    pub fn states(&self) -> impl Iterator<Item = ProductState> + '_ {
        let nb = self.num_b;
        (0..self.offsets.len() - 1).map(move |k| ProductState::new(k / nb, k % nb))
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Lowest index among the maxima of a row.
    pub fn argmax(&self, z: ProductState) -> usize {
        let row = self.row(z);
        let mut best = 0;
        for (i, &v) in row.iter().enumerate() {
            if v > row[best] {
                best = i;
            }
        }
        best
    }

    pub fn max(&self, z: ProductState) -> f64 {
        self.row(z).iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// `s b action value` per entry.
    pub fn to_text(&self, product: &Product) -> String {
        let mut out = String::new();
        for z in self.states() {
            for (i, v) in self.row(z).iter().enumerate() {
                out.push_str(&format!("{} {} {} {v}\n", z.s, z.b, product.action_at(z, i)));
            }
        }
        out
    }
}

/// A deterministic stationary policy over product states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeterministicPolicy {
    num_b: usize,
    actions: Vec<usize>,
}

impl DeterministicPolicy {
    /// Action index chosen in `z`.
    pub fn index(&self, z: ProductState) -> usize {
        self.actions[z.s * self.num_b + z.b]
    }

    pub fn action(&self, product: &Product, z: ProductState) -> ProductAction {
        product.action_at(z, self.index(z))
    }

    /// Exact satisfaction probability of this policy on `product`.
    pub fn p_sat(&self, product: &Product) -> Result<f64, ExactError> {
        let chain = InducedChain::from_deterministic(product, |z| self.action(product, z))?;
        satisfaction_probability(&chain)
    }
}

/// Argmax per state, ties to the lowest action index.
pub fn greedy_policy(table: &Table) -> DeterministicPolicy {
    DeterministicPolicy {
        num_b: table.num_b,
        actions: table.states().map(|z| table.argmax(z)).collect(),
    }
}

/// Whether a rollout has at least [`SUCCESS_VISITS`] accepting arrivals.
pub fn is_success(traj: &crate::product::ProductTrajectory) -> bool {
    traj.rewards().iter().filter(|&&r| r == 1).count() >= SUCCESS_VISITS
}

/// Sliding success fraction over the last [`EVAL_WINDOW`] evaluations; the
/// window counts missing evaluations as failures.
#[derive(Debug, Clone, Default)]
pub struct CurveTracker {
    recent: std::collections::VecDeque<bool>,
    curve: Vec<f64>,
}

impl CurveTracker {
    pub fn record(&mut self, success: bool) -> f64 {
        if self.recent.len() == EVAL_WINDOW {
            self.recent.pop_front();
        }
        self.recent.push_back(success);
        let m = self.recent.iter().filter(|&&s| s).count() as f64 / EVAL_WINDOW as f64;
        self.curve.push(m);
        m
    }

    pub fn into_curve(self) -> Vec<f64> {
        self.curve
    }
}

/// First episode whose metric reaches `threshold`, or `curve.len() + 1`.
pub fn episodes_to_threshold(curve: &[f64], threshold: f64) -> usize {
    curve
        .iter()
        .position(|&m| m >= threshold - 1e-12)
        .map_or(curve.len() + 1, |i| i + 1)
}

// One evaluation rollout of a deterministic choice rule.
fn evaluate(
    product: &Product,
    choose: impl Fn(ProductState) -> usize,
    horizon: usize,
    rng: &mut dyn RngCore,
) -> Result<bool, ProductError> {
    let mut policy = |p: &Product, z: ProductState, _: &mut dyn RngCore| p.action_at(z, choose(z));
    Ok(is_success(&rollout(product, &mut policy, horizon, rng)?))
}

fn epsilon_greedy(product: &Product, table: &Table, z: ProductState, eps: f64, rng: &mut dyn RngCore) -> ProductAction {
    if eps > 0.0 && rng.gen::<f64>() < eps {
        let n = product.num_actions(z);
        product.action_at(z, rng.gen_range(0..n))
    } else {
        product.action_at(z, table.argmax(z))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::make_two_choice;
    use crate::fixtures;

    #[test]
    fn schedules() {
        let lin = EpsilonSchedule {
            initial: 0.8,
            min: 0.15,
            decay: DecayKind::Linear,
            rate: 0.1,
            freq: 10,
        };
        assert_eq!(lin.at(0), 0.8);
        assert_eq!(lin.at(9), 0.8);
        assert!((lin.at(10) - 0.7).abs() < 1e-12);
        assert_eq!(lin.at(1000), 0.15);
        let exp = EpsilonSchedule {
            decay: DecayKind::Exponential,
            rate: 0.9,
            ..lin
        };
        assert!((exp.at(25) - 0.8 * 0.81).abs() < 1e-12);
        assert_eq!(exp.at(10_000), 0.15);
    }

    #[test]
    fn threshold_and_tracker() {
        let mut t = CurveTracker::default();
        let m: Vec<f64> = (0..25).map(|_| t.record(true)).collect();
        assert_eq!(m[0], 0.05);
        assert_eq!(episodes_to_threshold(&m, 0.9), 18);
        assert_eq!(episodes_to_threshold(&[0.0, 0.5], 0.9), 3);
    }

    #[test]
    fn zero_table_greedy_is_lowest_index() {
        let env = make_two_choice(0.9).unwrap();
        let aut = fixtures::two_choice();
        let p = Product::new(&env, &aut);
        let t = Table::zeros(&p);
        let g = greedy_policy(&t);
        assert!(t.states().all(|z| g.index(z) == 0));
    }

    #[test]
    fn invalid_configs() {
        let bad = LearnerConfig {
            lr: 0.0,
            ..LearnerConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = LearnerConfig {
            gamma: 1.0,
            ..LearnerConfig::default()
        };
        assert!(bad.validate().is_err());
        LearnerConfig::default().validate().unwrap();
    }
}
