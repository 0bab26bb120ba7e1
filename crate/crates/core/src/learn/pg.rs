use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{evaluate, CurveTracker, DeterministicPolicy, LearnError, LearnerConfig, Table};
use crate::env::LabelledMdp;
use crate::lcer::{lcer_pg_offline, TrajectoryStore};
use crate::ldba::Ldba;
use crate::product::{rewards_to_go, rollout, Product, ProductAction, ProductState, RewardToGo};

/// Softmax over per-state action preferences.
#[derive(Debug, Clone, PartialEq)]
pub struct SoftmaxPolicy {
    pub prefs: Table,
}

impl SoftmaxPolicy {
    pub fn new(product: &Product) -> Self {
        SoftmaxPolicy {
            prefs: Table::zeros(product),
        }
    }

    pub fn probs(&self, z: ProductState) -> Vec<f64> {
        let row = self.prefs.row(z);
        let m = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let e: Vec<f64> = row.iter().map(|&x| (x - m).exp()).collect();
        let total: f64 = e.iter().sum();
        e.into_iter().map(|x| x / total).collect()
    }

    pub fn sample(&self, product: &Product, z: ProductState, rng: &mut dyn RngCore) -> ProductAction {
        let probs = self.probs(z);
        let u: f64 = rng.gen();
        let mut acc = 0.0;
        for (i, p) in probs.iter().enumerate() {
            acc += p;
            if u < acc {
                return product.action_at(z, i);
            }
        }
        product.action_at(z, probs.len() - 1)
    }

    /// Most probable action per state, ties to the lowest index.
    pub fn mode(&self) -> DeterministicPolicy {
        super::greedy_policy(&self.prefs)
    }
}

#[derive(Debug, Clone)]
pub struct PgRun {
    pub policy: SoftmaxPolicy,
    pub curve: Vec<f64>,
    /// Every distinct trajectory trained on, up to the replay capacity.
    pub store: TrajectoryStore,
}

/// REINFORCE on tabular softmax preferences. Each episode's rollout is
/// expanded to all its counterfactual annotations when `cfg.lcer` is set.
pub fn train_pg(env: &dyn LabelledMdp, aut: &Ldba, cfg: &LearnerConfig) -> Result<PgRun, LearnError> {
    cfg.validate()?;
    let spec = cfg.discount()?;
    let product = Product::new(env, aut);
    let mut policy = SoftmaxPolicy::new(&product);
    // running mean of the return per (product state, step)
    let mut baseline = vec![0.0; env.num_states() * aut.num_states() * cfg.horizon];
    let key = |z: ProductState, k: usize| (z.s * aut.num_states() + z.b) * cfg.horizon + k;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut eval_rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    eval_rng.set_stream(1);
    let mut tracker = CurveTracker::default();
    let mut store = TrajectoryStore::new(cfg.replay_capacity);

    for episode in 0..cfg.episodes {
        let eps = cfg.epsilon.at(episode);
        let traj = {
            let pol = &policy;
            // uniform exploration mixed into the softmax, as in the Q-learner
            let mut behaviour = |p: &Product, z: ProductState, r: &mut dyn RngCore| {
                if eps > 0.0 && r.gen::<f64>() < eps {
                    p.action_at(z, r.gen_range(0..p.num_actions(z)))
                } else {
                    pol.sample(p, z, r)
                }
            };
            rollout(&product, &mut behaviour, cfg.horizon, &mut rng)?
        };
        let set = if cfg.lcer {
            lcer_pg_offline(&product, &traj).into_iter().collect()
        } else {
            vec![traj]
        };
        for t in &set {
            let returns = rewards_to_go(t, &spec, RewardToGo::Relative);
            for (k, (&a, &g)) in t.actions().iter().zip(&returns).enumerate() {
                let z = t.states()[k];
                let base = &mut baseline[key(z, k)];
                let adv = g - *base;
                *base += cfg.baseline_rate * adv;
                if adv == 0.0 {
                    continue;
                }
                let probs = policy.probs(z);
                let chosen = product.action_index(z, a);
                for (i, (x, p)) in policy.prefs.row_mut(z).iter_mut().zip(probs).enumerate() {
                    *x += cfg.lr * adv * ((i == chosen) as u8 as f64 - p);
                }
            }
        }
        for t in set {
            store.insert(t);
        }
        let mode = policy.mode();
        tracker.record(evaluate(&product, |z| mode.index(z), cfg.horizon, &mut eval_rng)?);
    }
    Ok(PgRun {
        policy,
        curve: tracker.into_curve(),
        store,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::{make_flatworld_grid, RandomMdp};
    use crate::fixtures;
    use crate::ltl::Letter;
    use crate::product::DiscountMode;

    #[test]
    fn probabilities_normalised() {
        let env = make_flatworld_grid(10).unwrap();
        let aut = fixtures::fgy();
        let p = Product::new(&env, &aut);
        let mut pol = SoftmaxPolicy::new(&p);
        let z = ProductState::new(3, 0);
        pol.prefs.row_mut(z).copy_from_slice(&[800.0, -3.0, 0.0, 1.0, 2.0, 5.0]);
        let pr = pol.probs(z);
        assert_eq!(pr.len(), 6);
        assert!((pr.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(pr.iter().all(|&x| x >= 0.0));
        assert_eq!(pol.mode().index(z), 0);
    }

    #[test]
    fn zero_reward_leaves_preferences() {
        let aut = fixtures::two_choice();
        let rows = vec![vec![vec![(0, 0.5), (1, 0.5)], vec![(1, 1.0)]]; 2];
        let env = RandomMdp::from_parts(aut.ap().clone(), vec![Letter::EMPTY; 2], rows);
        for lcer in [false, true] {
            let cfg = LearnerConfig {
                episodes: 3,
                horizon: 6,
                lcer,
                ..LearnerConfig::default()
            };
            let run = train_pg(&env, &aut, &cfg).unwrap();
            assert!(run.policy.prefs.values().iter().all(|&x| x == 0.0));
            assert_eq!(run.curve, vec![0.0; 3]);
        }
    }

    #[test]
    fn rewarded_action_gains_preference() {
        // action 0 always lands on the labelled state, action 1 in a sink
        let aut = fixtures::two_choice();
        let acc = aut.ap().letter(&["acc"]).unwrap();
        let step = vec![vec![(1, 1.0)], vec![(2, 1.0)]];
        let rows = vec![step.clone(), step, vec![vec![(2, 1.0)]; 2]];
        let env = RandomMdp::from_parts(aut.ap().clone(), vec![Letter::EMPTY, acc, Letter::EMPTY], rows);
        let p = Product::new(&env, &aut);
        let mut last = 0.0;
        for episodes in 1..=10 {
            let cfg = LearnerConfig {
                gamma: 0.9,
                mode: DiscountMode::Eventual,
                lr: 0.05,
                episodes,
                horizon: 10,
                lcer: false,
                ..LearnerConfig::default()
            };
            let run = train_pg(&env, &aut, &cfg).unwrap();
            let pref: f64 = (0..2).map(|s| run.policy.prefs.row(p.initial_state(s))[0]).sum();
            assert!(pref >= last, "{episodes}: {pref} < {last}");
            last = pref;
        }
        assert!(last > 0.0);
    }
}
