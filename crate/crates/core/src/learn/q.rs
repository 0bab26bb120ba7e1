use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{epsilon_greedy, evaluate, CurveTracker, LearnError, LearnerConfig, Table};
use crate::env::LabelledMdp;
use crate::lcer::{lcer_q, on_policy_tuples, QReplay, QTuple};
use crate::ldba::Ldba;
use crate::product::{rollout, DiscountSpec, Product, ProductState};

pub type QTable = Table;

/// One tabular Q-learning step on `t`.
pub fn q_update(table: &mut QTable, product: &Product, t: &QTuple, spec: &DiscountSpec, lr: f64) {
    let next = t.next_state();
    let g = spec.multiplier(product.is_accepting(next));
    let target = t.r as f64 + g * table.max(next);
    let i = product.action_index(t.state(), t.a);
    let q = &mut table.row_mut(t.state())[i];
    *q += lr * (target - *q);
}

#[derive(Debug, Clone)]
pub struct QRun {
    pub table: QTable,
    /// Curve metric per episode.
    pub curve: Vec<f64>,
    /// Largest Q-value seen during training.
    pub max_q: f64,
    pub replay: QReplay,
}

impl QRun {
    /// Whether the soft bound `Q ≤ 1/(1−γ) + 1` held throughout.
    pub fn within_bound(&self, gamma: f64) -> bool {
        self.max_q <= 1.0 / (1.0 - gamma) + 1.0
    }
}

/// ε-greedy Q-learning with uniform replay. With `cfg.lcer` every
/// environment transition is relabelled for all automaton states and jumps;
/// otherwise only the behaviour transitions are stored.
pub fn train_q(env: &dyn LabelledMdp, aut: &Ldba, cfg: &LearnerConfig) -> Result<QRun, LearnError> {
    cfg.validate()?;
    let spec = cfg.discount()?;
    let product = Product::new(env, aut);
    let mut table = QTable::zeros(&product);
    let mut replay = QReplay::new(cfg.replay_capacity);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut eval_rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    eval_rng.set_stream(1);
    let mut tracker = CurveTracker::default();
    let mut max_q = 0.0f64;

    for episode in 0..cfg.episodes {
        let eps = cfg.epsilon.at(episode);
        let traj = {
            let table = &table;
            let mut behaviour =
                |p: &Product, z: ProductState, r: &mut dyn rand::RngCore| epsilon_greedy(p, table, z, eps, r);
            rollout(&product, &mut behaviour, cfg.horizon, &mut rng)?
        };
        if cfg.lcer {
            replay.extend(lcer_q(&product, &traj));
        } else {
            replay.extend(on_policy_tuples(aut, &traj));
        }
        for _ in 0..cfg.k_steps {
            for t in replay.sample(cfg.batch_size, &mut rng) {
                q_update(&mut table, &product, &t, &spec, cfg.lr);
                max_q = max_q.max(table.row(t.state())[product.action_index(t.state(), t.a)]);
            }
        }
        let ok = evaluate(&product, |z| table.argmax(z), cfg.horizon, &mut eval_rng)?;
        tracker.record(ok);
    }
    Ok(QRun {
        table,
        curve: tracker.into_curve(),
        max_q,
        replay,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::{make_flatworld_grid, make_two_choice};
    use crate::fixtures;
    use crate::learn::{greedy_policy, EpsilonSchedule};
    use crate::product::{DiscountMode, ProductAction};

    fn two_choice_cfg(mode: DiscountMode, seed: u64) -> LearnerConfig {
        LearnerConfig {
            gamma: 0.99,
            mode,
            lr: 0.02,
            epsilon: EpsilonSchedule::constant(0.5),
            batch_size: 100,
            k_steps: 50,
            horizon: 5,
            episodes: 500,
            lcer: true,
            seed,
            ..LearnerConfig::default()
        }
    }

    fn flat_product_tuple() -> (crate::env::GridWorld, Ldba) {
        (make_flatworld_grid(10).unwrap(), fixtures::fgy())
    }

    #[test]
    fn update_examples() {
        let (env, aut) = flat_product_tuple();
        let p = Product::new(&env, &aut);
        let ev = DiscountSpec::eventual(0.9).unwrap();
        let st = DiscountSpec::standard(0.9).unwrap();

        // jump into the accepting state, all zero
        let mut t = QTable::zeros(&p);
        let jump = QTuple { s: 0, b: 0, a: ProductAction::Jump(0), r: 1, s_next: 0, b_next: 1 };
        q_update(&mut t, &p, &jump, &ev, 0.5);
        assert_eq!(t.row(jump.state())[5], 0.5);

        // unlabelled move, next max 2
        let mv = QTuple { s: 0, b: 0, a: ProductAction::Mdp(1), r: 0, s_next: 1, b_next: 0 };
        let mut t = QTable::zeros(&p);
        t.row_mut(mv.next_state())[3] = 2.0;
        let mut u = t.clone();
        q_update(&mut t, &p, &mv, &ev, 1.0);
        assert_eq!(t.row(mv.state())[1], 2.0);
        q_update(&mut u, &p, &mv, &st, 1.0);
        assert!((u.row(mv.state())[1] - 1.8).abs() < 1e-12);
    }

    #[test]
    fn zero_episodes() {
        let (env, aut) = flat_product_tuple();
        let cfg = LearnerConfig {
            episodes: 0,
            ..LearnerConfig::default()
        };
        let run = train_q(&env, &aut, &cfg).unwrap();
        assert!(run.curve.is_empty());
        assert!(run.table.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn myopia_learned() {
        let env = make_two_choice(0.9).unwrap();
        let aut = fixtures::two_choice();
        let p = Product::new(&env, &aut);
        let start = p.initial_state(0);
        for (mode, want, p_sat) in [(DiscountMode::Eventual, 0, 1.0), (DiscountMode::Standard, 1, 0.9)] {
            let cfg = two_choice_cfg(mode, 0);
            let run = train_q(&env, &aut, &cfg).unwrap();
            assert!(run.within_bound(cfg.gamma), "{}", run.max_q);
            let g = greedy_policy(&run.table);
            assert_eq!(g.index(start), want, "{mode:?}: {:?}", run.table.row(start));
            assert!((g.p_sat(&p).unwrap() - p_sat).abs() < 1e-9);
        }
    }

    #[test]
    fn fixed_point_independent_of_lcer() {
        let (env, aut) = flat_product_tuple();
        let p = Product::new(&env, &aut);
        let spec = DiscountSpec::eventual(0.95).unwrap();
        let mut product_tuples = Vec::new();
        let mut relabelled = Vec::new();
        for z in QTable::zeros(&p).states() {
            for a in p.actions(z) {
                let n = p.transition_distribution(z, a).unwrap()[0].0;
                product_tuples.push(QTuple { s: z.s, b: z.b, a, r: p.is_accepting(n) as u8, s_next: n.s, b_next: n.b });
                if let (ProductAction::Mdp(_), 0) = (a, z.b) {
                    let traj = crate::product::ProductTrajectory::new(&aut, vec![z, n], vec![a]);
                    relabelled.extend(lcer_q(&p, &traj));
                }
            }
        }
        let solve = |tuples: &[QTuple]| {
            let mut t = QTable::zeros(&p);
            for _ in 0..1000 {
                for tu in tuples {
                    q_update(&mut t, &p, tu, &spec, 1.0);
                }
            }
            t
        };
        let (a, b) = (solve(&product_tuples), solve(&relabelled));
        for (x, y) in a.values().iter().zip(b.values()) {
            assert!((x - y).abs() < 1e-9, "{x} vs {y}");
        }
        assert!((a.max(p.initial_distribution()[0].0) - 20.0).abs() < 1e-6);
    }
}
