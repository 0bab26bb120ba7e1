//! The product of a labelled MDP with an LDBA, trajectories, and returns.
//!
//! Time indexing: a trajectory holds states `z_0, …, z_T` and actions
//! `a_0, …, a_{T-1}`. The initial automaton state is `b_0 = δ(b_{-1}, L(s_0))`.
//! The reward of step `i` is attached to the arrival state,
//! `r_i = 1{b_{i+1} accepting}`, and so is the discount multiplier: under
//! eventual discounting `g_i = γ` when `b_{i+1}` is accepting and `1`
//! otherwise, with `Γ_0 = 1` and `Γ_{i+1} = Γ_i · g_i`.

use std::fmt::Write as _;

use rand::RngCore;

use crate::env::{sample_categorical, LabelledMdp};
use crate::ldba::{Ldba, LdbaError};
use crate::ltl::Letter;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ProductError {
    #[error(transparent)]
    Ldba(#[from] LdbaError),
    #[error("action {action} is unavailable in state ({s}, {b})")]
    InvalidAction { s: usize, b: usize, action: String },
    #[error("discount factor {0} must lie strictly between 0 and 1")]
    Gamma(f64),
    #[error("horizon must be at least 1")]
    Horizon,
    #[error("trajectory line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("inconsistent trajectory at step {step}: {msg}")]
    Inconsistent { step: usize, msg: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProductState {
    pub s: usize,
    pub b: usize,
}

impl ProductState {
    pub fn new(s: usize, b: usize) -> Self {
        ProductState { s, b }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProductAction {
    Mdp(usize),
    Jump(usize),
}

impl ProductAction {
    pub fn is_jump(self) -> bool {
        matches!(self, ProductAction::Jump(_))
    }
}

impl std::fmt::Display for ProductAction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ProductAction::Mdp(a) => write!(f, "a{a}"),
            ProductAction::Jump(e) => write!(f, "e{e}"),
        }
    }
}

impl std::str::FromStr for ProductAction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (kind, idx) = s.split_at(s.len().min(1));
        let idx: usize = idx.parse().map_err(|_| format!("invalid action `{s}`"))?;
        match kind {
            "a" => Ok(ProductAction::Mdp(idx)),
            "e" => Ok(ProductAction::Jump(idx)),
            _ => Err(format!("invalid action `{s}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DiscountMode {
    /// Discount only when arriving in an accepting automaton state.
    Eventual,
    /// Discount every step.
    Standard,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscountSpec {
    gamma: f64,
    mode: DiscountMode,
}

impl DiscountSpec {
    pub fn new(gamma: f64, mode: DiscountMode) -> Result<Self, ProductError> {
        if gamma > 0.0 && gamma < 1.0 {
            Ok(DiscountSpec { gamma, mode })
        } else {
            Err(ProductError::Gamma(gamma))
        }
    }

    pub fn eventual(gamma: f64) -> Result<Self, ProductError> {
        Self::new(gamma, DiscountMode::Eventual)
    }

    pub fn standard(gamma: f64) -> Result<Self, ProductError> {
        Self::new(gamma, DiscountMode::Standard)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn mode(&self) -> DiscountMode {
        self.mode
    }

    /// Discount applied across a transition whose arrival state is
    /// (non-)accepting.
    pub fn multiplier(&self, arrival_accepting: bool) -> f64 {
        match self.mode {
            DiscountMode::Standard => self.gamma,
            DiscountMode::Eventual if arrival_accepting => self.gamma,
            DiscountMode::Eventual => 1.0,
        }
    }
}

/// Which normalization [`reward_to_go`] uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RewardToGo {
    /// `Σ_{i≥k} (Γ_i / Γ_k) r_i`, the usual policy-gradient weight.
    #[default]
    Relative,
    /// `Σ_{i≥k} Γ_i r_i`.
    Absolute,
}

/// An environment synchronized with an automaton.
///
/// The environment's labels are translated to letters over the automaton's
/// alphabet by atom name; automaton atoms the environment does not declare
/// are always false.
pub struct Product<'a> {
    env: &'a dyn LabelledMdp,
    aut: &'a Ldba,
    labels: Vec<Letter>,
}

impl<'a> Product<'a> {
    pub fn new(env: &'a dyn LabelledMdp, aut: &'a Ldba) -> Self {
        let map: Vec<Option<usize>> = env
            .ap()
            .atoms()
            .iter()
            .map(|a| aut.ap().index_of(a.as_str()))
            .collect();
        let labels = (0..env.num_states())
            .map(|s| {
                let l = env.label(s);
                map.iter()
                    .enumerate()
                    .filter(|(i, _)| l.contains(*i))
                    .filter_map(|(_, j)| *j)
                    .fold(Letter::EMPTY, Letter::with)
            })
            .collect();
        Product { env, aut, labels }
    }

    pub fn env(&self) -> &'a dyn LabelledMdp {
        self.env
    }

    pub fn aut(&self) -> &'a Ldba {
        self.aut
    }

    /// Label of `s` as a letter over the automaton alphabet.
    pub fn label(&self, s: usize) -> Letter {
        self.labels[s]
    }

    pub fn is_accepting(&self, z: ProductState) -> bool {
        self.aut.is_accepting(z.b)
    }

    /// `A((s, b)) = A^M(s) ∪ A^B(b)`, MDP actions first.
    pub fn actions(&self, z: ProductState) -> Vec<ProductAction> {
        let n = self.env.num_actions(z.s);
        let j = self.aut.jumps(z.b).len();
        (0..n)
            .map(ProductAction::Mdp)
            .chain((0..j).map(ProductAction::Jump))
            .collect()
    }

    pub fn num_actions(&self, z: ProductState) -> usize {
        self.env.num_actions(z.s) + self.aut.jumps(z.b).len()
    }

    /// Flat index of an action in [`Product::actions`].
    pub fn action_index(&self, z: ProductState, a: ProductAction) -> usize {
        match a {
            ProductAction::Mdp(i) => i,
            ProductAction::Jump(e) => self.env.num_actions(z.s) + e,
        }
    }

    pub fn action_at(&self, z: ProductState, index: usize) -> ProductAction {
        let n = self.env.num_actions(z.s);
        if index < n {
            ProductAction::Mdp(index)
        } else {
            ProductAction::Jump(index - n)
        }
    }

    pub fn is_available(&self, z: ProductState, a: ProductAction) -> bool {
        match a {
            ProductAction::Mdp(i) => i < self.env.num_actions(z.s),
            ProductAction::Jump(e) => e < self.aut.jumps(z.b).len(),
        }
    }

    fn check(&self, z: ProductState, a: ProductAction) -> Result<(), ProductError> {
        if let ProductAction::Jump(e) = a {
            self.aut.step_jump(z.b, e)?;
        }
        if self.is_available(z, a) {
            Ok(())
        } else {
            Err(ProductError::InvalidAction {
                s: z.s,
                b: z.b,
                action: a.to_string(),
            })
        }
    }

    /// `z_0` distribution, reading `L(s_0)` from the automaton's initial state.
    pub fn initial_distribution(&self) -> Vec<(ProductState, f64)> {
        self.env
            .initial_distribution()
            .into_iter()
            .map(|(s, p)| (self.initial_state(s), p))
            .collect()
    }

    pub fn initial_state(&self, s0: usize) -> ProductState {
        ProductState::new(s0, self.aut.step_sigma(self.aut.initial(), self.label(s0)))
    }

    /// Successor of `z` under `a` once the environment lands in `s_next`.
    pub fn successor(&self, z: ProductState, a: ProductAction, s_next: usize) -> Result<ProductState, ProductError> {
        self.check(z, a)?;
        Ok(match a {
            ProductAction::Mdp(_) => ProductState::new(s_next, self.aut.step_sigma(z.b, self.label(s_next))),
            ProductAction::Jump(e) => ProductState::new(z.s, self.aut.step_jump(z.b, e)?),
        })
    }

    pub fn transition_distribution(
        &self,
        z: ProductState,
        a: ProductAction,
    ) -> Result<Vec<(ProductState, f64)>, ProductError> {
        self.check(z, a)?;
        match a {
            ProductAction::Mdp(i) => self
                .env
                .transition_distribution(z.s, i)
                .into_iter()
                .map(|(t, p)| Ok((self.successor(z, a, t)?, p)))
                .collect(),
            ProductAction::Jump(_) => Ok(vec![(self.successor(z, a, z.s)?, 1.0)]),
        }
    }

    /// Samples one product transition.
    pub fn step(&self, z: ProductState, a: ProductAction, rng: &mut dyn RngCore) -> Result<ProductState, ProductError> {
        self.check(z, a)?;
        match a {
            ProductAction::Mdp(i) => {
                let t = self.env.sample_transition(z.s, i, rng);
                self.successor(z, a, t)
            }
            ProductAction::Jump(_) => self.successor(z, a, z.s),
        }
    }

    pub fn sample_initial(&self, rng: &mut dyn RngCore) -> ProductState {
        self.initial_state(self.env.sample_initial(rng))
    }
}

/// Chooses actions in the product.
pub trait Policy {
    fn select(&mut self, product: &Product, z: ProductState, rng: &mut dyn RngCore) -> ProductAction;
}

impl<F> Policy for F
where
    F: FnMut(&Product, ProductState, &mut dyn RngCore) -> ProductAction,
{
    fn select(&mut self, product: &Product, z: ProductState, rng: &mut dyn RngCore) -> ProductAction {
        self(product, z, rng)
    }
}

/// Runs `policy` for `horizon` product steps (environment steps and jumps
/// both count).
pub fn rollout(
    product: &Product,
    policy: &mut dyn Policy,
    horizon: usize,
    rng: &mut dyn RngCore,
) -> Result<ProductTrajectory, ProductError> {
    if horizon == 0 {
        return Err(ProductError::Horizon);
    }
    let mut z = product.sample_initial(rng);
    let mut states = vec![z];
    let mut actions = Vec::with_capacity(horizon);
    for _ in 0..horizon {
        let a = policy.select(product, z, rng);
        z = product.step(z, a, rng)?;
        actions.push(a);
        states.push(z);
    }
    Ok(ProductTrajectory::new(product.aut(), states, actions))
}

/// Draws one action uniformly from the available set.
pub fn uniform_action(product: &Product, z: ProductState, rng: &mut dyn RngCore) -> ProductAction {
    let n = product.num_actions(z);
    let i = sample_categorical(&(0..n).map(|i| (i, 1.0 / n as f64)).collect::<Vec<_>>(), rng);
    product.action_at(z, i)
}

/// `z_0, a_0, z_1, …, z_T` along with the accepting flag of each `b_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProductTrajectory {
    states: Vec<ProductState>,
    actions: Vec<ProductAction>,
    accepting: Vec<bool>,
}

impl ProductTrajectory {
    /// Assembles a trajectory; `states.len()` must be `actions.len() + 1`.
    pub fn new(aut: &Ldba, states: Vec<ProductState>, actions: Vec<ProductAction>) -> Self {
        assert_eq!(states.len(), actions.len() + 1, "states must be one longer than actions");
        let accepting = states.iter().map(|z| aut.is_accepting(z.b)).collect();
        ProductTrajectory {
            states,
            actions,
            accepting,
        }
    }

    pub fn states(&self) -> &[ProductState] {
        &self.states
    }

    pub fn actions(&self) -> &[ProductAction] {
        &self.actions
    }

    /// Number of steps `T`.
    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    pub fn env_steps(&self) -> usize {
        self.actions.iter().filter(|a| !a.is_jump()).count()
    }

    pub fn jump_steps(&self) -> usize {
        self.len() - self.env_steps()
    }

    /// `1{b_i accepting}` for `i = 0..=T`.
    pub fn state_indicators(&self) -> Vec<u8> {
        self.accepting.iter().map(|&a| a as u8).collect()
    }

    /// Per-step rewards `r_i = 1{b_{i+1} accepting}`.
    pub fn rewards(&self) -> Vec<u8> {
        self.accepting[1..].iter().map(|&a| a as u8).collect()
    }

    /// Per-step multipliers `g_i`.
    pub fn multipliers(&self, spec: &DiscountSpec) -> Vec<f64> {
        self.accepting[1..].iter().map(|&a| spec.multiplier(a)).collect()
    }

    /// Cumulative products `Γ_0 = 1, …, Γ_T`.
    pub fn gammas(&self, spec: &DiscountSpec) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.len() + 1);
        let mut g = 1.0;
        out.push(g);
        for m in self.multipliers(spec) {
            g *= m;
            out.push(g);
        }
        out
    }

    /// MDP states with jump steps projected out: `s_0, …` one per environment step.
    pub fn mdp_states(&self) -> Vec<usize> {
        let mut out = vec![self.states[0].s];
        for (i, a) in self.actions.iter().enumerate() {
            if !a.is_jump() {
                out.push(self.states[i + 1].s);
            }
        }
        out
    }

    /// Environment transitions `(s_t, a_t, s_{t+1})`, skipping jump steps.
    pub fn env_transitions(&self) -> Vec<(usize, usize, usize)> {
        self.actions
            .iter()
            .enumerate()
            .filter_map(|(i, a)| match a {
                ProductAction::Mdp(m) => Some((self.states[i].s, *m, self.states[i + 1].s)),
                ProductAction::Jump(_) => None,
            })
            .collect()
    }

    /// Drops jump steps after the last environment step.
    pub fn trim_trailing_jumps(&self) -> ProductTrajectory {
        let keep = self.actions.iter().rposition(|a| !a.is_jump()).map_or(0, |i| i + 1);
        ProductTrajectory {
            states: self.states[..=keep].to_vec(),
            actions: self.actions[..keep].to_vec(),
            accepting: self.accepting[..=keep].to_vec(),
        }
    }

    /// Checks every step against the product and returns the first mismatch.
    pub fn check_consistent(&self, product: &Product) -> Result<(), ProductError> {
        let bad = |step: usize, msg: String| Err(ProductError::Inconsistent { step, msg });
        for (i, (&a, w)) in self.actions.iter().zip(self.states.windows(2)).enumerate() {
            let (z, next) = (w[0], w[1]);
            let support = product.transition_distribution(z, a)?;
            let expected = product.successor(z, a, next.s)?;
            if !support.iter().any(|(t, _)| t.s == next.s) {
                return bad(i, format!("state {} unreachable from {} via {a}", next.s, z.s));
            }
            if expected != next {
                return bad(i, format!("expected b = {}, found {}", expected.b, next.b));
            }
        }
        for (i, z) in self.states.iter().enumerate() {
            if self.accepting[i] != product.is_accepting(*z) {
                return bad(i, "accepting flag mismatch".into());
            }
        }
        Ok(())
    }

    /// One line per step: `s b action reward multiplier`, then a final
    /// `s b -` line for `z_T`.
    pub fn to_text(&self, spec: &DiscountSpec) -> String {
        let mut out = String::new();
        let rewards = self.rewards();
        let mults = self.multipliers(spec);
        for (i, a) in self.actions.iter().enumerate() {
            let z = self.states[i];
            writeln!(out, "{} {} {} {} {}", z.s, z.b, a, rewards[i], mults[i]).unwrap();
        }
        let z = self.states[self.len()];
        writeln!(out, "{} {} -", z.s, z.b).unwrap();
        out
    }

    /// Parses [`ProductTrajectory::to_text`], re-deriving rewards from `aut`.
    pub fn from_text(aut: &Ldba, text: &str) -> Result<Self, ProductError> {
        let mut states = Vec::new();
        let mut actions = Vec::new();
        let mut done = false;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let err = |msg: &str| ProductError::Parse {
                line,
                msg: msg.to_string(),
            };
            let fields: Vec<&str> = raw.split_whitespace().collect();
            if fields.is_empty() {
                continue;
            }
            if done {
                return Err(err("content after final state"));
            }
            let s = fields[0].parse().map_err(|_| err("invalid state id"))?;
            let b: usize = fields.get(1).ok_or_else(|| err("missing b"))?.parse().map_err(|_| err("invalid b"))?;
            if b >= aut.num_states() {
                return Err(err("automaton state out of range"));
            }
            states.push(ProductState::new(s, b));
            match fields.get(2) {
                Some(&"-") => done = true,
                Some(a) => actions.push(a.parse().map_err(|e: String| err(&e))?),
                None => return Err(err("missing action")),
            }
        }
        if !done {
            return Err(ProductError::Parse {
                line: text.lines().count(),
                msg: "missing final state line".into(),
            });
        }
        Ok(ProductTrajectory::new(aut, states, actions))
    }
}

/// `Σ_i Γ_i r_i`.
pub fn eventual_return(traj: &ProductTrajectory, spec: &DiscountSpec) -> f64 {
    reward_to_go(traj, 0, spec, RewardToGo::Relative)
}

/// `Σ_{i≥k} w_i r_i` with `w_i = Γ_i / Γ_k` or `Γ_i` per `kind`.
pub fn reward_to_go(traj: &ProductTrajectory, k: usize, spec: &DiscountSpec, kind: RewardToGo) -> f64 {
    let gammas = traj.gammas(spec);
    let rewards = traj.rewards();
    let scale = match kind {
        RewardToGo::Relative => gammas[k],
        RewardToGo::Absolute => 1.0,
    };
    (k..traj.len()).filter(|&i| rewards[i] == 1).map(|i| gammas[i] / scale).sum()
}

/// Reward-to-go at every step `k = 0..T`, computed backward in one pass.
pub fn rewards_to_go(traj: &ProductTrajectory, spec: &DiscountSpec, kind: RewardToGo) -> Vec<f64> {
    let rewards = traj.rewards();
    let mults = traj.multipliers(spec);
    let mut out = vec![0.0; traj.len()];
    // relative: G_k = r_k + g_k G_{k+1}
    let mut g = 0.0;
    for k in (0..traj.len()).rev() {
        g = rewards[k] as f64 + mults[k] * g;
        out[k] = g;
    }
    if kind == RewardToGo::Absolute {
        for (k, gamma) in traj.gammas(spec).into_iter().take(traj.len()).enumerate() {
            out[k] *= gamma;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::{make_flatworld_grid, make_minecraft, make_two_choice, GridAction, TwoChoiceState};
    use crate::fixtures;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(3)
    }

    #[test]
    fn flatworld_steps_with_fgy() {
        let env = make_flatworld_grid(10).unwrap();
        let aut = fixtures::fgy();
        let p = Product::new(&env, &aut);
        let y = aut.ap().index_of("y").unwrap();
        // find a non-y cell whose right neighbour is a y cell
        let s = (0..env.num_states())
            .find(|&s| {
                !p.label(s).contains(y) && p.label(env.move_from(s, GridAction::Right)).contains(y)
            })
            .unwrap();
        let right = ProductAction::Mdp(1);
        let z = ProductState::new(s, 0);
        let next = p.step(z, right, &mut rng()).unwrap();
        assert!(p.label(next.s).contains(y));
        assert_eq!(next.b, 0);

        let jumped = p.step(z, ProductAction::Jump(0), &mut rng()).unwrap();
        assert_eq!(jumped, ProductState::new(s, 1));

        let z1 = ProductState::new(s, 1);
        let left = p.step(z1, ProductAction::Mdp(0), &mut rng()).unwrap();
        assert!(!p.label(left.s).contains(y));
        assert_eq!(left.b, 2);

        assert!(matches!(
            p.step(z1, ProductAction::Jump(0), &mut rng()),
            Err(ProductError::Ldba(LdbaError::InvalidJump { .. }))
        ));
    }

    #[test]
    fn minecraft_nothing_policy() {
        let env = make_minecraft();
        let aut = fixtures::cycle_yb();
        let p = Product::new(&env, &aut);
        let mut nothing = |_: &Product, _: ProductState, _: &mut dyn RngCore| ProductAction::Mdp(4);
        let t = rollout(&p, &mut nothing, 5, &mut rng()).unwrap();
        assert_eq!(t.len(), 5);
        assert!(t.states().windows(2).all(|w| w[0] == w[1]));
        assert_eq!(t.rewards(), vec![0; 5]);
        t.check_consistent(&p).unwrap();
    }

    #[test]
    fn two_choice_policy_a_alternates() {
        let env = make_two_choice(0.9).unwrap();
        let aut = fixtures::two_choice();
        let p = Product::new(&env, &aut);
        let mut a = |_: &Product, _: ProductState, _: &mut dyn RngCore| ProductAction::Mdp(0);
        let t = rollout(&p, &mut a, 6, &mut rng()).unwrap();
        assert_eq!(t.states()[1].s, TwoChoiceState::Acc2a.index());
        assert_eq!(&t.state_indicators()[..6], &[0, 1, 0, 1, 0, 1]);
        assert_eq!(t.rewards(), vec![1, 0, 1, 0, 1, 0]);
        let spec = DiscountSpec::eventual(0.99).unwrap();
        let m = 3;
        let closed = (1.0 - 0.99f64.powi(m)) / (1.0 - 0.99);
        assert!((eventual_return(&t, &spec) - closed).abs() < 1e-12);
    }

    #[test]
    fn jump_bookkeeping() {
        let env = make_flatworld_grid(10).unwrap();
        let aut = fixtures::fgy();
        let p = Product::new(&env, &aut);
        let mut r = rng();
        for _ in 0..20 {
            let t = rollout(&p, &mut uniform_action, 12, &mut r).unwrap();
            assert_eq!(t.jump_steps(), t.len() - t.env_steps());
            assert_eq!(t.mdp_states().len(), t.env_steps() + 1);
            t.check_consistent(&p).unwrap();
        }
    }

    fn synthetic(rewards: &[u8]) -> ProductTrajectory {
        // two-state automaton from the two-choice fixture: b = 1 is accepting
        let aut = fixtures::two_choice();
        let mut states = vec![ProductState::new(0, 0)];
        states.extend(rewards.iter().map(|&r| ProductState::new(0, r as usize)));
        let actions = vec![ProductAction::Mdp(0); rewards.len()];
        ProductTrajectory::new(&aut, states, actions)
    }

    #[test]
    fn returns_closed_forms() {
        let ev = DiscountSpec::eventual(0.99).unwrap();
        let st = DiscountSpec::standard(0.99).unwrap();
        let t = synthetic(&[0, 1, 0, 1, 0, 1, 0, 1, 0, 1]);
        let direct: f64 = (0..5).map(|k| 0.99f64.powi(k)).sum();
        assert!((eventual_return(&t, &ev) - direct).abs() < 1e-12);

        let zero = synthetic(&[0; 8]);
        assert_eq!(eventual_return(&zero, &ev), 0.0);
        assert_eq!(eventual_return(&zero, &st), 0.0);

        let mut once = vec![0u8; 10];
        once[7] = 1;
        let t = synthetic(&once);
        assert_eq!(eventual_return(&t, &ev), 1.0);
        assert!((eventual_return(&t, &st) - 0.99f64.powi(7)).abs() < 1e-15);
    }

    #[test]
    fn eventual_return_ignores_gaps() {
        let ev = DiscountSpec::eventual(0.9).unwrap();
        let st = DiscountSpec::standard(0.9).unwrap();
        let a = synthetic(&[1, 1, 0, 1]);
        let b = synthetic(&[0, 0, 1, 0, 1, 0, 0, 0, 1, 0]);
        assert!((eventual_return(&a, &ev) - eventual_return(&b, &ev)).abs() < 1e-15);
        assert!((eventual_return(&a, &st) - eventual_return(&b, &st)).abs() > 1e-3);
    }

    #[test]
    fn reward_to_go_forms_agree() {
        let ev = DiscountSpec::eventual(0.8).unwrap();
        let t = synthetic(&[0, 1, 1, 0, 1, 0, 1]);
        let rel = rewards_to_go(&t, &ev, RewardToGo::Relative);
        let abs = rewards_to_go(&t, &ev, RewardToGo::Absolute);
        for k in 0..t.len() {
            assert!((rel[k] - reward_to_go(&t, k, &ev, RewardToGo::Relative)).abs() < 1e-12);
            assert!((abs[k] - reward_to_go(&t, k, &ev, RewardToGo::Absolute)).abs() < 1e-12);
        }
        assert_eq!(rel[0], eventual_return(&t, &ev));
    }

    #[test]
    fn gammas_recompute_from_multipliers() {
        let ev = DiscountSpec::eventual(0.5).unwrap();
        let t = synthetic(&[1, 0, 1, 1]);
        assert_eq!(t.gammas(&ev), vec![1.0, 0.5, 0.5, 0.25, 0.125]);
        assert_eq!(t.multipliers(&ev), vec![0.5, 1.0, 0.5, 0.5]);
    }

    #[test]
    fn text_round_trip() {
        let env = make_flatworld_grid(10).unwrap();
        let aut = fixtures::fgy();
        let p = Product::new(&env, &aut);
        let spec = DiscountSpec::eventual(0.95).unwrap();
        let t = rollout(&p, &mut uniform_action, 9, &mut rng()).unwrap();
        let text = t.to_text(&spec);
        assert_eq!(text.lines().count(), 10);
        assert_eq!(ProductTrajectory::from_text(&aut, &text).unwrap(), t);
        assert!(ProductTrajectory::from_text(&aut, "0 0 a1 0 1\n").is_err());
        assert!(ProductTrajectory::from_text(&aut, "0 9 -\n").is_err());
    }

    #[test]
    fn trailing_jumps_trimmed() {
        let aut = fixtures::fgy();
        let states = vec![ProductState::new(0, 0), ProductState::new(1, 0), ProductState::new(1, 1)];
        let t = ProductTrajectory::new(&aut, states, vec![ProductAction::Mdp(1), ProductAction::Jump(0)]);
        let trimmed = t.trim_trailing_jumps();
        assert_eq!(trimmed.len(), 1);
        assert_eq!(trimmed.states().last(), Some(&ProductState::new(1, 0)));
    }

    #[test]
    fn discount_validation() {
        assert!(DiscountSpec::eventual(1.0).is_err());
        assert!(DiscountSpec::standard(0.0).is_err());
        assert!(DiscountSpec::eventual(f64::NAN).is_err());
    }
}
