use std::collections::BTreeSet;

use crate::product::{Product, ProductAction, ProductState, ProductTrajectory};

/// How [`lcer_pg_offline_with`] treats the states before an inserted jump.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PrefixMode {
    /// Keep the prefix as it was, so every step stays automaton-consistent.
    #[default]
    Preserve,
    /// Overwrite every prefix automaton state with the state the jump leaves
    /// from, `b̃'_k = b̃_i` for `k ≤ i`.
    Collapse,
}

/// How [`OnlineLcer`] handles a jump taken by the behaviour policy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OnlineMode {
    /// Add the jump extension and keep the unextended trajectory, which is
    /// still a prefix of annotations that never jump here.
    #[default]
    Retain,
    /// Swap the trajectory for its jump extension.
    Literal,
}

type Partial = (Vec<ProductState>, Vec<ProductAction>);

fn finish(product: &Product, parts: impl IntoIterator<Item = Partial>) -> BTreeSet<ProductTrajectory> {
    parts
        .into_iter()
        .map(|(states, actions)| ProductTrajectory::new(product.aut(), states, actions))
        .collect()
}

// Replays `traj`'s steps from index `from` starting in `b`; jumps that are
// no longer available are dropped.
fn replay(product: &Product, traj: &ProductTrajectory, from: usize, part: &mut Partial, mut b: usize) {
    let aut = product.aut();
    for k in from..traj.len() {
        let s_next = traj.states()[k + 1].s;
        match traj.actions()[k] {
            ProductAction::Mdp(m) => {
                b = aut.step_sigma(b, product.label(s_next));
                part.1.push(ProductAction::Mdp(m));
                part.0.push(ProductState::new(s_next, b));
            }
            ProductAction::Jump(e) => {
                if let Ok(t) = aut.step_jump(b, e) {
                    b = t;
                    part.1.push(ProductAction::Jump(e));
                    part.0.push(ProductState::new(s_next, b));
                }
            }
        }
    }
}

// Jump-free annotations of the rollout's MDP projection, one per b̃_0.
fn seeds(product: &Product, observed: &ProductTrajectory) -> BTreeSet<ProductTrajectory> {
    let s0 = observed.states()[0].s;
    let jump_free = {
        let mut states = vec![observed.states()[0]];
        let mut actions = Vec::new();
        for (i, &a) in observed.actions().iter().enumerate() {
            if !a.is_jump() {
                actions.push(a);
                states.push(observed.states()[i + 1]);
            }
        }
        ProductTrajectory::new(product.aut(), states, actions)
    };
    let parts = (0..product.aut().num_states()).map(|b0| {
        let mut part = (vec![ProductState::new(s0, b0)], Vec::new());
        replay(product, &jump_free, 0, &mut part, b0);
        part
    });
    finish(product, parts)
}

// One application of the jump-insertion operator.
fn insert_jumps(product: &Product, set: &BTreeSet<ProductTrajectory>, mode: PrefixMode) -> BTreeSet<ProductTrajectory> {
    let aut = product.aut();
    let mut out = set.clone();
    for traj in set {
        for i in 0..traj.len() {
            if traj.actions()[i].is_jump() {
                continue;
            }
            let zi = traj.states()[i];
            for (e, &target) in aut.jumps(zi.b).iter().enumerate() {
                let mut states = traj.states()[..=i].to_vec();
                if mode == PrefixMode::Collapse {
                    for z in &mut states {
                        z.b = zi.b;
                    }
                }
                let mut part = (states, traj.actions()[..i].to_vec());
                part.1.push(ProductAction::Jump(e));
                part.0.push(ProductState::new(zi.s, target));
                replay(product, traj, i, &mut part, target);
                out.insert(ProductTrajectory::new(aut, part.0, part.1));
            }
        }
    }
    out
}

/// All counterfactual annotations of `traj`, built after the rollout.
///
/// Starts from one jump-free annotation per automaton state and inserts
/// jumps before environment steps until nothing changes (or `T`
/// applications). Trailing jumps of the behaviour rollout are dropped first.
pub fn lcer_pg_offline(product: &Product, traj: &ProductTrajectory) -> BTreeSet<ProductTrajectory> {
    lcer_pg_offline_with(product, traj, PrefixMode::Preserve)
}

pub fn lcer_pg_offline_with(product: &Product, traj: &ProductTrajectory, mode: PrefixMode) -> BTreeSet<ProductTrajectory> {
    let traj = traj.trim_trailing_jumps();
    let mut set = seeds(product, &traj);
    for _ in 0..traj.len().max(1) {
        let next = insert_jumps(product, &set, mode);
        if next == set {
            break;
        }
        set = next;
    }
    set
}

/// Every annotation of the MDP projection of `traj` with at most one jump
/// before each environment step, by exhaustive search.
pub fn brute_force_annotations(product: &Product, traj: &ProductTrajectory) -> BTreeSet<ProductTrajectory> {
    let traj = traj.trim_trailing_jumps();
    let env_steps: Vec<(ProductAction, usize)> = traj
        .actions()
        .iter()
        .enumerate()
        .filter(|(_, a)| !a.is_jump())
        .map(|(i, &a)| (a, traj.states()[i + 1].s))
        .collect();
    let s0 = traj.states()[0].s;
    let mut out = Vec::new();
    for b0 in 0..product.aut().num_states() {
        search(product, &env_steps, (vec![ProductState::new(s0, b0)], Vec::new()), &mut out);
    }
    finish(product, out)
}

fn search(product: &Product, steps: &[(ProductAction, usize)], part: Partial, out: &mut Vec<Partial>) {
    let Some((&(a, s_next), rest)) = steps.split_first() else {
        out.push(part);
        return;
    };
    let aut = product.aut();
    let z = *part.0.last().expect("nonempty");
    let mut options = vec![part.clone()];
    for (e, &t) in aut.jumps(z.b).iter().enumerate() {
        let mut p = part.clone();
        p.1.push(ProductAction::Jump(e));
        p.0.push(ProductState::new(z.s, t));
        options.push(p);
    }
    for mut p in options {
        let b = p.0.last().expect("nonempty").b;
        p.1.push(a);
        p.0.push(ProductState::new(s_next, aut.step_sigma(b, product.label(s_next))));
        search(product, rest, p, out);
    }
}

/// Maintains the counterfactual set while the rollout is generated.
pub struct OnlineLcer<'a, 'p> {
    product: &'a Product<'p>,
    mode: OnlineMode,
    set: BTreeSet<Partial>,
}

impl<'a, 'p> OnlineLcer<'a, 'p> {
    /// Seeds one trajectory `(s_0, b)` per automaton state.
    pub fn new(product: &'a Product<'p>, s0: usize, mode: OnlineMode) -> Self {
        let set = (0..product.aut().num_states())
            .map(|b| (vec![ProductState::new(s0, b)], Vec::new()))
            .collect();
        OnlineLcer { product, mode, set }
    }

    /// Processes the behaviour step `(a_t, s_{t+1})`.
    pub fn push(&mut self, a: ProductAction, s_next: usize) {
        let aut = self.product.aut();
        let label = self.product.label(s_next);
        let mut next = BTreeSet::new();
        for part in std::mem::take(&mut self.set) {
            let z = *part.0.last().expect("nonempty");
            match a {
                ProductAction::Mdp(_) => {
                    // cases 1 and 3: plain extension, then jump-then-action
                    for (e, &t) in aut.jumps(z.b).iter().enumerate() {
                        let mut p = part.clone();
                        p.1.extend([ProductAction::Jump(e), a]);
                        p.0.push(ProductState::new(z.s, t));
                        p.0.push(ProductState::new(s_next, aut.step_sigma(t, label)));
                        next.insert(p);
                    }
                    let mut p = part;
                    p.1.push(a);
                    p.0.push(ProductState::new(s_next, aut.step_sigma(z.b, label)));
                    next.insert(p);
                }
                ProductAction::Jump(e) => match aut.step_jump(z.b, e) {
                    // case 2
                    Ok(t) => {
                        let mut p = part.clone();
                        p.1.push(a);
                        p.0.push(ProductState::new(z.s, t));
                        next.insert(p);
                        if self.mode == OnlineMode::Retain {
                            next.insert(part);
                        }
                    }
                    // case 4
                    Err(_) => {
                        next.insert(part);
                    }
                },
            }
        }
        self.set = next;
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    pub fn finish(self) -> BTreeSet<ProductTrajectory> {
        finish(self.product, self.set)
    }

    /// Feeds a whole rollout, without its trailing jumps, step by step.
    pub fn run(product: &'a Product<'p>, traj: &ProductTrajectory, mode: OnlineMode) -> BTreeSet<ProductTrajectory> {
        let traj = traj.trim_trailing_jumps();
        let mut online = OnlineLcer::new(product, traj.states()[0].s, mode);
        for (i, &a) in traj.actions().iter().enumerate() {
            online.push(a, traj.states()[i + 1].s);
        }
        online.finish()
    }
}
