//! Counterfactual experience generated from the automaton.
//!
//! The automaton's transition function is known, so one observed rollout
//! says what would have happened from every automaton state and after every
//! possible jump. [`lcer_q`] turns each environment transition into tuples
//! for all automaton states; [`lcer_pg_offline`] and [`OnlineLcer`] build the
//! set of all automaton-consistent annotations of the rollout's MDP
//! projection, after the fact and during the rollout respectively.

mod pg;
mod store;

pub use pg::{
    brute_force_annotations, lcer_pg_offline, lcer_pg_offline_with, OnlineLcer, OnlineMode, PrefixMode,
};
pub use store::{QReplay, TrajectoryStore};

use std::fmt::Write as _;

use crate::ldba::Ldba;
use crate::product::{Product, ProductAction, ProductState, ProductTrajectory};

/// A single transition `(s, b, a, r, s', b')`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QTuple {
    pub s: usize,
    pub b: usize,
    pub a: ProductAction,
    pub r: u8,
    pub s_next: usize,
    pub b_next: usize,
}

impl QTuple {
    pub fn state(&self) -> ProductState {
        ProductState::new(self.s, self.b)
    }

    pub fn next_state(&self) -> ProductState {
        ProductState::new(self.s_next, self.b_next)
    }
}

impl std::fmt::Display for QTuple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} {} {} {} {} {}", self.s, self.b, self.a, self.r, self.s_next, self.b_next)
    }
}

/// Tuples for every environment transition of `traj` and every automaton
/// state: one Σ-tuple per state, then one tuple per available jump.
///
/// Jump steps of the behaviour rollout are skipped; jump tuples are
/// regenerated for every state instead.
pub fn lcer_q(product: &Product, traj: &ProductTrajectory) -> Vec<QTuple> {
    let aut = product.aut();
    let mut out = Vec::new();
    for (s, a, s_next) in traj.env_transitions() {
        let label = product.label(s_next);
        for b in 0..aut.num_states() {
            let b_next = aut.step_sigma(b, label);
            out.push(QTuple {
                s,
                b,
                a: ProductAction::Mdp(a),
                r: aut.is_accepting(b_next) as u8,
                s_next,
                b_next,
            });
        }
        for b in 0..aut.num_states() {
            for (e, &b_next) in aut.jumps(b).iter().enumerate() {
                out.push(QTuple {
                    s,
                    b,
                    a: ProductAction::Jump(e),
                    r: aut.is_accepting(b_next) as u8,
                    s_next: s,
                    b_next,
                });
            }
        }
    }
    out
}

/// The behaviour rollout's own transitions, jumps included.
pub fn on_policy_tuples(aut: &Ldba, traj: &ProductTrajectory) -> Vec<QTuple> {
    traj.actions()
        .iter()
        .zip(traj.states().windows(2))
        .map(|(&a, w)| QTuple {
            s: w[0].s,
            b: w[0].b,
            a,
            r: aut.is_accepting(w[1].b) as u8,
            s_next: w[1].s,
            b_next: w[1].b,
        })
        .collect()
}

/// Number of automaton states with at least one jump; rollouts shorter than
/// this cannot exercise every jump.
pub fn min_horizon(aut: &Ldba) -> usize {
    (0..aut.num_states()).filter(|&b| !aut.jumps(b).is_empty()).count()
}

/// Checks a tuple against the automaton and the environment's support.
pub fn check_tuple(product: &Product, t: &QTuple) -> Result<(), String> {
    let aut = product.aut();
    let expected = match t.a {
        ProductAction::Mdp(a) => {
            let support = product.env().transition_distribution(t.s, a);
            if !support.iter().any(|&(x, _)| x == t.s_next) {
                return Err(format!("{t}: s' not reachable"));
            }
            aut.step_sigma(t.b, product.label(t.s_next))
        }
        ProductAction::Jump(e) => {
            if t.s_next != t.s {
                return Err(format!("{t}: jump moved the environment"));
            }
            aut.step_jump(t.b, e).map_err(|err| format!("{t}: {err}"))?
        }
    };
    if expected != t.b_next {
        return Err(format!("{t}: expected b' = {expected}"));
    }
    if t.r != aut.is_accepting(t.b_next) as u8 {
        return Err(format!("{t}: wrong reward"));
    }
    Ok(())
}

/// Checks a counterfactual trajectory: automaton-consistent steps and the
/// same MDP projection as `observed`.
pub fn check_counterfactual(
    product: &Product,
    observed: &ProductTrajectory,
    cf: &ProductTrajectory,
) -> Result<(), String> {
    cf.check_consistent(product).map_err(|e| e.to_string())?;
    let proj = |t: &ProductTrajectory| -> Vec<(usize, Option<usize>)> {
        let mut out = vec![(t.states()[0].s, None)];
        for (i, a) in t.actions().iter().enumerate() {
            if let ProductAction::Mdp(m) = a {
                out.push((t.states()[i + 1].s, Some(*m)));
            }
        }
        out
    };
    if proj(cf) != proj(observed) {
        return Err("MDP projection differs from the observed rollout".into());
    }
    Ok(())
}

/// Text dump of a tuple store, one tuple per line.
pub fn dump_tuples<'a>(tuples: impl IntoIterator<Item = &'a QTuple>) -> String {
    let mut out = String::from("# s b a r s' b'\n");
    for t in tuples {
        writeln!(out, "{t}").unwrap();
    }
    out
}
