//! Labelled MDP environments.

mod grid;
mod pacman;
mod random;
mod two_choice;

pub use grid::{make_flatworld_grid, make_minecraft, GridAction, GridWorld, MINECRAFT_LAYOUT};
pub use pacman::{make_pacman, Pacman};
pub use random::RandomMdp;
pub use two_choice::{make_two_choice, TwoChoiceMdp, TwoChoiceState, ACTION_A, ACTION_B};

use rand::{Rng, RngCore};

use crate::ltl::{Alphabet, Letter};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EnvError {
    #[error("probability {0} must lie strictly between 0 and 1")]
    Domain(f64),
    #[error("layout line {line}: {msg}")]
    Layout { line: usize, msg: String },
    #[error("grid resolution {0} is below the minimum of 10")]
    Resolution(usize),
    #[error("unknown environment `{0}`")]
    Unknown(String),
}

/// A finite labelled MDP with integer-indexed states and per-state actions.
///
/// States are `0..num_states()` and the actions available in `s` are
/// `0..num_actions(s)`. Randomness always comes from a caller-owned
/// generator.
pub trait LabelledMdp: Send + Sync {
    fn name(&self) -> &str;

    /// Atomic propositions the labelling function ranges over.
    fn ap(&self) -> &Alphabet;

    fn num_states(&self) -> usize;

    fn num_actions(&self, s: usize) -> usize;

    fn action_name(&self, s: usize, a: usize) -> String {
        let _ = s;
        format!("a{a}")
    }

    /// Next-state distribution; probabilities are positive and sum to one.
    fn transition_distribution(&self, s: usize, a: usize) -> Vec<(usize, f64)>;

    fn initial_distribution(&self) -> Vec<(usize, f64)>;

    /// The set of atoms true in `s`, as a letter over [`LabelledMdp::ap`].
    fn label(&self, s: usize) -> Letter;

    fn sample_transition(&self, s: usize, a: usize, rng: &mut dyn RngCore) -> usize {
        sample_categorical(&self.transition_distribution(s, a), rng)
    }

    fn sample_initial(&self, rng: &mut dyn RngCore) -> usize {
        sample_categorical(&self.initial_distribution(), rng)
    }

    fn state_name(&self, s: usize) -> String {
        s.to_string()
    }
}

/// Draws an outcome from a finite distribution.
pub fn sample_categorical(dist: &[(usize, f64)], rng: &mut dyn RngCore) -> usize {
    if let [(s, _)] = dist {
        return *s;
    }
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for &(s, p) in dist {
        acc += p;
        if u < acc {
            return s;
        }
    }
    dist.last().expect("nonempty distribution").0
}

/// Merges duplicate outcomes and drops zero-probability entries, keeping the
/// first-seen order.
pub(crate) fn normalize(dist: Vec<(usize, f64)>) -> Vec<(usize, f64)> {
    let mut out: Vec<(usize, f64)> = Vec::with_capacity(dist.len());
    for (s, p) in dist {
        if p <= 0.0 {
            continue;
        }
        match out.iter_mut().find(|(t, _)| *t == s) {
            Some(e) => e.1 += p,
            None => out.push((s, p)),
        }
    }
    out
}

/// Builds an environment from its configuration name.
///
/// `param` is the Flatworld resolution or the two-choice `α`; it is ignored
/// by the other environments.
pub fn by_name(name: &str, param: Option<f64>) -> Result<Box<dyn LabelledMdp>, EnvError> {
    Ok(match name {
        "minecraft" => Box::new(make_minecraft()),
        "flatworld" => Box::new(make_flatworld_grid(param.unwrap_or(10.0) as usize)?),
        "two_choice" => Box::new(make_two_choice(param.unwrap_or(0.9))?),
        "pacman" => Box::new(make_pacman()),
        other => return Err(EnvError::Unknown(other.to_string())),
    })
}
