//! Limit-deterministic Büchi automata with indexed jump transitions.
//!
//! Automata are loaded from a small line-oriented text format, validated
//! eagerly, and then immutable. The Σ-transition function is tabulated over
//! all `2^|AP|` letters at load time.

mod accept;
mod format;

pub use accept::{accepts_lasso, LassoAcceptanceWitness, RunEdge, RunStep};
pub use format::load_ldba;

use crate::ltl::{Alphabet, Letter, Ltl, LtlError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LdbaError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("non-deterministic guards: state {state} has {count} guards satisfied by letter {letter}")]
    NonDeterministic {
        state: usize,
        letter: String,
        count: usize,
    },
    #[error("partial guards: state {state} has no guard satisfied by letter {letter}")]
    Partial { state: usize, letter: String },
    #[error("jump inside deterministic part: state {0} has jump edges but is Σ-reachable from an accepting state or jump target")]
    JumpInDeterministicPart(usize),
    #[error("accepting outside S_D: state {0}")]
    AcceptingOutsideDeterministic(usize),
    #[error("state {state} out of range for an automaton with {states} states")]
    StateOutOfRange { state: usize, states: usize },
    #[error("automaton must have at least one state")]
    NoStates,
    #[error("guard `{0}` contains a temporal operator")]
    TemporalGuard(String),
    #[error("invalid jump: state {state} has {available} jump edge(s), index {index} requested")]
    InvalidJump {
        state: usize,
        index: usize,
        available: usize,
    },
    #[error(transparent)]
    Ltl(#[from] LtlError),
}

/// A Σ-edge: a propositional guard and a target state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaEdge {
    pub guard: Ltl,
    pub target: usize,
}

/// A validated LDBA.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ldba {
    ap: Alphabet,
    initial: usize,
    accepting: Vec<bool>,
    sigma_edges: Vec<Vec<SigmaEdge>>,
    jump_edges: Vec<Vec<usize>>,
    delta: Vec<usize>,
    deterministic: Vec<bool>,
}

impl Ldba {
    /// Builds and validates an automaton.
    ///
    /// Checks that Σ-guards are total and mutually exclusive on every letter,
    /// that no state of `S_D` (the Σ-closure of the accepting states and all
    /// jump targets) carries a jump edge, and that indices are in range.
    pub fn new(
        ap: Alphabet,
        num_states: usize,
        initial: usize,
        accepting: &[usize],
        sigma_edges: Vec<Vec<SigmaEdge>>,
        jump_edges: Vec<Vec<usize>>,
    ) -> Result<Self, LdbaError> {
        if num_states == 0 {
            return Err(LdbaError::NoStates);
        }
        let in_range = |s: usize| {
            if s < num_states {
                Ok(())
            } else {
                Err(LdbaError::StateOutOfRange {
                    state: s,
                    states: num_states,
                })
            }
        };
        in_range(initial)?;
        let mut acc = vec![false; num_states];
        for &a in accepting {
            in_range(a)?;
            acc[a] = true;
        }
        if sigma_edges.len() > num_states || jump_edges.len() > num_states {
            return Err(LdbaError::StateOutOfRange {
                state: sigma_edges.len().max(jump_edges.len()) - 1,
                states: num_states,
            });
        }
        let mut sigma_edges = sigma_edges;
        let mut jump_edges = jump_edges;
        sigma_edges.resize(num_states, Vec::new());
        jump_edges.resize(num_states, Vec::new());
        for (b, edges) in sigma_edges.iter().enumerate() {
            for e in edges {
                in_range(e.target)?;
                if !e.guard.is_propositional() {
                    return Err(LdbaError::TemporalGuard(e.guard.to_string()));
                }
                // resolve atoms early so undeclared names fail here, not below
                e.guard.eval_letter(&ap, Letter::EMPTY)?;
            }
            for &t in &jump_edges[b] {
                in_range(t)?;
            }
        }

        let nl = ap.num_letters() as usize;
        let mut delta = vec![0; num_states * nl];
        for (b, edges) in sigma_edges.iter().enumerate() {
            for letter in ap.letters() {
                let mut hit = None;
                let mut count = 0;
                for e in edges {
                    if e.guard.eval_letter(&ap, letter)? {
                        count += 1;
                        hit.get_or_insert(e.target);
                    }
                }
                match (count, hit) {
                    (1, Some(t)) => delta[b * nl + letter.0 as usize] = t,
                    (0, _) => {
                        return Err(LdbaError::Partial {
                            state: b,
                            letter: ap.format_letter(letter),
                        })
                    }
                    _ => {
                        return Err(LdbaError::NonDeterministic {
                            state: b,
                            letter: ap.format_letter(letter),
                            count,
                        })
                    }
                }
            }
        }

        // S_D: Σ-closure of accepting states and jump targets.
        let mut deterministic = vec![false; num_states];
        let mut stack: Vec<usize> = (0..num_states).filter(|&b| acc[b]).collect();
        stack.extend(jump_edges.iter().flatten().copied());
        while let Some(b) = stack.pop() {
            if deterministic[b] {
                continue;
            }
            deterministic[b] = true;
            for l in 0..nl {
                let t = delta[b * nl + l];
                if !deterministic[t] {
                    stack.push(t);
                }
            }
        }
        if let Some(b) = (0..num_states).find(|&b| deterministic[b] && !jump_edges[b].is_empty()) {
            return Err(LdbaError::JumpInDeterministicPart(b));
        }
        if let Some(b) = (0..num_states).find(|&b| acc[b] && !deterministic[b]) {
            return Err(LdbaError::AcceptingOutsideDeterministic(b));
        }

        Ok(Ldba {
            ap,
            initial,
            accepting: acc,
            sigma_edges,
            jump_edges,
            delta,
            deterministic,
        })
    }

    pub fn ap(&self) -> &Alphabet {
        &self.ap
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_accepting(&self, b: usize) -> bool {
        self.accepting[b]
    }

    pub fn accepting_states(&self) -> Vec<usize> {
        (0..self.num_states()).filter(|&b| self.accepting[b]).collect()
    }

    pub fn sigma_edges(&self, b: usize) -> &[SigmaEdge] {
        &self.sigma_edges[b]
    }

    /// Jump targets of `b`; index `i` is the jump action `ε_i`.
    pub fn jumps(&self, b: usize) -> &[usize] {
        &self.jump_edges[b]
    }

    pub fn has_jumps(&self) -> bool {
        self.jump_edges.iter().any(|j| !j.is_empty())
    }

    /// Membership in the deterministic part `S_D`.
    pub fn in_deterministic_part(&self, b: usize) -> bool {
        self.deterministic[b]
    }

    /// The unique Σ-successor of `b` on `letter`.
    pub fn step_sigma(&self, b: usize, letter: Letter) -> usize {
        let nl = self.ap.num_letters() as usize;
        self.delta[b * nl + letter.0 as usize]
    }

    pub fn step_jump(&self, b: usize, index: usize) -> Result<usize, LdbaError> {
        self.jump_edges[b]
            .get(index)
            .copied()
            .ok_or(LdbaError::InvalidJump {
                state: b,
                index,
                available: self.jump_edges[b].len(),
            })
    }

    /// Serializes back to the text format accepted by [`load_ldba`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let names: Vec<&str> = self.ap.atoms().iter().map(|a| a.as_str()).collect();
        out.push_str(&format!("ap: {}\n", names.join(" ")));
        out.push_str(&format!("states: {}\n", self.num_states()));
        out.push_str(&format!("initial: {}\n", self.initial));
        let acc: Vec<String> = self.accepting_states().iter().map(|b| b.to_string()).collect();
        out.push_str(&format!("accepting: {}\n", acc.join(" ")));
        for b in 0..self.num_states() {
            for e in &self.sigma_edges[b] {
                out.push_str(&format!("{b} [{}] -> {}\n", e.guard, e.target));
            }
            for t in &self.jump_edges[b] {
                out.push_str(&format!("{b} eps -> {t}\n"));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn fgy_structure() {
        let a = fixtures::fgy();
        assert_eq!(a.num_states(), 3);
        assert_eq!(a.initial(), 0);
        assert_eq!(a.accepting_states(), vec![1]);
        assert_eq!(a.jumps(0), &[1]);
        assert!(a.jumps(1).is_empty());
        assert!(a.jumps(2).is_empty());
        assert!(!a.in_deterministic_part(0));
        assert!(a.in_deterministic_part(1) && a.in_deterministic_part(2));
    }

    #[test]
    fn cycle_yr_has_no_jumps() {
        let a = fixtures::cycle_yr();
        assert_eq!(a.num_states(), 4);
        assert_eq!(a.initial(), 1);
        assert_eq!(a.accepting_states(), vec![1]);
        assert!(!a.has_jumps());
    }

    #[test]
    fn fgy_sigma_steps() {
        let a = fixtures::fgy();
        let ap = a.ap().clone();
        assert_eq!(a.step_sigma(1, Letter::EMPTY), 2);
        assert_eq!(a.step_sigma(1, ap.letter(&["y"]).unwrap()), 1);
        assert_eq!(a.step_sigma(0, ap.letter(&["b", "r"]).unwrap()), 0);
        for l in ap.letters() {
            assert_eq!(a.step_sigma(0, l), 0);
            assert_eq!(a.step_sigma(2, l), 2);
        }
    }

    #[test]
    fn jump_steps() {
        let a = fixtures::fgy();
        assert_eq!(a.step_jump(0, 0), Ok(1));
        assert_eq!(
            a.step_jump(1, 0),
            Err(LdbaError::InvalidJump {
                state: 1,
                index: 0,
                available: 0
            })
        );
        let c = fixtures::cycle_yr();
        assert!(matches!(c.step_jump(1, 0), Err(LdbaError::InvalidJump { .. })));
    }

    #[test]
    fn text_round_trip() {
        for a in [fixtures::fgy(), fixtures::cycle_yr(), fixtures::cycle_yb()] {
            let again = load_ldba(&a.to_text()).unwrap();
            assert_eq!(again, a);
        }
    }
}
