use super::{EnvError, LabelledMdp};
use crate::ltl::{Alphabet, Letter};

/// States of the two-choice counterexample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwoChoiceState {
    Start = 0,
    Acc2a = 1,
    Acc2b = 2,
    Acc1 = 3,
    Sink = 4,
}

impl TwoChoiceState {
    pub const ALL: [TwoChoiceState; 5] = [
        TwoChoiceState::Start,
        TwoChoiceState::Acc2a,
        TwoChoiceState::Acc2b,
        TwoChoiceState::Acc1,
        TwoChoiceState::Sink,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            TwoChoiceState::Start => "start",
            TwoChoiceState::Acc2a => "acc2a",
            TwoChoiceState::Acc2b => "acc2b",
            TwoChoiceState::Acc1 => "acc1",
            TwoChoiceState::Sink => "sink",
        }
    }
}

pub const ACTION_A: usize = 0;
pub const ACTION_B: usize = 1;

/// Action A enters a 2-cycle that is accepting every other step; action B
/// reaches an accepting self-loop with probability `α` and an absorbing sink
/// otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoChoiceMdp {
    alpha: f64,
    ap: Alphabet,
}

pub fn make_two_choice(alpha: f64) -> Result<TwoChoiceMdp, EnvError> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(EnvError::Domain(alpha));
    }
    Ok(TwoChoiceMdp {
        alpha,
        ap: Alphabet::from_names(&["acc"]).expect("static alphabet"),
    })
}

impl TwoChoiceMdp {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

impl LabelledMdp for TwoChoiceMdp {
    fn name(&self) -> &str {
        "two_choice"
    }

    fn ap(&self) -> &Alphabet {
        &self.ap
    }

    fn num_states(&self) -> usize {
        5
    }

    fn num_actions(&self, s: usize) -> usize {
        if s == TwoChoiceState::Start.index() {
            2
        } else {
            1
        }
    }

    fn action_name(&self, s: usize, a: usize) -> String {
        match (s == TwoChoiceState::Start.index(), a) {
            (true, ACTION_A) => "A".into(),
            (true, _) => "B".into(),
            _ => "continue".into(),
        }
    }

    fn transition_distribution(&self, s: usize, a: usize) -> Vec<(usize, f64)> {
        use TwoChoiceState::*;
        match TwoChoiceState::ALL[s] {
            Start if a == ACTION_A => vec![(Acc2a.index(), 1.0)],
            Start => vec![(Acc1.index(), self.alpha), (Sink.index(), 1.0 - self.alpha)],
            Acc2a => vec![(Acc2b.index(), 1.0)],
            Acc2b => vec![(Acc2a.index(), 1.0)],
            Acc1 => vec![(Acc1.index(), 1.0)],
            Sink => vec![(Sink.index(), 1.0)],
        }
    }

    fn initial_distribution(&self) -> Vec<(usize, f64)> {
        vec![(TwoChoiceState::Start.index(), 1.0)]
    }

    fn label(&self, s: usize) -> Letter {
        if s == TwoChoiceState::Acc2a.index() || s == TwoChoiceState::Acc1.index() {
            Letter::EMPTY.with(0)
        } else {
            Letter::EMPTY
        }
    }

    fn state_name(&self, s: usize) -> String {
        TwoChoiceState::ALL[s].name().to_string()
    }
}
