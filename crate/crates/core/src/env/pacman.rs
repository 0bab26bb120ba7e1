use super::{normalize, LabelledMdp};
use crate::ltl::{Alphabet, Letter};

const ROWS: usize = 5;
const COLS: usize = 8;
const CELLS: usize = ROWS * COLS;
const CHASE: f64 = 0.8;

// (drow, dcol) for left, right, up, down, nothing
const MOVES: [(isize, isize); 5] = [(0, -1), (0, 1), (-1, 0), (1, 0), (0, 0)];

/// 5×8 Pacman with one food pellet and one ghost.
///
/// The state is the joint cell pair `agent * 40 + ghost`. The agent moves
/// first; then the ghost chases with probability 0.8 (uniformly over the moves
/// that strictly decrease its Manhattan distance to the agent, or staying put
/// when none does) and otherwise takes one of the five moves uniformly.
#[derive(Debug, Clone, PartialEq)]
pub struct Pacman {
    ap: Alphabet,
    agent_start: (usize, usize),
    ghost_start: (usize, usize),
    food: (usize, usize),
}

pub fn make_pacman() -> Pacman {
    Pacman {
        ap: Alphabet::from_names(&["food", "ghost"]).expect("static alphabet"),
        agent_start: (0, 3),
        ghost_start: (4, 7),
        food: (2, 0),
    }
}

fn cell(i: usize) -> (usize, usize) {
    (i / COLS, i % COLS)
}

fn index((r, c): (usize, usize)) -> usize {
    r * COLS + c
}

fn step((r, c): (usize, usize), m: (isize, isize)) -> (usize, usize) {
    let nr = r as isize + m.0;
    let nc = c as isize + m.1;
    if nr < 0 || nc < 0 || nr >= ROWS as isize || nc >= COLS as isize {
        (r, c)
    } else {
        (nr as usize, nc as usize)
    }
}

fn manhattan(a: (usize, usize), b: (usize, usize)) -> usize {
    a.0.abs_diff(b.0) + a.1.abs_diff(b.1)
}

impl Pacman {
    pub fn state_of(&self, agent: (usize, usize), ghost: (usize, usize)) -> usize {
        index(agent) * CELLS + index(ghost)
    }

    pub fn cells_of(&self, s: usize) -> ((usize, usize), (usize, usize)) {
        (cell(s / CELLS), cell(s % CELLS))
    }

    pub fn food(&self) -> (usize, usize) {
        self.food
    }

    /// Distribution of the ghost's next cell given the agent's new cell.
    pub fn ghost_distribution(&self, ghost: (usize, usize), agent: (usize, usize)) -> Vec<(usize, f64)> {
        let d = manhattan(ghost, agent);
        let closer: Vec<(usize, usize)> = MOVES
            .iter()
            .map(|&m| step(ghost, m))
            .filter(|&g| manhattan(g, agent) < d)
            .collect();
        let mut out = Vec::new();
        if closer.is_empty() {
            out.push((index(ghost), CHASE));
        } else {
            for g in &closer {
                out.push((index(*g), CHASE / closer.len() as f64));
            }
        }
        for &m in &MOVES {
            out.push((index(step(ghost, m)), (1.0 - CHASE) / MOVES.len() as f64));
        }
        normalize(out)
    }
}

impl LabelledMdp for Pacman {
    fn name(&self) -> &str {
        "pacman"
    }

    fn ap(&self) -> &Alphabet {
        &self.ap
    }

    fn num_states(&self) -> usize {
        CELLS * CELLS
    }

    fn num_actions(&self, _s: usize) -> usize {
        MOVES.len()
    }

    fn action_name(&self, _s: usize, a: usize) -> String {
        ["left", "right", "up", "down", "nothing"][a].to_string()
    }

    fn transition_distribution(&self, s: usize, a: usize) -> Vec<(usize, f64)> {
        let (agent, ghost) = self.cells_of(s);
        let agent = step(agent, MOVES[a]);
        self.ghost_distribution(ghost, agent)
            .into_iter()
            .map(|(g, p)| (index(agent) * CELLS + g, p))
            .collect()
    }

    fn initial_distribution(&self) -> Vec<(usize, f64)> {
        vec![(self.state_of(self.agent_start, self.ghost_start), 1.0)]
    }

    fn label(&self, s: usize) -> Letter {
        let (agent, ghost) = self.cells_of(s);
        let mut l = Letter::EMPTY;
        if agent == self.food {
            l = l.with(0);
        }
        if agent == ghost {
            l = l.with(1);
        }
        l
    }

    fn state_name(&self, s: usize) -> String {
        let (a, g) = self.cells_of(s);
        format!("agent({},{})ghost({},{})", a.0, a.1, g.0, g.1)
    }
}
