use super::{normalize, EnvError, LabelledMdp};
use crate::ltl::{Alphabet, Letter};

/// Moves on a grid. Index order is the action index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridAction {
    Left,
    Right,
    Up,
    Down,
    Nothing,
}

impl GridAction {
    pub const ALL: [GridAction; 5] = [
        GridAction::Left,
        GridAction::Right,
        GridAction::Up,
        GridAction::Down,
        GridAction::Nothing,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GridAction::Left => "left",
            GridAction::Right => "right",
            GridAction::Up => "up",
            GridAction::Down => "down",
            GridAction::Nothing => "nothing",
        }
    }

    fn delta(self) -> (isize, isize) {
        match self {
            GridAction::Left => (0, -1),
            GridAction::Right => (0, 1),
            GridAction::Up => (-1, 0),
            GridAction::Down => (1, 0),
            GridAction::Nothing => (0, 0),
        }
    }
}

/// A rectangular grid. State `row * width + col`; row 0 is the top row.
#[derive(Debug, Clone, PartialEq)]
pub struct GridWorld {
    name: String,
    width: usize,
    height: usize,
    ap: Alphabet,
    labels: Vec<Letter>,
    blocked: Vec<bool>,
    start: (usize, usize),
    slip: f64,
}

/// Minecraft-style layout: two disjoint goal regions `y` and `b`, with red
/// obstacle blocks in between. The start cell is (9, 2).
pub const MINECRAFT_LAYOUT: &str = "\
.......bb.
.......bb.
..rr......
..rr......
......rr..
yy....rr..
yy........
....rr....
....rr....
..S.......
";

impl GridWorld {
    /// Parses a layout: one text row per grid row; `.` free, `#` blocked,
    /// `S` start, and a lowercase letter marks a cell labelled with the atom
    /// of that name, which must be declared in `ap`.
    pub fn from_layout(name: &str, text: &str, ap: Alphabet, slip: f64) -> Result<Self, EnvError> {
        let rows: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).map(str::trim).collect();
        let height = rows.len();
        let width = rows.first().map(|r| r.len()).unwrap_or(0);
        if height == 0 || width == 0 {
            return Err(EnvError::Layout {
                line: 1,
                msg: "empty layout".into(),
            });
        }
        let mut labels = vec![Letter::EMPTY; width * height];
        let mut blocked = vec![false; width * height];
        let mut start = None;
        for (r, row) in rows.iter().enumerate() {
            if row.len() != width {
                return Err(EnvError::Layout {
                    line: r + 1,
                    msg: format!("row has {} cells, expected {width}", row.len()),
                });
            }
            for (c, ch) in row.chars().enumerate() {
                let i = r * width + c;
                match ch {
                    '.' => {}
                    '#' => blocked[i] = true,
                    'S' => {
                        if start.replace((r, c)).is_some() {
                            return Err(EnvError::Layout {
                                line: r + 1,
                                msg: "more than one start cell".into(),
                            });
                        }
                    }
                    c if c.is_ascii_lowercase() => {
                        let idx = ap.index_of(&c.to_string()).ok_or_else(|| EnvError::Layout {
                            line: r + 1,
                            msg: format!("zone `{c}` is not a declared atom"),
                        })?;
                        labels[i] = labels[i].with(idx);
                    }
                    other => {
                        return Err(EnvError::Layout {
                            line: r + 1,
                            msg: format!("unexpected character `{other}`"),
                        })
                    }
                }
            }
        }
        let start = start.ok_or(EnvError::Layout {
            line: height,
            msg: "no start cell `S`".into(),
        })?;
        GridWorld::new(name, width, height, ap, labels, blocked, start, slip)
    }

    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: &str,
        width: usize,
        height: usize,
        ap: Alphabet,
        labels: Vec<Letter>,
        blocked: Vec<bool>,
        start: (usize, usize),
        slip: f64,
    ) -> Result<Self, EnvError> {
        let (r, c) = start;
        if r >= height || c >= width || blocked[r * width + c] {
            return Err(EnvError::Layout {
                line: r + 1,
                msg: "start cell out of bounds or blocked".into(),
            });
        }
        if !(0.0..1.0).contains(&slip) {
            return Err(EnvError::Domain(slip));
        }
        Ok(GridWorld {
            name: name.to_string(),
            width,
            height,
            ap,
            labels,
            blocked,
            start,
            slip,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn start(&self) -> (usize, usize) {
        self.start
    }

    pub fn state_of(&self, row: usize, col: usize) -> usize {
        row * self.width + col
    }

    pub fn cell_of(&self, s: usize) -> (usize, usize) {
        (s / self.width, s % self.width)
    }

    pub fn is_deterministic(&self) -> bool {
        self.slip == 0.0
    }

    /// The cell reached by `action`; moves off the grid or into blocked
    /// cells leave the agent in place.
    pub fn move_from(&self, s: usize, action: GridAction) -> usize {
        let (r, c) = self.cell_of(s);
        let (dr, dc) = action.delta();
        let nr = r as isize + dr;
        let nc = c as isize + dc;
        if nr < 0 || nc < 0 || nr >= self.height as isize || nc >= self.width as isize {
            return s;
        }
        let t = self.state_of(nr as usize, nc as usize);
        if self.blocked[t] {
            s
        } else {
            t
        }
    }
}

impl LabelledMdp for GridWorld {
    fn name(&self) -> &str {
        &self.name
    }

    fn ap(&self) -> &Alphabet {
        &self.ap
    }

    fn num_states(&self) -> usize {
        self.width * self.height
    }

    fn num_actions(&self, _s: usize) -> usize {
        GridAction::ALL.len()
    }

    fn action_name(&self, _s: usize, a: usize) -> String {
        GridAction::ALL[a].name().to_string()
    }

    // With slip probability p the intended move is replaced by a uniformly
    // random action.
    fn transition_distribution(&self, s: usize, a: usize) -> Vec<(usize, f64)> {
        let intended = self.move_from(s, GridAction::ALL[a]);
        if self.slip == 0.0 {
            return vec![(intended, 1.0)];
        }
        let mut d = vec![(intended, 1.0 - self.slip)];
        for act in GridAction::ALL {
            d.push((self.move_from(s, act), self.slip / 5.0));
        }
        normalize(d)
    }

    fn initial_distribution(&self) -> Vec<(usize, f64)> {
        vec![(self.state_of(self.start.0, self.start.1), 1.0)]
    }

    fn label(&self, s: usize) -> Letter {
        self.labels[s]
    }

    fn state_name(&self, s: usize) -> String {
        let (r, c) = self.cell_of(s);
        format!("({r},{c})")
    }
}

/// 10×10 deterministic grid with yellow and blue goal areas and red
/// obstacles, starting at (9, 2).
pub fn make_minecraft() -> GridWorld {
    let ap = Alphabet::from_names(&["y", "b", "r"]).expect("static alphabet");
    GridWorld::from_layout("minecraft", MINECRAFT_LAYOUT, ap, 0.0).expect("static layout")
}

/// Flatworld zones on `[-2, 2]²`: (center x, center y, radius).
///
/// Yellow and blue overlap near (0.6, 1.4); red sits in the lower right.
pub const FLATWORLD_YELLOW: (f64, f64, f64) = (1.0, 1.0, 0.6);
pub const FLATWORLD_BLUE: (f64, f64, f64) = (0.2, 1.4, 0.5);
pub const FLATWORLD_RED: (f64, f64, f64) = (1.2, -1.0, 0.5);

/// Flatworld discretized into an `n × n` grid over `[-2, 2]²`.
///
/// A cell carries a zone's atom when its center lies inside the zone disk.
/// The agent starts in the cell containing (-1, -1).
pub fn make_flatworld_grid(n: usize) -> Result<GridWorld, EnvError> {
    if n < 10 {
        return Err(EnvError::Resolution(n));
    }
    let ap = Alphabet::from_names(&["y", "b", "r"]).expect("static alphabet");
    let h = 4.0 / n as f64;
    let mut labels = vec![Letter::EMPTY; n * n];
    for row in 0..n {
        for col in 0..n {
            let x = -2.0 + (col as f64 + 0.5) * h;
            let y = 2.0 - (row as f64 + 0.5) * h;
            let mut l = Letter::EMPTY;
            for (i, (cx, cy, rad)) in [FLATWORLD_YELLOW, FLATWORLD_BLUE, FLATWORLD_RED].into_iter().enumerate() {
                if (x - cx).powi(2) + (y - cy).powi(2) <= rad * rad {
                    l = l.with(i);
                }
            }
            labels[row * n + col] = l;
        }
    }
    let index = |offset: f64| ((offset / h).floor() as usize).min(n - 1);
    let start = (index(2.0 - -1.0), index(-1.0 + 2.0));
    GridWorld::new("flatworld", n, n, ap, labels, vec![false; n * n], start, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::testing::*;

    #[test]
    fn minecraft_basics() {
        let g = make_minecraft();
        assert_eq!(g.start(), (9, 2));
        let s0 = g.initial_distribution()[0].0;
        assert_eq!(g.num_actions(s0), 5);
        assert_eq!(g.label(s0), Letter::EMPTY);
        assert_eq!(g.move_from(s0, GridAction::Nothing), s0);
        assert!(g.is_deterministic());
        check_distributions(&g);
        for s in 0..g.num_states() {
            for a in 0..5 {
                assert_eq!(g.transition_distribution(s, a).len(), 1);
            }
        }
    }

    #[test]
    fn minecraft_zones_disjoint() {
        let g = make_minecraft();
        let ap = g.ap().clone();
        let y = ap.index_of("y").unwrap();
        let b = ap.index_of("b").unwrap();
        let r = ap.index_of("r").unwrap();
        let mut counts = [0; 3];
        for s in 0..g.num_states() {
            let l = g.label(s);
            assert!(l.0.count_ones() <= 1);
            for (k, i) in [y, b, r].into_iter().enumerate() {
                if l.contains(i) {
                    counts[k] += 1;
                }
            }
        }
        assert!(counts.iter().all(|&c| c > 0));
    }

    #[test]
    fn edges_keep_agent_in_bounds() {
        let g = make_minecraft();
        let top_left = g.state_of(0, 0);
        assert_eq!(g.move_from(top_left, GridAction::Left), top_left);
        assert_eq!(g.move_from(top_left, GridAction::Up), top_left);
        let bottom_right = g.state_of(9, 9);
        assert_eq!(g.move_from(bottom_right, GridAction::Right), bottom_right);
        assert_eq!(g.move_from(bottom_right, GridAction::Down), bottom_right);
    }

    #[test]
    fn flatworld_labels() {
        let g = make_flatworld_grid(10).unwrap();
        let ap = g.ap().clone();
        // cell center (0.6, 1.4) lies in both disks
        let overlap = g.state_of(1, 6);
        assert_eq!(g.label(overlap), ap.letter(&["y", "b"]).unwrap());
        assert_eq!(g.label(g.state_of(9, 0)), Letter::EMPTY);
        assert_eq!(g.label(g.state_of(0, 9)), Letter::EMPTY);
        assert_eq!(g.start(), (7, 2));
        for s in 0..g.num_states() {
            assert_eq!(g.num_actions(s), 5);
        }
        check_distributions(&g);
        assert!(matches!(make_flatworld_grid(9), Err(EnvError::Resolution(9))));
    }

    #[test]
    fn flatworld_start_tracks_resolution() {
        for n in [10, 20, 40] {
            let g = make_flatworld_grid(n).unwrap();
            let (r, c) = g.start();
            let h = 4.0 / n as f64;
            let x0 = -2.0 + c as f64 * h;
            let y0 = 2.0 - r as f64 * h;
            assert!(x0 <= -1.0 && -1.0 <= x0 + h + 1e-12, "n={n}");
            assert!(y0 - h - 1e-12 <= -1.0 && -1.0 <= y0, "n={n}");
        }
    }

    #[test]
    fn layout_errors() {
        let ap = Alphabet::from_names(&["y"]).unwrap();
        assert!(GridWorld::from_layout("t", "..\n.S.\n", ap.clone(), 0.0).is_err());
        assert!(GridWorld::from_layout("t", "..\n..\n", ap.clone(), 0.0).is_err());
        assert!(GridWorld::from_layout("t", "Sq\n..\n", ap.clone(), 0.0).is_err());
        assert!(GridWorld::from_layout("t", "S?\n..\n", ap.clone(), 0.0).is_err());
        let g = GridWorld::from_layout("t", "S#\n.y\n", ap, 0.0).unwrap();
        assert_eq!(g.move_from(0, GridAction::Right), 0);
    }

    #[test]
    fn slippery_grid_sampling_matches_distribution() {
        let ap = Alphabet::from_names(&["y"]).unwrap();
        let g = GridWorld::from_layout("slip", "S..\n.y.\n...\n", ap, 0.3).unwrap();
        check_distributions(&g);
        for (i, (s, a)) in [(0, 1), (4, 2), (8, 4), (3, 0)].into_iter().enumerate() {
            let (stat, dof) = chi_square(&g, s, a, 10_000, i as u64);
            assert!(stat < chi_square_limit(dof), "χ²={stat} dof={dof}");
        }
    }
}
