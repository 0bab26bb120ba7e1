//! Bundled automata and their formulas.

use crate::ldba::{load_ldba, Ldba};

pub const FGY_LDBA: &str = include_str!("../fixtures/fgy.ldba");
pub const CYCLE_YR_LDBA: &str = include_str!("../fixtures/cycle_yr.ldba");
pub const CYCLE_YB_LDBA: &str = include_str!("../fixtures/cycle_yb.ldba");
pub const TWO_CHOICE_LDBA: &str = include_str!("../fixtures/two_choice.ldba");
pub const PACMAN_LDBA: &str = include_str!("../fixtures/pacman.ldba");

pub const FGY: &str = "FGy";
pub const CYCLE_YR: &str = "GF(y & XF r) & G!b";
pub const CYCLE_YB: &str = "GF(y & XF b) & G!r";
pub const TWO_CHOICE: &str = "GF acc";
pub const PACMAN: &str = "F food & G !ghost";

/// Every bundled pair: (name, automaton text, formula).
pub const ALL: [(&str, &str, &str); 5] = [
    ("fgy", FGY_LDBA, FGY),
    ("cycle_yr", CYCLE_YR_LDBA, CYCLE_YR),
    ("cycle_yb", CYCLE_YB_LDBA, CYCLE_YB),
    ("two_choice", TWO_CHOICE_LDBA, TWO_CHOICE),
    ("pacman", PACMAN_LDBA, PACMAN),
];

/// Looks up a bundled pair by name.
pub fn by_name(name: &str) -> Option<(&'static str, &'static str)> {
    ALL.iter().find(|(n, _, _)| *n == name).map(|(_, t, f)| (*t, *f))
}

fn load(text: &str) -> Ldba {
    load_ldba(text).expect("bundled automaton is valid")
}

pub fn fgy() -> Ldba {
    load(FGY_LDBA)
}

pub fn cycle_yr() -> Ldba {
    load(CYCLE_YR_LDBA)
}

pub fn cycle_yb() -> Ldba {
    load(CYCLE_YB_LDBA)
}

pub fn two_choice() -> Ldba {
    load(TWO_CHOICE_LDBA)
}

pub fn pacman() -> Ldba {
    load(PACMAN_LDBA)
}
