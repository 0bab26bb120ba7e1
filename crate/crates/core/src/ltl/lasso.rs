use super::{atoms_of, Alphabet, Letter, Ltl, LtlError};

/// The infinite word `prefix · cycle^ω` over an alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LassoWord {
    ap: Alphabet,
    prefix: Vec<Letter>,
    cycle: Vec<Letter>,
}

impl std::fmt::Display for LassoWord {
    /// `{a} {} ({a, b})^ω` with the cycle in parentheses.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let show = |ls: &[Letter]| ls.iter().map(|&l| self.ap.format_letter(l)).collect::<Vec<_>>().join(" ");
        if !self.prefix.is_empty() {
            write!(f, "{} ", show(&self.prefix))?;
        }
        write!(f, "({})^ω", show(&self.cycle))
    }
}

impl LassoWord {
    pub fn new(ap: Alphabet, prefix: Vec<Letter>, cycle: Vec<Letter>) -> Result<Self, LtlError> {
        if cycle.is_empty() {
            return Err(LtlError::EmptyCycle);
        }
        for &l in prefix.iter().chain(&cycle) {
            ap.check_letter(l)?;
        }
        Ok(LassoWord { ap, prefix, cycle })
    }

    /// Builds a word from letters given as lists of atom names.
    pub fn from_names(
        ap: Alphabet,
        prefix: &[&[&str]],
        cycle: &[&[&str]],
    ) -> Result<Self, LtlError> {
        let conv = |ls: &[&[&str]]| -> Result<Vec<Letter>, LtlError> {
            ls.iter().map(|names| ap.letter(names)).collect()
        };
        let p = conv(prefix)?;
        let c = conv(cycle)?;
        LassoWord::new(ap, p, c)
    }

    pub fn ap(&self) -> &Alphabet {
        &self.ap
    }

    pub fn prefix(&self) -> &[Letter] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[Letter] {
        &self.cycle
    }

    /// Number of distinct positions, `|prefix| + |cycle|`.
    pub fn positions(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    /// Letter at a distinct position `i < positions()`.
    pub fn letter_at(&self, i: usize) -> Letter {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.cycle[i - self.prefix.len()]
        }
    }

    /// Letter at an arbitrary index of the infinite word.
    pub fn letter_at_time(&self, t: usize) -> Letter {
        if t < self.prefix.len() {
            self.prefix[t]
        } else {
            self.cycle[(t - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// Successor of a distinct position; the last cycle position wraps to the
    /// first one.
    pub fn succ(&self, i: usize) -> usize {
        if i + 1 < self.positions() {
            i + 1
        } else {
            self.prefix.len()
        }
    }
}

/// Decides whether `w` satisfies `phi`.
///
/// Each subformula is evaluated at the `|prefix| + |cycle|` distinct positions.
/// `U` is the least fixpoint of `v = ψ ∨ (φ ∧ X v)` and `G` the greatest fixpoint
/// of `v = φ ∧ X v` over the successor graph, which is exact for lasso words.
pub fn eval_lasso(phi: &Ltl, w: &LassoWord) -> Result<bool, LtlError> {
    for a in atoms_of(phi) {
        if w.ap.index_of(a.as_str()).is_none() {
            return Err(LtlError::UndeclaredAtom(a.as_str().to_string()));
        }
    }
    Ok(eval_positions(phi, w)[0])
}

fn eval_positions(phi: &Ltl, w: &LassoWord) -> Vec<bool> {
    let k = w.positions();
    match phi {
        Ltl::True => vec![true; k],
        Ltl::False => vec![false; k],
        Ltl::Atom(a) => {
            let idx = w.ap.index_of(a.as_str()).expect("atoms checked");
            (0..k).map(|i| w.letter_at(i).contains(idx)).collect()
        }
        Ltl::Not(a) => eval_positions(a, w).into_iter().map(|v| !v).collect(),
        Ltl::And(a, b) => zip(eval_positions(a, w), eval_positions(b, w), |x, y| x && y),
        Ltl::Or(a, b) => zip(eval_positions(a, w), eval_positions(b, w), |x, y| x || y),
        Ltl::Implies(a, b) => zip(eval_positions(a, w), eval_positions(b, w), |x, y| !x || y),
        Ltl::Next(a) => {
            let v = eval_positions(a, w);
            (0..k).map(|i| v[w.succ(i)]).collect()
        }
        Ltl::Until(a, b) => {
            let hold = eval_positions(a, w);
            let goal = eval_positions(b, w);
            until_fixpoint(w, &hold, &goal)
        }
        Ltl::Finally(a) => {
            let goal = eval_positions(a, w);
            until_fixpoint(w, &vec![true; k], &goal)
        }
        Ltl::Globally(a) => {
            let hold = eval_positions(a, w);
            let mut v = vec![true; k];
            loop {
                let mut changed = false;
                for i in (0..k).rev() {
                    let nv = hold[i] && v[w.succ(i)];
                    if nv != v[i] {
                        v[i] = nv;
                        changed = true;
                    }
                }
                if !changed {
                    return v;
                }
            }
        }
    }
}

fn until_fixpoint(w: &LassoWord, hold: &[bool], goal: &[bool]) -> Vec<bool> {
    let k = w.positions();
    let mut v = vec![false; k];
    loop {
        let mut changed = false;
        for i in (0..k).rev() {
            let nv = goal[i] || (hold[i] && v[w.succ(i)]);
            if nv != v[i] {
                v[i] = nv;
                changed = true;
            }
        }
        if !changed {
            return v;
        }
    }
}

fn zip(a: Vec<bool>, b: Vec<bool>, f: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    a.into_iter().zip(b).map(|(x, y)| f(x, y)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::parse_ltl;

    fn ybr() -> Alphabet {
        Alphabet::from_names(&["y", "b", "r"]).unwrap()
    }

    #[test]
    fn safety_on_constant_word() {
        let w = LassoWord::from_names(ybr(), &[], &[&["y"]]).unwrap();
        assert!(eval_lasso(&parse_ltl("G!b").unwrap(), &w).unwrap());
    }

    #[test]
    fn stabilisation_after_prefix() {
        let w = LassoWord::from_names(ybr(), &[&[]], &[&["y"]]).unwrap();
        let f = parse_ltl("FGy").unwrap();
        assert!(eval_lasso(&f, &w).unwrap());
        assert!(!eval_lasso(&parse_ltl("Gy").unwrap(), &w).unwrap());
        assert!(eval_lasso(&parse_ltl("X y").unwrap(), &w).unwrap());
    }

    #[test]
    fn cycle_formula_on_four_letter_cycle() {
        let w = LassoWord::from_names(ybr(), &[], &[&["y"], &[], &["r"], &[]]).unwrap();
        let f = parse_ltl("GF(y & X F r) & G!b").unwrap();
        assert!(eval_lasso(&f, &w).unwrap());
        // r never follows y here
        let w2 = LassoWord::from_names(ybr(), &[&["r"]], &[&["y"]]).unwrap();
        assert!(!eval_lasso(&f, &w2).unwrap());
    }

    #[test]
    fn undeclared_atom() {
        let ap = Alphabet::from_names(&["y"]).unwrap();
        let w = LassoWord::from_names(ap, &[], &[&["y"]]).unwrap();
        assert_eq!(
            eval_lasso(&parse_ltl("F q").unwrap(), &w),
            Err(LtlError::UndeclaredAtom("q".into()))
        );
    }

    #[test]
    fn word_validation() {
        let ap = Alphabet::from_names(&["y"]).unwrap();
        assert_eq!(
            LassoWord::new(ap.clone(), vec![], vec![]),
            Err(LtlError::EmptyCycle)
        );
        assert!(matches!(
            LassoWord::new(ap, vec![], vec![Letter(2)]),
            Err(LtlError::LetterOutOfRange { .. })
        ));
    }
}
