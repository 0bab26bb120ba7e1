//! Linear temporal logic: syntax, parsing, and exact evaluation on lasso words.
//!
//! Formulas are plain immutable trees. Evaluation is defined on ultimately
//! periodic words `prefix · cycle^ω`, which is enough to decide every LTL
//! property exactly and serves as the semantic oracle for hand-written
//! automata.

mod lasso;
mod parse;
pub mod random;

use std::collections::BTreeSet;
use std::fmt;

pub use lasso::{eval_lasso, LassoWord};
pub use parse::parse_ltl;

/// Maximum number of atomic propositions in one alphabet.
///
/// Letters are bitmasks and automaton validation enumerates all `2^|AP|`
/// letters, so this is kept small.
pub const MAX_ATOMS: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LtlError {
    #[error("syntax error at {}: {msg}", fmt_pos(*pos))]
    Syntax { pos: Option<usize>, msg: String },
    #[error("unknown token `{token}` at position {pos}")]
    UnknownToken { pos: usize, token: String },
    #[error("invalid atom name `{0}`")]
    InvalidAtom(String),
    #[error("undeclared atom `{0}`")]
    UndeclaredAtom(String),
    #[error("duplicate atom `{0}` in alphabet")]
    DuplicateAtom(String),
    #[error("alphabet has {0} atoms, at most {MAX_ATOMS} are supported")]
    TooManyAtoms(usize),
    #[error("letter {letter:#b} uses bits outside an alphabet of {atoms} atoms")]
    LetterOutOfRange { letter: u32, atoms: usize },
    #[error("lasso cycle must be nonempty")]
    EmptyCycle,
    #[error("temporal operator in propositional context: `{0}`")]
    TemporalInGuard(String),
}

fn fmt_pos(pos: Option<usize>) -> String {
    match pos {
        Some(p) => format!("position {p}"),
        None => "end of input".to_string(),
    }
}

/// An atomic proposition name.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(String);

impl Atom {
    /// Validates `[a-zA-Z][a-zA-Z0-9_]*`.
    ///
    /// Names starting with an uppercase `X`, `G` or `F` are rejected because
    /// the lexer reads those letters as prefix operators (`FGy` is `F G y`),
    /// and `U`, `true`, `false` are reserved.
    pub fn new(name: impl Into<String>) -> Result<Self, LtlError> {
        let name = name.into();
        let mut chars = name.chars();
        let ok = match chars.next() {
            Some(c) if c.is_ascii_alphabetic() => {
                !matches!(c, 'X' | 'G' | 'F')
                    && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
            }
            _ => false,
        };
        if !ok || matches!(name.as_str(), "U" | "true" | "false") {
            return Err(LtlError::InvalidAtom(name));
        }
        Ok(Atom(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A set of atoms encoded as a bitmask over an [`Alphabet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Letter(pub u32);

impl Letter {
    pub const EMPTY: Letter = Letter(0);

    pub fn contains(self, index: usize) -> bool {
        self.0 & (1 << index) != 0
    }

    pub fn with(self, index: usize) -> Letter {
        Letter(self.0 | (1 << index))
    }
}

/// An ordered list of distinct atoms; atom `i` is bit `i` of a [`Letter`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Alphabet {
    atoms: Vec<Atom>,
}

impl Alphabet {
    pub fn new(atoms: Vec<Atom>) -> Result<Self, LtlError> {
        if atoms.len() > MAX_ATOMS {
            return Err(LtlError::TooManyAtoms(atoms.len()));
        }
        for (i, a) in atoms.iter().enumerate() {
            if atoms[..i].contains(a) {
                return Err(LtlError::DuplicateAtom(a.0.clone()));
            }
        }
        Ok(Alphabet { atoms })
    }

    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Result<Self, LtlError> {
        let atoms = names
            .iter()
            .map(|n| Atom::new(n.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        Alphabet::new(atoms)
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.atoms.iter().position(|a| a.0 == name)
    }

    /// Number of letters, `2^|AP|`.
    pub fn num_letters(&self) -> u32 {
        1 << self.atoms.len()
    }

    /// All letters in increasing bitmask order.
    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        (0..self.num_letters()).map(Letter)
    }

    pub fn letter<S: AsRef<str>>(&self, names: &[S]) -> Result<Letter, LtlError> {
        let mut l = Letter::EMPTY;
        for n in names {
            let i = self
                .index_of(n.as_ref())
                .ok_or_else(|| LtlError::UndeclaredAtom(n.as_ref().to_string()))?;
            l = l.with(i);
        }
        Ok(l)
    }

    pub fn check_letter(&self, letter: Letter) -> Result<(), LtlError> {
        if letter.0 >= self.num_letters() {
            return Err(LtlError::LetterOutOfRange {
                letter: letter.0,
                atoms: self.len(),
            });
        }
        Ok(())
    }

    /// Renders a letter as `{a, b}`.
    pub fn format_letter(&self, letter: Letter) -> String {
        let names: Vec<&str> = (0..self.len())
            .filter(|&i| letter.contains(i))
            .map(|i| self.atoms[i].as_str())
            .collect();
        format!("{{{}}}", names.join(", "))
    }
}

/// LTL abstract syntax tree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Ltl {
    True,
    False,
    Atom(Atom),
    Not(Box<Ltl>),
    And(Box<Ltl>, Box<Ltl>),
    Or(Box<Ltl>, Box<Ltl>),
    Implies(Box<Ltl>, Box<Ltl>),
    Next(Box<Ltl>),
    Globally(Box<Ltl>),
    Finally(Box<Ltl>),
    Until(Box<Ltl>, Box<Ltl>),
}

impl Ltl {
    pub fn atom(name: &str) -> Result<Ltl, LtlError> {
        Ok(Ltl::Atom(Atom::new(name)?))
    }

    pub fn not(f: Ltl) -> Ltl {
        Ltl::Not(Box::new(f))
    }

    pub fn and(a: Ltl, b: Ltl) -> Ltl {
        Ltl::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Ltl, b: Ltl) -> Ltl {
        Ltl::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Ltl, b: Ltl) -> Ltl {
        Ltl::Implies(Box::new(a), Box::new(b))
    }

    pub fn next(f: Ltl) -> Ltl {
        Ltl::Next(Box::new(f))
    }

    pub fn globally(f: Ltl) -> Ltl {
        Ltl::Globally(Box::new(f))
    }

    pub fn finally(f: Ltl) -> Ltl {
        Ltl::Finally(Box::new(f))
    }

    pub fn until(a: Ltl, b: Ltl) -> Ltl {
        Ltl::Until(Box::new(a), Box::new(b))
    }

    pub fn children(&self) -> Vec<&Ltl> {
        match self {
            Ltl::True | Ltl::False | Ltl::Atom(_) => vec![],
            Ltl::Not(a) | Ltl::Next(a) | Ltl::Globally(a) | Ltl::Finally(a) => vec![a],
            Ltl::And(a, b) | Ltl::Or(a, b) | Ltl::Implies(a, b) | Ltl::Until(a, b) => {
                vec![a, b]
            }
        }
    }

    pub fn is_temporal(&self) -> bool {
        matches!(
            self,
            Ltl::Next(_) | Ltl::Globally(_) | Ltl::Finally(_) | Ltl::Until(..)
        )
    }

    /// True when no temporal operator occurs anywhere in the tree.
    pub fn is_propositional(&self) -> bool {
        !self.is_temporal() && self.children().into_iter().all(Ltl::is_propositional)
    }

    pub fn depth(&self) -> usize {
        1 + self
            .children()
            .into_iter()
            .map(Ltl::depth)
            .max()
            .unwrap_or(0)
    }

    /// Evaluates a propositional formula on a single letter.
    ///
    /// Atoms missing from `ap` are an error; temporal nodes are rejected.
    pub fn eval_letter(&self, ap: &Alphabet, letter: Letter) -> Result<bool, LtlError> {
        Ok(match self {
            Ltl::True => true,
            Ltl::False => false,
            Ltl::Atom(a) => {
                let i = ap
                    .index_of(a.as_str())
                    .ok_or_else(|| LtlError::UndeclaredAtom(a.0.clone()))?;
                letter.contains(i)
            }
            Ltl::Not(a) => !a.eval_letter(ap, letter)?,
            Ltl::And(a, b) => a.eval_letter(ap, letter)? & b.eval_letter(ap, letter)?,
            Ltl::Or(a, b) => a.eval_letter(ap, letter)? | b.eval_letter(ap, letter)?,
            Ltl::Implies(a, b) => !a.eval_letter(ap, letter)? | b.eval_letter(ap, letter)?,
            _ => return Err(LtlError::TemporalInGuard(self.to_string())),
        })
    }
}

/// The distinct atoms occurring in `phi`.
pub fn atoms_of(phi: &Ltl) -> BTreeSet<Atom> {
    let mut out = BTreeSet::new();
    let mut stack = vec![phi];
    while let Some(f) = stack.pop() {
        if let Ltl::Atom(a) = f {
            out.insert(a.clone());
        }
        stack.extend(f.children());
    }
    out
}

// Prints with explicit parentheses around every binary node so that the output
// re-parses to the same tree regardless of associativity.
impl fmt::Display for Ltl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ltl::True => f.write_str("true"),
            Ltl::False => f.write_str("false"),
            Ltl::Atom(a) => write!(f, "{a}"),
            Ltl::Not(a) => write!(f, "!{a}"),
            Ltl::Next(a) => write!(f, "X {a}"),
            Ltl::Globally(a) => write!(f, "G {a}"),
            Ltl::Finally(a) => write!(f, "F {a}"),
            Ltl::And(a, b) => write!(f, "({a} & {b})"),
            Ltl::Or(a, b) => write!(f, "({a} | {b})"),
            Ltl::Implies(a, b) => write!(f, "({a} -> {b})"),
            Ltl::Until(a, b) => write!(f, "({a} U {b})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atom_names() {
        assert!(Atom::new("food").is_ok());
        assert!(Atom::new("zone_1").is_ok());
        assert!(Atom::new("y2").is_ok());
        for bad in ["", "1a", "_a", "U", "true", "Foo", "Xa", "Ga", "a-b"] {
            assert!(Atom::new(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn atoms_of_fixtures() {
        let f = parse_ltl("FGy").unwrap();
        let names: Vec<String> = atoms_of(&f).into_iter().map(|a| a.0).collect();
        assert_eq!(names, ["y"]);

        let f = parse_ltl("GF(y & X F r) & G!b").unwrap();
        let names: Vec<String> = atoms_of(&f).into_iter().map(|a| a.0).collect();
        assert_eq!(names, ["b", "r", "y"]);

        assert!(atoms_of(&Ltl::True).is_empty());
    }

    #[test]
    fn alphabet_rejects_duplicates_and_overflow() {
        assert!(matches!(
            Alphabet::from_names(&["a", "b", "a"]),
            Err(LtlError::DuplicateAtom(_))
        ));
        let many: Vec<String> = (0..17).map(|i| format!("a{i}")).collect();
        assert!(matches!(
            Alphabet::from_names(&many),
            Err(LtlError::TooManyAtoms(17))
        ));
    }

    #[test]
    fn propositional_eval() {
        let ap = Alphabet::from_names(&["y", "b", "r"]).unwrap();
        let g = parse_ltl("!b & (y -> r)").unwrap();
        assert!(g.eval_letter(&ap, ap.letter(&["y", "r"]).unwrap()).unwrap());
        assert!(!g.eval_letter(&ap, ap.letter(&["y"]).unwrap()).unwrap());
        assert!(g.eval_letter(&ap, Letter::EMPTY).unwrap());
        let t = parse_ltl("F y").unwrap();
        assert!(matches!(
            t.eval_letter(&ap, Letter::EMPTY),
            Err(LtlError::TemporalInGuard(_))
        ));
        let u = parse_ltl("q").unwrap();
        assert!(matches!(
            u.eval_letter(&ap, Letter::EMPTY),
            Err(LtlError::UndeclaredAtom(_))
        ));
    }
}
