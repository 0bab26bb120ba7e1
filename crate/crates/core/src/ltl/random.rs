//! Random formulas and lasso words for property suites.

use rand::Rng;

use super::{Alphabet, LassoWord, Letter, Ltl};

/// Uniform random lasso word with `|prefix| ≤ max_prefix` and
/// `1 ≤ |cycle| ≤ max_cycle`.
pub fn lasso_word<R: Rng + ?Sized>(
    rng: &mut R,
    ap: &Alphabet,
    max_prefix: usize,
    max_cycle: usize,
) -> LassoWord {
    let n = ap.num_letters();
    let plen = rng.gen_range(0..=max_prefix);
    let clen = rng.gen_range(1..=max_cycle.max(1));
    let prefix = (0..plen).map(|_| Letter(rng.gen_range(0..n))).collect();
    let cycle = (0..clen).map(|_| Letter(rng.gen_range(0..n))).collect();
    LassoWord::new(ap.clone(), prefix, cycle).expect("letters drawn in range")
}

/// Random formula of depth at most `max_depth` over the atoms of `ap`.
pub fn formula<R: Rng + ?Sized>(rng: &mut R, ap: &Alphabet, max_depth: usize) -> Ltl {
    if max_depth <= 1 || rng.gen_bool(0.25) {
        return leaf(rng, ap);
    }
    let d = max_depth - 1;
    match rng.gen_range(0..8) {
        0 => Ltl::not(formula(rng, ap, d)),
        1 => Ltl::next(formula(rng, ap, d)),
        2 => Ltl::globally(formula(rng, ap, d)),
        3 => Ltl::finally(formula(rng, ap, d)),
        4 => Ltl::and(formula(rng, ap, d), formula(rng, ap, d)),
        5 => Ltl::or(formula(rng, ap, d), formula(rng, ap, d)),
        6 => Ltl::implies(formula(rng, ap, d), formula(rng, ap, d)),
        _ => Ltl::until(formula(rng, ap, d), formula(rng, ap, d)),
    }
}

fn leaf<R: Rng + ?Sized>(rng: &mut R, ap: &Alphabet) -> Ltl {
    if ap.is_empty() || rng.gen_bool(0.1) {
        return if rng.gen_bool(0.5) { Ltl::True } else { Ltl::False };
    }
    let i = rng.gen_range(0..ap.len());
    Ltl::Atom(ap.atoms()[i].clone())
}
