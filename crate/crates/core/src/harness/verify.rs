//! Fixed-seed property suites behind `ltlrl verify`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::env::{make_flatworld_grid, make_minecraft, make_two_choice};
use crate::exact::{enumerate_optimal, lemma1_report, random::chain};
use crate::fixtures;
use crate::lcer::{check_counterfactual, lcer_pg_offline, OnlineLcer, OnlineMode};
use crate::ldba::{accepts_lasso, Ldba};
use crate::ltl::random::lasso_word;
use crate::ltl::{eval_lasso, parse_ltl, Ltl};
use crate::product::{rollout, uniform_action, DiscountSpec, Product, ProductTrajectory};

pub const SUITES: [&str; 4] = ["lemma1", "theorem1", "lcer-equiv", "oracle"];

/// Counterexamples printed per suite.
const SHOWN: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub name: String,
    pub passed: usize,
    pub total: usize,
    pub details: Vec<String>,
    /// Serialized failing instances.
    pub counterexamples: Vec<String>,
}

impl SuiteReport {
    fn new(name: impl Into<String>) -> Self {
        SuiteReport {
            name: name.into(),
            passed: 0,
            total: 0,
            details: Vec::new(),
            counterexamples: Vec::new(),
        }
    }

    pub fn ok(&self) -> bool {
        self.passed == self.total
    }

    fn record(&mut self, pass: bool, counterexample: impl FnOnce() -> String) {
        self.total += 1;
        if pass {
            self.passed += 1;
        } else if self.counterexamples.len() < SHOWN {
            self.counterexamples.push(counterexample());
        }
    }

    pub fn render(&self) -> String {
        let mut out = format!(
            "{}: {}/{} {}\n",
            self.name,
            self.passed,
            self.total,
            if self.ok() { "ok" } else { "FAILED" }
        );
        for d in &self.details {
            out.push_str(&format!("  {d}\n"));
        }
        for c in &self.counterexamples {
            out.push_str("  counterexample:\n");
            for line in c.lines() {
                out.push_str(&format!("    {line}\n"));
            }
        }
        out
    }
}

/// Runs a suite by name, or all of them for `all`.
pub fn run_suite(name: &str) -> Option<Vec<SuiteReport>> {
    Some(match name {
        "lemma1" => vec![lemma1(200)],
        "theorem1" => vec![theorem1()],
        "lcer-equiv" => vec![lcer_equivalence(100)],
        "oracle" => oracle_fixtures(1000),
        "all" => {
            let mut v = vec![lemma1(200), theorem1(), lcer_equivalence(100)];
            v.extend(oracle_fixtures(1000));
            v
        }
        _ => return None,
    })
}

pub const LEMMA1_GAMMAS: [f64; 3] = [0.9, 0.99, 0.999];

/// `P ≤ (1−γ)V ≤ P + log(1/γ)·O` on `chains` random chains of at most 12
/// states, for each γ; a chain passes when every γ does.
pub fn lemma1(chains: usize) -> SuiteReport {
    let mut r = SuiteReport::new("lemma1");
    let mut worst = f64::NEG_INFINITY;
    for k in 0..chains {
        let mut rng = ChaCha8Rng::seed_from_u64(k as u64);
        let c = chain(&mut rng, 12);
        let mut failure = None;
        for gamma in LEMMA1_GAMMAS {
            match lemma1_report(&c, gamma) {
                Ok(b) => {
                    worst = worst.max(b.lhs - b.mid).max(b.mid - b.rhs);
                    if !b.pass && failure.is_none() {
                        failure = Some(format!("{b:?}"));
                    }
                }
                Err(e) => failure = failure.or(Some(format!("gamma {gamma}: {e}"))),
            }
        }
        r.record(failure.is_none(), || format!("chain seed {k}: {}\n{}", failure.clone().unwrap(), c.to_text()));
    }
    r.details.push(format!("max(lhs - mid, mid - rhs) over all cases: {worst:e}"));
    r
}

pub const THEOREM1_GRID: [(f64, f64); 4] = [(0.6, 0.9), (0.6, 0.99), (0.9, 0.9), (0.9, 0.99)];

/// `sup P − P[π*_γ] ≤ 2 log(1/γ)·max O` by enumerating every
/// deterministic policy of the two-choice product.
pub fn theorem1() -> SuiteReport {
    let mut r = SuiteReport::new("theorem1");
    let aut = fixtures::two_choice();
    for (alpha, gamma) in THEOREM1_GRID {
        let env = make_two_choice(alpha).expect("alpha in range");
        let p = Product::new(&env, &aut);
        match enumerate_optimal(&p, gamma) {
            Ok(rep) => {
                r.details.push(format!(
                    "alpha {alpha} gamma {gamma}: {} policies, gap {:e}, bound {:e}",
                    rep.policies.len(),
                    rep.gap,
                    rep.bound
                ));
                r.record(rep.pass, || format!("alpha {alpha} gamma {gamma}: gap {} > bound {}", rep.gap, rep.bound));
            }
            Err(e) => r.record(false, || format!("alpha {alpha} gamma {gamma}: {e}")),
        }
    }
    r
}

fn render_set(set: &std::collections::BTreeSet<ProductTrajectory>, spec: &DiscountSpec) -> String {
    set.iter().map(|t| t.to_text(spec)).collect::<Vec<_>>().join("--\n")
}

/// Offline and online counterfactual sets agree on `rollouts` random
/// rollouts of length 1 to 8, alternating between the two fixture pairs.
pub fn lcer_equivalence(rollouts: usize) -> SuiteReport {
    let mut r = SuiteReport::new("lcer-equiv");
    let flat = make_flatworld_grid(10).expect("valid resolution");
    let mc = make_minecraft();
    let (fgy, cyc) = (fixtures::fgy(), fixtures::cycle_yr());
    let products = [Product::new(&flat, &fgy), Product::new(&mc, &cyc)];
    let spec = DiscountSpec::eventual(0.99).expect("valid gamma");
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut sizes = 0;
    for i in 0..rollouts {
        let p = &products[i % 2];
        let len = rng.gen_range(1..=8);
        let traj = rollout(p, &mut uniform_action, len, &mut rng).expect("positive horizon");
        let offline = lcer_pg_offline(p, &traj);
        let online = OnlineLcer::run(p, &traj, OnlineMode::Retain);
        let consistent = offline.iter().all(|cf| check_counterfactual(p, &traj, cf).is_ok());
        sizes += offline.len();
        r.record(offline == online && consistent, || {
            format!(
                "rollout {i}:\n{}offline:\n{}online:\n{}",
                traj.to_text(&spec),
                render_set(&offline, &spec),
                render_set(&online, &spec)
            )
        });
    }
    r.details.push(format!("{sizes} counterfactual trajectories compared"));
    r
}

/// How many of `words` random lasso words the automaton and the formula
/// classify alike, plus the first few disagreements.
pub fn oracle_agreement(aut: &Ldba, phi: &Ltl, words: usize, seed: u64) -> (usize, Vec<String>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut agree = 0;
    let mut bad = Vec::new();
    for _ in 0..words {
        let w = lasso_word(&mut rng, aut.ap(), 4, 4);
        let witness = accepts_lasso(aut, &w);
        let by_formula = eval_lasso(phi, &w);
        let ok = matches!(by_formula, Ok(v) if v == witness.accepted) && witness.verify(aut, &w);
        if ok {
            agree += 1;
        } else if bad.len() < SHOWN {
            bad.push(format!("word {w}: automaton {} formula {:?}", witness.accepted, by_formula));
        }
    }
    (agree, bad)
}

pub fn oracle_fixtures(words: usize) -> Vec<SuiteReport> {
    [("fgy", fixtures::FGY), ("cycle_yr", fixtures::CYCLE_YR)]
        .into_iter()
        .map(|(name, formula)| {
            let (text, _) = fixtures::by_name(name).expect("shipped fixture");
            let aut = crate::ldba::load_ldba(text).expect("valid fixture");
            let phi = parse_ltl(formula).expect("valid formula");
            let (agree, bad) = oracle_agreement(&aut, &phi, words, 5);
            SuiteReport {
                name: format!("oracle {name} ({formula})"),
                passed: agree,
                total: words,
                details: Vec::new(),
                counterexamples: bad,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        assert!(lemma1(10).ok());
        assert!(theorem1().ok());
        assert!(lcer_equivalence(10).ok());
        assert!(oracle_fixtures(50).iter().all(SuiteReport::ok));
        assert!(run_suite("nope").is_none());
    }

    #[test]
    fn mismatch_detected() {
        let (agree, bad) = oracle_agreement(&fixtures::cycle_yr(), &parse_ltl("FGy").unwrap(), 200, 1);
        assert!(agree < 200);
        assert!(!bad.is_empty());
        let r = SuiteReport {
            name: "x".into(),
            passed: 1,
            total: 2,
            details: vec![],
            counterexamples: bad,
        };
        assert!(r.render().contains("FAILED") && r.render().contains("counterexample"));
    }
}
