use std::collections::{HashMap, VecDeque};

use rayon::prelude::*;

use super::{
    eventual_value, expected_failing_visits, satisfaction_probability, standard_value, ExactError, InducedChain,
    BOUND_SLACK,
};
use crate::env::{make_two_choice, ACTION_A, ACTION_B};
use crate::fixtures;
use crate::product::{Product, ProductAction, ProductState};

/// Largest policy space [`enumerate_optimal`] accepts.
pub const POLICY_LIMIT: u128 = 10_000;

/// Exact evaluation of one deterministic policy.
#[derive(Debug, Clone, PartialEq)]
pub struct PolicyEval {
    pub index: usize,
    /// Action per explored product state, in [`EnumerationReport::states`] order.
    pub actions: Vec<ProductAction>,
    pub p_sat: f64,
    pub eventual: f64,
    pub standard: f64,
    pub o_pi: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnumerationReport {
    pub gamma: f64,
    pub states: Vec<ProductState>,
    pub policies: Vec<PolicyEval>,
    /// `sup_π P[π ⊨ φ]`.
    pub sup_p: f64,
    pub best_prob: usize,
    /// Argmax of the eventually discounted value.
    pub best_eventual: usize,
    /// Argmax of the uniformly discounted value.
    pub best_standard: usize,
    /// `max_π O_π`.
    pub max_o: f64,
    /// `sup P - P[π*_γ ⊨ φ]`.
    pub gap: f64,
    pub standard_gap: f64,
    /// `2 log(1/γ) max O`.
    pub bound: f64,
    pub pass: bool,
}

// Lowest index among values within 1e-9 of the maximum.
fn argmax(values: impl Iterator<Item = f64> + Clone) -> usize {
    let best = values.clone().fold(f64::NEG_INFINITY, f64::max);
    values.into_iter().position(|v| v >= best - 1e-9).unwrap_or(0)
}

/// Evaluates every deterministic policy over the product states reachable
/// under some action choice, and checks
/// `sup P - P[π*_γ ⊨ φ] ≤ 2 log(1/γ) max_π O_π`.
pub fn enumerate_optimal(product: &Product, gamma: f64) -> Result<EnumerationReport, ExactError> {
    let mut index: HashMap<ProductState, usize> = HashMap::new();
    let mut states = Vec::new();
    let mut queue = VecDeque::new();
    for (z, _) in product.initial_distribution() {
        if let std::collections::hash_map::Entry::Vacant(e) = index.entry(z) {
            e.insert(states.len());
            states.push(z);
            queue.push_back(z);
        }
    }
    while let Some(z) = queue.pop_front() {
        for a in product.actions(z) {
            for (t, _) in product.transition_distribution(z, a)? {
                if let std::collections::hash_map::Entry::Vacant(e) = index.entry(t) {
                    e.insert(states.len());
                    states.push(t);
                    queue.push_back(t);
                }
            }
        }
    }
    let choices: Vec<usize> = states.iter().map(|&z| product.num_actions(z)).collect();
    let total = choices
        .iter()
        .try_fold(1u128, |acc, &c| acc.checked_mul(c as u128))
        .unwrap_or(u128::MAX);
    if total > POLICY_LIMIT {
        return Err(ExactError::TooManyPolicies(total, POLICY_LIMIT));
    }

    let policies: Vec<PolicyEval> = (0..total as usize)
        .into_par_iter()
        .map(|idx| {
            let mut rest = idx;
            let actions: Vec<ProductAction> = states
                .iter()
                .zip(&choices)
                .map(|(&z, &c)| {
                    let a = product.action_at(z, rest % c);
                    rest /= c;
                    a
                })
                .collect();
            let chain = InducedChain::from_deterministic(product, |z| actions[index[&z]])?;
            Ok(PolicyEval {
                index: idx,
                p_sat: satisfaction_probability(&chain)?,
                eventual: eventual_value(&chain, gamma)?,
                standard: standard_value(&chain, gamma)?,
                o_pi: expected_failing_visits(&chain)?,
                actions,
            })
        })
        .collect::<Result<_, ExactError>>()?;

    let best_prob = argmax(policies.iter().map(|p| p.p_sat));
    let best_eventual = argmax(policies.iter().map(|p| p.eventual));
    let best_standard = argmax(policies.iter().map(|p| p.standard));
    let sup_p = policies[best_prob].p_sat;
    let max_o = policies.iter().map(|p| p.o_pi).fold(0.0, f64::max);
    let gap = sup_p - policies[best_eventual].p_sat;
    let bound = 2.0 * (1.0 / gamma).ln() * max_o;
    Ok(EnumerationReport {
        gamma,
        sup_p,
        best_prob,
        best_eventual,
        best_standard,
        max_o,
        gap,
        standard_gap: sup_p - policies[best_standard].p_sat,
        bound,
        pass: gap <= bound + BOUND_SLACK,
        states,
        policies,
    })
}

/// Exact values of the two stationary choices of the two-choice MDP.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MyopiaReport {
    pub alpha: f64,
    pub gamma: f64,
    /// Indexed by action: `[A, B]`.
    pub eventual: [f64; 2],
    pub standard: [f64; 2],
    pub p_sat: [f64; 2],
}

impl MyopiaReport {
    pub fn argmax_eventual(&self) -> usize {
        argmax(self.eventual.iter().copied())
    }

    pub fn argmax_standard(&self) -> usize {
        argmax(self.standard.iter().copied())
    }
}

pub fn two_choice_report(alpha: f64, gamma: f64) -> Result<MyopiaReport, ExactError> {
    let env = make_two_choice(alpha).map_err(|e| ExactError::InvalidChain(e.to_string()))?;
    let aut = fixtures::two_choice();
    let product = Product::new(&env, &aut);
    let mut report = MyopiaReport {
        alpha,
        gamma,
        eventual: [0.0; 2],
        standard: [0.0; 2],
        p_sat: [0.0; 2],
    };
    for (k, choice) in [ACTION_A, ACTION_B].into_iter().enumerate() {
        // every non-start state has the single action 0
        let chain = InducedChain::from_deterministic(&product, |z| {
            ProductAction::Mdp(if z.s == 0 { choice } else { 0 })
        })?;
        report.eventual[k] = eventual_value(&chain, gamma)?;
        report.standard[k] = standard_value(&chain, gamma)?;
        report.p_sat[k] = satisfaction_probability(&chain)?;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::make_minecraft;

    #[test]
    fn myopia_closed_forms() {
        let (a, g) = (0.9, 0.99);
        let r = two_choice_report(a, g).unwrap();
        assert!((r.eventual[0] - 1.0 / (1.0 - g)).abs() < 1e-6);
        assert!((r.eventual[1] - a / (1.0 - g)).abs() < 1e-6);
        assert!((r.standard[0] - 1.0 / (1.0 - g * g)).abs() < 1e-6);
        assert!((r.standard[0] - 50.2513).abs() < 1e-4);
        assert!((r.standard[1] - a / (1.0 - g)).abs() < 1e-6);
        assert_eq!(r.p_sat, [1.0, 0.9]);
        assert_eq!((r.argmax_eventual(), r.argmax_standard()), (0, 1));
    }

    #[test]
    fn two_choice_failing_runs_never_accept() {
        let env = make_two_choice(0.9).unwrap();
        let aut = fixtures::two_choice();
        let p = Product::new(&env, &aut);
        let b = InducedChain::from_deterministic(&p, |z| ProductAction::Mdp(if z.s == 0 { 1 } else { 0 })).unwrap();
        assert_eq!(expected_failing_visits(&b).unwrap(), 0.0);
        let a = InducedChain::from_deterministic(&p, |_| ProductAction::Mdp(0)).unwrap();
        assert_eq!(expected_failing_visits(&a).unwrap(), 0.0);
    }

    #[test]
    fn enumeration_on_two_choice() {
        let env = make_two_choice(0.9).unwrap();
        let aut = fixtures::two_choice();
        let p = Product::new(&env, &aut);
        let r = enumerate_optimal(&p, 0.99).unwrap();
        assert_eq!(r.policies.len(), 2);
        assert_eq!(r.policies[r.best_eventual].actions[0], ProductAction::Mdp(0));
        assert_eq!(r.policies[r.best_standard].actions[0], ProductAction::Mdp(1));
        assert_eq!(r.gap, 0.0);
        assert!((r.standard_gap - 0.1).abs() < 1e-12);
        assert!(r.pass);
    }

    #[test]
    fn enumeration_size_limit() {
        let env = make_minecraft();
        let aut = fixtures::cycle_yb();
        let p = Product::new(&env, &aut);
        assert!(matches!(enumerate_optimal(&p, 0.9), Err(ExactError::TooManyPolicies(..))));
    }
}
