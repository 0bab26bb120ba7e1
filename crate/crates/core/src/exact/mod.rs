//! Exact analysis of fixed policies on finite product instances.
//!
//! A policy fixed on a product induces a finite Markov chain over product
//! states. On that chain we compute the satisfaction probability (absorption
//! into bottom SCCs containing an accepting state), the eventually discounted
//! value, the uniformly discounted value, and the expected number of
//! accepting visits on failing runs. Accepting visits are counted on arrival,
//! so the initial state never earns a reward.

mod enumerate;
pub mod random;

pub use enumerate::{enumerate_optimal, two_choice_report, EnumerationReport, MyopiaReport, PolicyEval};

use std::collections::{HashMap, VecDeque};

use nalgebra::{DMatrix, DVector};
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::Serialize;

use crate::product::{Product, ProductAction, ProductError, ProductState};

/// Absolute tolerance of the eventual-value fixpoint.
pub const VALUE_TOLERANCE: f64 = 1e-10;
/// Sweep limit of the eventual-value fixpoint.
pub const MAX_SWEEPS: usize = 10_000_000;
/// Slack allowed in the bound checks.
pub const BOUND_SLACK: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExactError {
    #[error("row {row} sums to {sum}, expected 1")]
    NotStochastic { row: usize, sum: f64 },
    #[error("invalid chain: {0}")]
    InvalidChain(String),
    #[error("transient system is singular")]
    Singular,
    #[error("value iteration did not converge within {0} sweeps")]
    IterationLimit(usize),
    #[error("{0} deterministic policies exceed the enumeration limit of {1}")]
    TooManyPolicies(u128, u128),
    #[error(transparent)]
    Product(#[from] ProductError),
}

/// A finite Markov chain with an accepting mask.
#[derive(Debug, Clone, PartialEq)]
pub struct InducedChain {
    rows: Vec<Vec<(usize, f64)>>,
    accepting: Vec<bool>,
    initial: Vec<(usize, f64)>,
    states: Vec<ProductState>,
}

impl InducedChain {
    /// Builds a chain from sparse rows; every row must sum to one within 1e-12.
    pub fn new(rows: Vec<Vec<(usize, f64)>>, accepting: Vec<bool>, initial: Vec<(usize, f64)>) -> Result<Self, ExactError> {
        let n = rows.len();
        if n == 0 || accepting.len() != n {
            return Err(ExactError::InvalidChain(format!(
                "{n} rows but {} accepting flags",
                accepting.len()
            )));
        }
        for (row, r) in rows.iter().enumerate() {
            let sum: f64 = r.iter().map(|x| x.1).sum();
            if (sum - 1.0).abs() > 1e-12 {
                return Err(ExactError::NotStochastic { row, sum });
            }
            if r.iter().any(|&(t, p)| t >= n || p < 0.0) {
                return Err(ExactError::InvalidChain(format!("row {row} has an invalid entry")));
            }
        }
        let total: f64 = initial.iter().map(|x| x.1).sum();
        if (total - 1.0).abs() > 1e-12 || initial.iter().any(|&(s, _)| s >= n) {
            return Err(ExactError::InvalidChain("initial distribution".into()));
        }
        Ok(InducedChain {
            rows,
            accepting,
            initial,
            states: Vec::new(),
        })
    }

    /// The chain induced on the reachable part of `product` by a stochastic
    /// policy given as a distribution over available actions.
    pub fn from_policy(
        product: &Product,
        policy: impl Fn(ProductState) -> Vec<(ProductAction, f64)>,
    ) -> Result<Self, ExactError> {
        let mut index: HashMap<ProductState, usize> = HashMap::new();
        let mut states = Vec::new();
        let mut queue = VecDeque::new();
        let mut intern = |z: ProductState, states: &mut Vec<ProductState>, queue: &mut VecDeque<usize>| {
            *index.entry(z).or_insert_with(|| {
                states.push(z);
                queue.push_back(states.len() - 1);
                states.len() - 1
            })
        };
        let initial: Vec<(usize, f64)> = product
            .initial_distribution()
            .into_iter()
            .map(|(z, p)| (intern(z, &mut states, &mut queue), p))
            .collect();
        let mut rows: Vec<Vec<(usize, f64)>> = Vec::new();
        while let Some(i) = queue.pop_front() {
            let z = states[i];
            let mut row: Vec<(usize, f64)> = Vec::new();
            for (a, pa) in policy(z) {
                if pa <= 0.0 {
                    continue;
                }
                for (t, pt) in product.transition_distribution(z, a)? {
                    let j = intern(t, &mut states, &mut queue);
                    match row.iter_mut().find(|e| e.0 == j) {
                        Some(e) => e.1 += pa * pt,
                        None => row.push((j, pa * pt)),
                    }
                }
            }
            if rows.len() <= i {
                rows.resize(i + 1, Vec::new());
            }
            rows[i] = row;
        }
        rows.resize(states.len(), Vec::new());
        let accepting = states.iter().map(|&z| product.is_accepting(z)).collect();
        let mut chain = InducedChain::new(rows, accepting, initial)?;
        chain.states = states;
        Ok(chain)
    }

    /// Chain of a deterministic policy.
    pub fn from_deterministic(product: &Product, policy: impl Fn(ProductState) -> ProductAction) -> Result<Self, ExactError> {
        Self::from_policy(product, |z| vec![(policy(z), 1.0)])
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[Vec<(usize, f64)>] {
        &self.rows
    }

    pub fn accepting(&self) -> &[bool] {
        &self.accepting
    }

    pub fn initial(&self) -> &[(usize, f64)] {
        &self.initial
    }

    /// `initial:` line, then one `i [acc] : j p ...` line per state.
    pub fn to_text(&self) -> String {
        let pairs = |r: &[(usize, f64)]| r.iter().map(|(j, p)| format!("{j} {p}")).collect::<Vec<_>>().join(" ");
        let mut out = format!("initial: {}\n", pairs(&self.initial));
        for (i, r) in self.rows.iter().enumerate() {
            let acc = if self.accepting[i] { " acc" } else { "" };
            out.push_str(&format!("{i}{acc} : {}\n", pairs(r)));
        }
        out
    }

    /// Product states behind the chain indices (empty for synthetic chains).
    pub fn states(&self) -> &[ProductState] {
        &self.states
    }

    /// For every state, the index of its bottom SCC, or `None` if transient.
    pub fn bottom_components(&self) -> (Vec<Option<usize>>, Vec<Vec<usize>>) {
        let mut g: DiGraph<(), ()> = DiGraph::new();
        let nodes: Vec<_> = (0..self.len()).map(|_| g.add_node(())).collect();
        for (i, r) in self.rows.iter().enumerate() {
            for &(j, p) in r {
                if p > 0.0 {
                    g.add_edge(nodes[i], nodes[j], ());
                }
            }
        }
        let mut comp = vec![0; self.len()];
        let sccs = tarjan_scc(&g);
        for (c, members) in sccs.iter().enumerate() {
            for v in members {
                comp[v.index()] = c;
            }
        }
        let mut of = vec![None; self.len()];
        let mut bottoms = Vec::new();
        for members in &sccs {
            let ids: Vec<usize> = members.iter().map(|v| v.index()).collect();
            let closed = ids
                .iter()
                .all(|&i| self.rows[i].iter().all(|&(j, p)| p <= 0.0 || comp[j] == comp[i]));
            if closed {
                let mut ids = ids;
                ids.sort_unstable();
                for &i in &ids {
                    of[i] = Some(bottoms.len());
                }
                bottoms.push(ids);
            }
        }
        (of, bottoms)
    }
}

// Transient/recurrent split shared by the linear solves.
struct Absorption {
    transient: Vec<usize>,
    position: Vec<Option<usize>>,
    // per state: probability of ending in a good bottom SCC
    good: Vec<f64>,
    // I - P_TT
    system: DMatrix<f64>,
}

fn absorption(chain: &InducedChain) -> Result<Absorption, ExactError> {
    let (of, bottoms) = chain.bottom_components();
    let good_bottom: Vec<bool> = bottoms.iter().map(|m| m.iter().any(|&i| chain.accepting[i])).collect();
    let transient: Vec<usize> = (0..chain.len()).filter(|&i| of[i].is_none()).collect();
    let mut position = vec![None; chain.len()];
    for (k, &i) in transient.iter().enumerate() {
        position[i] = Some(k);
    }
    let m = transient.len();
    let mut a = DMatrix::<f64>::identity(m, m);
    let mut rhs = DVector::<f64>::zeros(m);
    for (k, &i) in transient.iter().enumerate() {
        for &(j, p) in &chain.rows[i] {
            match (position[j], of[j]) {
                (Some(l), _) => a[(k, l)] -= p,
                (None, Some(c)) if good_bottom[c] => rhs[k] += p,
                _ => {}
            }
        }
    }
    let x = if m == 0 {
        DVector::zeros(0)
    } else {
        a.clone().lu().solve(&rhs).ok_or(ExactError::Singular)?
    };
    if x.iter().any(|v| !v.is_finite()) {
        return Err(ExactError::Singular);
    }
    let good = (0..chain.len())
        .map(|i| match (position[i], of[i]) {
            (Some(k), _) => x[k].clamp(0.0, 1.0),
            (None, Some(c)) => good_bottom[c] as u8 as f64,
            (None, None) => unreachable!("every state is transient or bottom"),
        })
        .collect();
    Ok(Absorption {
        transient,
        position,
        good,
        system: a,
    })
}

/// `P[π ⊨ φ]`: probability of absorption into a bottom SCC that contains an
/// accepting state.
pub fn satisfaction_probability(chain: &InducedChain) -> Result<f64, ExactError> {
    let abs = absorption(chain)?;
    Ok(chain.initial.iter().map(|&(s, p)| p * abs.good[s]).sum::<f64>().clamp(0.0, 1.0))
}

/// Eventually discounted value from the initial distribution.
///
/// Gauss-Seidel iteration of `V(z) = Σ P(z,z') [acc(z') + γ(z') V(z')]` from
/// zero. The iterates increase monotonically to the least fixpoint, which is
/// the value even where `I - D_γ P` is singular.
pub fn eventual_value(chain: &InducedChain, gamma: f64) -> Result<f64, ExactError> {
    let v = eventual_values(chain, gamma)?;
    Ok(chain.initial.iter().map(|&(s, p)| p * v[s]).sum())
}

/// Per-state eventually discounted values.
pub fn eventual_values(chain: &InducedChain, gamma: f64) -> Result<Vec<f64>, ExactError> {
    let disc: Vec<f64> = chain.accepting.iter().map(|&a| if a { gamma } else { 1.0 }).collect();
    let reward: Vec<f64> = chain.accepting.iter().map(|&a| a as u8 as f64).collect();
    let mut v = vec![0.0; chain.len()];
    for _ in 0..MAX_SWEEPS {
        let mut delta: f64 = 0.0;
        for i in 0..chain.len() {
            let new: f64 = chain.rows[i].iter().map(|&(j, p)| p * (reward[j] + disc[j] * v[j])).sum();
            delta = delta.max((new - v[i]).abs());
            v[i] = new;
        }
        if delta < VALUE_TOLERANCE {
            return Ok(v);
        }
    }
    Err(ExactError::IterationLimit(MAX_SWEEPS))
}

/// Uniformly discounted value: solves `(I - γP) V = P·acc`.
pub fn standard_value(chain: &InducedChain, gamma: f64) -> Result<f64, ExactError> {
    let n = chain.len();
    let mut a = DMatrix::<f64>::identity(n, n);
    let mut rhs = DVector::<f64>::zeros(n);
    for (i, r) in chain.rows.iter().enumerate() {
        for &(j, p) in r {
            a[(i, j)] -= gamma * p;
            if chain.accepting[j] {
                rhs[i] += p;
            }
        }
    }
    let v = a.lu().solve(&rhs).ok_or(ExactError::Singular)?;
    Ok(chain.initial.iter().map(|&(s, p)| p * v[s]).sum())
}

/// `O_π = E[|O(τ)| | τ ⊭ φ]`, the expected number of accepting arrivals on
/// failing runs; zero when no run fails.
pub fn expected_failing_visits(chain: &InducedChain) -> Result<f64, ExactError> {
    let abs = absorption(chain)?;
    let p_fail = 1.0 - chain.initial.iter().map(|&(s, p)| p * abs.good[s]).sum::<f64>();
    if p_fail <= 1e-12 || abs.transient.is_empty() {
        return Ok(0.0);
    }
    // Visits at t ≥ 1: η' = d0_T P_TT (I - P_TT)^{-1}; solve the transpose
    // system (I - P_TT)^T η' = (d0_T P_TT)^T.
    let m = abs.transient.len();
    let mut start = DVector::<f64>::zeros(m);
    for &(s, p) in &chain.initial {
        if abs.position[s].is_none() {
            continue;
        }
        for &(j, q) in &chain.rows[s] {
            if let Some(l) = abs.position[j] {
                start[l] += p * q;
            }
        }
    }
    let eta = abs.system.transpose().lu().solve(&start).ok_or(ExactError::Singular)?;
    let joint: f64 = abs
        .transient
        .iter()
        .enumerate()
        .filter(|(_, &i)| chain.accepting[i])
        .map(|(k, &i)| eta[k] * (1.0 - abs.good[i]))
        .sum();
    Ok((joint / p_fail).max(0.0))
}

/// One row of the sandwich `P ≤ (1-γ)V ≤ P + log(1/γ)·O`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundReport {
    pub p_sat: f64,
    pub v_gamma: f64,
    pub o_pi: f64,
    pub gamma: f64,
    pub lhs: f64,
    pub mid: f64,
    pub rhs: f64,
    pub pass: bool,
}

impl BoundReport {
    pub const HEADER: [&'static str; 8] = ["p_sat", "v_gamma", "o_pi", "gamma", "lhs", "mid", "rhs", "pass"];
}

pub fn lemma1_report(chain: &InducedChain, gamma: f64) -> Result<BoundReport, ExactError> {
    let p_sat = satisfaction_probability(chain)?;
    let v_gamma = eventual_value(chain, gamma)?;
    let o_pi = expected_failing_visits(chain)?;
    let lhs = p_sat;
    let mid = (1.0 - gamma) * v_gamma;
    let rhs = p_sat + (1.0 / gamma).ln() * o_pi;
    Ok(BoundReport {
        p_sat,
        v_gamma,
        o_pi,
        gamma,
        lhs,
        mid,
        rhs,
        pass: lhs <= mid + BOUND_SLACK && mid <= rhs + BOUND_SLACK,
    })
}
