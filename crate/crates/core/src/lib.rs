//! Reinforcement learning for LTL objectives under eventual discounting.
//!
//! The pipeline runs an environment ([`env`]) in lockstep with a
//! limit-deterministic Büchi automaton ([`ldba`]) to form a product process
//! ([`product`]). Learners ([`learn`]) optimize the eventually discounted
//! return, optionally with counterfactual experience generated from the
//! automaton ([`lcer`]). [`exact`] computes satisfaction probabilities and
//! values of fixed policies on finite instances.

pub mod env;
pub mod exact;
pub mod fixtures;
pub mod harness;
pub mod lcer;
pub mod learn;
pub mod ldba;
pub mod ltl;
pub mod product;
