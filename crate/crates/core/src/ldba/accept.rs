use std::collections::VecDeque;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use super::Ldba;
use crate::ltl::LassoWord;

/// How a run leaves a node of the (state, position) graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RunEdge {
    /// Read the letter at the current position.
    Consume,
    /// Take jump `ε_i` without reading.
    Jump(usize),
}

/// One node of a run together with the edge taken out of it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RunStep {
    pub state: usize,
    pub pos: usize,
    pub edge: RunEdge,
}

impl RunStep {
    pub fn consumed(&self) -> bool {
        self.edge == RunEdge::Consume
    }
}

/// Result of [`accepts_lasso`]. When accepted, `stem` leads from
/// `(initial, 0)` to the first node of `cycle`, and `cycle` returns to it.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LassoAcceptanceWitness {
    pub accepted: bool,
    pub stem: Vec<RunStep>,
    pub cycle: Vec<RunStep>,
}

impl LassoAcceptanceWitness {
    /// Replays the witness through `step_sigma`/`step_jump` and checks that it
    /// is a closed run that visits an accepting state and reads at least one
    /// letter per cycle.
    pub fn verify(&self, aut: &Ldba, w: &LassoWord) -> bool {
        if !self.accepted {
            return self.stem.is_empty() && self.cycle.is_empty();
        }
        let Some(first) = self.cycle.first() else {
            return false;
        };
        let mut cur = (aut.initial(), 0);
        for step in self.stem.iter().chain(&self.cycle) {
            if (step.state, step.pos) != cur {
                return false;
            }
            cur = match next_node(aut, w, step) {
                Some(n) => n,
                None => return false,
            };
        }
        cur == (first.state, first.pos)
            && self.cycle.iter().any(|s| aut.is_accepting(s.state))
            && self.cycle.iter().any(RunStep::consumed)
    }
}

fn next_node(aut: &Ldba, w: &LassoWord, step: &RunStep) -> Option<(usize, usize)> {
    match step.edge {
        RunEdge::Consume => Some((
            aut.step_sigma(step.state, w.letter_at(step.pos)),
            w.succ(step.pos),
        )),
        RunEdge::Jump(i) => aut.step_jump(step.state, i).ok().map(|t| (t, step.pos)),
    }
}

/// Decides whether some run of `aut` on `w` is accepting.
///
/// Runs live on the finite graph of nodes `(state, position)`, with consuming
/// Σ-edges and non-consuming jump edges. The word is accepted iff a strongly
/// connected component reachable from `(initial, 0)` contains an accepting
/// node and at least one consuming edge.
pub fn accepts_lasso(aut: &Ldba, w: &LassoWord) -> LassoAcceptanceWitness {
    let k = w.positions();
    let n = aut.num_states();
    let id = |b: usize, i: usize| b * k + i;

    let mut graph: DiGraph<(usize, usize), RunEdge> = DiGraph::with_capacity(n * k, n * k * 2);
    for b in 0..n {
        for i in 0..k {
            graph.add_node((b, i));
        }
    }
    for b in 0..n {
        for i in 0..k {
            let src = NodeIndex::new(id(b, i));
            let t = aut.step_sigma(b, w.letter_at(i));
            graph.add_edge(src, NodeIndex::new(id(t, w.succ(i))), RunEdge::Consume);
            for (j, &t) in aut.jumps(b).iter().enumerate() {
                graph.add_edge(src, NodeIndex::new(id(t, i)), RunEdge::Jump(j));
            }
        }
    }

    let start = NodeIndex::new(id(aut.initial(), 0));
    let reach = bfs_parents(&graph, start, |_| true);

    let mut comp = vec![usize::MAX; graph.node_count()];
    let sccs = tarjan_scc(&graph);
    for (c, members) in sccs.iter().enumerate() {
        for v in members {
            comp[v.index()] = c;
        }
    }

    for (c, members) in sccs.iter().enumerate() {
        if !members.iter().any(|v| reach[v.index()].is_some()) {
            continue;
        }
        let Some(&acc) = members.iter().find(|v| aut.is_accepting(graph[**v].0)) else {
            continue;
        };
        let consuming = graph.edge_indices().find(|&e| {
            let (u, v) = graph.edge_endpoints(e).unwrap();
            graph[e] == RunEdge::Consume && comp[u.index()] == c && comp[v.index()] == c
        });
        let Some(e) = consuming else { continue };
        let (u, v) = graph.edge_endpoints(e).unwrap();

        let stem = path(&graph, &reach, start, acc);
        let inside = |x: NodeIndex| comp[x.index()] == c;
        let to_u = path(&graph, &bfs_parents(&graph, acc, inside), acc, u);
        let back = path(&graph, &bfs_parents(&graph, v, inside), v, acc);
        let mut cycle = to_u;
        cycle.push(RunStep {
            state: graph[u].0,
            pos: graph[u].1,
            edge: RunEdge::Consume,
        });
        cycle.extend(back);
        return LassoAcceptanceWitness {
            accepted: true,
            stem,
            cycle,
        };
    }
    LassoAcceptanceWitness::default()
}

type Parents = Vec<Option<(NodeIndex, RunEdge)>>;

// BFS tree restricted to nodes satisfying `allow`; the root is its own parent.
fn bfs_parents(
    graph: &DiGraph<(usize, usize), RunEdge>,
    root: NodeIndex,
    allow: impl Fn(NodeIndex) -> bool,
) -> Parents {
    let mut parent: Parents = vec![None; graph.node_count()];
    parent[root.index()] = Some((root, RunEdge::Consume));
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for e in graph.edges(u) {
            use petgraph::visit::EdgeRef;
            let v = e.target();
            if parent[v.index()].is_none() && allow(v) {
                parent[v.index()] = Some((u, *e.weight()));
                queue.push_back(v);
            }
        }
    }
    parent
}

// Steps from `from` up to (excluding) `to`, following BFS parents.
fn path(
    graph: &DiGraph<(usize, usize), RunEdge>,
    parents: &Parents,
    from: NodeIndex,
    to: NodeIndex,
) -> Vec<RunStep> {
    let mut steps = Vec::new();
    let mut cur = to;
    while cur != from {
        let (p, edge) = parents[cur.index()].expect("target reachable");
        let (state, pos) = graph[p];
        steps.push(RunStep { state, pos, edge });
        cur = p;
    }
    steps.reverse();
    steps
}
