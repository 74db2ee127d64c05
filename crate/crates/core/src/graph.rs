//! Small digraph utilities over adjacency lists with multiplicity.

use alloc::vec;
use alloc::vec::Vec;
use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

/// Strongly connected components, listed sinks first.
pub(crate) struct Sccs {
    pub comp_of: Vec<usize>,
    pub comps: Vec<Vec<usize>>,
}

impl Sccs {
    pub fn new(children: &[Vec<usize>]) -> Sccs {
        let mut g: DiGraph<(), ()> = DiGraph::with_capacity(children.len(), 0);
        for _ in 0..children.len() {
            g.add_node(());
        }
        for (s, cs) in children.iter().enumerate() {
            for &c in cs {
                g.add_edge(NodeIndex::new(s), NodeIndex::new(c), ());
            }
        }
        let mut comps: Vec<Vec<usize>> = tarjan_scc(&g)
            .into_iter()
            .map(|c| {
                let mut v: Vec<usize> = c.into_iter().map(|n| n.index()).collect();
                v.sort_unstable();
                v
            })
            .collect();
        // tarjan_scc yields reverse topological order already; keep it.
        let mut comp_of = vec![0; children.len()];
        for (i, c) in comps.iter_mut().enumerate() {
            for &s in c.iter() {
                comp_of[s] = i;
            }
        }
        Sccs { comp_of, comps }
    }

    /// Number of child slots of `s` that stay inside its component.
    pub fn internal_slots(&self, children: &[Vec<usize>], s: usize) -> usize {
        children[s]
            .iter()
            .filter(|&&c| self.comp_of[c] == self.comp_of[s])
            .count()
    }

    pub fn is_cyclic(&self, children: &[Vec<usize>], comp: usize) -> bool {
        self.comps[comp]
            .iter()
            .any(|&s| self.internal_slots(children, s) > 0)
    }
}

pub(crate) fn reachable(children: &[Vec<usize>], starts: &[usize]) -> Vec<bool> {
    let mut seen = vec![false; children.len()];
    let mut stack: Vec<usize> = starts.to_vec();
    while let Some(s) = stack.pop() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        stack.extend(children[s].iter().copied().filter(|&c| !seen[c]));
    }
    seen
}

/// States from which some state in `target` is reachable (including targets).
pub(crate) fn can_reach(children: &[Vec<usize>], target: &[bool]) -> Vec<bool> {
    let n = children.len();
    let mut parents: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (s, cs) in children.iter().enumerate() {
        for &c in cs {
            parents[c].push(s);
        }
    }
    let mut out = target.to_vec();
    let mut stack: Vec<usize> = (0..n).filter(|&s| target[s]).collect();
    while let Some(s) = stack.pop() {
        for &p in &parents[s] {
            if !out[p] {
                out[p] = true;
                stack.push(p);
            }
        }
    }
    out
}
