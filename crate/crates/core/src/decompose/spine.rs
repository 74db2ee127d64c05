//! Spine graphs: a pants block carries one loop and a handle two.

use crate::ends::{pair_homeomorphic, EndsAutomaton, Invariant, PairVerdict};
use crate::num::Extended;
use crate::surface::{BlockKind, RuleSystem, SurfacePresentation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpineGraph {
    pub rules: RuleSystem,
    /// Rank of the free fundamental group.
    pub rank: Extended,
}

pub fn loops(kind: BlockKind) -> u64 {
    match kind {
        BlockKind::Annulus => 0,
        BlockKind::Pants => 1,
        BlockKind::Handle => 2,
    }
}

impl SpineGraph {
    /// Ends of the graph, with the ends of the core X_g marked.
    pub fn automaton(&self) -> EndsAutomaton {
        EndsAutomaton::with_marking(&self.rules, |k| loops(k) > 0)
    }
}

pub fn spine(p: &SurfacePresentation) -> SpineGraph {
    let rules = p.rule_system();
    let rank = rules.weighted_total(rules.root(), loops);
    SpineGraph { rules, rank }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PheWitness {
    Rank,
    Ends(Invariant),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PheVerdict {
    Yes,
    No(PheWitness),
    Unknown,
}

/// Proper homotopy equivalence of two spine graphs: equal rank and a
/// homeomorphism of ends carrying the ends of one core onto the other.
pub fn graph_phe_equal(a: &SpineGraph, b: &SpineGraph) -> PheVerdict {
    if a.rank != b.rank {
        return PheVerdict::No(PheWitness::Rank);
    }
    match pair_homeomorphic(&a.automaton(), &b.automaton()) {
        PairVerdict::Yes(_) => PheVerdict::Yes,
        PairVerdict::No(i) => PheVerdict::No(PheWitness::Ends(i)),
        PairVerdict::Unknown => PheVerdict::Unknown,
    }
}
