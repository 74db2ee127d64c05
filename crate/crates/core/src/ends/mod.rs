//! Spaces of ends as infinite root paths of a finite automaton.
//!
//! An end is an infinite path from the root through the rule graph. The
//! non-planar ends are the paths that stay inside states from which a handle
//! is still reachable. That set is closed, and a path lies in it exactly when
//! it meets handles infinitely often.

mod classes;
mod expr;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{self, Sccs};
use crate::num::Extended;
use crate::surface::{BlockKind, RuleSystem, SurfacePresentation};

pub use classes::{pair_homeomorphic, Fragment, Invariant, PairVerdict};
pub use expr::{parse_end_expr, EndExpr, ExprError, Planarity};

pub const DEFAULT_RANK_CUTOFF: u32 = 16;

/// Finite automaton whose infinite root paths are the ends of a surface.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndsAutomaton {
    pub states: Vec<String>,
    pub kinds: Vec<BlockKind>,
    pub children: Vec<Vec<usize>>,
    pub root: usize,
    /// States whose paths may still be non-planar.
    pub marked: Vec<bool>,
}

impl EndsAutomaton {
    pub fn from_rules(sys: &RuleSystem) -> EndsAutomaton {
        EndsAutomaton::with_marking(sys, |k| k == BlockKind::Handle)
    }

    /// Marks every state that can reach a block with `loop_kind(kind)`.
    pub fn with_marking(sys: &RuleSystem, loop_kind: impl Fn(BlockKind) -> bool) -> EndsAutomaton {
        let children = sys.children();
        let target: Vec<bool> = (0..sys.len()).map(|s| loop_kind(sys.kind(s))).collect();
        EndsAutomaton {
            states: sys.rules().iter().map(|r| r.name.clone()).collect(),
            kinds: sys.rules().iter().map(|r| r.kind).collect(),
            marked: graph::can_reach(&children, &target),
            children,
            root: sys.root(),
        }
    }

    pub fn nonplanar_states(&self) -> Vec<usize> {
        (0..self.states.len()).filter(|&s| self.marked[s]).collect()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.children
            .iter()
            .enumerate()
            .flat_map(|(s, cs)| cs.iter().map(move |&c| (s, c)))
            .collect()
    }

    fn space(&self) -> Space {
        Space::new(&self.children, &vec![true; self.states.len()], &self.marked, &[self.root])
    }

    fn nonplanar_space(&self) -> Space {
        let all = vec![true; self.states.len()];
        Space::new(&self.children, &self.marked, &all, &[self.root])
    }

    pub fn profile(&self) -> EndsProfile {
        self.space().profile()
    }

    /// Profile of the non-planar ends taken as a space of their own.
    pub fn nonplanar_profile(&self) -> EndsProfile {
        self.nonplanar_space().profile()
    }

    pub fn invariants(&self) -> EndsInvariants {
        EndsInvariants {
            ends: self.profile(),
            nonplanar: self.nonplanar_profile(),
        }
    }

    pub fn cardinality(&self) -> Cardinality {
        self.profile().cardinality()
    }

    pub fn cb_report(&self, marking: Marking, cutoff: u32) -> Result<CbReport, EndsError> {
        match marking {
            Marking::All => self.profile().cb_report(cutoff),
            Marking::NonplanarOnly => self.nonplanar_profile().cb_report(cutoff),
        }
    }

    /// Expression for the ends pair, when the automaton is in the fragment
    /// built from lassos and full branching blocks.
    pub fn to_end_expr(&self) -> Result<EndExpr, EndsError> {
        self.space().to_end_expr().map(|e| e.normalize())
    }
}

pub fn ends_automaton(p: &SurfacePresentation) -> EndsAutomaton {
    EndsAutomaton::from_rules(&p.rule_system())
}

pub fn ends_count(p: &SurfacePresentation) -> Cardinality {
    ends_automaton(p).cardinality()
}

/// A state whose future is a single annulus lasso, found breadth first.
pub fn find_isolated_planar_end(p: &SurfacePresentation) -> Option<String> {
    let sys = p.rule_system();
    let shape_order = bfs_order(&sys);
    shape_order
        .into_iter()
        .find(|&s| sys.pure_annulus(s))
        .map(|s| String::from(sys.name(s)))
}

fn bfs_order(sys: &RuleSystem) -> Vec<usize> {
    let mut seen = vec![false; sys.len()];
    let mut order = vec![sys.root()];
    seen[sys.root()] = true;
    let mut i = 0;
    while i < order.len() {
        for &c in &sys.rules()[order[i]].children {
            if !seen[c] {
                seen[c] = true;
                order.push(c);
            }
        }
        i += 1;
    }
    order
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Marking {
    All,
    NonplanarOnly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Cardinality {
    Finite(u64),
    CountablyInfinite,
    Uncountable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CbRank {
    Exact(u32),
    AtLeast(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CbReport {
    pub rank: CbRank,
    /// Number of points left at the last non-empty scattered derivative.
    pub degree: Extended,
    pub perfect_kernel: bool,
    pub cardinality: Cardinality,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EndsError {
    #[error("Cantor-Bendixson rank exceeds the cutoff {}", cutoff_of(.0))]
    RankCutoffExceeded(CbReport),
    #[error("automaton is outside the expression fragment")]
    NotConvertible,
}

fn cutoff_of(r: &CbReport) -> u32 {
    match r.rank {
        CbRank::Exact(n) | CbRank::AtLeast(n) => n,
    }
}

/// Counts of scattered points by Cantor-Bendixson rank, and kernel flags.
/// The `marked_*` fields restrict to non-planar points.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct EndsProfile {
    pub ranks: BTreeMap<u32, Extended>,
    pub kernel: bool,
    pub marked_ranks: BTreeMap<u32, Extended>,
    pub marked_kernel: bool,
    pub all_marked: bool,
}

impl EndsProfile {
    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty() && !self.kernel
    }

    pub fn cardinality(&self) -> Cardinality {
        if self.kernel {
            return Cardinality::Uncountable;
        }
        match self.ranks.values().copied().sum::<Extended>() {
            Extended::Finite(n) => Cardinality::Finite(n),
            Extended::Infinite => Cardinality::CountablyInfinite,
        }
    }

    pub fn marked_cardinality(&self) -> Cardinality {
        if self.marked_kernel {
            return Cardinality::Uncountable;
        }
        match self.marked_ranks.values().copied().sum::<Extended>() {
            Extended::Finite(n) => Cardinality::Finite(n),
            Extended::Infinite => Cardinality::CountablyInfinite,
        }
    }

    pub fn cb_report(&self, cutoff: u32) -> Result<CbReport, EndsError> {
        let (rank, degree) = match self.ranks.iter().next_back() {
            Some((&r, &d)) => (r + 1, d),
            None => (0, Extended::ZERO),
        };
        let report = CbReport {
            rank: CbRank::Exact(rank),
            degree,
            perfect_kernel: self.kernel,
            cardinality: self.cardinality(),
        };
        if rank > cutoff {
            return Err(EndsError::RankCutoffExceeded(CbReport {
                rank: CbRank::AtLeast(cutoff),
                ..report
            }));
        }
        Ok(report)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndsInvariants {
    pub ends: EndsProfile,
    pub nonplanar: EndsProfile,
}

// ---------------------------------------------------------------------------
// Path-space analysis

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum CompKind {
    Trivial,
    Cycle,
    Branching,
}

/// The infinite paths from `root` that stay in `allowed` states.
pub(crate) struct Space {
    pub children: Vec<Vec<usize>>,
    pub live: Vec<bool>,
    pub sccs: Sccs,
    pub kind: Vec<CompKind>,
    pub flag: Vec<bool>,
    pub reaches_branching: Vec<bool>,
    pub rank: Vec<Option<u32>>,
    pub arrivals: Vec<Extended>,
    pub root: Option<usize>,
}

impl Space {
    pub fn new(children: &[Vec<usize>], allowed: &[bool], marked: &[bool], roots: &[usize]) -> Space {
        let n = children.len();
        let mut live = allowed.to_vec();
        loop {
            let mut changed = false;
            for s in 0..n {
                if live[s] && !children[s].iter().any(|&c| live[c]) {
                    live[s] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let restricted: Vec<Vec<usize>> = (0..n)
            .map(|s| {
                if live[s] {
                    children[s].iter().copied().filter(|&c| live[c]).collect()
                } else {
                    Vec::new()
                }
            })
            .collect();
        let starts: Vec<usize> = roots.iter().copied().filter(|&r| live[r]).collect();
        let reach = graph::reachable(&restricted, &starts);
        for s in 0..n {
            live[s] = live[s] && reach[s];
        }
        let restricted: Vec<Vec<usize>> = (0..n)
            .map(|s| if live[s] { restricted[s].clone() } else { Vec::new() })
            .collect();
        let sccs = Sccs::new(&restricted);
        let m = sccs.comps.len();
        let mut kind = vec![CompKind::Trivial; m];
        let mut flag = vec![false; m];
        for c in 0..m {
            let slots: Vec<usize> = sccs.comps[c]
                .iter()
                .map(|&s| sccs.internal_slots(&restricted, s))
                .collect();
            kind[c] = if slots.iter().all(|&k| k == 0) {
                CompKind::Trivial
            } else if slots.iter().all(|&k| k == 1) {
                CompKind::Cycle
            } else {
                CompKind::Branching
            };
            flag[c] = sccs.comps[c].iter().any(|&s| marked[s]);
        }
        let mut reaches_branching = vec![false; m];
        let mut below: Vec<Option<u32>> = vec![None; m];
        let mut rank: Vec<Option<u32>> = vec![None; m];
        for c in 0..m {
            let mut rb = kind[c] == CompKind::Branching;
            let mut best: Option<u32> = None;
            for &s in &sccs.comps[c] {
                for &t in &restricted[s] {
                    let d = sccs.comp_of[t];
                    if d == c {
                        continue;
                    }
                    rb |= reaches_branching[d];
                    let via = match (rank[d], below[d]) {
                        (Some(r), b) => Some(b.map_or(r, |b| b.max(r))),
                        (None, b) => b,
                    };
                    best = best.max(via);
                }
            }
            reaches_branching[c] = rb;
            below[c] = best;
            if kind[c] == CompKind::Cycle && !rb {
                rank[c] = Some(best.map_or(0, |b| b + 1));
            }
        }
        // Entries into each component, sources first.
        let mut arrivals = vec![Extended::ZERO; m];
        for &r in &starts {
            arrivals[sccs.comp_of[r]] = arrivals[sccs.comp_of[r]] + Extended::ONE;
        }
        for c in (0..m).rev() {
            let out = if kind[c] == CompKind::Trivial {
                arrivals[c]
            } else if arrivals[c] == Extended::ZERO {
                Extended::ZERO
            } else {
                Extended::Infinite
            };
            for &s in &sccs.comps[c] {
                for &t in &restricted[s] {
                    let d = sccs.comp_of[t];
                    if d != c {
                        arrivals[d] = arrivals[d] + out;
                    }
                }
            }
        }
        let root = roots.first().copied().filter(|&r| live[r]);
        Space {
            children: restricted,
            live,
            sccs,
            kind,
            flag,
            reaches_branching,
            rank,
            arrivals,
            root,
        }
    }

    fn active(&self, c: usize) -> bool {
        self.kind[c] != CompKind::Trivial && self.arrivals[c] != Extended::ZERO
    }

    pub fn profile(&self) -> EndsProfile {
        let mut p = EndsProfile {
            all_marked: true,
            ..EndsProfile::default()
        };
        for c in 0..self.kind.len() {
            if !self.active(c) {
                continue;
            }
            p.all_marked &= self.flag[c];
            if let Some(r) = self.rank[c] {
                let e = p.ranks.entry(r).or_insert(Extended::ZERO);
                *e = *e + self.arrivals[c];
                if self.flag[c] {
                    let e = p.marked_ranks.entry(r).or_insert(Extended::ZERO);
                    *e = *e + self.arrivals[c];
                }
            } else if self.reaches_branching[c] {
                p.kernel = true;
                p.marked_kernel |= self.flag[c];
            }
        }
        if p.is_empty() {
            p.all_marked = false;
        }
        p
    }

    fn exits(&self, c: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for &s in &self.sccs.comps[c] {
            for &t in &self.children[s] {
                if self.sccs.comp_of[t] != c {
                    out.push(t);
                }
            }
        }
        out
    }

    pub fn to_end_expr(&self) -> Result<EndExpr, EndsError> {
        let m = self.kind.len();
        let root = self.root.ok_or(EndsError::NotConvertible)?;
        let mut exprs: Vec<Option<EndExpr>> = vec![None; m];
        for c in 0..m {
            let pl = Planarity::from_marked(self.flag[c]);
            let kids = |exprs: &Vec<Option<EndExpr>>, c: usize| -> Vec<EndExpr> {
                self.exits(c)
                    .into_iter()
                    .map(|t| exprs[self.sccs.comp_of[t]].clone().expect("sinks first"))
                    .collect()
            };
            let e = match self.kind[c] {
                CompKind::Trivial => {
                    let ks = kids(&exprs, c);
                    if ks.is_empty() {
                        continue;
                    }
                    EndExpr::union(ks)
                }
                CompKind::Cycle => {
                    let ks = kids(&exprs, c);
                    if ks.is_empty() {
                        EndExpr::Pt(pl)
                    } else {
                        EndExpr::Seq(alloc::boxed::Box::new(EndExpr::union(ks)), pl)
                    }
                }
                CompKind::Branching => {
                    let ks = kids(&exprs, c);
                    let cantor = EndExpr::Cantor(pl);
                    if ks.iter().all(|k| k.clone().normalize() == cantor) {
                        cantor
                    } else {
                        return Err(EndsError::NotConvertible);
                    }
                }
            };
            exprs[c] = Some(e);
        }
        exprs[self.sccs.comp_of[root]]
            .clone()
            .ok_or(EndsError::NotConvertible)
    }
}

#[cfg(test)]
mod tests;
