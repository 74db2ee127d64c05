//! Homeomorphism decisions for pairs of end spaces.
//!
//! Every state of both automata receives a hash-consed class describing the
//! space of paths below it. Classes are points, sequences, Cantor sets,
//! branching blocks (identified up to bisimulation of their unfoldings) and
//! unions. Two unions are compared up to the sound rewrites
//!
//! * a sequence absorbs extra copies of its own terms,
//! * two Cantor sets of equal planarity merge,
//! * the children of a branching state fold back into that state.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use super::{Cardinality, CompKind, EndsAutomaton, EndsInvariants, EndsProfile, Space};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairVerdict {
    Yes(Fragment),
    No(Invariant),
    Unknown,
}

/// Which argument decided a positive verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fragment {
    NormalForm,
    Finite,
    CountableFinitelyMarked,
    CountableAllMarked,
    Perfect,
    ClassFold,
}

impl Fragment {
    pub fn name(self) -> &'static str {
        match self {
            Fragment::NormalForm => "normal-form",
            Fragment::Finite => "finite",
            Fragment::CountableFinitelyMarked => "countable-finitely-marked",
            Fragment::CountableAllMarked => "countable-all-marked",
            Fragment::Perfect => "perfect",
            Fragment::ClassFold => "class-fold",
        }
    }
}

/// The first invariant found to differ.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Invariant {
    Cardinality,
    CbRank,
    CbDegree,
    PerfectKernel,
    RankProfile,
    NonplanarCardinality,
    NonplanarCb,
    NonplanarProfile,
    MarkedPoints,
    AllMarked,
}

impl Invariant {
    pub fn name(self) -> &'static str {
        match self {
            Invariant::Cardinality => "cardinality",
            Invariant::CbRank => "cb-rank",
            Invariant::CbDegree => "cb-degree",
            Invariant::PerfectKernel => "perfect-kernel",
            Invariant::RankProfile => "rank-profile",
            Invariant::NonplanarCardinality => "nonplanar-cardinality",
            Invariant::NonplanarCb => "nonplanar-cb",
            Invariant::NonplanarProfile => "nonplanar-profile",
            Invariant::MarkedPoints => "marked-points",
            Invariant::AllMarked => "all-marked",
        }
    }
}

fn top(p: &EndsProfile) -> (Option<u32>, Option<crate::num::Extended>) {
    match p.ranks.iter().next_back() {
        Some((&r, &d)) => (Some(r), Some(d)),
        None => (None, None),
    }
}

pub(crate) fn differing(a: &EndsInvariants, b: &EndsInvariants) -> Option<Invariant> {
    let (ea, eb) = (&a.ends, &b.ends);
    if ea.cardinality() != eb.cardinality() {
        return Some(Invariant::Cardinality);
    }
    let ((ra, da), (rb, db)) = (top(ea), top(eb));
    if ra != rb {
        return Some(Invariant::CbRank);
    }
    if da != db {
        return Some(Invariant::CbDegree);
    }
    if ea.kernel != eb.kernel {
        return Some(Invariant::PerfectKernel);
    }
    if ea.ranks != eb.ranks {
        return Some(Invariant::RankProfile);
    }
    let (na, nb) = (&a.nonplanar, &b.nonplanar);
    if na.cardinality() != nb.cardinality() {
        return Some(Invariant::NonplanarCardinality);
    }
    if top(na) != top(nb) || na.kernel != nb.kernel {
        return Some(Invariant::NonplanarCb);
    }
    if na.ranks != nb.ranks {
        return Some(Invariant::NonplanarProfile);
    }
    if ea.marked_ranks != eb.marked_ranks || ea.marked_kernel != eb.marked_kernel {
        return Some(Invariant::MarkedPoints);
    }
    if ea.all_marked != eb.all_marked {
        return Some(Invariant::AllMarked);
    }
    None
}

/// Fragments where equal invariants already force a homeomorphism of pairs.
fn decided_by_invariants(a: &EndsInvariants) -> Option<Fragment> {
    let e = &a.ends;
    if let Cardinality::Finite(_) = e.cardinality() {
        return Some(Fragment::Finite);
    }
    let marked_finite = matches!(a.nonplanar.cardinality(), Cardinality::Finite(_));
    if !e.kernel {
        if marked_finite {
            return Some(Fragment::CountableFinitelyMarked);
        }
        if e.all_marked {
            return Some(Fragment::CountableAllMarked);
        }
        return None;
    }
    if e.ranks.is_empty() && (marked_finite || e.all_marked) {
        return Some(Fragment::Perfect);
    }
    None
}

pub fn pair_homeomorphic(a: &EndsAutomaton, b: &EndsAutomaton) -> PairVerdict {
    let (ia, ib) = (a.invariants(), b.invariants());
    if let Some(inv) = differing(&ia, &ib) {
        return PairVerdict::No(inv);
    }
    if let (Ok(x), Ok(y)) = (a.to_end_expr(), b.to_end_expr()) {
        if x == y {
            return PairVerdict::Yes(Fragment::NormalForm);
        }
    }
    if let Some(f) = decided_by_invariants(&ia) {
        return PairVerdict::Yes(f);
    }
    if same_class(a, b) {
        return PairVerdict::Yes(Fragment::ClassFold);
    }
    PairVerdict::Unknown
}

// ---------------------------------------------------------------------------
// Class table

type Cid = u32;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Node {
    Point(bool),
    Cantor(bool),
    Seq(Vec<Cid>, bool),
    Branch(u32, bool),
    Union(Vec<Cid>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Atom {
    Internal(u32),
    External(Cid),
}

const CANON_CAP: usize = 256;
const DECIDE_CAP: usize = 4096;

#[derive(Default)]
struct Table {
    nodes: Vec<Node>,
    index: BTreeMap<Node, Cid>,
    folds: BTreeSet<(Vec<Cid>, Cid)>,
    sigs: BTreeMap<(bool, Vec<Atom>), u32>,
}

impl Table {
    fn intern(&mut self, n: Node) -> Cid {
        if let Some(&id) = self.index.get(&n) {
            return id;
        }
        let id = self.nodes.len() as Cid;
        self.nodes.push(n.clone());
        self.index.insert(n, id);
        id
    }

    fn sig(&mut self, flag: bool, mut atoms: Vec<Atom>) -> u32 {
        atoms.sort_unstable();
        let next = self.sigs.len() as u32;
        *self.sigs.entry((flag, atoms)).or_insert(next)
    }

    fn components(&self, id: Cid) -> Vec<Cid> {
        match &self.nodes[id as usize] {
            Node::Union(xs) => xs.clone(),
            _ => vec![id],
        }
    }

    fn flatten(&self, ids: &[Cid]) -> Vec<Cid> {
        let mut out: Vec<Cid> = ids.iter().flat_map(|&i| self.components(i)).collect();
        out.sort_unstable();
        out
    }

    fn moves(&self, m: &[Cid]) -> Vec<Vec<Cid>> {
        let mut out = Vec::new();
        let without = |j: usize| -> Vec<Cid> {
            let mut v = m.to_vec();
            v.remove(j);
            v
        };
        for (i, &x) in m.iter().enumerate() {
            match &self.nodes[x as usize] {
                Node::Seq(round, _) => {
                    for (j, &y) in m.iter().enumerate() {
                        if j != i && (j == 0 || m[j - 1] != y) && round.binary_search(&y).is_ok() {
                            out.push(without(j));
                        }
                    }
                }
                Node::Cantor(_) if i + 1 < m.len() && m[i + 1] == x => out.push(without(i + 1)),
                _ => {}
            }
        }
        for (kids, b) in &self.folds {
            if let Some(rest) = sub_multiset(m, kids) {
                let mut v = rest;
                v.push(*b);
                v.sort_unstable();
                out.push(v);
            }
        }
        out
    }

    fn closure(&self, m: Vec<Cid>, cap: usize) -> BTreeSet<Vec<Cid>> {
        let mut seen = BTreeSet::new();
        let mut q = VecDeque::new();
        seen.insert(m.clone());
        q.push_back(m);
        while let Some(cur) = q.pop_front() {
            if seen.len() >= cap {
                break;
            }
            for n in self.moves(&cur) {
                if seen.insert(n.clone()) {
                    q.push_back(n);
                }
            }
        }
        seen
    }

    /// Shortest, then least, multiset reachable by the rewrites.
    fn canon(&self, m: Vec<Cid>) -> Vec<Cid> {
        self.closure(m, CANON_CAP)
            .into_iter()
            .min_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)))
            .unwrap_or_default()
    }

    fn union_of(&mut self, ids: &[Cid]) -> Cid {
        let m = self.canon(self.flatten(ids));
        if m.len() == 1 {
            m[0]
        } else {
            self.intern(Node::Union(m))
        }
    }
}

/// `m - kids` when `kids` is a sub-multiset of `m`; both sorted.
fn sub_multiset(m: &[Cid], kids: &[Cid]) -> Option<Vec<Cid>> {
    let mut rest = Vec::with_capacity(m.len());
    let mut k = 0;
    for &x in m {
        if k < kids.len() && kids[k] == x {
            k += 1;
        } else {
            rest.push(x);
        }
    }
    (k == kids.len()).then_some(rest)
}

fn classify(table: &mut Table, space: &Space) -> Vec<Option<Cid>> {
    let n = space.children.len();
    let mut class: Vec<Option<Cid>> = vec![None; n];
    let rounds = (0..n)
        .filter(|&s| space.live[s] && space.children[s].len() == 2)
        .count()
        + 1;
    for c in 0..space.kind.len() {
        let comp = &space.sccs.comps[c];
        if !space.live[comp[0]] {
            continue;
        }
        let flag = space.flag[c];
        let exits: Vec<Cid> = comp
            .iter()
            .flat_map(|&s| space.children[s].iter())
            .filter(|&&t| space.sccs.comp_of[t] != c)
            .map(|&t| class[t].expect("children are classified first"))
            .collect();
        match space.kind[c] {
            CompKind::Trivial => {
                class[comp[0]] = Some(table.union_of(&exits));
            }
            CompKind::Cycle => {
                let id = if exits.is_empty() {
                    table.intern(Node::Point(flag))
                } else {
                    let mut round = table.canon(table.flatten(&exits));
                    round.dedup();
                    let cantor = table.intern(Node::Cantor(flag));
                    if round == [cantor] {
                        cantor
                    } else {
                        table.intern(Node::Seq(round, flag))
                    }
                };
                for &s in comp {
                    class[s] = Some(id);
                }
            }
            CompKind::Branching => {
                let cantor = table.intern(Node::Cantor(flag));
                let round = table.canon(table.flatten(&exits));
                if round.iter().all(|&x| x == cantor) {
                    for &s in comp {
                        class[s] = Some(cantor);
                    }
                } else {
                    branch_classes(table, space, c, flag, rounds, &mut class);
                }
            }
        }
    }
    class
}

fn branch_classes(
    table: &mut Table,
    space: &Space,
    c: usize,
    flag: bool,
    rounds: usize,
    class: &mut [Option<Cid>],
) {
    let comp = &space.sccs.comps[c];
    let inside = |t: usize| space.sccs.comp_of[t] == c;
    let resolve = |mut t: usize| -> usize {
        for _ in 0..=space.children.len() {
            if space.children[t].len() != 1 {
                break;
            }
            t = space.children[t][0];
        }
        t
    };
    let pants: Vec<usize> = comp
        .iter()
        .copied()
        .filter(|&s| space.children[s].len() == 2)
        .collect();
    let pos = |t: usize| pants.binary_search(&t).expect("resolves to a pants state");
    let atoms: Vec<Vec<Atom>> = pants
        .iter()
        .map(|&p| {
            space.children[p]
                .iter()
                .map(|&t| {
                    if inside(t) {
                        Atom::Internal(pos(resolve(t)) as u32)
                    } else {
                        Atom::External(class[t].expect("classified"))
                    }
                })
                .collect()
        })
        .collect();
    let mut sig = vec![u32::MAX; pants.len()];
    for _ in 0..rounds {
        sig = atoms
            .iter()
            .map(|a| {
                let lifted = a
                    .iter()
                    .map(|x| match *x {
                        Atom::Internal(i) => Atom::Internal(sig[i as usize]),
                        e => e,
                    })
                    .collect();
                table.sig(flag, lifted)
            })
            .collect();
    }
    let ids: Vec<Cid> = sig
        .iter()
        .map(|&g| table.intern(Node::Branch(g, flag)))
        .collect();
    for (i, &p) in pants.iter().enumerate() {
        class[p] = Some(ids[i]);
    }
    for &s in comp {
        if space.children[s].len() == 1 {
            class[s] = Some(ids[pos(resolve(s))]);
        }
    }
    for (i, a) in atoms.iter().enumerate() {
        let mut kids = Vec::new();
        for x in a {
            match *x {
                Atom::Internal(j) => kids.push(ids[j as usize]),
                Atom::External(e) => kids.extend(table.components(e)),
            }
        }
        kids.sort_unstable();
        table.folds.insert((kids, ids[i]));
    }
}

/// Positive half of the decision: both roots reach a common multiset.
fn same_class(a: &EndsAutomaton, b: &EndsAutomaton) -> bool {
    let off = a.children.len();
    let mut children = a.children.clone();
    children.extend(b.children.iter().map(|cs| cs.iter().map(|&c| c + off).collect()));
    let mut marked = a.marked.clone();
    marked.extend(b.marked.iter().copied());
    let all = vec![true; children.len()];
    let space = Space::new(&children, &all, &marked, &[a.root, b.root + off]);
    let mut table = Table::default();
    let class = classify(&mut table, &space);
    let (Some(x), Some(y)) = (class[a.root], class[b.root + off]) else {
        return false;
    };
    if x == y {
        return true;
    }
    let ca = table.closure(table.components(x), DECIDE_CAP);
    let cb = table.closure(table.components(y), DECIDE_CAP);
    ca.intersection(&cb).next().is_some()
}
