//! Pants decompositions of presented surfaces.
//!
//! The generator walks the unfolding breadth first. Runs of annuli vanish,
//! a pure annulus tail becomes a punctured disk, a pants block is a pants
//! piece and a handle block is cut into two pants. The implicit disk is
//! absorbed into the first non-annulus block.

mod essential;
mod interchange;
mod spine;

use alloc::collections::{BTreeMap, VecDeque};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::surface::{BlockKind, RuleSystem, SurfacePresentation};

pub use essential::{
    find_essential_pants, ComponentCensus, EssentialCase, EssentialError, EssentialPants,
};
pub use interchange::{
    interchange_normalize, parse_occurrence, InterchangeError, Occurrence,
};
pub use spine::{graph_phe_equal, spine, PheVerdict, PheWitness, SpineGraph};

pub const DEFAULT_DEPTH: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Allows one one-holed torus as the first piece.
    Lenient,
    /// Pants and punctured disks only.
    Strict,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum PieceKind {
    Pants,
    PuncturedDisk,
    OneHoledTorus,
}

impl PieceKind {
    pub fn name(self) -> &'static str {
        match self {
            PieceKind::Pants => "pants",
            PieceKind::PuncturedDisk => "punctured_disk",
            PieceKind::OneHoledTorus => "one_holed_torus",
        }
    }

    /// Euler characteristic of the piece.
    pub fn euler(self) -> i64 {
        match self {
            PieceKind::Pants | PieceKind::OneHoledTorus => -1,
            PieceKind::PuncturedDisk => 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub id: usize,
    pub kind: PieceKind,
    /// Circle ids on the boundary slots.
    pub slots: Vec<usize>,
    /// Rule that produced the piece.
    pub source: String,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DecomposeError {
    #[error("the plane has no decomposition into pants and punctured disks")]
    PlaneExcluded,
    #[error("the once-punctured torus needs a one-holed torus piece")]
    PuncturedTorusExcludedInStrict,
}

#[derive(Clone, Copy, Debug)]
struct Task {
    state: usize,
    circle: usize,
}

/// Lazy piece generator; yields pieces in breadth-first order.
pub struct Decomposer {
    sys: RuleSystem,
    pure: Vec<bool>,
    queue: VecDeque<Task>,
    buffer: VecDeque<Piece>,
    next_piece: usize,
    next_circle: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpenCircle {
    pub circle: usize,
    /// Rule glued beyond the circle, if the next piece there is not yet built.
    pub state: Option<String>,
}

/// A finite prefix of a decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    pub pieces: Vec<Piece>,
    /// Circles with one endpoint outside the window.
    pub open: Vec<OpenCircle>,
    pub complete: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Census {
    pub pants: usize,
    pub punctured_disks: usize,
    pub one_holed_tori: usize,
}

impl Window {
    pub fn census(&self) -> Census {
        let mut c = Census::default();
        for p in &self.pieces {
            match p.kind {
                PieceKind::Pants => c.pants += 1,
                PieceKind::PuncturedDisk => c.punctured_disks += 1,
                PieceKind::OneHoledTorus => c.one_holed_tori += 1,
            }
        }
        c
    }

    /// Endpoints `(piece, slot)` of each circle seen in the window.
    pub fn circles(&self) -> BTreeMap<usize, Vec<(usize, usize)>> {
        let mut m: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
        for p in &self.pieces {
            for (i, &c) in p.slots.iter().enumerate() {
                m.entry(c).or_default().push((p.id, i));
            }
        }
        m
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.pieces.iter().map(|p| p.kind.euler()).sum()
    }
}

fn skip_annuli(sys: &RuleSystem, pure: &[bool], mut s: usize) -> usize {
    while sys.kind(s) == BlockKind::Annulus && !pure[s] {
        s = sys.rules()[s].children[0];
    }
    s
}

impl Decomposer {
    pub fn new(p: &SurfacePresentation, mode: Mode) -> Result<Decomposer, DecomposeError> {
        Decomposer::from_rules(p.rule_system(), mode)
    }

    pub fn from_rules(sys: RuleSystem, mode: Mode) -> Result<Decomposer, DecomposeError> {
        let pure: Vec<bool> = (0..sys.len()).map(|s| sys.pure_annulus(s)).collect();
        let mut d = Decomposer {
            sys,
            pure,
            queue: VecDeque::new(),
            buffer: VecDeque::new(),
            next_piece: 0,
            next_circle: 0,
        };
        let first = skip_annuli(&d.sys, &d.pure, d.sys.root());
        if d.pure[first] {
            return Err(DecomposeError::PlaneExcluded);
        }
        let kids = d.sys.rules()[first].children.clone();
        match (d.sys.kind(first), mode) {
            (BlockKind::Pants, _) => {
                // Disk plus pants is an annulus: one circle joins both outputs.
                let c = d.circle();
                d.queue.push_back(Task { state: kids[0], circle: c });
                d.queue.push_back(Task { state: kids[1], circle: c });
            }
            (BlockKind::Handle, Mode::Lenient) => {
                let c = d.circle();
                d.emit(PieceKind::OneHoledTorus, vec![c], first);
                d.queue.push_back(Task { state: kids[0], circle: c });
            }
            (BlockKind::Handle, Mode::Strict) => {
                let next = skip_annuli(&d.sys, &d.pure, kids[0]);
                if d.pure[next] {
                    return Err(DecomposeError::PuncturedTorusExcludedInStrict);
                }
                let nk = d.sys.rules()[next].children.clone();
                if d.sys.kind(next) == BlockKind::Handle {
                    let [o, a, b, c, e] = [d.circle(), d.circle(), d.circle(), d.circle(), d.circle()];
                    d.emit(PieceKind::Pants, vec![o, a, b], first);
                    d.emit(PieceKind::Pants, vec![a, c, e], next);
                    d.emit(PieceKind::Pants, vec![b, c, e], next);
                    d.queue.push_back(Task { state: nk[0], circle: o });
                } else {
                    let [x, y, o1, o2] = [d.circle(), d.circle(), d.circle(), d.circle()];
                    d.emit(PieceKind::Pants, vec![x, y, o1], first);
                    d.emit(PieceKind::Pants, vec![x, y, o2], next);
                    d.queue.push_back(Task { state: nk[0], circle: o1 });
                    d.queue.push_back(Task { state: nk[1], circle: o2 });
                }
            }
            (BlockKind::Annulus, _) => unreachable!("annuli skipped"),
        }
        Ok(d)
    }

    fn circle(&mut self) -> usize {
        self.next_circle += 1;
        self.next_circle - 1
    }

    fn emit(&mut self, kind: PieceKind, slots: Vec<usize>, source: usize) {
        let id = self.next_piece;
        self.next_piece += 1;
        self.buffer.push_back(Piece {
            id,
            kind,
            slots,
            source: String::from(self.sys.name(source)),
        });
    }

    fn step(&mut self) -> bool {
        let Some(Task { state, circle }) = self.queue.pop_front() else {
            return false;
        };
        let s = skip_annuli(&self.sys, &self.pure, state);
        let kids = self.sys.rules()[s].children.clone();
        if self.pure[s] {
            self.emit(PieceKind::PuncturedDisk, vec![circle], s);
            return true;
        }
        match self.sys.kind(s) {
            BlockKind::Pants => {
                let [a, b] = [self.circle(), self.circle()];
                self.emit(PieceKind::Pants, vec![circle, a, b], s);
                self.queue.push_back(Task { state: kids[0], circle: a });
                self.queue.push_back(Task { state: kids[1], circle: b });
            }
            BlockKind::Handle => {
                let [x, y, o] = [self.circle(), self.circle(), self.circle()];
                self.emit(PieceKind::Pants, vec![circle, x, y], s);
                self.emit(PieceKind::Pants, vec![x, y, o], s);
                self.queue.push_back(Task { state: kids[0], circle: o });
            }
            BlockKind::Annulus => unreachable!("annuli skipped"),
        }
        true
    }

    pub fn is_exhausted(&self) -> bool {
        self.buffer.is_empty() && self.queue.is_empty()
    }

    /// Pending tasks as `(circle, state)`.
    pub fn pending(&self) -> Vec<(usize, usize)> {
        self.queue.iter().map(|t| (t.circle, t.state)).collect()
    }

    pub fn rules(&self) -> &RuleSystem {
        &self.sys
    }

    /// The next `n` pieces, or fewer if the decomposition ends.
    pub fn window(&mut self, n: usize) -> Window {
        let pieces: Vec<Piece> = self.by_ref().take(n).collect();
        self.describe(pieces)
    }

    /// At least `n` pieces, continued until no piece is half emitted.
    pub fn window_through(&mut self, n: usize) -> Window {
        let mut pieces: Vec<Piece> = self.by_ref().take(n).collect();
        pieces.extend(self.buffer.drain(..));
        self.describe(pieces)
    }

    /// All remaining pieces; `limit` guards against infinite surfaces.
    pub fn complete(&mut self, limit: usize) -> Option<Window> {
        let w = self.window(limit);
        w.complete.then_some(w)
    }

    fn describe(&self, pieces: Vec<Piece>) -> Window {
        let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
        for p in &pieces {
            for &c in &p.slots {
                *seen.entry(c).or_default() += 1;
            }
        }
        let tasks: BTreeMap<usize, usize> = self.queue.iter().map(|t| (t.circle, t.state)).collect();
        let open = seen
            .into_iter()
            .filter(|&(_, k)| k == 1)
            .map(|(c, _)| OpenCircle {
                circle: c,
                state: tasks.get(&c).map(|&s| String::from(self.sys.name(s))),
            })
            .collect();
        Window {
            pieces,
            open,
            complete: self.is_exhausted(),
        }
    }
}

impl Iterator for Decomposer {
    type Item = Piece;

    fn next(&mut self) -> Option<Piece> {
        while self.buffer.is_empty() {
            if !self.step() {
                return None;
            }
        }
        self.buffer.pop_front()
    }
}

/// Depth-`depth` window of the decomposition.
pub fn decompose(
    p: &SurfacePresentation,
    mode: Mode,
    depth: usize,
) -> Result<Window, DecomposeError> {
    Ok(Decomposer::new(p, mode)?.window(depth))
}
