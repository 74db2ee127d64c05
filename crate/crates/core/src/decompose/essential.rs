//! Essential pairs of pants: pants whose complement has at least two
//! components, each with non-abelian fundamental group.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec::Vec;

use super::interchange::{interchange_normalize, Occurrence};
use super::spine::loops;
use super::{Decomposer, DecomposeError, Mode, PieceKind, Window};
use crate::ends::{ends_count, Cardinality};
use crate::num::Extended;
use crate::surface::{BlockKind, RuleSystem, SurfacePresentation};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EssentialCase {
    /// Two handles pulled to the front; the pants is half of the second one.
    TwoHandles,
    /// Five pants pulled to the front; the pants is the second one.
    FivePants,
    /// Pants, pants, handle in front; the pants is half of the handle.
    TorusWithEnds,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentCensus {
    pub pieces: Vec<usize>,
    pub rank: Extended,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EssentialPants {
    pub case: EssentialCase,
    pub presentation: SurfacePresentation,
    pub window: Window,
    pub piece: usize,
    pub components: Vec<ComponentCensus>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EssentialError {
    #[error("complexity too low: genus {genus}, {ends} ends (need g+p >= 4 or p >= 6)")]
    ComplexityTooLow { genus: u64, ends: u64 },
    #[error("the sphere with {ends} punctures has no essential pair of pants")]
    NoEssentialPants { ends: u64 },
    #[error("complement census failed for piece {0}")]
    CensusFailed(usize),
    #[error(transparent)]
    Decompose(#[from] DecomposeError),
}

/// Breadth-first unfolding paths of the first `n` blocks of kind `kind`.
fn first_occurrences(sys: &RuleSystem, kind: BlockKind, n: usize) -> Vec<Occurrence> {
    let mut out = Vec::new();
    let mut q = VecDeque::from([(sys.root(), Vec::new())]);
    while let Some((s, path)) = q.pop_front() {
        if out.len() == n {
            break;
        }
        if sys.kind(s) == kind {
            out.push(Occurrence::Path(path.clone()));
        }
        for (i, &c) in sys.rules()[s].children.iter().enumerate() {
            let mut p = path.clone();
            p.push(i);
            q.push_back((c, p));
        }
    }
    out
}

pub fn find_essential_pants(p: &SurfacePresentation) -> Result<EssentialPants, EssentialError> {
    let sys = p.rule_system();
    let genus = p.genus();
    let ends = match ends_count(p) {
        Cardinality::Finite(n) => Extended::Finite(n),
        _ => Extended::Infinite,
    };
    let (case, front, piece) = if genus >= Extended::Finite(2) {
        (EssentialCase::TwoHandles, first_occurrences(&sys, BlockKind::Handle, 2), 1)
    } else if ends >= Extended::Finite(6) {
        (EssentialCase::FivePants, first_occurrences(&sys, BlockKind::Pants, 5), 0)
    } else {
        let g = genus.finite().unwrap_or(0);
        let e = ends.finite().unwrap_or(0);
        if g == 1 && e >= 3 {
            let mut front = first_occurrences(&sys, BlockKind::Pants, 2);
            front.extend(first_occurrences(&sys, BlockKind::Handle, 1));
            (EssentialCase::TorusWithEnds, front, 1)
        } else if g + e >= 4 {
            return Err(EssentialError::NoEssentialPants { ends: e });
        } else {
            return Err(EssentialError::ComplexityTooLow { genus: g, ends: e });
        }
    };
    let normal = interchange_normalize(p, &front).expect("breadth-first paths resolve");
    let mut dec = Decomposer::new(&normal, Mode::Lenient)?;
    let mut window = dec.window_through(piece + 1);
    // Grow until every circle on the chosen piece is glued inside the window.
    loop {
        let circles = window.circles();
        let target = &window.pieces[piece];
        let closed = target.slots.iter().all(|c| circles[c].len() == 2);
        if closed || dec.is_exhausted() {
            break;
        }
        let more = dec.window_through(1);
        window.pieces.extend(more.pieces);
        window.open = more.open;
        window.complete = more.complete;
    }
    let pending: BTreeMap<usize, usize> = dec.pending().into_iter().collect();
    let components = census(&window, piece, &pending, dec.rules());
    if window.pieces[piece].kind != PieceKind::Pants
        || components.len() < 2
        || components.iter().any(|c| c.rank < Extended::Finite(2))
    {
        return Err(EssentialError::CensusFailed(piece));
    }
    Ok(EssentialPants {
        case,
        presentation: normal,
        window,
        piece,
        components,
    })
}

/// Components of the window with `removed` deleted, with spine ranks that
/// count the pieces and every subtree still hanging off the window.
pub fn census(
    window: &Window,
    removed: usize,
    pending: &BTreeMap<usize, usize>,
    sys: &RuleSystem,
) -> Vec<ComponentCensus> {
    let n = window.pieces.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut y = x;
        while parent[y] != r {
            let next = parent[y];
            parent[y] = r;
            y = next;
        }
        r
    }
    let circles = window.circles();
    for ends in circles.values() {
        if let [(a, _), (b, _)] = ends[..] {
            if a != removed && b != removed {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
            }
        }
    }
    let mut groups: BTreeMap<usize, ComponentCensus> = BTreeMap::new();
    for p in &window.pieces {
        if p.id == removed {
            continue;
        }
        let r = find(&mut parent, p.id);
        let g = groups.entry(r).or_insert(ComponentCensus {
            pieces: Vec::new(),
            rank: Extended::ONE,
        });
        g.pieces.push(p.id);
        g.rank = g.rank + Extended::Finite(u64::from(p.kind != PieceKind::PuncturedDisk));
        for c in &p.slots {
            if let Some(&s) = pending.get(c) {
                if circles[c].len() == 1 {
                    g.rank = g.rank + sys.weighted_total(s, loops);
                }
            }
        }
    }
    let mut out: Vec<ComponentCensus> = groups.into_values().collect();
    for c in &mut out {
        c.pieces.sort_unstable();
    }
    out.sort_by(|a, b| a.pieces.cmp(&b.pieces));
    out
}
