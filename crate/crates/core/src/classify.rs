//! Homeomorphism classification and realization of invariants.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::ends::{
    ends_automaton, pair_homeomorphic, EndExpr, ExprError, Fragment, Invariant, PairVerdict,
    Planarity,
};
use crate::num::Extended;
use crate::surface::{BlockKind, Genus, Rule, RuleSystem, SurfacePresentation};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Homeomorphic,
    NotHomeomorphic,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Witness {
    Genus { left: Genus, right: Genus },
    Ends(Invariant),
    Fragment(Fragment),
    Undecided,
}

impl Witness {
    /// Short tag: `genus`, `ends`, the deciding fragment, or `undecided`.
    pub fn tag(&self) -> &'static str {
        match self {
            Witness::Genus { .. } => "genus",
            Witness::Ends(_) => "ends",
            Witness::Fragment(f) => f.name(),
            Witness::Undecided => "undecided",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassifierVerdict {
    pub verdict: Verdict,
    pub witness: Witness,
}

pub fn kerekjarto(p1: &SurfacePresentation, p2: &SurfacePresentation) -> ClassifierVerdict {
    let (g1, g2) = (p1.genus(), p2.genus());
    let genus = ClassifierVerdict {
        verdict: Verdict::NotHomeomorphic,
        witness: Witness::Genus {
            left: g1,
            right: g2,
        },
    };
    // Infinite genus shows up as non-planar ends, so a finite/infinite
    // mismatch is reported by the ends comparison.
    if g1 != g2 && g1.is_finite() && g2.is_finite() {
        return genus;
    }
    match pair_homeomorphic(&ends_automaton(p1), &ends_automaton(p2)) {
        PairVerdict::No(i) => ClassifierVerdict {
            verdict: Verdict::NotHomeomorphic,
            witness: Witness::Ends(i),
        },
        _ if g1 != g2 => genus,
        PairVerdict::Yes(f) => ClassifierVerdict {
            verdict: Verdict::Homeomorphic,
            witness: Witness::Fragment(f),
        },
        PairVerdict::Unknown => ClassifierVerdict {
            verdict: Verdict::Unknown,
            witness: Witness::Undecided,
        },
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum RealizeError {
    #[error("genus and non-planar ends disagree")]
    InconsistentInvariants,
    #[error("expression is not realizable: {0}")]
    NotRealizable(ExprError),
}

struct Builder {
    rules: Vec<Rule>,
}

impl Builder {
    fn reserve(&mut self, kind: BlockKind) -> usize {
        let i = self.rules.len();
        self.rules.push(Rule {
            name: format!("r{i}"),
            kind,
            children: Vec::new(),
        });
        i
    }

    fn set(&mut self, s: usize, children: Vec<usize>) {
        self.rules[s].children = children;
    }

    fn compile(&mut self, e: &EndExpr) -> usize {
        match e {
            EndExpr::Pt(p) => {
                let k = if p.is_marked() { BlockKind::Handle } else { BlockKind::Annulus };
                let x = self.reserve(k);
                self.set(x, vec![x]);
                x
            }
            EndExpr::Cantor(Planarity::Planar) => {
                let x = self.reserve(BlockKind::Pants);
                self.set(x, vec![x, x]);
                x
            }
            EndExpr::Cantor(Planarity::Nonplanar) => {
                let x = self.reserve(BlockKind::Handle);
                let y = self.reserve(BlockKind::Pants);
                self.set(x, vec![y]);
                self.set(y, vec![x, x]);
                x
            }
            EndExpr::Union(es) => {
                let ids: Vec<usize> = es.iter().map(|e| self.compile(e)).collect();
                let mut acc = *ids.last().expect("validated non-empty");
                for &id in ids.iter().rev().skip(1) {
                    let p = self.reserve(BlockKind::Pants);
                    self.set(p, vec![id, acc]);
                    acc = p;
                }
                acc
            }
            EndExpr::Seq(inner, l) => {
                let x = self.compile(inner);
                if l.is_marked() && !inner.has_marked() {
                    let s = self.reserve(BlockKind::Handle);
                    let t = self.reserve(BlockKind::Pants);
                    self.set(s, vec![t]);
                    self.set(t, vec![s, x]);
                    s
                } else {
                    let s = self.reserve(BlockKind::Pants);
                    self.set(s, vec![s, x]);
                    s
                }
            }
        }
    }
}

/// A presentation with genus `g` whose ends pair is denoted by `e`.
pub fn realize(g: Genus, e: &EndExpr) -> Result<SurfacePresentation, RealizeError> {
    e.validate().map_err(RealizeError::NotRealizable)?;
    if e.has_marked() != (g == Extended::Infinite) {
        return Err(RealizeError::InconsistentInvariants);
    }
    let mut b = Builder { rules: Vec::new() };
    let mut root = b.compile(e);
    if let Extended::Finite(k) = g {
        for _ in 0..k {
            let h = b.reserve(BlockKind::Handle);
            b.set(h, vec![root]);
            root = h;
        }
    }
    let sys = RuleSystem::pruned(b.rules, root).expect("compiled rules are total");
    Ok(SurfacePresentation::regular("realized", sys))
}

/// `n` infinite-genus presentations that are pairwise not homeomorphic.
/// Members after the third are told apart by the Cantor-Bendixson rank of
/// their ends.
pub fn distinct_family(n: usize) -> Vec<SurfacePresentation> {
    (0..n)
        .map(|k| {
            let e = match k {
                0 => EndExpr::Pt(Planarity::Nonplanar),
                1 => EndExpr::Cantor(Planarity::Nonplanar),
                _ => {
                    let mut e = EndExpr::Pt(Planarity::Planar);
                    for _ in 0..k - 2 {
                        e = EndExpr::seq(e, Planarity::Planar);
                    }
                    EndExpr::seq(e, Planarity::Nonplanar)
                }
            };
            let mut p = realize(Extended::Infinite, &e).expect("family members are consistent");
            p.name = if k == 0 {
                String::from("loch_ness")
            } else {
                format!("family_{k}")
            };
            p
        })
        .collect()
}
