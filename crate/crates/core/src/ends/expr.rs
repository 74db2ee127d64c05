//! Expressions for pairs (ends, non-planar ends).

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::EndsProfile;
use crate::num::Extended;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Planarity {
    Planar,
    Nonplanar,
}

impl Planarity {
    pub fn from_marked(marked: bool) -> Planarity {
        if marked {
            Planarity::Nonplanar
        } else {
            Planarity::Planar
        }
    }

    pub fn is_marked(self) -> bool {
        self == Planarity::Nonplanar
    }
}

/// `Pt` is one point, `Cantor` a Cantor set, `Seq(e, l)` countably many
/// copies of `e` converging to a single limit point with planarity `l`, and
/// `Union` a disjoint union.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EndExpr {
    Pt(Planarity),
    Cantor(Planarity),
    Seq(Box<EndExpr>, Planarity),
    Union(Vec<EndExpr>),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ExprError {
    #[error("empty union")]
    Empty,
    #[error("non-planar points accumulate at a planar limit in `{0}`")]
    PlanarLimit(String),
    #[error("syntax error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },
}

impl EndExpr {
    /// Disjoint union; a single operand is returned as is.
    pub fn union(mut parts: Vec<EndExpr>) -> EndExpr {
        if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            EndExpr::Union(parts)
        }
    }

    pub fn seq(e: EndExpr, limit: Planarity) -> EndExpr {
        EndExpr::Seq(Box::new(e), limit)
    }

    /// Flattened union operands.
    pub fn components(&self) -> Vec<&EndExpr> {
        match self {
            EndExpr::Union(es) => es.iter().flat_map(|e| e.components()).collect(),
            e => vec![e],
        }
    }

    pub fn has_marked(&self) -> bool {
        match self {
            EndExpr::Pt(p) | EndExpr::Cantor(p) => p.is_marked(),
            EndExpr::Seq(e, l) => l.is_marked() || e.has_marked(),
            EndExpr::Union(es) => es.iter().any(EndExpr::has_marked),
        }
    }

    /// Checks that the expression denotes a non-empty space whose marked
    /// subset is closed.
    pub fn validate(&self) -> Result<(), ExprError> {
        match self {
            EndExpr::Pt(_) | EndExpr::Cantor(_) => Ok(()),
            EndExpr::Union(es) => {
                if es.is_empty() {
                    return Err(ExprError::Empty);
                }
                es.iter().try_for_each(EndExpr::validate)
            }
            EndExpr::Seq(e, l) => {
                e.validate()?;
                if e.has_marked() && !l.is_marked() {
                    return Err(ExprError::PlanarLimit(format!("{self}")));
                }
                Ok(())
            }
        }
    }

    pub fn normalize(self) -> EndExpr {
        match self {
            EndExpr::Pt(_) | EndExpr::Cantor(_) => self,
            EndExpr::Union(es) => {
                let parts: Vec<EndExpr> = es
                    .into_iter()
                    .flat_map(|e| match e.normalize() {
                        EndExpr::Union(xs) => xs,
                        x => vec![x],
                    })
                    .collect();
                EndExpr::union(simplify_union(parts))
            }
            EndExpr::Seq(e, l) => {
                let mut round = match e.normalize() {
                    EndExpr::Union(xs) => xs,
                    x => vec![x],
                };
                round = simplify_union(round);
                round.dedup();
                if round.len() == 1 && round[0] == EndExpr::Cantor(l) {
                    return EndExpr::Cantor(l);
                }
                EndExpr::seq(EndExpr::union(round), l)
            }
        }
    }

    /// The non-planar subspace, or `None` when it is empty.
    pub fn nonplanar_part(&self) -> Option<EndExpr> {
        match self {
            EndExpr::Pt(p) => p.is_marked().then_some(EndExpr::Pt(*p)),
            EndExpr::Cantor(p) => p.is_marked().then_some(EndExpr::Cantor(*p)),
            EndExpr::Union(es) => {
                let parts: Vec<EndExpr> = es.iter().filter_map(EndExpr::nonplanar_part).collect();
                (!parts.is_empty()).then(|| EndExpr::union(parts))
            }
            EndExpr::Seq(e, l) => {
                if !l.is_marked() {
                    return None;
                }
                Some(match e.nonplanar_part() {
                    Some(x) => EndExpr::seq(x, *l),
                    None => EndExpr::Pt(*l),
                })
            }
        }
    }

    /// Cantor-Bendixson profile of the denoted pair, computed over the algebra.
    pub fn profile(&self) -> EndsProfile {
        match self {
            EndExpr::Pt(p) => {
                let mut ranks = BTreeMap::new();
                ranks.insert(0, Extended::ONE);
                EndsProfile {
                    marked_ranks: if p.is_marked() { ranks.clone() } else { BTreeMap::new() },
                    ranks,
                    kernel: false,
                    marked_kernel: false,
                    all_marked: p.is_marked(),
                }
            }
            EndExpr::Cantor(p) => EndsProfile {
                ranks: BTreeMap::new(),
                kernel: true,
                marked_ranks: BTreeMap::new(),
                marked_kernel: p.is_marked(),
                all_marked: p.is_marked(),
            },
            EndExpr::Union(es) => {
                let mut out = EndsProfile {
                    all_marked: true,
                    ..EndsProfile::default()
                };
                for e in es {
                    let p = e.profile();
                    merge(&mut out.ranks, &p.ranks, Extended::ONE);
                    merge(&mut out.marked_ranks, &p.marked_ranks, Extended::ONE);
                    out.kernel |= p.kernel;
                    out.marked_kernel |= p.marked_kernel;
                    out.all_marked &= p.all_marked;
                }
                out
            }
            EndExpr::Seq(e, l) => {
                let p = e.profile();
                let mut out = EndsProfile::default();
                merge(&mut out.ranks, &p.ranks, Extended::Infinite);
                merge(&mut out.marked_ranks, &p.marked_ranks, Extended::Infinite);
                out.kernel = p.kernel;
                out.marked_kernel = p.marked_kernel || (p.kernel && l.is_marked());
                out.all_marked = p.all_marked && l.is_marked();
                if !p.kernel {
                    let top = p.ranks.keys().next_back().map_or(0, |r| r + 1);
                    let one = BTreeMap::from([(top, Extended::ONE)]);
                    merge(&mut out.ranks, &one, Extended::ONE);
                    if l.is_marked() {
                        merge(&mut out.marked_ranks, &one, Extended::ONE);
                    }
                }
                out
            }
        }
    }

    /// Profile of the non-planar subspace taken as a space of its own, with
    /// every point marked.
    pub fn nonplanar_profile(&self) -> EndsProfile {
        match self.nonplanar_part() {
            Some(e) => e.profile(),
            None => EndsProfile::default(),
        }
    }
}

fn merge(into: &mut BTreeMap<u32, Extended>, from: &BTreeMap<u32, Extended>, times: Extended) {
    for (&r, &n) in from {
        let e = into.entry(r).or_insert(Extended::ZERO);
        *e = *e + n * times;
    }
}

/// Sorts union operands and applies the two absorption rules: duplicate
/// Cantor sets merge, and a sequence swallows extra copies of its own terms.
fn simplify_union(mut parts: Vec<EndExpr>) -> Vec<EndExpr> {
    parts.sort();
    parts.dedup_by(|a, b| a == b && matches!(a, EndExpr::Cantor(_)));
    let rounds: Vec<Vec<EndExpr>> = parts
        .iter()
        .filter_map(|p| match p {
            EndExpr::Seq(e, _) => Some(e.components().into_iter().cloned().collect()),
            _ => None,
        })
        .collect();
    parts.retain(|p| !rounds.iter().any(|r| r.contains(p)));
    parts
}

impl fmt::Display for Planarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Planarity::Planar => "p",
            Planarity::Nonplanar => "np",
        })
    }
}

impl fmt::Display for EndExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EndExpr::Pt(p) => write!(f, "Pt({p})"),
            EndExpr::Cantor(p) => write!(f, "Cantor({p})"),
            EndExpr::Seq(e, l) => write!(f, "Seq({e}, {l})"),
            EndExpr::Union(es) => {
                f.write_str("Union(")?;
                for (i, e) in es.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{e}")?;
                }
                f.write_str(")")
            }
        }
    }
}

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn err(&self, message: &str) -> ExprError {
        ExprError::Syntax {
            pos: self.pos,
            message: String::from(message),
        }
    }

    fn word(&mut self) -> &str {
        self.ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        core::str::from_utf8(&self.s[start..self.pos]).unwrap_or("")
    }

    fn sym(&mut self, c: u8) -> Result<(), ExprError> {
        self.ws();
        if self.s.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected `{}`", c as char)))
        }
    }

    fn planarity(&mut self) -> Result<Planarity, ExprError> {
        match self.word() {
            "p" | "planar" => Ok(Planarity::Planar),
            "np" | "nonplanar" => Ok(Planarity::Nonplanar),
            _ => Err(self.err("expected p or np")),
        }
    }

    fn expr(&mut self) -> Result<EndExpr, ExprError> {
        let head = String::from(self.word());
        self.sym(b'(')?;
        let e = match head.as_str() {
            "Pt" => EndExpr::Pt(self.planarity()?),
            "Cantor" => EndExpr::Cantor(self.planarity()?),
            "Seq" => {
                let inner = self.expr()?;
                self.sym(b',')?;
                EndExpr::seq(inner, self.planarity()?)
            }
            "Union" => {
                let mut parts = vec![self.expr()?];
                loop {
                    self.ws();
                    if self.s.get(self.pos) == Some(&b',') {
                        self.pos += 1;
                        parts.push(self.expr()?);
                    } else {
                        break;
                    }
                }
                EndExpr::Union(parts)
            }
            _ => return Err(self.err("expected Pt, Cantor, Seq or Union")),
        };
        self.sym(b')')?;
        Ok(e)
    }
}

pub fn parse_end_expr(text: &str) -> Result<EndExpr, ExprError> {
    let mut c = Cursor {
        s: text.as_bytes(),
        pos: 0,
    };
    let e = c.expr()?;
    c.ws();
    if c.pos != c.s.len() {
        return Err(c.err("trailing input"));
    }
    e.validate()?;
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn p(s: &str) -> EndExpr {
        parse_end_expr(s).unwrap()
    }

    #[test]
    fn display_round_trip() {
        for s in ["Pt(np)", "Cantor(p)", "Seq(Pt(p), np)", "Union(Pt(p), Cantor(np))"] {
            assert_eq!(p(s).to_string(), s);
        }
    }

    #[test]
    fn normal_forms() {
        assert_eq!(p("Union(Cantor(p), Cantor(p))").normalize(), p("Cantor(p)"));
        assert_eq!(p("Seq(Cantor(np), np)").normalize(), p("Cantor(np)"));
        assert_eq!(
            p("Union(Pt(p), Seq(Pt(p), p))").normalize(),
            p("Seq(Pt(p), p)")
        );
        assert_eq!(
            p("Seq(Union(Pt(p), Pt(p)), p)").normalize(),
            p("Seq(Pt(p), p)")
        );
        assert_eq!(
            p("Union(Pt(p), Union(Pt(np), Pt(p)))").normalize(),
            p("Union(Pt(p), Pt(p), Pt(np))")
        );
    }

    #[test]
    fn planar_limit_rejected() {
        assert!(matches!(
            parse_end_expr("Seq(Pt(np), p)"),
            Err(ExprError::PlanarLimit(_))
        ));
    }

    #[test]
    fn profiles() {
        let flute = p("Seq(Pt(p), p)").profile();
        assert_eq!(flute.cb_report(16).unwrap().rank, super::super::CbRank::Exact(2));
        assert_eq!(flute.ranks[&0], Extended::Infinite);
        assert_eq!(flute.ranks[&1], Extended::ONE);
        let c = p("Seq(Cantor(p), np)").profile();
        assert!(c.kernel && c.marked_kernel && c.ranks.is_empty());
        assert_eq!(p("Seq(Pt(p), np)").nonplanar_part(), Some(p("Pt(np)")));
    }
}
