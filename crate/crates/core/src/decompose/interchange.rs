//! Moving chosen blocks of the unfolding to the front of the construction.
//!
//! The blocks on the paths to the chosen occurrences form a compact
//! subsurface K. It is rebuilt by gluing the chosen blocks first, each onto
//! the oldest open boundary, then the rest of K breadth first. The subtrees
//! hanging off K are reattached to the remaining boundaries in order.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::surface::{fresh_name, Rule, RuleSystem, SurfacePresentation};

/// A node of the unfolding: a path of child slots from the root, or a rule
/// whose unfolding copy is unique.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Occurrence {
    Path(Vec<usize>),
    Rule(String),
}

impl fmt::Display for Occurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Occurrence::Rule(r) => f.write_str(r),
            Occurrence::Path(p) => {
                f.write_str("#")?;
                for (i, s) in p.iter().enumerate() {
                    if i > 0 {
                        f.write_str(".")?;
                    }
                    write!(f, "{s}")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum InterchangeError {
    #[error("occurrence `{0}` repeats inside a cycle and has no unique copy")]
    OccurrenceInsideCycle(String),
    #[error("occurrence `{0}` does not exist")]
    UnknownOccurrence(String),
    #[error("occurrence `{0}` listed twice")]
    DuplicateOccurrence(String),
}

/// Parses `#` (the root), `#0.1` (slot path) or a rule name.
pub fn parse_occurrence(s: &str) -> Result<Occurrence, InterchangeError> {
    let s = s.trim();
    let Some(rest) = s.strip_prefix('#') else {
        if s.is_empty() {
            return Err(InterchangeError::UnknownOccurrence(String::from(s)));
        }
        return Ok(Occurrence::Rule(String::from(s)));
    };
    if rest.is_empty() {
        return Ok(Occurrence::Path(Vec::new()));
    }
    rest.split('.')
        .map(|x| x.parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map(Occurrence::Path)
        .map_err(|_| InterchangeError::UnknownOccurrence(String::from(s)))
}

fn resolve(sys: &RuleSystem, occ: &Occurrence) -> Result<Vec<usize>, InterchangeError> {
    match occ {
        Occurrence::Path(p) => {
            let mut s = sys.root();
            for &slot in p {
                s = *sys.rules()[s]
                    .children
                    .get(slot)
                    .ok_or_else(|| InterchangeError::UnknownOccurrence(format!("{occ}")))?;
            }
            Ok(p.clone())
        }
        Occurrence::Rule(name) => {
            let target = sys
                .state(name)
                .ok_or_else(|| InterchangeError::UnknownOccurrence(name.clone()))?;
            if sys.after_cycle()[target] {
                return Err(InterchangeError::OccurrenceInsideCycle(name.clone()));
            }
            // Outside cycles the unfolding below the root is finite here;
            // take the breadth-first copy.
            let mut q = VecDeque::from([(sys.root(), Vec::new())]);
            while let Some((s, path)) = q.pop_front() {
                if s == target {
                    return Ok(path);
                }
                for (i, &c) in sys.rules()[s].children.iter().enumerate() {
                    let mut p = path.clone();
                    p.push(i);
                    q.push_back((c, p));
                }
            }
            Err(InterchangeError::UnknownOccurrence(name.clone()))
        }
    }
}

fn state_at(sys: &RuleSystem, path: &[usize]) -> usize {
    path.iter().fold(sys.root(), |s, &i| sys.rules()[s].children[i])
}

/// Breadth-first order on unfolding paths.
fn bfs_key(p: &[usize]) -> (usize, Vec<usize>) {
    (p.len(), p.to_vec())
}

pub fn interchange_normalize(
    p: &SurfacePresentation,
    front: &[Occurrence],
) -> Result<SurfacePresentation, InterchangeError> {
    if front.is_empty() {
        return Ok(p.clone());
    }
    let sys = p.rule_system();
    let mut fronts: Vec<Vec<usize>> = Vec::new();
    for occ in front {
        let path = resolve(&sys, occ)?;
        if fronts.contains(&path) {
            return Err(InterchangeError::DuplicateOccurrence(format!("{occ}")));
        }
        fronts.push(path);
    }
    let mut k: BTreeSet<(usize, Vec<usize>)> = BTreeSet::new();
    for f in &fronts {
        for i in 0..=f.len() {
            k.insert(bfs_key(&f[..i]));
        }
    }
    let mut order: Vec<Vec<usize>> = fronts.clone();
    for (_, path) in &k {
        if !fronts.contains(path) {
            order.push(path.clone());
        }
    }
    // Subtrees hanging off K, in breadth-first order of their roots.
    let mut frontier: Vec<(usize, Vec<usize>)> = Vec::new();
    for (_, path) in &k {
        let s = state_at(&sys, path);
        for i in 0..sys.rules()[s].children.len() {
            let mut c = path.clone();
            c.push(i);
            if !k.contains(&bfs_key(&c)) {
                frontier.push(bfs_key(&c));
            }
        }
    }
    frontier.sort();

    let mut rules: Vec<Rule> = sys.rules().to_vec();
    let base = rules.len();
    let mut index: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for (i, path) in order.iter().enumerate() {
        let s = state_at(&sys, path);
        let name = fresh_name(&rules, "k");
        rules.push(Rule {
            name,
            kind: sys.kind(s),
            children: vec![usize::MAX; sys.kind(s).arity()],
        });
        index.insert(path.clone(), base + i);
    }
    let mut open: VecDeque<(usize, usize)> = VecDeque::new();
    for (i, _) in order.iter().enumerate() {
        let me = base + i;
        if i > 0 {
            let (parent, slot) = open.pop_front().expect("K has enough open boundaries");
            rules[parent].children[slot] = me;
        }
        for slot in 0..rules[me].children.len() {
            open.push_back((me, slot));
        }
    }
    debug_assert_eq!(open.len(), frontier.len());
    for ((_, path), (parent, slot)) in frontier.iter().zip(open) {
        rules[parent].children[slot] = state_at(&sys, path);
    }
    let out = RuleSystem::pruned(rules, base).expect("rebuilt system is total");
    Ok(SurfacePresentation::regular(p.name.clone(), out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{kerekjarto, Verdict};
    use crate::surface::{parse_presentation, BlockKind};

    #[test]
    fn occurrence_syntax() {
        assert_eq!(parse_occurrence("#").unwrap(), Occurrence::Path(vec![]));
        assert_eq!(parse_occurrence("#0.1").unwrap(), Occurrence::Path(vec![0, 1]));
        assert_eq!(parse_occurrence("h").unwrap(), Occurrence::Rule(String::from("h")));
        assert!(parse_occurrence("#a").is_err());
    }

    #[test]
    fn handle_moves_first() {
        // S_{1,0,3} with the handle third in the construction.
        let p = parse_presentation("surface s { a = P(b, t); b = P(h, t); h = H(t); t = A(t) }").unwrap();
        let q = interchange_normalize(&p, &[Occurrence::Rule(String::from("h"))]).unwrap();
        let sys = q.rule_system();
        assert_eq!(sys.kind(sys.root()), BlockKind::Handle);
        assert_eq!(q.canonical_finite_type().unwrap(), (1, 0, 3));
        assert_eq!(kerekjarto(&p, &q).verdict, Verdict::Homeomorphic);
    }

    #[test]
    fn empty_front_is_identity() {
        let p = parse_presentation("surface c { root = P(root,root) }").unwrap();
        assert_eq!(interchange_normalize(&p, &[]).unwrap(), p);
    }

    #[test]
    fn rule_inside_cycle_rejected() {
        let p = parse_presentation("surface l { root = H(root) }").unwrap();
        assert!(matches!(
            interchange_normalize(&p, &[Occurrence::Rule(String::from("root"))]),
            Err(InterchangeError::OccurrenceInsideCycle(_))
        ));
        let q = interchange_normalize(&p, &[Occurrence::Path(vec![0]), Occurrence::Path(vec![])]).unwrap();
        assert_eq!(kerekjarto(&p, &q).verdict, Verdict::Homeomorphic);
    }

    #[test]
    fn two_handles_to_front() {
        let p = parse_presentation("surface g { a = P(x, y); x = H(t); y = H(t); t = A(t) }").unwrap();
        let front = [Occurrence::Rule(String::from("y")), Occurrence::Rule(String::from("x"))];
        let q = interchange_normalize(&p, &front).unwrap();
        let sys = q.rule_system();
        let r = sys.root();
        assert_eq!(sys.kind(r), BlockKind::Handle);
        assert_eq!(sys.kind(sys.rules()[r].children[0]), BlockKind::Handle);
        assert_eq!(kerekjarto(&p, &q).verdict, Verdict::Homeomorphic);
        assert_eq!(q.genus(), p.genus());
    }
}
