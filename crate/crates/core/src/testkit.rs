//! Random generators for property and acceptance tests.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::decompose::Occurrence;
use crate::ends::{EndExpr, Planarity};
use crate::rewrite::{Component, ComponentKind, CurveConfig, GlobalDegree, Label};
use crate::surface::{BlockKind, Rule, RuleSystem};

/// A reachable rule system with at most `max_states` rules, rooted at `s0`.
pub fn random_rules<R: Rng>(rng: &mut R, max_states: usize) -> RuleSystem {
    let n = rng.random_range(1..=max_states.max(1));
    let rules: Vec<Rule> = (0..n)
        .map(|i| {
            let kind = match rng.random_range(0..3) {
                0 => BlockKind::Annulus,
                1 => BlockKind::Pants,
                _ => BlockKind::Handle,
            };
            let children = (0..kind.arity()).map(|_| rng.random_range(0..n)).collect();
            Rule {
                name: format!("s{i}"),
                kind,
                children,
            }
        })
        .collect();
    RuleSystem::pruned(rules, 0).expect("generated system is total")
}

fn planarity<R: Rng>(rng: &mut R, allow_marked: bool) -> Planarity {
    Planarity::from_marked(allow_marked && rng.random_bool(0.5))
}

/// A valid end expression of nesting depth at most `depth`.
pub fn random_end_expr<R: Rng>(rng: &mut R, depth: usize, allow_marked: bool) -> EndExpr {
    let choice = if depth == 0 { rng.random_range(0..2) } else { rng.random_range(0..4) };
    match choice {
        0 => EndExpr::Pt(planarity(rng, allow_marked)),
        1 => EndExpr::Cantor(planarity(rng, allow_marked)),
        2 => {
            let inner = random_end_expr(rng, depth - 1, allow_marked);
            let limit = if inner.has_marked() {
                Planarity::Nonplanar
            } else {
                planarity(rng, allow_marked)
            };
            EndExpr::seq(inner, limit)
        }
        _ => {
            let k = rng.random_range(2..=3);
            EndExpr::Union((0..k).map(|_| random_end_expr(rng, depth - 1, allow_marked)).collect())
        }
    }
}

/// A valid configuration with at most `max_components` circles over one to
/// three targets.
pub fn random_curve_config<R: Rng>(rng: &mut R, max_components: usize) -> CurveConfig {
    let targets: Vec<usize> = (0..rng.random_range(1..=3)).collect();
    let n = rng.random_range(0..=max_components);
    let pi1_bijective = rng.random_bool(0.7);
    let mut components = Vec::new();
    let mut trivial = Vec::new();
    for id in 0..n {
        let target = targets[rng.random_range(0..targets.len())];
        let kind = if rng.random_bool(0.4) {
            let parent = if !trivial.is_empty() && rng.random_bool(0.5) {
                Some(trivial[rng.random_range(0..trivial.len())])
            } else {
                None
            };
            trivial.push(id);
            ComponentKind::Trivial { parent }
        } else if pi1_bijective && rng.random_bool(0.6) {
            ComponentKind::Primitive(Label::Degree(rng.random_range(-3..=3)))
        } else {
            ComponentKind::Primitive(Label::Homeo)
        };
        components.push(Component { id, target, kind });
    }
    let mut parallel: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for c in &components {
        if !c.is_trivial() {
            parallel.entry(c.target).or_default().push(c.id);
        }
    }
    for o in parallel.values_mut() {
        o.shuffle(rng);
    }
    let global_degree = match rng.random_range(0..4) {
        0 => GlobalDegree::Unknown,
        1 => GlobalDegree::Zero,
        2 => GlobalDegree::PlusMinusOne,
        _ => GlobalDegree::Other(rng.random_range(2..=4)),
    };
    CurveConfig {
        targets,
        components,
        parallel,
        pi1_bijective,
        global_degree,
        coerced: Default::default(),
    }
}

/// Up to three distinct unfolding paths of length at most three.
pub fn random_front<R: Rng>(rng: &mut R, sys: &RuleSystem) -> Vec<Occurrence> {
    let mut out: Vec<Occurrence> = Vec::new();
    for _ in 0..rng.random_range(0..=3) {
        let mut s = sys.root();
        let mut path = Vec::new();
        for _ in 0..rng.random_range(0..=3) {
            let kids = &sys.rules()[s].children;
            let i = rng.random_range(0..kids.len());
            path.push(i);
            s = kids[i];
        }
        let occ = Occurrence::Path(path);
        if !out.contains(&occ) {
            out.push(occ);
        }
    }
    out
}
