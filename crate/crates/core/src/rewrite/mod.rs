//! Rewriting of finite curve configurations.
//!
//! A configuration records the preimage circles of a finite window of
//! decomposition circles under a proper map. Trivial circles bound disks and
//! are nested in a forest. Primitive circles carry a degree label and are
//! linearly ordered per target, consecutive ones co-bounding annuli. The
//! rules remove disks, normalize labels, collapse parallel families and
//! finally check surjectivity against the global degree.

mod homotopy;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

pub use homotopy::{alexander_homotopy, annulus_push, ell, radial_extension, HomotopyError, Point};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Degree(i64),
    Homeo,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ComponentKind {
    /// Bounds a disk; `parent` is the trivial circle whose disk contains it.
    Trivial { parent: Option<usize> },
    Primitive(Label),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Component {
    pub id: usize,
    pub target: usize,
    pub kind: ComponentKind,
}

impl Component {
    pub fn is_trivial(&self) -> bool {
        matches!(self.kind, ComponentKind::Trivial { .. })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GlobalDegree {
    Unknown,
    Zero,
    PlusMinusOne,
    Other(i64),
}

impl GlobalDegree {
    fn nonzero(self) -> Option<bool> {
        match self {
            GlobalDegree::Unknown => None,
            GlobalDegree::Zero | GlobalDegree::Other(0) => Some(false),
            GlobalDegree::PlusMinusOne | GlobalDegree::Other(_) => Some(true),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CurveConfig {
    pub targets: Vec<usize>,
    /// Sorted by id.
    pub components: Vec<Component>,
    /// Per target, primitive component ids from the outermost inwards.
    pub parallel: BTreeMap<usize, Vec<usize>>,
    pub pi1_bijective: bool,
    pub global_degree: GlobalDegree,
    /// Components whose degree label was forced to a homeomorphism.
    pub coerced: BTreeSet<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum RewriteError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("trivial components must be removed first")]
    TrivialComponentsPresent,
    #[error("primitive labels are not all homeomorphisms")]
    LabelsNotNormalized,
    #[error("parallel families must be collapsed first")]
    PipelineIncomplete,
    #[error("target {0} has no preimage although the degree is non-zero")]
    InconsistentConfiguration(usize),
    #[error("global degree unknown")]
    DegreeUnknown,
    #[error("step not applicable")]
    StepNotApplicable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Measure {
    pub trivial: usize,
    pub excess_parallel: usize,
    pub unnormalized: usize,
}

impl Measure {
    pub fn total(&self) -> usize {
        self.trivial + self.excess_parallel + self.unnormalized
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum RuleName {
    R1,
    R2,
    R3,
    R4,
}

pub const DEFAULT_SCHEDULE: [RuleName; 4] = [RuleName::R1, RuleName::R2, RuleName::R3, RuleName::R4];

/// Single rewrite steps, finer than whole rules.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Step {
    Rule(RuleName),
    /// Remove an outermost trivial circle together with everything inside it.
    Disk(usize),
    Relabel(usize),
    /// Remove the circle at `index >= 1` of a target's parallel order.
    Collapse { target: usize, index: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEntry {
    pub step: Step,
    pub before: Measure,
    pub after: Measure,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RewriteTrace {
    pub entries: Vec<TraceEntry>,
}

impl CurveConfig {
    pub fn validate(&self) -> Result<(), RewriteError> {
        let ids: BTreeSet<usize> = self.components.iter().map(|c| c.id).collect();
        if ids.len() != self.components.len() {
            return Err(RewriteError::InvalidConfig("duplicate component id"));
        }
        if !self.components.windows(2).all(|w| w[0].id < w[1].id) {
            return Err(RewriteError::InvalidConfig("components not sorted by id"));
        }
        let targets: BTreeSet<usize> = self.targets.iter().copied().collect();
        if targets.len() != self.targets.len() {
            return Err(RewriteError::InvalidConfig("duplicate target"));
        }
        for c in &self.components {
            if !targets.contains(&c.target) {
                return Err(RewriteError::InvalidConfig("unknown target"));
            }
            if let ComponentKind::Trivial { parent: Some(p) } = c.kind {
                match self.get(p) {
                    Some(q) if q.is_trivial() => {}
                    _ => return Err(RewriteError::InvalidConfig("parent is not a trivial component")),
                }
            }
        }
        // Nesting must be a forest: every chain of parents ends.
        for c in &self.components {
            let mut cur = c.id;
            for _ in 0..=self.components.len() {
                match self.get(cur).map(|x| x.kind) {
                    Some(ComponentKind::Trivial { parent: Some(p) }) => cur = p,
                    _ => break,
                }
                if cur == c.id {
                    return Err(RewriteError::InvalidConfig("nesting has a cycle"));
                }
            }
        }
        let mut seen = BTreeSet::new();
        for (&t, order) in &self.parallel {
            for &id in order {
                match self.get(id) {
                    Some(c) if !c.is_trivial() && c.target == t && seen.insert(id) => {}
                    _ => return Err(RewriteError::InvalidConfig("bad parallel order")),
                }
            }
        }
        let primitive = self.components.iter().filter(|c| !c.is_trivial()).count();
        if seen.len() != primitive {
            return Err(RewriteError::InvalidConfig("primitive component missing from orders"));
        }
        Ok(())
    }

    pub fn get(&self, id: usize) -> Option<&Component> {
        self.components
            .binary_search_by_key(&id, |c| c.id)
            .ok()
            .map(|i| &self.components[i])
    }

    pub fn count(&self, target: usize) -> usize {
        self.parallel.get(&target).map_or(0, Vec::len)
    }

    pub fn measure(&self) -> Measure {
        Measure {
            trivial: self.components.iter().filter(|c| c.is_trivial()).count(),
            excess_parallel: self.parallel.values().map(|o| o.len().saturating_sub(1)).sum(),
            unnormalized: if self.pi1_bijective {
                self.components
                    .iter()
                    .filter(|c| matches!(c.kind, ComponentKind::Primitive(Label::Degree(_))))
                    .count()
            } else {
                0
            },
        }
    }

    fn has_trivial(&self) -> bool {
        self.components.iter().any(Component::is_trivial)
    }

    fn remove(&mut self, gone: &BTreeSet<usize>) {
        self.components.retain(|c| !gone.contains(&c.id));
        for o in self.parallel.values_mut() {
            o.retain(|id| !gone.contains(id));
        }
    }

    /// Trivial circles inside the disk of `root`, including `root`.
    fn disk(&self, root: usize) -> BTreeSet<usize> {
        let mut out = BTreeSet::from([root]);
        loop {
            let before = out.len();
            for c in &self.components {
                if let ComponentKind::Trivial { parent: Some(p) } = c.kind {
                    if out.contains(&p) {
                        out.insert(c.id);
                    }
                }
            }
            if out.len() == before {
                return out;
            }
        }
    }

    /// Steps applicable to this configuration, in a fixed order.
    pub fn legal_steps(&self) -> Vec<Step> {
        let mut out = Vec::new();
        for c in &self.components {
            if c.kind == (ComponentKind::Trivial { parent: None }) {
                out.push(Step::Disk(c.id));
            }
        }
        if self.has_trivial() {
            return out;
        }
        if self.pi1_bijective {
            for c in &self.components {
                if matches!(c.kind, ComponentKind::Primitive(Label::Degree(_))) {
                    out.push(Step::Relabel(c.id));
                }
            }
        }
        for (&t, order) in &self.parallel {
            let normal = order
                .iter()
                .all(|&id| self.get(id).map(|c| c.kind) == Some(ComponentKind::Primitive(Label::Homeo)));
            if normal {
                for index in 1..order.len() {
                    out.push(Step::Collapse { target: t, index });
                }
            }
        }
        out
    }

    pub fn apply(&self, step: Step) -> Result<CurveConfig, RewriteError> {
        match step {
            Step::Rule(RuleName::R1) => Ok(r1_disk_removal(self)),
            Step::Rule(RuleName::R2) => r2_homeo_normalize(self),
            Step::Rule(RuleName::R3) => r3_annulus_removal(self),
            Step::Rule(RuleName::R4) => r4_surjectivity_endgame(self),
            s => {
                if !self.legal_steps().contains(&s) {
                    return Err(RewriteError::StepNotApplicable);
                }
                let mut next = self.clone();
                match s {
                    Step::Disk(root) => next.remove(&self.disk(root)),
                    Step::Relabel(id) => relabel(&mut next, id),
                    Step::Collapse { target, index } => {
                        let id = self.parallel[&target][index];
                        next.remove(&BTreeSet::from([id]));
                    }
                    Step::Rule(_) => unreachable!(),
                }
                Ok(next)
            }
        }
    }
}

fn relabel(c: &mut CurveConfig, id: usize) {
    let i = c.components.binary_search_by_key(&id, |x| x.id).expect("known id");
    if let ComponentKind::Primitive(Label::Degree(d)) = c.components[i].kind {
        if d.unsigned_abs() != 1 {
            c.coerced.insert(id);
        }
        c.components[i].kind = ComponentKind::Primitive(Label::Homeo);
    }
}

/// Removes every trivial circle at once; primitive circles are untouched.
pub fn r1_disk_removal(c: &CurveConfig) -> CurveConfig {
    let gone: BTreeSet<usize> = c
        .components
        .iter()
        .filter(|x| x.is_trivial())
        .map(|x| x.id)
        .collect();
    let mut out = c.clone();
    out.remove(&gone);
    out
}

pub fn r2_homeo_normalize(c: &CurveConfig) -> Result<CurveConfig, RewriteError> {
    if c.has_trivial() {
        return Err(RewriteError::TrivialComponentsPresent);
    }
    let mut out = c.clone();
    if c.pi1_bijective {
        let ids: Vec<usize> = c.components.iter().map(|x| x.id).collect();
        for id in ids {
            relabel(&mut out, id);
        }
    }
    // Without a bijection on fundamental groups every label is either a
    // constant map (degree 0) or a covering (non-zero degree); both are
    // left as they are.
    Ok(out)
}

pub fn r3_annulus_removal(c: &CurveConfig) -> Result<CurveConfig, RewriteError> {
    if c.has_trivial() {
        return Err(RewriteError::TrivialComponentsPresent);
    }
    if c
        .components
        .iter()
        .any(|x| x.kind != ComponentKind::Primitive(Label::Homeo))
    {
        return Err(RewriteError::LabelsNotNormalized);
    }
    let mut gone = BTreeSet::new();
    for order in c.parallel.values() {
        gone.extend(order.iter().skip(1).copied());
    }
    let mut out = c.clone();
    out.remove(&gone);
    Ok(out)
}

pub fn r4_surjectivity_endgame(c: &CurveConfig) -> Result<CurveConfig, RewriteError> {
    let m = c.measure();
    if m.trivial > 0 || m.excess_parallel > 0 {
        return Err(RewriteError::PipelineIncomplete);
    }
    match c.global_degree.nonzero() {
        None => Err(RewriteError::DegreeUnknown),
        Some(false) => Ok(c.clone()),
        Some(true) => match c.targets.iter().find(|&&t| c.count(t) == 0) {
            Some(&t) => Err(RewriteError::InconsistentConfiguration(t)),
            None => Ok(c.clone()),
        },
    }
}

/// Applies `schedule` in order. Steps that change nothing are not traced.
pub fn run_pipeline(
    c: &CurveConfig,
    schedule: &[Step],
) -> Result<(CurveConfig, RewriteTrace), RewriteError> {
    c.validate()?;
    let mut cur = c.clone();
    let mut trace = RewriteTrace::default();
    for &s in schedule {
        let next = cur.apply(s)?;
        let (before, after) = (cur.measure(), next.measure());
        if next != cur {
            debug_assert!(after.total() < before.total() || next.coerced != cur.coerced);
            trace.entries.push(TraceEntry { step: s, before, after });
        }
        cur = next;
    }
    Ok((cur, trace))
}

pub fn default_schedule() -> Vec<Step> {
    DEFAULT_SCHEDULE.iter().map(|&r| Step::Rule(r)).collect()
}

/// Final configurations over every legal schedule of fine steps.
pub fn all_outcomes(c: &CurveConfig) -> BTreeSet<CurveConfig> {
    let mut memo: BTreeMap<CurveConfig, BTreeSet<CurveConfig>> = BTreeMap::new();
    fn go(c: &CurveConfig, memo: &mut BTreeMap<CurveConfig, BTreeSet<CurveConfig>>) -> BTreeSet<CurveConfig> {
        if let Some(r) = memo.get(c) {
            return r.clone();
        }
        let steps = c.legal_steps();
        let out = if steps.is_empty() {
            BTreeSet::from([c.clone()])
        } else {
            let mut acc = BTreeSet::new();
            for s in steps {
                let next = c.apply(s).expect("legal step applies");
                acc.extend(go(&next, memo));
            }
            acc
        };
        memo.insert(c.clone(), out.clone());
        out
    }
    go(c, &mut memo)
}

#[cfg(test)]
mod tests;
