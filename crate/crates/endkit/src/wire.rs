//! JSON wire formats.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use endkit_core::degree::{DegreeConstraint, MapDescriptor, Orientation};
use endkit_core::ends::{Cardinality, CbRank, CbReport, EndsAutomaton};
use endkit_core::rewrite::{
    Component, ComponentKind, CurveConfig, GlobalDegree, Label, Measure, RewriteError, Step,
    TraceEntry,
};
use endkit_core::Extended;

pub fn extended(e: Extended) -> Value {
    match e {
        Extended::Finite(n) => json!(n),
        Extended::Infinite => json!("inf"),
    }
}

pub fn cardinality(c: Cardinality) -> Value {
    match c {
        Cardinality::Finite(n) => json!(n),
        Cardinality::CountablyInfinite => json!("countably_infinite"),
        Cardinality::Uncountable => json!("uncountable"),
    }
}

pub fn cb_rank(r: CbRank) -> Value {
    match r {
        CbRank::Exact(n) => json!(n),
        CbRank::AtLeast(n) => json!({ "at_least": n }),
    }
}

pub fn cb_report(r: &CbReport) -> Value {
    json!({
        "rank": cb_rank(r.rank),
        "degree": extended(r.degree),
        "perfect_kernel": r.perfect_kernel,
        "cardinality": cardinality(r.cardinality),
    })
}

/// Automaton fields followed by the report fields.
pub fn ends(a: &EndsAutomaton, r: &CbReport) -> Value {
    let name = |i: usize| a.states[i].clone();
    let mut v = json!({
        "states": a.states,
        "edges": a.edges().into_iter().map(|(s, t)| [name(s), name(t)]).collect::<Vec<_>>(),
        "root": name(a.root),
        "nonplanar_states": a.nonplanar_states().into_iter().map(name).collect::<Vec<_>>(),
    });
    if let (Value::Object(m), Value::Object(extra)) = (&mut v, cb_report(r)) {
        m.extend(extra);
    }
    v
}

// ---------------------------------------------------------------------------
// Curve configurations

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KindJson {
    Trivial,
    Primitive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LabelJson {
    Degree(i64),
    Homeo,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentJson {
    pub id: usize,
    pub target: usize,
    pub kind: KindJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<LabelJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParallelJson {
    pub target: usize,
    pub order: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GlobalDegreeJson {
    Unknown,
    Zero,
    PlusMinusOne,
    Other(i64),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveConfigJson {
    pub targets: Vec<usize>,
    pub components: Vec<ComponentJson>,
    /// Parent of each component, by position in `components`.
    pub parents: Vec<Option<usize>>,
    pub parallel: Vec<ParallelJson>,
    pub pi1_bijective: bool,
    pub global_degree: GlobalDegreeJson,
    #[serde(default)]
    pub coerced: Vec<usize>,
}

impl From<&CurveConfig> for CurveConfigJson {
    fn from(c: &CurveConfig) -> CurveConfigJson {
        let pos: BTreeMap<usize, usize> = c.components.iter().enumerate().map(|(i, x)| (x.id, i)).collect();
        CurveConfigJson {
            targets: c.targets.clone(),
            components: c
                .components
                .iter()
                .map(|x| match x.kind {
                    ComponentKind::Trivial { .. } => ComponentJson {
                        id: x.id,
                        target: x.target,
                        kind: KindJson::Trivial,
                        label: None,
                    },
                    ComponentKind::Primitive(l) => ComponentJson {
                        id: x.id,
                        target: x.target,
                        kind: KindJson::Primitive,
                        label: Some(match l {
                            Label::Degree(d) => LabelJson::Degree(d),
                            Label::Homeo => LabelJson::Homeo,
                        }),
                    },
                })
                .collect(),
            parents: c
                .components
                .iter()
                .map(|x| match x.kind {
                    ComponentKind::Trivial { parent: Some(p) } => Some(pos[&p]),
                    _ => None,
                })
                .collect(),
            parallel: c
                .parallel
                .iter()
                .map(|(&target, order)| ParallelJson { target, order: order.clone() })
                .collect(),
            pi1_bijective: c.pi1_bijective,
            global_degree: match c.global_degree {
                GlobalDegree::Unknown => GlobalDegreeJson::Unknown,
                GlobalDegree::Zero => GlobalDegreeJson::Zero,
                GlobalDegree::PlusMinusOne => GlobalDegreeJson::PlusMinusOne,
                GlobalDegree::Other(d) => GlobalDegreeJson::Other(d),
            },
            coerced: c.coerced.iter().copied().collect(),
        }
    }
}

impl TryFrom<&CurveConfigJson> for CurveConfig {
    type Error = RewriteError;

    fn try_from(j: &CurveConfigJson) -> Result<CurveConfig, RewriteError> {
        if j.parents.len() != j.components.len() {
            return Err(RewriteError::InvalidConfig("parents and components differ in length"));
        }
        let mut components = Vec::with_capacity(j.components.len());
        for (x, parent) in j.components.iter().zip(&j.parents) {
            let parent = match parent {
                Some(i) => Some(
                    j.components
                        .get(*i)
                        .ok_or(RewriteError::InvalidConfig("parent index out of range"))?
                        .id,
                ),
                None => None,
            };
            let kind = match (x.kind, x.label) {
                (KindJson::Trivial, None) => ComponentKind::Trivial { parent },
                (KindJson::Trivial, Some(_)) => {
                    return Err(RewriteError::InvalidConfig("trivial component with a label"))
                }
                (KindJson::Primitive, _) if parent.is_some() => {
                    return Err(RewriteError::InvalidConfig("primitive component with a parent"))
                }
                (KindJson::Primitive, None) => {
                    return Err(RewriteError::InvalidConfig("primitive component without a label"))
                }
                (KindJson::Primitive, Some(LabelJson::Degree(d))) => ComponentKind::Primitive(Label::Degree(d)),
                (KindJson::Primitive, Some(LabelJson::Homeo)) => ComponentKind::Primitive(Label::Homeo),
            };
            components.push(Component { id: x.id, target: x.target, kind });
        }
        components.sort_by_key(|c| c.id);
        let mut parallel = BTreeMap::new();
        for p in &j.parallel {
            if parallel.insert(p.target, p.order.clone()).is_some() {
                return Err(RewriteError::InvalidConfig("target listed twice in parallel orders"));
            }
        }
        let c = CurveConfig {
            targets: j.targets.clone(),
            components,
            parallel,
            pi1_bijective: j.pi1_bijective,
            global_degree: match j.global_degree {
                GlobalDegreeJson::Unknown => GlobalDegree::Unknown,
                GlobalDegreeJson::Zero => GlobalDegree::Zero,
                GlobalDegreeJson::PlusMinusOne => GlobalDegree::PlusMinusOne,
                GlobalDegreeJson::Other(d) => GlobalDegree::Other(d),
            },
            coerced: j.coerced.iter().copied().collect(),
        };
        c.validate()?;
        Ok(c)
    }
}

/// `r1`..`r4`, `disk:ID`, `relabel:ID` or `collapse:TARGET:INDEX`.
pub fn parse_step(s: &str) -> Option<Step> {
    use endkit_core::rewrite::RuleName;
    let parts: Vec<&str> = s.trim().split(':').collect();
    let num = |i: usize| parts.get(i).and_then(|x| x.parse::<usize>().ok());
    match (parts[0], parts.len()) {
        ("r1", 1) => Some(Step::Rule(RuleName::R1)),
        ("r2", 1) => Some(Step::Rule(RuleName::R2)),
        ("r3", 1) => Some(Step::Rule(RuleName::R3)),
        ("r4", 1) => Some(Step::Rule(RuleName::R4)),
        ("disk", 2) => num(1).map(Step::Disk),
        ("relabel", 2) => num(1).map(Step::Relabel),
        ("collapse", 3) => Some(Step::Collapse { target: num(1)?, index: num(2)? }),
        _ => None,
    }
}

pub fn step_name(s: Step) -> String {
    use endkit_core::rewrite::RuleName;
    match s {
        Step::Rule(RuleName::R1) => "r1".into(),
        Step::Rule(RuleName::R2) => "r2".into(),
        Step::Rule(RuleName::R3) => "r3".into(),
        Step::Rule(RuleName::R4) => "r4".into(),
        Step::Disk(id) => format!("disk:{id}"),
        Step::Relabel(id) => format!("relabel:{id}"),
        Step::Collapse { target, index } => format!("collapse:{target}:{index}"),
    }
}

fn measure(m: Measure) -> Value {
    json!({
        "trivial": m.trivial,
        "excess_parallel": m.excess_parallel,
        "unnormalized": m.unnormalized,
        "total": m.total(),
    })
}

pub fn trace_entry(e: &TraceEntry) -> Value {
    json!({ "step": step_name(e.step), "before": measure(e.before), "after": measure(e.after) })
}

// ---------------------------------------------------------------------------
// Map descriptors

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DegreeJson {
    Unknown,
    Abs(u64),
    Exact(i64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrientationJson {
    Preserving,
    Reversing,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DescriptorJson {
    pub proper: bool,
    pub surjective: Option<bool>,
    pub boundary_embedding: Option<[u64; 2]>,
    pub proper_homotopy_equivalence: bool,
    pub pseudo_phe: bool,
    pub target_excluded: bool,
    pub orientation: Option<OrientationJson>,
    pub ends_injective: Option<bool>,
    pub pi1_surjective: Option<bool>,
    pub degree: DegreeJson,
}

impl Default for DescriptorJson {
    fn default() -> DescriptorJson {
        DescriptorJson::from(&MapDescriptor::default())
    }
}

impl From<&MapDescriptor> for DescriptorJson {
    fn from(m: &MapDescriptor) -> DescriptorJson {
        DescriptorJson {
            proper: m.proper,
            surjective: m.surjective,
            boundary_embedding: m.boundary_embedding.map(|(a, b)| [a, b]),
            proper_homotopy_equivalence: m.proper_homotopy_equivalence,
            pseudo_phe: m.pseudo_phe,
            target_excluded: m.target_excluded,
            orientation: m.orientation.map(|o| match o {
                Orientation::Preserving => OrientationJson::Preserving,
                Orientation::Reversing => OrientationJson::Reversing,
            }),
            ends_injective: m.ends_injective,
            pi1_surjective: m.pi1_surjective,
            degree: match m.degree {
                DegreeConstraint::Unknown => DegreeJson::Unknown,
                DegreeConstraint::Abs(k) => DegreeJson::Abs(k),
                DegreeConstraint::Exact(d) => DegreeJson::Exact(d),
            },
        }
    }
}

impl From<&DescriptorJson> for MapDescriptor {
    fn from(j: &DescriptorJson) -> MapDescriptor {
        MapDescriptor {
            proper: j.proper,
            surjective: j.surjective,
            boundary_embedding: j.boundary_embedding.map(|[a, b]| (a, b)),
            proper_homotopy_equivalence: j.proper_homotopy_equivalence,
            pseudo_phe: j.pseudo_phe,
            target_excluded: j.target_excluded,
            orientation: j.orientation.map(|o| match o {
                OrientationJson::Preserving => Orientation::Preserving,
                OrientationJson::Reversing => Orientation::Reversing,
            }),
            ends_injective: j.ends_injective,
            pi1_surjective: j.pi1_surjective,
            degree: match j.degree {
                DegreeJson::Unknown => DegreeConstraint::Unknown,
                DegreeJson::Abs(k) => DegreeConstraint::Abs(k),
                DegreeJson::Exact(d) => DegreeConstraint::Exact(d),
            },
        }
    }
}
