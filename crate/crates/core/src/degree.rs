//! Degree constraints for proper maps between surfaces.
//!
//! A descriptor lists what is known about a map; [`infer_degree`] closes the
//! knowledge under the implications between the flags and the degree, or
//! reports a contradiction.

use alloc::format;
use alloc::string::String;

/// Known information about the degree, from weakest to strongest.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DegreeConstraint {
    Unknown,
    /// Degree is `k` or `-k`.
    Abs(u64),
    Exact(i64),
}

impl DegreeConstraint {
    fn normal(self) -> DegreeConstraint {
        match self {
            DegreeConstraint::Abs(0) => DegreeConstraint::Exact(0),
            c => c,
        }
    }

    /// Greatest lower bound of two constraints.
    pub fn meet(self, other: DegreeConstraint) -> Option<DegreeConstraint> {
        use DegreeConstraint::*;
        match (self.normal(), other.normal()) {
            (Unknown, x) | (x, Unknown) => Some(x),
            (Abs(a), Abs(b)) => (a == b).then_some(Abs(a)),
            (Abs(a), Exact(d)) | (Exact(d), Abs(a)) => (d.unsigned_abs() == a).then_some(Exact(d)),
            (Exact(a), Exact(b)) => (a == b).then_some(Exact(a)),
        }
    }

    pub fn admits(self, d: i64) -> bool {
        self.meet(DegreeConstraint::Exact(d)).is_some()
    }

    /// `Some(true)` if the degree is certainly non-zero, `Some(false)` if it
    /// is certainly zero.
    pub fn nonzero(self) -> Option<bool> {
        match self.normal() {
            DegreeConstraint::Unknown => None,
            DegreeConstraint::Abs(_) => Some(true),
            DegreeConstraint::Exact(d) => Some(d != 0),
        }
    }

    fn is_unit(self) -> bool {
        matches!(self.normal(), DegreeConstraint::Abs(1) | DegreeConstraint::Exact(1 | -1))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    Preserving,
    Reversing,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MapDescriptor {
    pub proper: bool,
    pub surjective: Option<bool>,
    /// Restricts to an embedding of `b1` boundary circles onto `b2`.
    pub boundary_embedding: Option<(u64, u64)>,
    pub proper_homotopy_equivalence: bool,
    pub pseudo_phe: bool,
    /// Set when the target is the plane or the punctured plane.
    pub target_excluded: bool,
    pub orientation: Option<Orientation>,
    pub ends_injective: Option<bool>,
    pub pi1_surjective: Option<bool>,
    pub degree: DegreeConstraint,
}

impl Default for MapDescriptor {
    fn default() -> MapDescriptor {
        MapDescriptor {
            proper: true,
            surjective: None,
            boundary_embedding: None,
            proper_homotopy_equivalence: false,
            pseudo_phe: false,
            target_excluded: false,
            orientation: None,
            ends_injective: None,
            pi1_surjective: None,
            degree: DegreeConstraint::Unknown,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DegreeError {
    #[error("degree contradiction: {0}")]
    DegreeContradiction(String),
    #[error("boundary embedding of {b1} circles into {b2} circles")]
    BoundaryCountMismatch { b1: u64, b2: u64 },
    #[error("inconsistent flags: {0}")]
    InconsistentFlags(&'static str),
}

fn contradiction(what: &str, m: &MapDescriptor) -> DegreeError {
    DegreeError::DegreeContradiction(format!("{what} (degree {:?})", m.degree))
}

fn meet(m: &mut MapDescriptor, c: DegreeConstraint, why: &str) -> Result<bool, DegreeError> {
    let next = m.degree.meet(c).ok_or_else(|| contradiction(why, m))?;
    let changed = next != m.degree;
    m.degree = next;
    Ok(changed)
}

fn set(flag: &mut Option<bool>, v: bool, why: &'static str) -> Result<bool, DegreeError> {
    match *flag {
        Some(x) if x == v => Ok(false),
        Some(_) => Err(DegreeError::DegreeContradiction(String::from(why))),
        None => {
            *flag = Some(v);
            Ok(true)
        }
    }
}

/// Closes `m` under the known implications.
pub fn infer_degree(m: &MapDescriptor) -> Result<MapDescriptor, DegreeError> {
    let mut m = *m;
    if m.proper_homotopy_equivalence && !m.pseudo_phe {
        m.pseudo_phe = true;
    }
    if m.pseudo_phe && !m.proper {
        return Err(DegreeError::InconsistentFlags("a pseudo proper homotopy equivalence is proper"));
    }
    if let Some((b1, b2)) = m.boundary_embedding {
        if b1 != b2 {
            return Err(DegreeError::BoundaryCountMismatch { b1, b2 });
        }
    }
    loop {
        let mut changed = false;
        if m.surjective == Some(false) {
            changed |= meet(&mut m, DegreeConstraint::Exact(0), "a non-surjective map has degree 0")?;
        }
        if m.boundary_embedding.is_some() {
            changed |= meet(&mut m, DegreeConstraint::Abs(1), "a boundary embedding forces degree +-1")?;
        }
        if m.proper_homotopy_equivalence {
            changed |= meet(&mut m, DegreeConstraint::Abs(1), "a proper homotopy equivalence has degree +-1")?;
            if m.ends_injective == Some(false) {
                return Err(contradiction("a proper homotopy equivalence is injective on ends", &m));
            }
        }
        if m.pseudo_phe && !m.target_excluded {
            changed |= meet(&mut m, DegreeConstraint::Abs(1), "a pseudo proper homotopy equivalence has degree +-1")?;
        }
        if m.degree.nonzero() == Some(true) {
            changed |= set(&mut m.surjective, true, "non-zero degree forces surjectivity")?;
        }
        if m.degree.is_unit() {
            changed |= set(&mut m.pi1_surjective, true, "degree +-1 forces a surjection on fundamental groups")?;
            if let Some(o) = m.orientation {
                let d = if o == Orientation::Preserving { 1 } else { -1 };
                changed |= meet(&mut m, DegreeConstraint::Exact(d), "orientation fixes the sign")?;
            }
        }
        if !changed {
            return Ok(m);
        }
    }
}

/// Checks whether a map with these properties could be a proper homotopy
/// equivalence.
pub fn phe_admissible(m: &MapDescriptor) -> Result<MapDescriptor, DegreeError> {
    infer_degree(&MapDescriptor {
        proper_homotopy_equivalence: true,
        ..*m
    })
}

/// Degree of a proper map with a disk witness: a point whose preimage is a
/// single disk mapped homeomorphically, with the given orientation behaviour.
pub fn degree_from_disk_witness(orientation_preserving: bool) -> i64 {
    if orientation_preserving {
        1
    } else {
        -1
    }
}

pub fn deg_compose(d1: i64, d2: i64) -> i64 {
    d1.saturating_mul(d2)
}

pub fn compose_constraints(a: DegreeConstraint, b: DegreeConstraint) -> DegreeConstraint {
    use DegreeConstraint::*;
    match (a.normal(), b.normal()) {
        (Exact(0), _) | (_, Exact(0)) => Exact(0),
        (Exact(x), Exact(y)) => Exact(deg_compose(x, y)),
        (Exact(x), Abs(k)) | (Abs(k), Exact(x)) => Abs(x.unsigned_abs().saturating_mul(k)),
        (Abs(j), Abs(k)) => Abs(j.saturating_mul(k)),
        _ => Unknown,
    }
}

/// `z -> z^2` on the plane: proper, surjective, degree 2.
pub fn squaring_descriptor() -> MapDescriptor {
    MapDescriptor {
        surjective: Some(true),
        pseudo_phe: true,
        target_excluded: true,
        orientation: Some(Orientation::Preserving),
        degree: DegreeConstraint::Abs(2),
        ..MapDescriptor::default()
    }
}

/// A proper map that misses an open set of the target.
pub fn nonsurjective_descriptor() -> MapDescriptor {
    MapDescriptor {
        surjective: Some(false),
        ..MapDescriptor::default()
    }
}

/// A proper map collapsing a Cantor set of ends onto one end.
pub fn cantor_collapse_descriptor() -> MapDescriptor {
    MapDescriptor {
        ends_injective: Some(false),
        ..MapDescriptor::default()
    }
}
