use super::*;
use alloc::vec;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::testkit::random_curve_config;

fn prim(id: usize, target: usize, label: Label) -> Component {
    Component { id, target, kind: ComponentKind::Primitive(label) }
}

fn triv(id: usize, target: usize, parent: Option<usize>) -> Component {
    Component { id, target, kind: ComponentKind::Trivial { parent } }
}

fn sample() -> CurveConfig {
    CurveConfig {
        targets: vec![0, 1],
        components: vec![
            triv(0, 0, None),
            triv(1, 0, Some(0)),
            prim(2, 0, Label::Degree(2)),
            prim(3, 0, Label::Homeo),
            prim(4, 1, Label::Degree(-1)),
            triv(5, 1, None),
        ],
        parallel: BTreeMap::from([(0, vec![3, 2]), (1, vec![4])]),
        pi1_bijective: true,
        global_degree: GlobalDegree::PlusMinusOne,
        coerced: BTreeSet::new(),
    }
}

#[test]
fn default_pipeline() {
    let (out, trace) = run_pipeline(&sample(), &default_schedule()).unwrap();
    assert_eq!(out.count(0), 1);
    assert_eq!(out.count(1), 1);
    assert_eq!(out.parallel[&0], vec![3]);
    assert_eq!(out.coerced, BTreeSet::from([2]));
    assert_eq!(trace.entries.len(), 3);
    for e in &trace.entries {
        assert!(e.after.total() < e.before.total());
    }
}

#[test]
fn preconditions() {
    let c = sample();
    assert_eq!(r2_homeo_normalize(&c), Err(RewriteError::TrivialComponentsPresent));
    let c1 = r1_disk_removal(&c);
    assert_eq!(r3_annulus_removal(&c1), Err(RewriteError::LabelsNotNormalized));
    assert_eq!(r4_surjectivity_endgame(&c1), Err(RewriteError::PipelineIncomplete));
}

#[test]
fn endgame() {
    let mut c = sample();
    c.components.retain(|x| x.target == 0);
    c.parallel.remove(&1);
    let run = |c: &CurveConfig| run_pipeline(c, &default_schedule()).map(|r| r.0);
    assert_eq!(run(&c), Err(RewriteError::InconsistentConfiguration(1)));
    c.global_degree = GlobalDegree::Zero;
    assert_eq!(run(&c).unwrap().count(1), 0);
    c.global_degree = GlobalDegree::Unknown;
    assert_eq!(run(&c), Err(RewriteError::DegreeUnknown));
}

#[test]
fn validation() {
    let mut c = sample();
    c.parallel.insert(1, vec![4, 2]);
    assert!(c.validate().is_err());
    let mut c = sample();
    c.components[0].kind = ComponentKind::Trivial { parent: Some(1) };
    assert_eq!(c.validate(), Err(RewriteError::InvalidConfig("nesting has a cycle")));
}

#[test]
fn nested_disks_go_together() {
    let c = sample();
    let next = c.apply(Step::Disk(0)).unwrap();
    assert!(next.get(1).is_none());
    assert_eq!(c.apply(Step::Disk(1)), Err(RewriteError::StepNotApplicable));
}

#[test]
fn sample_is_confluent() {
    let outs = all_outcomes(&sample());
    assert_eq!(outs.len(), 1);
    let (coarse, _) = run_pipeline(&sample(), &default_schedule()[..3]).unwrap();
    assert!(outs.contains(&coarse));
}

proptest! {
    #[test]
    fn fine_steps_decrease_measure(seed in any::<u64>()) {
        let c = random_curve_config(&mut ChaCha8Rng::seed_from_u64(seed), 8);
        prop_assert!(c.validate().is_ok());
        for s in c.legal_steps() {
            let next = c.apply(s).unwrap();
            prop_assert!(next.measure().total() < c.measure().total());
        }
    }

    #[test]
    fn coarse_and_fine_agree(seed in any::<u64>()) {
        let c = random_curve_config(&mut ChaCha8Rng::seed_from_u64(seed), 6);
        let outs = all_outcomes(&c);
        prop_assert_eq!(outs.len(), 1);
        let (coarse, _) = run_pipeline(&c, &default_schedule()[..3]).unwrap();
        prop_assert!(outs.contains(&coarse));
    }
}
