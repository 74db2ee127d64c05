//! The eleven acceptance criteria. One line per criterion is printed; run
//! with `--nocapture` to see them.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use endkit_core::classify::{distinct_family, kerekjarto, realize, RealizeError, Verdict, Witness};
use endkit_core::decompose::{
    decompose, find_essential_pants, interchange_normalize, Decomposer, EssentialError, Mode,
};
use endkit_core::degree::{
    cantor_collapse_descriptor, infer_degree, nonsurjective_descriptor, phe_admissible,
    squaring_descriptor, DegreeConstraint, DegreeError, MapDescriptor,
};
use endkit_core::ends::{
    ends_automaton, Cardinality, CbRank, EndExpr, Marking, Planarity, DEFAULT_RANK_CUTOFF,
};
use endkit_core::rewrite::{
    alexander_homotopy, all_outcomes, annulus_push, default_schedule, ell, run_pipeline, GlobalDegree,
    Point, RewriteError, RuleName, Step,
};
use endkit_core::surface::{parse_presentation, BlockKind, Rule, RuleSystem};
use endkit_core::testkit::{random_curve_config, random_end_expr, random_front, random_rules};
use endkit_core::{Extended, SurfacePresentation};

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if let false = $cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn pres(t: &str) -> SurfacePresentation {
    parse_presentation(t).expect("fixture parses")
}

fn finite(g: u64, p: u64) -> SurfacePresentation {
    SurfacePresentation::finite_type("s", g, 0, p).expect("fixture is non-compact")
}

fn loch_ness() -> SurfacePresentation {
    pres("surface loch_ness { root = H(root) }")
}

fn cantor() -> SurfacePresentation {
    pres("surface cantor { root = P(root, root) }")
}

fn flute() -> SurfacePresentation {
    pres("surface flute { root = P(root, punc); punc = A(punc) }")
}

fn within(t: Instant, limit: Duration) -> Check {
    let e = t.elapsed();
    ensure!(e <= limit, "took {e:?}, limit {limit:?}");
    Ok(())
}

fn census(p: &SurfacePresentation, mode: Mode, depth: usize) -> Result<(usize, usize, usize), String> {
    let w = decompose(p, mode, depth).map_err(|e| e.to_string())?;
    let c = w.census();
    Ok((c.pants, c.punctured_disks, c.one_holed_tori))
}

fn decomposition_counts() -> Check {
    let t = Instant::now();
    let got = census(&finite(3, 1), Mode::Strict, 1000)?;
    ensure!(got == (5, 1, 0), "S(3,0,1): {got:?}");
    for g in 2..=6u64 {
        let got = census(&finite(g, 1), Mode::Strict, 1000)?;
        ensure!(got == (2 * g as usize - 1, 1, 0), "S({g},0,1): {got:?}");
    }
    for n in 1..=16 {
        let got = census(&loch_ness(), Mode::Strict, n)?;
        ensure!(got == (n, 0, 0), "loch_ness depth {n}: {got:?}");
    }
    within(t, Duration::from_secs(1))
}

fn euler_oracle() -> Check {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut done = 0;
    while done < 200 {
        let (g, p) = (rng.random_range(0..=8u64), rng.random_range(1..=8u64));
        if (g, p) == (0, 1) || (g, p) == (1, 1) {
            continue;
        }
        let s = finite(g, p);
        let w = Decomposer::new(&s, Mode::Strict)
            .map_err(|e| format!("S({g},0,{p}): {e}"))?
            .complete(10_000)
            .ok_or_else(|| format!("S({g},0,{p}) did not finish"))?;
        let c = w.census();
        ensure!(c.pants as u64 == 2 * g + p - 2, "S({g},0,{p}): {} pants", c.pants);
        ensure!(c.punctured_disks as u64 == p, "S({g},0,{p}): {} disks", c.punctured_disks);
        ensure!(c.one_holed_tori == 0, "S({g},0,{p}): torus piece in strict mode");
        let chi = 2 - 2 * g as i64 - p as i64;
        ensure!(w.euler_characteristic() == chi, "S({g},0,{p}): chi {}", w.euler_characteristic());
        // Every circle is glued on both sides.
        ensure!(w.circles().values().all(|e| e.len() == 2), "S({g},0,{p}): open circle");
        done += 1;
    }
    within(t, Duration::from_secs(5))
}

fn classifier() -> Check {
    let v = kerekjarto(&finite(1, 1), &finite(0, 3));
    ensure!(
        v.verdict == Verdict::NotHomeomorphic && matches!(v.witness, Witness::Genus { .. }),
        "torus vs sphere: {v:?}"
    );
    let v = kerekjarto(&loch_ness(), &flute());
    ensure!(
        v.verdict == Verdict::NotHomeomorphic && matches!(v.witness, Witness::Ends(_)),
        "loch_ness vs flute: {v:?}"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for i in 0..100 {
        let sys = random_rules(&mut rng, 6);
        let p = SurfacePresentation::regular("p", sys.clone());
        let q = SurfacePresentation::regular("q", sys.splice_annulus_at_root());
        for (a, b) in [(&p, &p), (&p, &q)] {
            let v = kerekjarto(a, b);
            ensure!(v.verdict == Verdict::Homeomorphic, "sample {i}: {v:?} on {a} / {b}");
        }
    }
    Ok(())
}

fn ends_invariants() -> Check {
    let c = ends_automaton(&cantor());
    let r = c.cb_report(Marking::All, DEFAULT_RANK_CUTOFF).map_err(|e| e.to_string())?;
    ensure!(r.cardinality == Cardinality::Uncountable && r.perfect_kernel, "cantor: {r:?}");
    ensure!(c.nonplanar_profile().is_empty(), "cantor has non-planar ends");
    let l = ends_automaton(&loch_ness());
    ensure!(l.cardinality() == Cardinality::Finite(1), "loch_ness ends");
    ensure!(
        l.nonplanar_profile().cardinality() == Cardinality::Finite(1),
        "loch_ness non-planar ends"
    );
    let f = ends_automaton(&flute())
        .cb_report(Marking::All, DEFAULT_RANK_CUTOFF)
        .map_err(|e| e.to_string())?;
    ensure!(f.rank == CbRank::Exact(2) && f.degree == Extended::Finite(1), "flute: {f:?}");
    Ok(())
}

/// Builds presentations from expressions without going through `realize`:
/// two-state annulus loops for points, left-nested unions, an annulus on
/// every sequence spine and handles threaded through annuli.
struct Reference {
    rules: Vec<Rule>,
}

impl Reference {
    fn add(&mut self, kind: BlockKind) -> usize {
        let i = self.rules.len();
        self.rules.push(Rule { name: format!("n{i}"), kind, children: Vec::new() });
        i
    }

    fn link(&mut self, s: usize, children: Vec<usize>) {
        self.rules[s].children = children;
    }

    fn build(&mut self, e: &EndExpr) -> usize {
        match e {
            EndExpr::Pt(l) => {
                let a = self.add(BlockKind::Annulus);
                let b = self.add(if l.is_marked() { BlockKind::Handle } else { BlockKind::Annulus });
                self.link(a, vec![b]);
                self.link(b, vec![a]);
                a
            }
            EndExpr::Cantor(l) => {
                let x = self.add(BlockKind::Pants);
                let y = self.add(if l.is_marked() { BlockKind::Handle } else { BlockKind::Annulus });
                let z = self.add(BlockKind::Annulus);
                self.link(x, vec![y, z]);
                self.link(y, vec![x]);
                self.link(z, vec![x]);
                x
            }
            EndExpr::Seq(inner, l) => {
                let s = self.add(if l.is_marked() { BlockKind::Handle } else { BlockKind::Annulus });
                let u = self.add(BlockKind::Pants);
                let i = self.build(inner);
                self.link(s, vec![u]);
                self.link(u, vec![i, s]);
                s
            }
            EndExpr::Union(parts) => {
                let mut acc = self.build(&parts[0]);
                for p in &parts[1..] {
                    let u = self.add(BlockKind::Pants);
                    let q = self.build(p);
                    self.link(u, vec![acc, q]);
                    acc = u;
                }
                acc
            }
        }
    }

    fn surface(g: u64, e: &EndExpr) -> SurfacePresentation {
        let mut r = Reference { rules: Vec::new() };
        let body = r.build(e);
        let mut root = body;
        for _ in 0..g {
            let a = r.add(BlockKind::Annulus);
            let h = r.add(BlockKind::Handle);
            r.link(a, vec![h]);
            r.link(h, vec![root]);
            root = a;
        }
        let sys = RuleSystem::pruned(r.rules, root).expect("reference system is total");
        SurfacePresentation::regular("reference", sys)
    }
}

fn realization_round_trip() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..50 {
        let marked = rng.random_bool(0.5);
        let e = random_end_expr(&mut rng, 3, marked);
        let (g, finite_g) = if e.has_marked() {
            (Extended::Infinite, 0)
        } else {
            let g = rng.random_range(0..=3);
            (Extended::Finite(g), g)
        };
        let r = realize(g, &e).map_err(|err| format!("sample {i} ({e}): {err}"))?;
        let reference = if g.is_finite() {
            Reference::surface(finite_g, &e)
        } else {
            Reference::surface(0, &e)
        };
        let v = kerekjarto(&r, &reference);
        ensure!(v.verdict == Verdict::Homeomorphic, "sample {i} g={g} {e}: {v:?}\n{r}\n{reference}");
    }
    ensure!(
        realize(Extended::Finite(3), &EndExpr::Pt(Planarity::Nonplanar))
            == Err(RealizeError::InconsistentInvariants),
        "realize(3, Pt(np)) accepted"
    );
    Ok(())
}

fn interchange_invariance() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for i in 0..100 {
        let p = SurfacePresentation::regular("p", random_rules(&mut rng, 6));
        let other = SurfacePresentation::regular("o", random_rules(&mut rng, 6));
        let front = random_front(&mut rng, &p.rule_system());
        let q = interchange_normalize(&p, &front).map_err(|e| format!("sample {i}: {e}"))?;
        ensure!(p.genus() == q.genus(), "sample {i}: genus changed\n{p}\n{q}");
        let v = kerekjarto(&p, &q);
        ensure!(v.verdict == Verdict::Homeomorphic, "sample {i}: {v:?}\n{p}\n{q}");
        let (a, b) = (kerekjarto(&p, &other), kerekjarto(&q, &other));
        ensure!(a.verdict == b.verdict, "sample {i}: {a:?} vs {b:?}");
    }
    Ok(())
}

fn rewriting() -> Check {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut confluence_checked = 0;
    for i in 0..1500 {
        let max = if i < 1000 { 12 } else { 6 };
        let c = random_curve_config(&mut rng, max);
        // Any legal schedule stops within the initial measure.
        let mut cur = c.clone();
        let mut steps = 0;
        loop {
            let legal = cur.legal_steps();
            if legal.is_empty() {
                break;
            }
            let s = legal[rng.random_range(0..legal.len())];
            cur = cur.apply(s).map_err(|e| format!("config {i}: {e}"))?;
            steps += 1;
            ensure!(steps <= c.measure().total(), "config {i}: no termination");
        }
        for &target in &cur.targets {
            ensure!(cur.count(target) <= 1, "config {i}: target {target} keeps {}", cur.count(target));
        }
        let (coarse, _) = run_pipeline(&c, &default_schedule()[..3]).map_err(|e| format!("config {i}: {e}"))?;
        ensure!(coarse == cur, "config {i}: random schedule and rules disagree");
        let empty = c.targets.iter().find(|&&t| coarse.count(t) == 0);
        match (run_pipeline(&c, &default_schedule()), c.global_degree, empty) {
            (Ok((out, _)), GlobalDegree::PlusMinusOne | GlobalDegree::Other(_), _) => {
                ensure!(out.targets.iter().all(|&t| out.count(t) == 1), "config {i}: surjectivity");
            }
            (Ok(_), GlobalDegree::Zero, _) => {}
            (Err(RewriteError::DegreeUnknown), GlobalDegree::Unknown, _) => {}
            (Err(RewriteError::InconsistentConfiguration(t)), GlobalDegree::PlusMinusOne | GlobalDegree::Other(_), Some(&e)) => {
                ensure!(t == e, "config {i}: wrong target reported");
            }
            (r, d, e) => return Err(format!("config {i}: {r:?} with degree {d:?}, empty target {e:?}")),
        }
        if c.components.len() <= 6 {
            let outs = all_outcomes(&c);
            ensure!(outs.len() == 1 && outs.contains(&coarse), "config {i}: {} outcomes", outs.len());
            confluence_checked += 1;
        }
    }
    ensure!(confluence_checked >= 500, "only {confluence_checked} confluence checks");
    // A target without preimage under degree +-1.
    let mut c = random_curve_config(&mut ChaCha8Rng::seed_from_u64(0), 0);
    c.targets = vec![0];
    c.global_degree = GlobalDegree::PlusMinusOne;
    ensure!(
        run_pipeline(&c, &[Step::Rule(RuleName::R4)]) == Err(RewriteError::InconsistentConfiguration(0)),
        "empty target accepted"
    );
    within(t, Duration::from_secs(30))
}

fn degree_ledger() -> Check {
    let sq = infer_degree(&squaring_descriptor()).map_err(|e| e.to_string())?;
    ensure!(sq.degree.admits(2) && sq.degree.admits(-2), "squaring: {:?}", sq.degree);
    ensure!(phe_admissible(&squaring_descriptor()).is_err(), "squaring accepted as equivalence");
    let psi = infer_degree(&nonsurjective_descriptor()).map_err(|e| e.to_string())?;
    ensure!(psi.degree == DegreeConstraint::Exact(0), "psi: {:?}", psi.degree);
    ensure!(phe_admissible(&cantor_collapse_descriptor()).is_err(), "collapse accepted");
    let m = MapDescriptor { boundary_embedding: Some((1, 2)), ..MapDescriptor::default() };
    ensure!(
        infer_degree(&m) == Err(DegreeError::BoundaryCountMismatch { b1: 1, b2: 2 }),
        "boundary mismatch accepted"
    );
    Ok(())
}

fn numeric_formulas() -> Check {
    use std::f64::consts::PI;
    for i in 1..=100 {
        for j in 0..10 {
            let z = Point::polar(i as f64 / 100.0, 2.0 * PI * j as f64 / 10.0);
            for k in 0..=10 {
                let h = alexander_homotopy(|w| w, z, k as f64 / 10.0).map_err(|e| e.to_string())?;
                ensure!(h.dist(z) <= 1e-12, "identity moved {z:?}");
            }
        }
    }
    let phi = |w: Point| {
        let r = w.norm();
        if r == 0.0 {
            w
        } else {
            Point::polar(r * (2.0 - r), w.arg() + 0.7 * r)
        }
    };
    for k in 1..=9 {
        let t = k as f64 / 10.0;
        for j in 0..12 {
            let th = 2.0 * PI * j as f64 / 12.0;
            let r = 1.0 - t;
            let a = alexander_homotopy(phi, Point::polar(r, th), t).map_err(|e| e.to_string())?;
            for d in [-1e-12, 1e-12] {
                let b = alexander_homotopy(phi, Point::polar(r + d, th), t).map_err(|e| e.to_string())?;
                ensure!(a.dist(b) <= 1e-9, "seam jump at t={t}");
            }
        }
    }
    for k in 0..=20 {
        let z = Point::new(libm_pow2(-k), 0.0);
        let mut worst: f64 = 0.0;
        for i in 0..=100 {
            let h = alexander_homotopy(phi, z, i as f64 / 100.0).map_err(|e| e.to_string())?;
            worst = worst.max(h.norm());
        }
        ensure!(worst <= 2.0 * z.norm(), "|H| = {worst} at |z| = {}", z.norm());
    }
    let z = Point::polar(1.5, 0.4);
    for i in 0..=2000 {
        let s = 1.0 + i as f64 / 1000.0;
        let (_, r) = annulus_push(|z, _| z, |_, s| 1.0 + (s - 1.0) * (s - 1.0) / 4.0, z, s, 1.0)
            .map_err(|e| e.to_string())?;
        ensure!((r == 2.0) == (s == 3.0), "preimage of 2 contains {s}");
    }
    ensure!(ell(3.0) == 2.0, "ell(3) = {}", ell(3.0));
    Ok(())
}

fn libm_pow2(k: i32) -> f64 {
    2f64.powi(k)
}

fn family() -> Check {
    let t = Instant::now();
    let fam = distinct_family(10);
    ensure!(fam.len() == 10, "{} presentations", fam.len());
    for i in 0..10 {
        for j in i + 1..10 {
            let v = kerekjarto(&fam[i], &fam[j]);
            ensure!(v.verdict == Verdict::NotHomeomorphic, "members {i}, {j}: {v:?}");
        }
    }
    within(t, Duration::from_secs(5))
}

fn essential_pants() -> Check {
    for p in [cantor(), loch_ness()] {
        let e = find_essential_pants(&p).map_err(|e| format!("{}: {e}", p.name))?;
        ensure!(e.components.len() >= 2, "{}: {} components", p.name, e.components.len());
        ensure!(
            e.components.iter().all(|c| c.rank >= Extended::Finite(2)),
            "{}: small component",
            p.name
        );
    }
    ensure!(
        find_essential_pants(&finite(1, 1)) == Err(EssentialError::ComplexityTooLow { genus: 1, ends: 1 }),
        "S(1,0,1) accepted"
    );
    Ok(())
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 11] = [
        ("decomposition counts", decomposition_counts),
        ("euler oracle", euler_oracle),
        ("classifier", classifier),
        ("ends invariants", ends_invariants),
        ("realization round trip", realization_round_trip),
        ("interchange invariance", interchange_invariance),
        ("rewriting", rewriting),
        ("degree ledger", degree_ledger),
        ("numeric formulas", numeric_formulas),
        ("family", family),
        ("essential pants", essential_pants),
    ];
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let r = f();
        let ms = t.elapsed().as_millis();
        match &r {
            Ok(()) => println!("criterion {:>2} {name}: PASS ({ms} ms)", i + 1),
            Err(e) => {
                println!("criterion {:>2} {name}: FAIL ({ms} ms): {e}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
