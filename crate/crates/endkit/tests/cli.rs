use endkit::cli::{main_with_args, Outcome};

fn data(name: &str) -> String {
    format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Outcome {
    let mut v = vec!["endkit".to_owned()];
    v.extend(args.iter().map(|a| {
        if a.ends_with(".surf") || a.ends_with(".json") {
            data(a)
        } else {
            (*a).to_owned()
        }
    }));
    main_with_args(v)
}

fn json(o: &Outcome) -> serde_json::Value {
    serde_json::from_str(&o.stdout).expect("stdout is one JSON document")
}

#[test]
fn classify_examples() {
    let o = run(&["classify", "torus1p.surf", "sphere3p.surf"]);
    assert_eq!(o.code, 0);
    assert_eq!(o.stdout, "{\"verdict\":\"NotHomeomorphic\",\"witness\":\"genus\"}\n");
    let o = run(&["classify", "s301.surf", "s301.surf"]);
    assert_eq!(o.stdout, "{\"verdict\":\"Homeomorphic\"}\n");
    let o = run(&["classify", "loch_ness.surf", "flute.surf"]);
    assert_eq!(json(&o)["witness"], "ends");
}

#[test]
fn decompose_example() {
    let o = run(&["decompose", "s301.surf", "--mode", "strict"]);
    assert_eq!((o.code, o.stdout.as_str()), (0, "{\"pants\":5,\"punctured_disks\":1}\n"));
    let o = run(&["decompose", "loch_ness.surf", "--mode", "strict", "--depth", "7"]);
    assert_eq!(json(&o)["pants"], 7);
    let o = run(&["decompose", "loch_ness.surf"]);
    assert_eq!(json(&o)["one_holed_tori"], 1);
    let o = run(&["decompose", "s301.surf", "--dot"]);
    assert!(o.stdout.starts_with("graph \"s301\""));
}

#[test]
fn torus_is_excluded_in_strict_mode() {
    let o = run(&["decompose", "torus1p.surf", "--mode", "strict"]);
    assert_eq!(o.code, 1);
    let e = &json(&o)["error"];
    assert_eq!(e["module"], "decompose");
    assert_eq!(e["kind"], "PuncturedTorusExcludedInStrict");
}

#[test]
fn invariants_fields() {
    let o = run(&["invariants", "flute.surf"]);
    assert_eq!(o.code, 0);
    let v = json(&o);
    for f in ["states", "edges", "root", "nonplanar_states", "rank", "degree", "perfect_kernel", "cardinality"] {
        assert!(v["ends"].get(f).is_some(), "missing {f}");
    }
    assert_eq!(v["ends"]["rank"], 2);
    assert_eq!(v["ends"]["degree"], 1);
    let o = run(&["invariants", "flute.surf", "--rank-cutoff", "1"]);
    assert_eq!(o.code, 2);
    assert_eq!(json(&o)["ends"]["rank"]["at_least"], 1);
}

#[test]
fn rewrite_trace_lines() {
    let o = run(&["rewrite", "config.json"]);
    assert_eq!(o.code, 0);
    let lines: Vec<serde_json::Value> =
        o.stdout.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[0]["step"], "r1");
    for l in &lines[..3] {
        assert!(l["after"]["total"].as_u64() < l["before"]["total"].as_u64());
    }
    assert_eq!(lines[3]["final"]["coerced"], serde_json::json!([2]));
    let o = run(&["rewrite", "config.json", "--schedule", "r2"]);
    assert_eq!(json(&o)["error"]["kind"], "TrivialComponentsPresent");
}

#[test]
fn degree_check() {
    let o = run(&["degree", "check", "squaring.json"]);
    assert_eq!(o.code, 0);
    let v = json(&o);
    assert_eq!(v["phe_admissible"], false);
    assert_eq!(v["descriptor"]["degree"]["abs"], 2);
}

#[test]
fn realize_and_family() {
    let o = run(&["realize", "3", "Pt(np)"]);
    assert_eq!(o.code, 1);
    assert_eq!(json(&o)["error"]["kind"], "InconsistentInvariants");
    let o = run(&["realize", "inf", "Union(Pt(np), Cantor(p))"]);
    assert_eq!(o.code, 0);
    let o = run(&["family", "5"]);
    assert_eq!(json(&o)["presentations"].as_array().unwrap().len(), 5);
    let o = run(&["family", "65"]);
    assert_eq!(json(&o)["error"]["kind"], "FamilyTooLarge");
}

#[test]
fn other_commands() {
    let o = run(&["essential-pants", "cantor.surf"]);
    assert_eq!(json(&o)["case"], "five_pants");
    let o = run(&["essential-pants", "torus1p.surf"]);
    assert_eq!(json(&o)["error"]["kind"], "ComplexityTooLow");
    let o = run(&["spine", "torus1p.surf"]);
    assert_eq!(json(&o)["rank"], 2);
    let o = run(&["graph-phe", "torus1p.surf", "sphere3p.surf"]);
    assert_eq!(json(&o)["verdict"], "NotEquivalent");
    let o = run(&["normalize", "s301.surf", "#0.0"]);
    assert!(json(&o)["presentation"].as_str().unwrap().starts_with("surface s301"));
}

#[test]
fn errors_are_objects() {
    let o = run(&["classify", "missing.surf", "s301.surf"]);
    assert_eq!((o.code, json(&o)["error"]["kind"].as_str()), (1, Some("Io")));
    let o = run(&["frobnicate"]);
    assert_eq!(json(&o)["error"]["module"], "cli");
}

#[test]
fn deterministic() {
    for args in [
        &["invariants", "cantor.surf"][..],
        &["family", "12"][..],
        &["essential-pants", "loch_ness.surf"][..],
        &["decompose", "cantor.surf", "--dot"][..],
    ] {
        assert_eq!(run(args), run(args));
    }
}
