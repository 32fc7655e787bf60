//! End-to-end exercises of the command surface via `run_command`.

use cotree_lab::cli::run_command;

fn tmp(name: &str, content: &str) -> String {
    let path = std::env::temp_dir().join(format!("cotree-lab-test-{name}"));
    std::fs::write(&path, content).unwrap();
    path.to_string_lossy().into_owned()
}

fn make(args: &[&str]) -> String {
    let (code, out) = run_command(args);
    assert_eq!(code, 0, "{args:?} failed: {out}");
    out
}

#[test]
fn poset_make_info_dot_round_trip() {
    let comb = make(&["poset", "make", "comb", "2"]);
    let file = tmp("c2.json", &comb);
    let (code, info) = run_command(&["poset", "info", &file, "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&info).unwrap();
    assert_eq!(v["n"], 4);
    assert_eq!(v["depth"], 3);
    assert_eq!(v["width"], 2);
    assert_eq!(v["is_co_tree"], true);
    assert_eq!(v["upsets"], 7);
    let (code, dot) = run_command(&["poset", "dot", &file]);
    assert_eq!(code, 0);
    assert!(dot.starts_with("digraph"));
}

#[test]
fn formula_valid_exit_codes() {
    let chain = make(&["poset", "make", "chain", "2"]);
    let pfile = tmp("l2.json", &chain);
    let alg = make(&["algebra", "from-poset", &pfile]);
    let afile = tmp("l2-alg.json", &alg);
    // the linearity axiom is valid on a chain algebra
    let (code, out) = run_command(&[
        "formula",
        "valid",
        "--algebra",
        &afile,
        "(p -> q) | (q -> p)",
    ]);
    assert_eq!((code, out.trim()), (0, "valid"));
    // excluded middle is refuted, certificate included
    let (code, out) = run_command(&[
        "formula",
        "valid",
        "--algebra",
        &afile,
        "--format",
        "json",
        "p | !p",
    ]);
    assert_eq!(code, 1);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verdict"], "refuted");
    assert_eq!(v["valuation"]["p"], 1);
}

#[test]
fn formula_parse_and_eval() {
    let (code, out) = run_command(&["formula", "parse", "~!p"]);
    assert_eq!((code, out.trim()), (0, "~!p"));
    let (code, _) = run_command(&["formula", "parse", "p -> q <- r"]);
    assert_eq!(code, 2);

    let chain = make(&["poset", "make", "chain", "2"]);
    let pfile = tmp("l2b.json", &chain);
    let alg = make(&["algebra", "from-poset", &pfile]);
    let afile = tmp("l2b-alg.json", &alg);
    let (code, out) = run_command(&[
        "formula", "eval", "--algebra", &afile, "--format", "json", "--let", "p=1", "p | !p",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["value"], 1);
}

#[test]
fn algebra_verbs() {
    let comb = make(&["poset", "make", "comb", "1"]);
    let pfile = tmp("c1.json", &comb);
    let alg = make(&["algebra", "from-poset", &pfile]);
    let afile = tmp("c1-alg.json", &alg);
    let (code, out) = run_command(&["algebra", "si-check", &afile, "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["si"], true);
    assert_eq!(v["bi_godel"], true);
    let (_, out) = run_command(&["algebra", "gen-rank", &afile, "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["gen_rank"], 1);
    // dual of the 3-chain algebra is the 2-chain
    let dual = make(&["algebra", "dual", &afile]);
    let v: serde_json::Value = serde_json::from_str(&dual).unwrap();
    assert_eq!(v["elements"].as_array().unwrap().len(), 2);
}

#[test]
fn charform_verbs() {
    let comb = make(&["poset", "make", "comb", "1"]);
    let pfile = tmp("c1c.json", &comb);
    let alg = make(&["algebra", "from-poset", &pfile]);
    let afile = tmp("c1c-alg.json", &alg);
    let jankov = make(&["charform", "jankov", &afile]);
    assert!(jankov.contains("x0"));
    // B = A must land on "both sides true", an equivalence: exit 0
    let (code, out) = run_command(&[
        "charform", "check", "--kind", "jankov", &afile, &afile, "--format", "json",
    ]);
    assert_eq!(code, 0, "{out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["equivalent"], true);
    assert!(v["semantic_refuted"].is_object());
    assert!(v["surjection"].is_object());
    // patterns of excluded middle at cap 2
    let (code, out) = run_command(&[
        "charform", "patterns", "p | !p", "--cap", "2", "--format", "json",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["count"], 1);
}

#[test]
fn morph_verbs_and_antichain() {
    let t0 = make(&["poset", "make", "hodkinson", "0"]);
    let t1 = make(&["poset", "make", "hodkinson", "1"]);
    let f0 = tmp("t0.json", &t0);
    let f1 = tmp("t1.json", &t1);
    let (code, out) = run_command(&["morph", "antichain", &f0, &f1, "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["matrix"][0][1], "incomparable");
    assert_eq!(v["matrix"][1][0], "incomparable");

    let c2 = make(&["poset", "make", "comb", "2"]);
    let c1 = make(&["poset", "make", "comb", "1"]);
    let fc2 = tmp("mc2.json", &c2);
    let fc1 = tmp("mc1.json", &c1);
    let (code, out) =
        run_command(&["morph", "find-surjection", &fc2, &fc1, "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["found"], true);
    let (_, out) = run_command(&["morph", "find-embedding", &fc1, &fc2, "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["found"], true);
    let (code, out) = run_command(&["morph", "comb-quotient", &fc2, "2"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["map"].as_array().unwrap().len(), 4);
}

#[test]
fn bisim_verbs() {
    let c2 = make(&["poset", "make", "comb", "2"]);
    let fc2 = tmp("bc2.json", &c2);
    // {x1, x1'} is an isolated chain in the 2-comb: indices 0 and 1
    let (code, out) = run_command(&[
        "bisim", "check", &fc2, "--blocks", "0,1;2;3", "--format", "json",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["bi_bisimulation"], true);
    // the comb coloring upset {x1, x2, x2'} has elements 0, 2, 3
    let (code, out) = run_command(&[
        "bisim", "coloring-theorem", &fc2, "--colors", "0,2,3", "--format", "json",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["equivalent"], true);
    assert_eq!(v["colors_generate"], true);

    let l5 = make(&["poset", "make", "chain", "5"]);
    let fl5 = tmp("bl5.json", &l5);
    let (code, out) = run_command(&["bisim", "depth-bound", &fl5, "2", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["depth_ok"], true);

    let (code, out) = run_command(&["bisim", "ktable", "2", "1", "--size-cap", "5", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v["max_algebra_size"].as_u64().unwrap() >= 2);
}

#[test]
fn verify_exit_codes_and_unknown_suite() {
    let (code, out) = run_command(&["verify", "hodkinson"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("PASS"));
    let (code, _) = run_command(&["verify", "no-such-suite"]);
    assert_eq!(code, 2);
}

#[test]
fn budget_errors_exit_two() {
    let chain = make(&["poset", "make", "chain", "3"]);
    let pfile = tmp("budget.json", &chain);
    let alg = make(&["algebra", "from-poset", &pfile]);
    let afile = tmp("budget-alg.json", &alg);
    let (code, out) = run_command(&[
        "formula",
        "valid",
        "--algebra",
        &afile,
        "--valuation-budget",
        "2",
        "p | q | r",
    ]);
    assert_eq!(code, 2);
    assert!(out.contains("budget"), "{out}");
}

#[test]
fn same_argv_and_seed_give_identical_output() {
    for args in [
        vec!["verify", "stable", "--seed", "42", "--format", "json"],
        vec!["verify", "filtration", "--seed", "9", "--format", "json"],
        vec!["poset", "make", "random", "6", "--seed", "3"],
        vec!["poset", "enum", "4", "--kind", "coforests", "--counts", "--format", "json"],
    ] {
        let (c1, o1) = run_command(&args);
        let (c2, o2) = run_command(&args);
        assert_eq!((c1, &o1), (c2, &o2), "{args:?}");
        assert_eq!(c1, 0, "{args:?}: {o1}");
    }
}

#[test]
fn verify_grid_flags() {
    let (code, out) = run_command(&[
        "verify", "jankov", "--max-source", "3", "--max-target", "4", "--format", "json",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v[0]["instances"], 64);
    assert_eq!(v[0]["discrepancies"].as_array().unwrap().len(), 0);
}
