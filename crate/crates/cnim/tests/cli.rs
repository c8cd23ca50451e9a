use cnim::cli::run;

fn cnim(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("cnim").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut a = args.to_vec();
    a.push("--json");
    let (code, out, err) = cnim(&a);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(out.trim()).unwrap()
}

#[test]
fn classify_agrees() {
    let (code, out, _) = cnim(&["classify", "--n", "4", "--k", "2", "--pos", "(3,2,3,2)"]);
    assert_eq!(code, 0);
    assert!(out.contains("theorem: LOSS"));
    assert!(out.contains("solver: LOSS"));
    assert!(!out.contains("DISAGREEMENT"));
    let (_, out, _) = cnim(&["classify", "--n", "6", "--k", "3", "--pos", "( 4, 3, 2, 1, 2, 0 )"]);
    assert!(out.contains("theorem: WIN") && out.contains("solver: WIN"));
    let (_, out, _) = cnim(&["classify", "--n", "6", "--k", "2", "--pos", "(1,1,0,0,0,0)"]);
    assert!(out.contains("theorem: n/a") && out.contains("solver: WIN"));
    let v = json(&["classify", "--n", "8", "--k", "6", "--pos", "(0,3,1,2,3,1,2,3)"]);
    assert_eq!(v["theorem"], "LOSS");
    assert_eq!(v["solver"], "LOSS");
    assert_eq!(v["disagreement"], false);
}

#[test]
fn coverage_lines() {
    let (code, out, _) = cnim(&["coverage"]);
    assert_eq!(code, 0);
    for line in ["arrangements 2520", "TRAPEZOID 2248", "CLEANUP 62", "CLEANUP-only 42", "uncovered 0"] {
        assert!(out.lines().any(|l| l == line), "{line}");
    }
    let v = json(&["coverage"]);
    assert_eq!(v["lemmas"]["TRAPEZOID"], 2248);
    assert_eq!(v["uncovered"].as_array().unwrap().len(), 0);
}

#[test]
fn circuits() {
    let (code, out, _) = cnim(&["circuits", "--n", "8", "--k", "6", "--range"]);
    assert_eq!((code, out.trim()), (0, "4..5"));
    let (_, out, _) = cnim(&["circuits", "--n", "8", "--k", "5", "--construct", "3"]);
    assert_eq!(out.trim(), "{1,4,7}");
    let (_, out, _) = cnim(&["circuits", "--n", "5", "--k", "2", "--enumerate"]);
    assert!(out.contains("5 circuits"));
    let (_, out, _) = cnim(&["circuits", "--table"]);
    assert!(out.lines().any(|l| l.starts_with("n=8") && l.ends_with("{4,5}  8")));
    let (code, _, err) = cnim(&["circuits", "--n", "8", "--k", "6", "--construct", "9"]);
    assert_eq!(code, 1, "{err}");
    let (code, _, _) = cnim(&["circuits", "--n", "8", "--k", "8", "--range"]);
    assert_eq!(code, 1);
    let v = json(&["circuits", "--n", "9", "--k", "7", "--range"]);
    assert_eq!((v["lower"].as_u64(), v["upper"].as_u64()), (Some(5), Some(6)));
}

#[test]
fn strategy() {
    let (code, out, _) = cnim(&["strategy", "--n", "4", "--k", "2", "--pos", "(3,5,4,2)"]);
    assert_eq!(code, 0);
    assert!(out.contains("to: (3,2,3,2)"), "{out}");
    let (_, out, _) = cnim(&["strategy", "--n", "4", "--k", "2", "--pos", "(3,2,3,2)"]);
    assert_eq!(out.trim(), "losing position");
    let v = json(&["strategy", "--n", "5", "--k", "3", "--pos", "(3,9,5,7,4)"]);
    assert_eq!(v["target"], serde_json::json!([3, 7, 0, 7, 4]));
    let (code, _, err) = cnim(&["strategy", "--n", "7", "--k", "3", "--pos", "(1,1,1,1,1,1,1)"]);
    assert_eq!(code, 1);
    assert!(err.contains("CN(7,3)"));
}

#[test]
fn solve_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let (code, out, _) = cnim(&["solve", "--n", "4", "--k", "2", "--max-height", "3", "--cache-dir", d]);
    assert_eq!(code, 0);
    assert!(out.contains("256 positions, 16 LOSS"), "{out}");
    assert!(out.contains("solved-and-cached"));
    let (_, out, _) = cnim(&["solve", "--n", "4", "--k", "2", "--max-height", "3", "--cache-dir", d]);
    assert!(out.contains("cache-hit"));
    let (code, out, _) = cnim(&["verify", "--n", "6", "--k", "4", "--max-height", "3"]);
    assert_eq!(code, 0);
    assert!(out.trim_end().ends_with("PASS"));
    let v = json(&["verify", "--n", "5", "--k", "2", "--max-height", "3"]);
    assert_eq!(v["passed"], true);
    let (code, _, _) = cnim(&["verify", "--n", "6", "--k", "2", "--max-height", "2"]);
    assert_eq!(code, 1);
}

#[test]
fn explore() {
    let (code, out, _) = cnim(&["explore", "--n", "6", "--k", "2", "--max-height", "2"]);
    assert_eq!(code, 0);
    let first = out.lines().next().unwrap();
    assert_eq!(first, "0 (0,0,0,0,0,0)");
    let totals: Vec<u64> = out
        .lines()
        .take_while(|l| l.starts_with(|c: char| c.is_ascii_digit()))
        .map(|l| l.split(' ').next().unwrap().parse().unwrap())
        .collect();
    assert!(totals.windows(2).all(|w| w[0] <= w[1]));
    let v = json(&["explore", "--conjecture", "2m-m", "--m", "4", "--max-height", "4"]);
    assert_eq!(v["found"], true);
    let v = json(&["explore", "--conjecture", "2m-m", "--m", "3", "--max-height", "3"]);
    assert_eq!(v["found"], false);
    let v = json(&["explore", "--n", "7", "--k", "3", "--max-height", "2"]);
    assert!(v["losses"].as_u64().unwrap() > 0);
}

#[test]
fn usage_errors() {
    assert_eq!(cnim(&[]).0, 2);
    assert_eq!(cnim(&["solve", "--n", "4"]).0, 2);
    assert_eq!(cnim(&["solve", "--n", "4", "--k", "5"]).0, 2);
    assert_eq!(cnim(&["classify", "--n", "4", "--k", "2", "--pos", "3,2,3,2"]).0, 2);
    assert_eq!(cnim(&["classify", "--n", "4", "--k", "2", "--pos", "(3,2,3)"]).0, 2);
    assert_eq!(cnim(&["explore", "--conjecture", "odd", "--m", "3"]).0, 2);
    assert_eq!(cnim(&["circuits", "--n", "8", "--k", "6", "--range", "--table"]).0, 2);
    let (code, out, _) = cnim(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("coverage"));
}

#[test]
fn resource_limit_is_a_domain_error() {
    let (code, _, err) = cnim(&["solve", "--n", "8", "--k", "6", "--max-height", "20"]);
    assert_eq!(code, 1);
    assert!(err.contains("exceeds"));
}
