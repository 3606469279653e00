use std::process::{Command, Output};

use whitkit::output::Node;

fn whitkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_whitkit")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn headline(args: &[&str]) -> String {
    let o = whitkit(args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    stdout(&o).lines().next().unwrap_or_default().to_string()
}

fn tree(args: &[&str]) -> Node {
    let mut full = args.to_vec();
    full.extend(["--format", "tree"]);
    let o = whitkit(&full);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    Node::from_json(&stdout(&o)).expect("tree output parses")
}

#[test]
fn check_pair_solvable() {
    assert_eq!(headline(&["check-pair", "--alg", "solvable2d", "--n", "b"]), "Whittaker pair: yes");
}

#[test]
fn ext_zero_family() {
    assert_eq!(headline(&["ext", "--alg", "solvable2d", "--family", "zero", "--mu", "0", "--nu", "1"]), "Ext table: {1:1, 2:1}");
}

#[test]
fn ext_vanishing_is_success() {
    assert_eq!(headline(&["ext", "--family", "zero", "--mu", "0", "--nu", "5"]), "Ext table: {}");
}

#[test]
fn vk_dims() {
    assert_eq!(headline(&["vk", "--k", "3", "--mu", "0"]), "dim=9 end=3");
}

#[test]
fn pbw_normalize() {
    assert_eq!(headline(&["pbw-normalize", "--alg", "solvable2d", "--expr", "b a"]), "a b - b");
}

#[test]
fn catalog_lists_subcommands() {
    let o = whitkit(&["catalog"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let names = [
        "check-pair",
        "lcs",
        "pbw-normalize",
        "blocks",
        "whittaker-vectors",
        "dual-whittaker",
        "verma-dims",
        "simple-dims",
        "star-check",
        "completion-solve",
        "simplicity",
        "ext",
        "ce-ext",
        "kunneth",
        "vk",
        "quiver",
        "annihilator-check",
    ];
    for n in names {
        assert!(text.contains(&format!("{n}:")), "{n} missing");
    }
    let t = tree(&["catalog"]);
    match t.get("subcommands") {
        Some(Node::List(v)) => assert!(v.len() >= 17),
        other => panic!("{other:?}"),
    }
}

#[test]
fn unknown_subcommand_exits_2() {
    let o = whitkit(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
}

#[test]
fn unknown_flag_exits_2() {
    assert_eq!(whitkit(&["vk", "--k", "2", "--bogus"]).status.code(), Some(2));
}

#[test]
fn parse_failure_exits_2() {
    assert_eq!(whitkit(&["ext", "--family", "zero", "--mu", "0.5", "--nu", "1"]).status.code(), Some(2));
    assert_eq!(whitkit(&["pbw-normalize", "--alg", "solvable2d", "--expr", "b z"]).status.code(), Some(2));
}

#[test]
fn overflow_under_reject_exits_3() {
    let o = whitkit(&["pbw-normalize", "--alg", "centerless_virasoro", "--window", "-8:8", "--overflow", "reject", "--expr", "e5 e4"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn negative_verdict_exits_0() {
    let dir = std::env::temp_dir().join(format!("whitkit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("sl2.lie");
    std::fs::write(
        &path,
        "basis f degree=-1\nbasis h degree=0\nbasis e degree=1\n\
         bracket h e = 2 e\nbracket h f = -2 f\nbracket e f = 1 h\npart b = h,e\n",
    )
    .unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(headline(&["check-pair", "--alg", p, "--n", "b"]), "Whittaker pair: no");
}

#[test]
fn jacobi_failure_is_rejected() {
    let dir = std::env::temp_dir().join(format!("whitkit-jac-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.lie");
    std::fs::write(&path, "basis x\nbasis y\nbasis z\nbracket x y = 1 z\nbracket y z = 1 x\nbracket x z = 1 x\n").unwrap();
    assert_eq!(whitkit(&["lcs", "--alg", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let args = ["star-check", "--alg", "centerless_virasoro", "--window", "-8:8", "--depth", "4", "--mu", "e0=1/2"];
    let a = whitkit(&args);
    let b = whitkit(&args);
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}

#[test]
fn tree_outputs_round_trip() {
    let cases: &[&[&str]] = &[
        &["check-pair", "--alg", "solvable2d", "--n", "b"],
        &["lcs", "--alg", "v_n:1", "--window", "1:12"],
        &["pbw-normalize", "--alg", "solvable2d", "--expr", "2/3 b a^2 + a"],
        &["blocks", "--alg", "heisenberg3d", "--n", "a,c", "--lambda", "a=1", "--lambda2", "a=2"],
        &["whittaker-vectors", "--alg", "heisenberg3d", "--n", "a,c", "--lambda", "a=1,c=1", "--depth", "3"],
        &["dual-whittaker", "--alg", "heisenberg3d", "--n", "a,c", "--lambda", "a=1,c=1", "--depth", "3"],
        &["verma-dims", "--alg", "sl2", "--mu", "h=1", "--depth", "4"],
        &["simple-dims", "--alg", "sl2", "--mu", "h=2", "--depth", "4"],
        &["star-check", "--alg", "centerless_virasoro", "--window", "-6:6", "--depth", "3", "--mu", "e0=1"],
        &["completion-solve", "--alg", "sl2", "--mu", "h=1", "--lambda", "e=1", "--depth", "3"],
        &["simplicity", "--alg", "heisenberg3d", "--n", "a,c", "--lambda", "a=1,c=1", "--depth", "3"],
        &["ext", "--family", "nonzero", "--lambda", "-2"],
        &["ce-ext", "--rank", "2", "--lambda", "0", "--mu", "1=0"],
        &["kunneth", "--table", "1:1,2:1", "--table", "0:1,1:1", "--degree", "2"],
        &["vk", "--k", "2", "--mu", "1"],
        &["quiver", "--vertices", "0,1,2,3,1/2"],
        &["annihilator-check", "--alg", "sl2", "--mu", "h=1", "--lambda", "e=1", "--elements", "e f + f e + 1/2 h^2 - 3/2", "--depth", "3"],
        &["borel-simple", "--rank", "3", "--lambda", "1,1", "--depth", "2"],
    ];
    for args in cases {
        let t = tree(args);
        assert_eq!(Node::from_json(&t.to_json()).unwrap(), t, "{args:?}");
        assert!(matches!(t, Node::Map(_)), "{args:?}");
    }
}

#[test]
fn lcs_of_v1() {
    let t = tree(&["lcs", "--alg", "v_n:1", "--window", "1:12"]);
    assert_eq!(t.get("quasi_nilpotent"), Some(&Node::text("yes-within-window")));
}

#[test]
fn kunneth_headline() {
    assert_eq!(headline(&["kunneth", "--table", "1:1,2:1", "--table", "0:1,1:1", "--degree", "2"]), "Ext^2 = 2");
}
