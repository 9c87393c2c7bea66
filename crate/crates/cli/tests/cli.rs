use std::path::PathBuf;

fn corpus(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(name)
        .to_str()
        .unwrap()
        .to_string()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["freefix"];
    full.extend_from_slice(args);
    let code = freefix_cli::run(full, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn json(args: &[&str]) -> (i32, serde_json::Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let (code, out, _) = run(&full);
    (
        code,
        serde_json::from_str(&out).unwrap_or(serde_json::Value::Null),
    )
}

#[test]
fn inversion_fixes_nothing() {
    let (code, out, _) = run(&["fix", &corpus("inversion.json")]);
    assert_eq!(code, 0);
    assert!(out.contains("subgroup: 1\n"), "{out}");
    assert!(out.contains("max_len: 8"), "budget must be echoed: {out}");
}

#[test]
fn word_commands() {
    let (code, v) = json(&["reduce", "--rank", "3", "aABbCabc"]);
    assert_eq!(code, 0);
    assert_eq!(v["reduced"], "Cabc");
    assert_eq!(v["cyclic_core"], "ab");
    let (_, v) = json(&["member", "--rank", "2", "--gens", "a,Bab", "Baab"]);
    assert_eq!(v["member"], true);
    let (_, v) = json(&["fold", "--rank", "2", "a", "Bab", "BBabb"]);
    assert_eq!(v["rank"], 3);
    let (_, v) = json(&["intersect", "--rank", "3", "--h", "a,b", "--k", "b,c"]);
    assert_eq!(v["intersection"]["subgroup"], "<b>");
}

#[test]
fn map_commands() {
    let ex1 = corpus("ex1.json");
    let (code, v) = json(&["apply", &ex1, "e", "ABab"]);
    assert_eq!(code, 0);
    assert_eq!(v["images"][0]["image"], "BabCDcde");
    let (code, v) = json(&["invert-auto", &ex1]);
    assert_eq!(code, 0);
    assert_eq!(v["inverse"]["rank"], 6);
    let dir = std::env::temp_dir().join("freefix-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"rank": 2, "images": ["a", "a"]}"#).unwrap();
    let (code, v) = json(&["invert-auto", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(v["automorphism"], false);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["nonsense"]).0, 2);
    assert_eq!(run(&["fix", "/no/such/file.json"]).0, 2);
    assert_eq!(run(&["reduce", "--rank", "2", "abc"]).0, 2);
    assert_eq!(run(&["check", "pure", "--rank", "2", "--gens", "aa"]).0, 1);
    assert_eq!(
        run(&["check", "pure", "--rank", "2", "--gens", "a,Bab"]).0,
        0
    );
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn verification_commands() {
    let (code, v) = json(&[
        "verify",
        "cormain",
        &corpus("ex2.json"),
        &corpus("ex2.cert.json"),
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "pass");
    let (code, v) = json(&[
        "verify",
        "mainconnex",
        &corpus("ex1.json"),
        &corpus("ex1.case-i.json"),
    ]);
    assert_eq!(code, 0, "{v}");
    let (code, v) = json(&[
        "--max-len",
        "8",
        "verify",
        "mainconnex",
        &corpus("inversion.json"),
        &corpus("ex1.case-ii.json"),
    ]);
    assert_eq!(code, 2, "{v}");
    let dir = std::env::temp_dir().join("freefix-cli-imagey");
    std::fs::create_dir_all(&dir).unwrap();
    let m = dir.join("m.json");
    std::fs::write(
        &m,
        r#"{"rank": 5, "images": ["a", "ab", "dc", "dcd", "BabCDcde"]}"#,
    )
    .unwrap();
    let (code, v) = json(&[
        "verify",
        "imagey",
        m.to_str().unwrap(),
        "--h-gens",
        "a,b,c,d",
        "--y",
        "e",
        "--h",
        "BabCDcd",
    ]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["outcome"], "solved");
    assert_eq!(v["h_prime"], "BabCDcd");
}

#[test]
fn factor_system_commands() {
    let dir = std::env::temp_dir().join("freefix-cli-ffs");
    std::fs::create_dir_all(&dir).unwrap();
    let a = dir.join("a.json");
    let b = dir.join("b.json");
    std::fs::write(
        &a,
        r#"{"rank": 3, "classes": [{"generators": ["a", "b"]}]}"#,
    )
    .unwrap();
    std::fs::write(
        &b,
        r#"{"rank": 3, "classes": [{"generators": ["b", "c"]}]}"#,
    )
    .unwrap();
    let (_, v) = json(&["ffs", "cx", a.to_str().unwrap()]);
    assert_eq!(v["complexity"], "2");
    let (_, v) = json(&["ffs", "wedge", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(v["wedge"]["classes"][0]["generators"][0], "b");
    let (_, v) = json(&["ffs", "leq", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(v["leq"], false);
    let (_, v) = json(&["ffs", "is-free-factor", "--rank", "2", "--gens", "abAB"]);
    assert_eq!(v["verdict"], "no");
    let (_, v) = json(&["ffs", "is-free-factor", "--rank", "2", "--gens", "aab"]);
    assert_eq!(v["verdict"], "yes");
}

#[test]
fn construction_commands() {
    let dir = std::env::temp_dir().join("freefix-cli-construct");
    std::fs::create_dir_all(&dir).unwrap();
    let m = dir.join("m.json");
    std::fs::write(&m, r#"{"rank": 1, "images": ["a"]}"#).unwrap();
    let (code, v) = json(&[
        "construct",
        "stable",
        m.to_str().unwrap(),
        "--h",
        "a",
        "--h-prime",
        "a",
        "--r",
        "1",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["map"]["images"][1], "aab");
    let (_, v) = json(&[
        "--max-len",
        "8",
        "construct",
        "good-r",
        m.to_str().unwrap(),
        "--h",
        "a",
        "--h-prime",
        "a",
    ]);
    assert_eq!(v["bad"], serde_json::json!([-1]));
    let (code, _) = json(&[
        "construct",
        "stable",
        m.to_str().unwrap(),
        "--h",
        "aa",
        "--h-prime",
        "a",
        "--r",
        "1",
    ]);
    assert_eq!(code, 2);
}

#[test]
fn output_is_deterministic() {
    let args = [
        "--seed", "5", "check", "inert", "--rank", "3", "--gens", "a,Bab", "--trials", "50",
    ];
    let first = run(&args);
    assert_eq!(first.0, 0);
    assert_eq!(first, run(&args));
    let args = ["--eig-len", "1", "isogredience", &corpus("ex2.json")];
    assert_eq!(run(&args), run(&args));
}

#[test]
fn corpus_runs_clean() {
    let (code, v) = json(&[
        "corpus",
        "run",
        &PathBuf::from(env!("CARGO_MANIFEST_DIR"))
            .join("../../corpus")
            .to_string_lossy(),
    ]);
    assert_eq!(v["failed"], 0, "{v}");
    assert_eq!(code, 0);
}
