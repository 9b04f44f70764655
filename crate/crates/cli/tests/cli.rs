use std::fs;
use std::path::Path;
use std::process::Command;

use lctkit_cli::{run, EXIT_DOMAIN, EXIT_INFINITE, EXIT_OK, EXIT_USAGE, EXIT_VERIFY};

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn lctkit(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("lctkit").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn with_cache<'a>(dir: &'a Path, args: &[&'a str]) -> Vec<&'a str> {
    let mut v = vec!["--cache-dir", dir.to_str().unwrap()];
    v.extend_from_slice(args);
    v
}

fn entries(dir: &Path) -> Vec<std::path::PathBuf> {
    let mut v: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    v.sort();
    v
}

#[test]
fn member_and_enumeration_examples() {
    let r = lctkit(&["--no-cache", "n1", "--member", "5/6"]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.out.starts_with("5/6 ∈ N₁({1}), target 2"));
    let r = lctkit(&["--no-cache", "n1", "--enum", "--above", "5/6"]);
    assert_eq!(r.code, EXIT_OK);
    assert_eq!(r.out, "{1}\n");
    let r = lctkit(&["--no-cache", "--json", "n1", "--member", "5/6"]);
    let v: serde_json::Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(v["witness"]["a"], "5/6");
    assert_eq!(v["witness"]["target"], "2");
    let r = lctkit(&["--no-cache", "n1", "--member", "9/10"]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.out.contains("∉"));
}

#[test]
fn lct_examples() {
    let r = lctkit(&["lct", "newton", "--exponents", "(0,2),(5,0)"]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.out.starts_with("lct = 7/10\n"));
    let r = lctkit(&["--json", "lct", "curve", "--a", "1", "--b", "1"]);
    let v: serde_json::Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(v["lct"]["capped"], "1");
    assert_eq!(v["lct"]["uncapped"], "2");
    let r = lctkit(&["lct", "resolution", "--rows", "2/1:2,5:6"]);
    assert!(r.out.starts_with("lct = 5/6"));
    let r = lctkit(&[
        "lct",
        "weighted",
        "--weights",
        "3,2",
        "--exponents",
        "(0,2),(3,0)",
    ]);
    assert_eq!(r.out, "(Σw)/ord_w = 5/4\n");
}

#[test]
fn exit_codes() {
    assert_eq!(
        lctkit(&["n1", "--member", "3/2", "--no-cache"]).code,
        EXIT_DOMAIN
    );
    assert_eq!(lctkit(&["n1", "--member", "0.5"]).code, EXIT_USAGE);
    assert_eq!(lctkit(&["n1", "--frobnicate"]).code, EXIT_USAGE);
    assert_eq!(lctkit(&["nonsense"]).code, EXIT_USAGE);
    assert_eq!(lctkit(&["n1", "--enum"]).code, EXIT_USAGE);
    assert_eq!(lctkit(&["--help"]).code, EXIT_OK);
    let r = lctkit(&["dset", "--set", "1/2", "--above", "9/10"]);
    assert_eq!(r.code, EXIT_INFINITE);
    assert!(r.err.contains("infinite slice"));
    let r = lctkit(&["--no-cache", "n1", "--enum", "--above", "2/5", "--list"]);
    assert_eq!(r.code, EXIT_INFINITE);
    let r = lctkit(&["--no-cache", "n1", "--enum", "--above", "3/5", "--list"]);
    assert_eq!(r.code, EXIT_OK);
    assert_eq!(r.out.lines().count(), 8);
    let r = lctkit(&[
        "--no-cache",
        "n1",
        "--enum",
        "--above",
        "5/6",
        "--max-terms",
        "3",
    ]);
    assert_eq!(r.code, EXIT_DOMAIN);
    // fewer than N − 1 = 2: nothing is asserted, which is not a failure
    let r = lctkit(&["lct", "bounds", "--exponents", "(1,0,0)"]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.out.contains("not asserted"));
}

#[test]
fn verification_reports() {
    assert_eq!(lctkit(&["acc", "ladder", "--above", "1/4"]).code, EXIT_OK);
    assert_eq!(
        lctkit(&["acc", "compare-n1", "--above", "4/5"]).code,
        EXIT_OK
    );
    assert_eq!(lctkit(&["dset", "--set", "2/3", "--verify"]).code, EXIT_OK);
    assert_eq!(
        lctkit(&["lct", "bounds", "--exponents", "(0,2),(3,0)"]).code,
        EXIT_OK
    );
    assert_ne!(EXIT_VERIFY, EXIT_OK);
}

#[test]
fn seq_order_and_sets() {
    let r = lctkit(&["seq-order", "1/2", "1/2,2/3", "1/2,3/4"]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.out.contains("increasing witness: 1/2, 2/3, 3/4"));
    let r = lctkit(&["seq-order", "--variant", "c-plus", "1/2", "1/2"]);
    assert!(r.out.contains("≮"));
    let r = lctkit(&["iplus", "--set", "1/2,1/3"]);
    assert_eq!(r.out, "{5/6, 2/3, 1/2, 1/3, 0}\n");
    let r = lctkit(&["iplus", "--set", "1/2", "--literal"]);
    assert_eq!(r.out, "{1/2}\n");
    let r = lctkit(&["dset", "--set", "1/2", "--member", "3/4"]);
    assert!(r.out.starts_with("3/4 ∈ D(I)"));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let queries: &[&[&str]] = &[
        &[
            "--json",
            "--no-cache",
            "n1",
            "--enum",
            "--above",
            "2/5",
            "--set",
            "1/2,1/3",
        ],
        &["--json", "--no-cache", "n1", "--sup", "--set", "1/2"],
        &[
            "--json",
            "--no-cache",
            "n1",
            "--accumulation",
            "--above",
            "2/5",
        ],
        &[
            "--json",
            "--no-cache",
            "n1",
            "--leading",
            "--above",
            "4/5",
            "--set",
            "1/2",
            "--target",
            "2,3",
        ],
        &["--json", "dset", "--set", "1/2,1/3", "--verify"],
        &["--json", "acc", "igusa", "--above", "1/4"],
        &[
            "--json",
            "lct",
            "newton",
            "--exponents",
            "(0,0,3),(2,2,0),(0,5,1)",
        ],
    ];
    for q in queries {
        let a = lctkit(q);
        let b = lctkit(q);
        assert_eq!(a.code, EXIT_OK, "{q:?}: {}", a.err);
        assert_eq!(a.out, b.out, "{q:?}");
    }
}

#[test]
fn cache_hits_match_recomputation() {
    let dir = tempfile::tempdir().unwrap();
    for t in ["4/5", "3/5", "2/5"] {
        let args = ["--json", "n1", "--enum", "--above", t, "--set", "1/2"];
        let fresh = lctkit(&[&["--no-cache"], &args[..]].concat());
        let first = lctkit(&with_cache(dir.path(), &args));
        let second = lctkit(&with_cache(dir.path(), &args));
        assert_eq!(first.out, fresh.out);
        assert_eq!(second.out, fresh.out);
        assert!(second.err.is_empty(), "{}", second.err);
    }
    assert_eq!(entries(dir.path()).len(), 3);
    // the stored set is the recomputed document byte for byte
    let fresh = lctkit(&[
        "--json",
        "--no-cache",
        "n1",
        "--enum",
        "--above",
        "4/5",
        "--set",
        "1/2",
    ]);
    let stored = entries(dir.path())
        .into_iter()
        .map(|p| fs::read_to_string(p).unwrap())
        .find(|s| s.contains("\"above\":\"4/5\""))
        .unwrap();
    assert!(stored.contains(fresh.out.trim_end()));
}

#[test]
fn widened_query_is_a_different_entry() {
    let dir = tempfile::tempdir().unwrap();
    lctkit(&with_cache(dir.path(), &["n1", "--enum", "--above", "4/5"]));
    lctkit(&with_cache(dir.path(), &["n1", "--enum", "--above", "3/5"]));
    lctkit(&with_cache(
        dir.path(),
        &["n1", "--enum", "--above", "3/5", "--target", "3"],
    ));
    lctkit(&with_cache(
        dir.path(),
        &["n1", "--enum", "--above", "3/5", "--no-k-zero"],
    ));
    assert_eq!(entries(dir.path()).len(), 4);
    let r = lctkit(&with_cache(
        dir.path(),
        &["n1", "--enum", "--above", "3/5", "--target", "3"],
    ));
    let fresh = lctkit(&[
        "--no-cache",
        "n1",
        "--enum",
        "--above",
        "3/5",
        "--target",
        "3",
    ]);
    assert_eq!(r.out, fresh.out);
}

#[test]
fn corrupt_entry_is_recomputed_and_rewritten() {
    let dir = tempfile::tempdir().unwrap();
    let args = with_cache(dir.path(), &["--json", "n1", "--enum", "--above", "4/5"]);
    let good = lctkit(&args);
    let path = entries(dir.path()).pop().unwrap();
    let original = fs::read_to_string(&path).unwrap();
    for junk in ["{\"query\":", "", &original.replace("5/6", "2/3")] {
        fs::write(&path, junk).unwrap();
        let r = lctkit(&args);
        assert_eq!(r.code, EXIT_OK);
        assert!(
            r.err.contains("warning: ignoring corrupt cache entry"),
            "{}",
            r.err
        );
        assert_eq!(r.out, good.out);
        assert_eq!(fs::read_to_string(&path).unwrap(), original);
    }
}

#[test]
fn cache_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    lctkit(&with_cache(dir.path(), &["n1", "--enum", "--above", "4/5"]));
    let r = lctkit(&with_cache(dir.path(), &["cache", "list"]));
    assert!(r.out.contains("n1 I={1} K={2} above 4/5"));
    let r = lctkit(&with_cache(dir.path(), &["cache", "dir"]));
    assert_eq!(r.out.trim_end(), dir.path().to_str().unwrap());
    let r = lctkit(&with_cache(dir.path(), &["--json", "cache", "clear"]));
    assert_eq!(r.out, "{\"removed\":1}\n");
    assert!(entries(dir.path()).is_empty());
}

#[test]
fn binary_honours_environment_cache() {
    let dir = tempfile::tempdir().unwrap();
    let bin = env!("CARGO_BIN_EXE_lctkit");
    let out = Command::new(bin)
        .args(["--json", "n1", "--enum", "--above", "4/5"])
        .env("LCTKIT_CACHE", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_OK));
    assert_eq!(entries(dir.path()).len(), 1);
    let again = Command::new(bin)
        .args(["--json", "n1", "--enum", "--above", "4/5"])
        .env("LCTKIT_CACHE", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.stdout, again.stdout);
    let bad = Command::new(bin).arg("--bogus").output().unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_USAGE));
}
