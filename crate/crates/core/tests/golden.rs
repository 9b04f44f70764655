//! Recorded values. Regenerate with `LCTKIT_BLESS=1 cargo test --test golden`
//! after checking the new numbers by other means.

use std::collections::BTreeMap;
use std::path::PathBuf;

use lctkit::{
    igusa_set, lemma45_solve, n1_accumulation_points_above, n1_enumerate_above, n1_sup_below_one,
    newton_lct, q, CoefficientSet, MonomialDivisor, Rational, SolverConfig,
};
use serde_json::{json, Value};

fn compute() -> BTreeMap<String, Value> {
    let cfg = SolverConfig::default();
    let two = Rational::integer(2);
    let mut out = BTreeMap::new();
    let sets: [(&str, Vec<Rational>); 4] = [
        ("1", vec![q(1, 1)]),
        ("1/2", vec![q(1, 2)]),
        ("1/2,1/3", vec![q(1, 2), q(1, 3)]),
        ("2/3", vec![q(2, 3)]),
    ];
    for (name, elems) in &sets {
        let i = CoefficientSet::new(elems.iter().cloned()).unwrap();
        let s = n1_sup_below_one(&i, &two, &cfg).unwrap();
        out.insert(format!("n1 sup below one, I={{{name}}}"), json!(s.value));
        for t in [q(2, 5), q(3, 5), q(4, 5)] {
            let e = n1_enumerate_above(&t, &i, &two, &cfg).unwrap();
            out.insert(format!("n1 slice, I={{{name}}}, above {t}"), json!(e.set));
        }
        let acc: Vec<Rational> = n1_accumulation_points_above(&q(2, 5), &i, &two, &cfg)
            .unwrap()
            .into_iter()
            .map(|p| p.limit)
            .collect();
        out.insert(
            format!("n1 accumulation, I={{{name}}}, above 2/5"),
            json!(acc),
        );
    }
    let ones = CoefficientSet::new([q(1, 1)]).unwrap();
    let s = n1_sup_below_one(&ones, &Rational::one(), &cfg).unwrap();
    out.insert("n1 sup below one, I={1}, target 1".into(), json!(s.value));
    let half = CoefficientSet::new([q(1, 2)]).unwrap();
    let e = lemma45_solve(&half, std::slice::from_ref(&two), &q(4, 5), &cfg).unwrap();
    out.insert("leading, I={1/2}, K={2}, above 4/5".into(), json!(e.set));
    let igusa = igusa_set(&q(1, 10)).unwrap();
    out.insert(
        "plane-curve sup below one".into(),
        json!(igusa.sup_below(&Rational::one()).unwrap()),
    );
    for d in [
        "(0,2),(3,0)",
        "(1,1)",
        "(0,0,3),(2,2,0),(0,5,1)",
        "(2,0,0),(0,3,0),(0,0,7)",
        "(0,4),(1,2),(5,0)",
    ] {
        let div: MonomialDivisor = d.parse().unwrap();
        let r = newton_lct(&div).unwrap();
        out.insert(format!("newton lct {d}"), json!(r.lct));
    }
    out
}

fn golden_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/values.json")
}

#[test]
fn golden_values() {
    let got = compute();
    let path = golden_path();
    if std::env::var_os("LCTKIT_BLESS").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, serde_json::to_string_pretty(&got).unwrap() + "\n").unwrap();
        return;
    }
    let text =
        std::fs::read_to_string(&path).expect("golden file missing; run with LCTKIT_BLESS=1");
    let want: BTreeMap<String, Value> = serde_json::from_str(&text).unwrap();
    assert_eq!(
        got.keys().collect::<Vec<_>>(),
        want.keys().collect::<Vec<_>>()
    );
    for (k, v) in &want {
        assert_eq!(&got[k], v, "{k}");
    }
}

#[test]
fn headline_values() {
    let text = std::fs::read_to_string(golden_path()).unwrap();
    let want: BTreeMap<String, Value> = serde_json::from_str(&text).unwrap();
    assert_eq!(want["n1 sup below one, I={1}"], "5/6");
    assert_eq!(want["plane-curve sup below one"], "5/6");
    assert_eq!(want["newton lct (0,2),(3,0)"]["capped"], "5/6");
    assert_eq!(
        want["n1 slice, I={1}, above 4/5"]["points"],
        json!(["1", "5/6"])
    );
}
