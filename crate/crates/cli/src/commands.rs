use std::fmt::Write as _;
use std::io::Write;

use lctkit::{
    check_multiplicity_bounds, compare_n1_igusa, curve_lct, igusa_pieces, igusa_set,
    increasing_witness, lct_from_resolution, lemma45_solve, n1_accumulation_points_above,
    n1_enumerate_above, n1_member, n1_sup_below_one, newton_lct, seq_less, t1_set,
    verify_dim_ladder, verify_lemma44, weighted_candidate, BoundsStatus, CoefficientSequence,
    CoefficientSet, Direction, IgusaPiece, Lemma44Bounds, Rational, SolutionWitness, SolverConfig,
    TermM, ThresholdSet, Variant, WeightVector,
};
use serde::Serialize;
use serde_json::json;

use crate::cache::{resolve_dir, Cache, EntryInfo, Query};
use crate::{
    AccCommand, CacheCommand, Cli, CliError, Command, DsetArgs, IplusArgs, LctCommand, N1Args,
    Output, SeqOrderArgs, VariantArg,
};

type Result<T> = std::result::Result<T, CliError>;

pub fn execute(cli: &Cli, warn: &mut dyn Write) -> Result<Output> {
    match &cli.command {
        Command::Dset(a) => dset(a),
        Command::Iplus(a) => iplus(a),
        Command::SeqOrder(a) => seq_order(a),
        Command::N1(a) => n1(a, &cache_of(cli), warn),
        Command::Lct(c) => lct(c),
        Command::Acc(c) => acc(c),
        Command::Cache(c) => cache_cmd(c, cli),
    }
}

fn cache_of(cli: &Cli) -> Option<Cache> {
    if cli.no_cache {
        return None;
    }
    resolve_dir(cli.cache_dir.as_deref()).map(Cache::new)
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("report serialisation cannot fail")
}

fn ok(json: String, human: String) -> Result<Output> {
    Ok(Output {
        json,
        human,
        failed: false,
    })
}

fn braces(xs: &[Rational]) -> String {
    let items: Vec<String> = xs.iter().map(ToString::to_string).collect();
    format!("{{{}}}", items.join(", "))
}

fn coefficient_set(elements: &[Rational], literal: bool) -> Result<CoefficientSet> {
    let set = if literal {
        CoefficientSet::literal(elements.iter().cloned())?
    } else {
        CoefficientSet::new(elements.iter().cloned())?
    };
    Ok(set)
}

fn dset(a: &DsetArgs) -> Result<Output> {
    let set = coefficient_set(&a.set.0, a.literal)?;
    if let Some(x) = &a.member {
        let w = set.d_contains(x)?;
        let human = match &w {
            Some(w) => format!("{x} ∈ D(I): ({} − 1 + {})/{}", w.m, w.f, w.m),
            None => format!("{x} ∉ D(I)"),
        };
        let json = to_json(&json!({ "x": x, "member": w.is_some(), "witness": w }));
        return ok(json, human);
    }
    if let Some(max_m) = a.up_to {
        let xs = set.d_elements_up_to(max_m);
        let human = xs.iter().map(|x| format!("{x}\n")).collect();
        return ok(to_json(&xs), human);
    }
    if let Some(t) = &a.above {
        let xs = set.d_set().elements_above(t)?;
        let human = xs.iter().map(|x| format!("{x}\n")).collect();
        return ok(to_json(&xs), human);
    }
    if a.verify {
        let bounds = Lemma44Bounds {
            samples: a.samples,
            ..Lemma44Bounds::default()
        };
        let r = verify_lemma44(&set, &bounds)?;
        let mut human = String::new();
        let _ = writeln!(
            human,
            "I = {}{}",
            braces(&r.set),
            if r.adjoined_one { " (1 adjoined)" } else { "" }
        );
        let _ = writeln!(
            human,
            "sums checked          {:>6}  (m ≤ {})",
            r.sums_checked, r.sums_max_m
        );
        let _ = writeln!(human, "elements checked      {:>6}", r.elements_checked);
        let _ = writeln!(human, "compositions checked  {:>6}", r.compositions_checked);
        let _ = writeln!(
            human,
            "inverse compositions  {:>6}",
            r.inverse_compositions_checked
        );
        let _ = writeln!(human, "DCC(I) = {}, DCC(D(I)) = {}", r.set_dcc, r.d_dcc);
        let _ = writeln!(
            human,
            "counterexamples       {:>6}",
            r.counterexamples.len()
        );
        return Ok(Output {
            json: to_json(&r),
            failed: !r.passed(),
            human,
        });
    }
    let d = set.d_set();
    ok(d.to_canonical_json(), d.to_string())
}

fn iplus(a: &IplusArgs) -> Result<Output> {
    let set = coefficient_set(&a.set.0, a.literal)?;
    let plus = set.i_plus();
    ok(plus.to_canonical_json(), plus.to_string())
}

fn seq_order(a: &SeqOrderArgs) -> Result<Output> {
    let variant = match a.variant {
        VariantArg::C => Variant::C,
        VariantArg::CPlus => Variant::CPlus,
    };
    let seqs = a
        .sequences
        .iter()
        .map(|s| CoefficientSequence::new(s.0.clone(), variant))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let mut pairs = Vec::new();
    let mut human = String::new();
    for w in seqs.windows(2) {
        let less = seq_less(&w[0], &w[1])?;
        let _ = writeln!(
            human,
            "({}) {} ({})",
            join(w[0].entries()),
            if less { "<" } else { "≮" },
            join(w[1].entries())
        );
        pairs.push(json!({ "x": w[0].entries(), "y": w[1].entries(), "less": less }));
    }
    let witness = increasing_witness(&seqs);
    match &witness {
        Some(xs) => {
            let _ = writeln!(human, "increasing witness: {}", join(xs));
        }
        None => {
            let _ = writeln!(human, "chain is not strictly increasing");
        }
    }
    let json =
        to_json(&json!({ "variant": variant, "pairs": pairs, "increasing_witness": witness }));
    ok(json, human)
}

fn join(xs: &[Rational]) -> String {
    xs.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

fn witness_table(w: &SolutionWitness) -> String {
    let mut s = String::new();
    if let Some(l) = &w.leading {
        let _ = writeln!(s, "  leading {l}");
    }
    let _ = writeln!(s, "  {:>6} {:>4} {:>8} {:>10}", "m", "k", "f", "value");
    for t in &w.terms {
        let m = match t.m {
            TermM::Fixed(m) => m.to_string(),
            TermM::Free => "free".to_string(),
        };
        let value = match t.m {
            TermM::Fixed(_) => t.value(&w.a).to_string(),
            TermM::Free => "→ 1".to_string(),
        };
        let _ = writeln!(
            s,
            "  {:>6} {:>4} {:>8} {:>10}",
            m,
            t.k,
            t.f.to_string(),
            value
        );
    }
    s
}

fn single_target(a: &N1Args) -> Result<Rational> {
    match a.target.0.as_slice() {
        [k] => Ok(k.clone()),
        _ => Err(CliError::Input(
            "exactly one --target is needed here".into(),
        )),
    }
}

fn n1(a: &N1Args, cache: &Option<Cache>, warn: &mut dyn Write) -> Result<Output> {
    let set = CoefficientSet::new(a.set.0.iter().cloned())?;
    let cfg = SolverConfig {
        allow_k_zero: !a.no_k_zero,
        max_terms: a.max_terms,
        ..SolverConfig::default()
    };
    let label = format!("N₁({})", braces(set.elements()));
    if let Some(x) = &a.member {
        let target = single_target(a)?;
        let w = n1_member(x, &set, &target, &cfg)?;
        let mut human = String::new();
        match &w {
            Some(w) => {
                let _ = writeln!(human, "{x} ∈ {label}, target {target}");
                human.push_str(&witness_table(w));
            }
            None => {
                let _ = writeln!(human, "{x} ∉ {label}, target {target}");
            }
        }
        let failed = w.as_ref().is_some_and(|w| w.verify_over(&set).is_err());
        let json =
            to_json(&json!({ "a": x, "set": set.elements(), "target": target, "witness": w }));
        return Ok(Output {
            json,
            human,
            failed,
        });
    }
    if a.sup {
        let target = single_target(a)?;
        let s = n1_sup_below_one(&set, &target, &cfg)?;
        let mut human = format!(
            "max({label} ∖ {{1}}) = {}  (searched above {})\n",
            s.value, s.cutoff
        );
        human.push_str(&witness_table(&s.witness));
        let failed = s.witness.verify_over(&set).is_err();
        return Ok(Output {
            json: to_json(&s),
            human,
            failed,
        });
    }
    let t = a.above.clone().expect("clap requires --above");
    if a.accumulation {
        let target = single_target(a)?;
        let pts = n1_accumulation_points_above(&t, &set, &target, &cfg)?;
        let mut human = String::new();
        if pts.is_empty() {
            let _ = writeln!(human, "no accumulation points above {t}");
        }
        for p in &pts {
            let _ = writeln!(human, "{}  approached from {}", p.limit, side(p.direction));
            human.push_str(&witness_table(&p.reduced));
        }
        return ok(to_json(&pts), human);
    }
    let (op, targets) = if a.leading {
        let mut ks = a.target.0.clone();
        ks.sort();
        ks.dedup();
        ("leading", ks)
    } else {
        ("n1", vec![single_target(a)?])
    };
    let query = Query::new(
        op,
        set.elements().to_vec(),
        set.includes_empty_sum(),
        targets.clone(),
        t.clone(),
        cfg.allow_k_zero,
    );
    let slice = cached(cache, &query, warn, || {
        let e = if a.leading {
            lemma45_solve(&set, &targets, &t, &cfg)?
        } else {
            n1_enumerate_above(&t, &set, &targets[0], &cfg)?
        };
        Ok(e.set)
    })?;
    if a.list {
        let xs = slice.elements_above(&t)?;
        let human = xs.iter().map(|x| format!("{x}\n")).collect();
        return ok(to_json(&xs), human);
    }
    ok(slice.to_canonical_json(), slice.to_string())
}

/// Reads `query` from the cache, or computes and stores it.
fn cached(
    cache: &Option<Cache>,
    query: &Query,
    warn: &mut dyn Write,
    compute: impl FnOnce() -> Result<ThresholdSet>,
) -> Result<ThresholdSet> {
    if let Some(c) = cache {
        if let Some(set) = c.get(query, warn) {
            return Ok(set);
        }
    }
    let set = compute()?;
    if let Some(c) = cache {
        if let Err(e) = c.put(query, &set) {
            let _ = writeln!(
                warn,
                "warning: could not write cache entry in {}: {e}",
                c.dir().display()
            );
        }
    }
    Ok(set)
}

fn lct(c: &LctCommand) -> Result<Output> {
    match c {
        LctCommand::Curve { a, b } => {
            let r = curve_lct(*a, *b)?;
            let mut human = format!("lct(y^{a} + x^{b}) = {}", r.lct.capped);
            if let Some(u) = &r.lct.uncapped {
                if u != &r.lct.capped {
                    let _ = write!(human, "  (uncapped {u})");
                }
            }
            let _ = write!(
                human,
                "\nnewton {}  weighted {}  agree {}",
                r.newton, r.weighted, r.agrees
            );
            Ok(Output {
                json: to_json(&r),
                human,
                failed: !r.agrees,
            })
        }
        LctCommand::Newton { exponents } => {
            let r = newton_lct(exponents)?;
            let human = format!(
                "lct = {}\nt* = {}\nweights = ({})",
                r.lct.capped,
                r.t_star,
                join(r.weights.entries())
            );
            ok(to_json(&r), human)
        }
        LctCommand::Resolution { rows } => {
            let v = lct_from_resolution(rows);
            let human = match &v.uncapped {
                Some(u) => format!("lct = {}  (uncapped {u})", v.capped),
                None => format!("lct = {}  (no exceptional divisors)", v.capped),
            };
            ok(to_json(&v), human)
        }
        LctCommand::Weighted { weights, exponents } => {
            let w = WeightVector::new(weights.0.clone())?;
            let cand = weighted_candidate(&w, exponents)?;
            let human = match &cand {
                Some(c) => format!("(Σw)/ord_w = {c}"),
                None => "(Σw)/ord_w = ∞".to_string(),
            };
            let json = to_json(&json!({ "weights": w, "exponents": exponents, "candidate": cand }));
            ok(json, human)
        }
        LctCommand::Bounds { exponents } => {
            let r = check_multiplicity_bounds(exponents)?;
            let human = match r.status {
                BoundsStatus::Both => {
                    format!("{} ≤ {} ≤ {}  holds: {}", r.lower, r.lct, r.upper, r.holds)
                }
                BoundsStatus::LowerOnly => format!("{} ≤ {}  holds: {}", r.lower, r.lct, r.holds),
                BoundsStatus::NotAsserted => format!(
                    "bounds not asserted: multiplicity {} < N − 1 = {}",
                    r.multiplicity,
                    r.dim - 1
                ),
            };
            Ok(Output {
                json: to_json(&r),
                human,
                failed: !r.holds,
            })
        }
    }
}

fn acc(c: &AccCommand) -> Result<Output> {
    match c {
        AccCommand::Igusa { above } => {
            let pieces = igusa_pieces(above)?;
            let set = igusa_set(above)?;
            let mut human = String::new();
            for p in &pieces {
                match p {
                    IgusaPiece::Family { a, sequence } => {
                        let _ = writeln!(
                            human,
                            "a = {a}: 1/{a} + 1/b for b ≥ {}, limit {}",
                            sequence.start(),
                            sequence.limit()
                        );
                    }
                    IgusaPiece::Point { a, b, value } => {
                        let _ = writeln!(human, "a = {a}, b = {b}: {value}");
                    }
                }
            }
            let _ = writeln!(human, "set: {set}");
            let json = to_json(&json!({ "cutoff": above, "pieces": pieces, "set": set }));
            ok(json, human)
        }
        AccCommand::T1 { above } => {
            let set = t1_set(above)?;
            ok(set.to_canonical_json(), set.to_string())
        }
        AccCommand::Ladder { above } => {
            let r = verify_dim_ladder(above)?;
            let mut human = format!(
                "accumulation points above {}: {}\n{{1/m}} ∖ {{1}} above {}: {}\n",
                r.cutoff,
                braces(&r.accumulation),
                r.cutoff,
                braces(&r.lower_dimension)
            );
            for w in &r.witnesses {
                let _ = writeln!(
                    human,
                    "  {} = lim 1/{} + 1/b, from {}",
                    w.limit,
                    w.a,
                    side(w.direction)
                );
            }
            if !r.missing.is_empty() || !r.extra.is_empty() || !r.increasing.is_empty() {
                let _ = writeln!(
                    human,
                    "missing {}  extra {}  increasing {}",
                    braces(&r.missing),
                    braces(&r.extra),
                    braces(&r.increasing)
                );
            }
            let _ = writeln!(human, "passed: {}", r.passed);
            Ok(Output {
                json: to_json(&r),
                failed: !r.passed,
                human,
            })
        }
        AccCommand::CompareN1 { above } => {
            let r = compare_n1_igusa(above, &SolverConfig::default())?;
            let mut human = format!(
                "{} points and {} families above {} checked against N₁({{1}})\n",
                r.points_checked, r.families_checked, r.cutoff
            );
            if !r.passed {
                let _ = writeln!(
                    human,
                    "missing points {}  missing families {:?}  bad witnesses {:?}",
                    braces(&r.missing_points),
                    r.missing_families,
                    r.bad_witnesses
                );
            }
            let _ = writeln!(human, "passed: {}", r.passed);
            Ok(Output {
                json: to_json(&r),
                failed: !r.passed,
                human,
            })
        }
    }
}

fn cache_cmd(c: &CacheCommand, cli: &Cli) -> Result<Output> {
    let dir = resolve_dir(cli.cache_dir.as_deref())
        .ok_or_else(|| CliError::Input("no cache directory could be determined".into()))?;
    let cache = Cache::new(dir.clone());
    match c {
        CacheCommand::Dir => ok(to_json(&json!({ "dir": dir })), dir.display().to_string()),
        CacheCommand::List => {
            let entries = cache.entries()?;
            let human = entries.iter().map(describe).collect();
            ok(to_json(&entries), human)
        }
        CacheCommand::Clear => {
            let n = cache.clear()?;
            ok(
                to_json(&json!({ "removed": n })),
                format!("removed {n} entries"),
            )
        }
    }
}

fn describe(e: &EntryInfo) -> String {
    match &e.query {
        Some(q) => format!(
            "{}  {} I={} K={} above {}  {} bytes\n",
            &e.fingerprint[..16],
            q.op,
            braces(&q.set),
            braces(&q.targets),
            q.above,
            e.bytes
        ),
        None => format!(
            "{}  (unreadable)  {} bytes\n",
            &e.fingerprint[..16],
            e.bytes
        ),
    }
}

fn side(d: Direction) -> &'static str {
    match d {
        Direction::Decreasing => "above",
        Direction::Increasing => "below",
    }
}
