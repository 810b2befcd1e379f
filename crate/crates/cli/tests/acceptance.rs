//! Acceptance suite: one pass/fail line per criterion, with exact
//! comparisons and pinned runtime limits.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use fpdlab_core::complexes::{binomial, koszul_chain, koszul_cochain, koszul_complex};
use fpdlab_core::fpmodules::{annihilator_submodule, Matrix, ModulePresentation};
use fpdlab_core::grades::{cech_grade, ext_grade, koszul_grade, local_grade, GradeValue};
use fpdlab_core::groebner::{ideal_power, Budget, IdealSpec, RingPresentation};
use fpdlab_core::script::{execute, parse_script, ReportBundle, RunConfig};
use fpdlab_core::{CoefficientField, PolyRing, Polynomial};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

const GRADE_BOUND: usize = 12;
const SEED: u64 = 0;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn script_path(name: &str) -> PathBuf {
    root().join("scripts").join(name)
}

struct Run {
    source: Vec<String>,
    bundle: ReportBundle,
    json: Value,
}

impl Run {
    fn new(name: &str) -> Run {
        let text = std::fs::read_to_string(script_path(name)).unwrap();
        let bundle = execute(&parse_script(&text).unwrap(), &RunConfig::default()).unwrap();
        let json = bundle.to_json();
        Run { source: text.lines().map(String::from).collect(), bundle, json }
    }

    fn entries(&self) -> &Vec<Value> {
        self.json["entries"].as_array().unwrap()
    }

    /// The `# expect N` annotation on the entry's source line.
    fn expected(&self, e: &Value) -> Option<u64> {
        let line = &self.source[e["line"].as_u64().unwrap() as usize - 1];
        line.split("# expect").nth(1).map(|s| s.trim().parse().unwrap())
    }

    fn clean(&self) -> Result<(), String> {
        if self.bundle.exit_code() != 0 {
            return Err(format!("exit code {}", self.bundle.exit_code()));
        }
        Ok(())
    }

    fn verify_reports(&self, theorem: &str) -> Vec<&Value> {
        self.entries()
            .iter()
            .filter(|e| e["result"]["theorem-id"] == theorem)
            .flat_map(|e| e["result"]["reports"].as_array().unwrap())
            .collect()
    }
}

fn finite(v: &Value) -> Option<u64> {
    v["finite"].as_u64()
}

/// Finite value of a term, `None` when infinite.
fn term(t: &Value) -> Option<u64> {
    match t.get("report") {
        Some(r) => finite(&r["value"]),
        None => t["value"].as_u64(),
    }
}

fn terms(r: &Value, side: &str) -> Vec<Option<u64>> {
    r[side].as_array().unwrap().iter().map(term).collect()
}

fn grade_values(run: &Run) -> Result<Vec<(String, u64)>, String> {
    let mut out = Vec::new();
    for e in run.entries() {
        let Some(want) = run.expected(e) else { continue };
        let r = &e["result"];
        let got = finite(&r["value"]).or_else(|| r["krull_dimension"].as_u64());
        if got != Some(want) {
            return Err(format!("line {}: expected {want}, got {}", e["line"], r));
        }
        if let Some(kind) = r["kind"].as_str() {
            out.push((kind.to_string(), want));
        }
    }
    Ok(out)
}

fn ring(vars: &[&str], rels: &[String]) -> Option<RingPresentation> {
    let ambient = PolyRing::grevlex(CoefficientField::Rationals, vars).ok()?;
    let rels = rels.iter().map(|r| Polynomial::parse(&ambient, r).unwrap()).collect();
    RingPresentation::new(ambient, rels, Budget::default()).ok()
}

fn random_poly(rng: &mut ChaCha8Rng, vars: &[&str], max_terms: usize) -> String {
    let n = rng.gen_range(1..=max_terms);
    let mut terms = Vec::new();
    for _ in 0..n {
        let c: i32 = rng.gen_range(-3..=3);
        if c == 0 {
            continue;
        }
        let mut t = format!("({c})");
        let deg = rng.gen_range(0..=2);
        for _ in 0..deg {
            t.push('*');
            t.push_str(vars[rng.gen_range(0..vars.len())]);
        }
        terms.push(t);
    }
    if terms.is_empty() {
        vars[0].to_string()
    } else {
        terms.join(" + ")
    }
}

fn crit1() -> Result<String, String> {
    let run = Run::new("grade_cross.fpd");
    run.clean()?;
    let values = grade_values(&run)?;
    let pairs = values.len() / 2;
    for w in values.chunks(2) {
        if w[0].0 != "koszul" || w[1].0 != "ext" || w[0].1 != w[1].1 {
            return Err(format!("unpaired or unequal grades {w:?}"));
        }
    }
    let spread: std::collections::BTreeSet<u64> = values.iter().map(|v| v.1).collect();
    if pairs < 12 || spread != (0..=3).collect() {
        return Err(format!("suite too small: {pairs} pairs, grades {spread:?}"));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut random = 0;
    let mut tried = 0;
    let mut histogram = std::collections::BTreeMap::new();
    while random < 50 {
        tried += 1;
        let nv = rng.gen_range(1..=3);
        let vars = &["x", "y", "z"][..nv];
        let rels: Vec<String> = (0..rng.gen_range(0..=1)).map(|_| random_poly(&mut rng, vars, 2)).collect();
        let gens: Vec<String> = (0..rng.gen_range(1..=3)).map(|_| random_poly(&mut rng, vars, 3)).collect();
        let module_rel = rng.gen_bool(0.5).then(|| random_poly(&mut rng, vars, 2));
        let Some(r) = ring(vars, &rels) else { continue };
        let i = IdealSpec::new(&r, gens.iter().map(|g| r.parse(g).unwrap()).collect()).unwrap();
        if !i.is_proper().unwrap() {
            continue;
        }
        let m = match &module_rel {
            Some(p) => ModulePresentation::new(&r, Matrix::new(1, 1, vec![r.parse(p).unwrap()]).unwrap()).unwrap(),
            None => ModulePresentation::free(&r, 1),
        };
        let k = koszul_grade(&i, &m, GRADE_BOUND).map_err(|e| e.to_string())?;
        let x = ext_grade(&i, &m, GRADE_BOUND).map_err(|e| e.to_string())?;
        if !k.value.agrees_with(&x.value) {
            return Err(format!("random instance {i} on {m:?}: koszul {} ext {}", k.value, x.value));
        }
        *histogram.entry(k.value.to_string()).or_insert(0) += 1;
        random += 1;
    }
    Ok(format!("{pairs} curated pairs spanning grades 0..3, {random} random instances ({tried} drawn, grades {histogram:?})"))
}

fn crit2() -> Result<String, String> {
    let run = Run::new("regseq.fpd");
    run.clean()?;
    let values = grade_values(&run)?;
    for w in values.chunks(2) {
        if w[0].0 != "regseq" || w[1].0 != "koszul" || w[0].1 != w[1].1 {
            return Err(format!("mismatch {w:?}"));
        }
    }
    Ok(format!("{} instances, trials {}, seed {}", values.len() / 2, run.bundle.config.trials, run.bundle.config.seed))
}

fn check_reports(run: &Run, theorem: &str, min: usize, holds: impl Fn(&[Option<u64>], &[Option<u64>]) -> bool) -> Result<usize, String> {
    run.clean()?;
    let reports = run.verify_reports(theorem);
    for r in &reports {
        let (l, rh) = (terms(r, "lhs"), terms(r, "rhs"));
        if r["verdict"] != "verified" || !holds(&l, &rh) {
            return Err(format!("{}: {} with lhs {l:?} rhs {rh:?}", r["instance"], r["verdict"]));
        }
    }
    if reports.len() < min {
        return Err(format!("only {} {theorem} reports", reports.len()));
    }
    Ok(reports.len())
}

fn crit3() -> Result<String, String> {
    let run = Run::new("dim_bound.fpd");
    grade_values(&run)?;
    let le = |l: &[Option<u64>], r: &[Option<u64>]| l.iter().all(|g| matches!((g, r[0]), (Some(a), Some(b)) if *a <= b));
    let n = check_reports(&run, "thm-dim", 6, le)?;
    let strict = run
        .verify_reports("thm-dim")
        .iter()
        .any(|r| terms(r, "lhs") == [Some(0)] && terms(r, "rhs") == [Some(1)] && r["instance"].to_string().contains("x^2"));
    if !strict {
        return Err("no strict instance grade 0 < dim 1".into());
    }
    Ok(format!("{n} rings, strict instance present"))
}

fn crit4() -> Result<String, String> {
    let run = Run::new("prop_geq.fpd");
    let n = check_reports(&run, "prop-geq", 5, |l, r| matches!((l[0], r[0]), (Some(a), Some(b)) if a == b + 1))?;
    let bases = run.entries().len();
    if bases < 5 {
        return Err(format!("{bases} base rings"));
    }
    Ok(format!("{n} ideals over {bases} base rings"))
}

fn crit5() -> Result<String, String> {
    let run = Run::new("poly_scr.fpd");
    let le1 = |l: &[Option<u64>], r: &[Option<u64>]| matches!((l[0], r[0]), (Some(a), Some(b)) if a <= b + 1);
    let poly = check_reports(&run, "thm-poly", 4, le1)?;
    let scr = check_reports(&run, "thm-scr", 1, le1)?;
    let nonlinear = run.verify_reports("thm-poly").iter().any(|r| r.to_string().contains("x^2 - 2"));
    if !nonlinear {
        return Err("no non-linear monic instance".into());
    }
    Ok(format!("{poly} thm-poly and {scr} thm-scr ideals, x^2 - 2 included"))
}

fn min_formula(l: &[Option<u64>], r: &[Option<u64>]) -> bool {
    let min = r.iter().map(|v| v.unwrap_or(u64::MAX)).min().unwrap();
    l[0].unwrap_or(u64::MAX) == min
}

fn crit6() -> Result<String, String> {
    let run = Run::new("trivext.fpd");
    let n = check_reports(&run, "thm-trivext", 5, min_formula)?;
    let reports = run.verify_reports("thm-trivext");
    let grades = |r: &Value| terms(r, "rhs");
    let equal = reports.iter().any(|r| grades(r) == [Some(2), Some(2)]);
    let residue = reports.iter().any(|r| grades(r) == [Some(2), Some(0)]);
    let rank2 = reports.iter().any(|r| r["instance"].to_string().contains("z2"));
    if !(equal && residue && rank2) {
        return Err(format!("coverage: M = R {equal}, M = R/m {residue}, rank 2 {rank2}"));
    }
    Ok(format!("{n} triples including M = R, M = R/m, rank 2"))
}

fn crit7() -> Result<String, String> {
    let run = Run::new("amalg.fpd");
    let n = check_reports(&run, "thm-amg", 3, min_formula)?;
    let index3 = run.entries().iter().any(|e| e["result"]["index"] == 3);
    let zero = run.entries().iter().any(|e| e["statement"].as_str().unwrap().contains("C0"));
    if !(index3 && zero) {
        return Err(format!("coverage: index 3 {index3}, J = 0 {zero}"));
    }
    Ok(format!("{n} ideals over 4 amalgamations, nilpotency index 3 and J = 0 included"))
}

fn crit8() -> Result<String, String> {
    let run = Run::new("power_stability.fpd");
    run.clean()?;
    let values = grade_values(&run)?;
    for e in run.entries() {
        let trace = e["result"]["stabilization"].as_array().ok_or("missing stabilization trace")?;
        let want = run.expected(e);
        if trace.len() != 8 || trace.iter().any(|t| finite(&t["value"]) != want) {
            return Err(format!("line {}: trace {trace:?}", e["line"]));
        }
    }

    let suite: [(&[&str], &[&str], &[&str]); 5] = [
        (&["x", "y"], &[], &["x", "y"]),
        (&["x", "y"], &["x*y"], &["x", "y"]),
        (&["x", "y"], &["x^2", "x*y"], &["x", "y"]),
        (&["x", "y", "z"], &[], &["x", "y"]),
        (&["x", "y", "z"], &["x*y - z^2"], &["x", "z"]),
    ];
    let mut checked = 0;
    for (vars, rels, gens) in suite {
        let r = ring(vars, &rels.iter().map(|s| s.to_string()).collect::<Vec<_>>()).unwrap();
        let i = IdealSpec::parse(&r, gens).unwrap();
        let m = ModulePresentation::free(&r, 1);
        let base = koszul_grade(&i, &m, GRADE_BOUND).map_err(|e| e.to_string())?.value;
        for t in 1..=8 {
            let powers = IdealSpec::new(&r, i.generators().iter().map(|g| g.pow(t as u32)).collect()).unwrap();
            let k = koszul_grade(&powers, &m, GRADE_BOUND).map_err(|e| e.to_string())?.value;
            let e = ext_grade(&ideal_power(&i, t).ideal, &m, GRADE_BOUND).map_err(|e| e.to_string())?.value;
            if !k.agrees_with(&base) || !e.agrees_with(&base) {
                return Err(format!("{i} in {r}: t = {t} gives koszul {k}, ext {e}, base {base}"));
            }
            checked += 1;
        }
        let traces = [
            cech_grade(&i, &m, GRADE_BOUND, 8).map_err(|e| e.to_string())?,
            local_grade(&i, &m, GRADE_BOUND, 8).map_err(|e| e.to_string())?,
        ];
        if traces.iter().any(|rep| rep.stabilization.len() != 8 || rep.stabilization.iter().any(|p| p.value != base)) {
            return Err(format!("{i} in {r}: trace disagrees"));
        }
    }
    Ok(format!("{} script traces, {checked} (instance, t) pairs for t = 1..8", values.len()))
}

fn crit9() -> Result<String, String> {
    let run = Run::new("regseq_shift.fpd");
    run.clean()?;
    let shifts: Vec<&Value> = run
        .verify_reports("prop-items")
        .into_iter()
        .filter(|r| r["instance"]["item"] == "regular-sequence-shift")
        .collect();
    let mut lengths = Vec::new();
    for r in &shifts {
        let (l, rh) = (terms(r, "lhs"), terms(r, "rhs"));
        let ok = r["verdict"] == "verified" && matches!((l[0], rh[0], rh[1]), (Some(a), Some(t), Some(b)) if a == t + b);
        if !ok {
            return Err(format!("{}: lhs {l:?} rhs {rh:?}", r["instance"]));
        }
        lengths.push(rh[0].unwrap());
    }
    if shifts.len() < 5 || lengths.iter().all(|&t| t == 0) {
        return Err(format!("{} instances, lengths {lengths:?}", shifts.len()));
    }
    Ok(format!("{} instances, sequence lengths {lengths:?}", shifts.len()))
}

fn crit10() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let vars = ["x", "y", "z"];
    let r = ring(&vars, &[]).unwrap();
    let mut sequences = 0;
    for _ in 0..40 {
        let n = rng.gen_range(1..=5);
        let xs: Vec<Polynomial> = (0..n).map(|_| r.parse(&random_poly(&mut rng, &vars, 2)).unwrap()).collect();
        let k = koszul_complex(&xs, &r).map_err(|e| e.to_string())?;
        if (0..=n).any(|p| k.ranks()[p] != binomial(n, p)) {
            return Err(format!("ranks {:?}", k.ranks()));
        }
        for p in 1..n {
            if !k.differential(p).unwrap().mul(k.differential(p + 1).unwrap(), &r).unwrap().is_zero_mod(&r) {
                return Err(format!("d o d != 0 at {p} for {xs:?}"));
            }
        }
        if n <= 3 {
            let m = ModulePresentation::new(&r, Matrix::new(1, 1, vec![r.parse(&random_poly(&mut rng, &vars, 2)).unwrap()]).unwrap()).unwrap();
            let i = IdealSpec::new(&r, xs.clone()).unwrap();
            let verdicts = |xs: &[Polynomial]| -> Vec<bool> {
                let co = koszul_cochain(xs, &m).unwrap();
                let ch = koszul_chain(xs, &m).unwrap();
                (0..=xs.len()).flat_map(|p| [co.cohomology(p).unwrap().vanishes, ch.cohomology(p).unwrap().vanishes]).collect()
            };
            let v = verdicts(&xs);
            if v[0] != annihilator_submodule(&i, &m).unwrap().is_zero().unwrap() {
                return Err("H^0 differs from the annihilator".into());
            }
            if v[1] != m.quotient_by_ideal(&i).unwrap().is_zero().unwrap() {
                return Err("H_0 differs from M/IM".into());
            }
            let mut rev = xs.clone();
            rev.reverse();
            if verdicts(&rev) != v {
                return Err("verdicts depend on order".into());
            }
            let mut with_unit = xs.clone();
            with_unit.push(r.parse("3").unwrap());
            if !verdicts(&with_unit).iter().all(|&b| b) {
                return Err("unit sequence not contractible".into());
            }
        }
        sequences += 1;
    }
    Ok(format!("{sequences} seeded sequences, n <= 5"))
}

const SCRIPTS: [&str; 11] = [
    "grade_cross.fpd",
    "regseq.fpd",
    "dim_bound.fpd",
    "prop_geq.fpd",
    "poly_scr.fpd",
    "trivext.fpd",
    "amalg.fpd",
    "power_stability.fpd",
    "regseq_shift.fpd",
    "trivext_demo.fpd",
    "depth_height.fpd",
];

fn crit11() -> Result<String, String> {
    let run = |name: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_fpdlab"))
            .args(["run", script_path(name).to_str().unwrap(), "--seed", "0"])
            .env_remove("FPDLAB_BUDGET")
            .output()
            .unwrap();
        (out.status.code(), out.stdout)
    };
    for name in SCRIPTS {
        let (a, b) = (run(name), run(name));
        if a != b || a.0 != Some(0) {
            return Err(format!("{name}: runs differ or failed ({:?}, {:?})", a.0, b.0));
        }
    }
    Ok(format!("{} scripts byte-identical across two runs", SCRIPTS.len()))
}

type Criterion = (&'static str, u64, fn() -> Result<String, String>);

#[test]
fn acceptance() {
    let criteria: [Criterion; 11] = [
        ("grade cross-oracle", 120, crit1),
        ("regular-sequence oracle", 60, crit2),
        ("grade at most dimension", 30, crit3),
        ("adjoining a variable adds one", 60, crit4),
        ("maximal ideals of R[x]", 90, crit5),
        ("trivial extension min-formula", 90, crit6),
        ("amalgamation min-formula", 90, crit7),
        ("power stability", 120, crit8),
        ("regular-sequence shift", 60, crit9),
        ("Koszul structure", 60, crit10),
        ("determinism", 60, crit11),
    ];
    let mut failed = Vec::new();
    for (k, (name, limit, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if took > Duration::from_secs(*limit) => Err(format!("{detail}; over the time limit")),
            other => other,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        // Written to the handle directly so the line shows without --nocapture.
        let line = format!("criterion {:>2} {tag} {name}: {detail} [{:.2}s, limit {limit}s, exact]\n", k + 1, took.as_secs_f64());
        std::io::stderr().write_all(line.as_bytes()).unwrap();
        if outcome.is_err() {
            failed.push(k + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

#[test]
fn grade_value_helpers() {
    assert_eq!(finite(&GradeValue::Finite(3).to_json()), Some(3));
    assert_eq!(finite(&GradeValue::InfiniteUpTo(3).to_json()), None);
}
