//! One function per subcommand. Each validates its inputs, runs the library
//! operation and describes the result.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use ban_core::decomposition::{all_partitions, recompose, split, Partition};
use ban_core::dynamics::{build_stg, check_fair_convergence, fixed_points, Predicate, StgMode};
use ban_core::expr::{is_clause, is_monotone};
use ban_core::format::{parse_configuration, parse_update, parse_update_mode, write_ban};
use ban_core::generate::{random_ban, random_module, rng};
use ban_core::limits;
use ban_core::network::{compute, execute_sequence};
use ban_core::scheme_file::{load_module, read_text, write_scheme_dir, write_text, PhiFile, SchemeFile};
use ban_core::simulation::{
    assemble, check_global_simulation_constructive, check_global_simulation_search, check_local_simulation,
    GlobalReport, LocalReport, SearchOutcome, SimulationScheme,
};
use ban_core::transforms::{to_clause_network, to_monotone_network, Transformed};
use ban_core::wiring::{modules_equal, wire_non_recursive_with, wire_recursive_with, OnMalformed, Wiring};
use ban_core::{Configuration, Module};

use crate::report::{bits, maybe_bit, maybe_bits, verdict_word, Outcome, Status};

fn shown(p: &Path) -> String {
    p.display().to_string()
}

fn load(path: &Path) -> Result<Module> {
    load_module(path).with_context(|| format!("cannot load {}", path.display()))
}

fn load_scheme(path: &Path) -> Result<SimulationScheme> {
    let file = SchemeFile::load(path)?;
    let base = path.parent().unwrap_or(Path::new("."));
    Ok(file.resolve(base)?)
}

/// Writes `text` to `out`, or returns it as output lines when `out` is absent.
fn emit(text: &str, out: Option<&Path>, outcome: Outcome) -> Result<Outcome> {
    match out {
        Some(path) => {
            write_text(path, text)?;
            Ok(outcome.line(format!("wrote {}", path.display())).input("output", shown(path)))
        }
        None => Ok(text.lines().fold(outcome, |o, l| o.line(l))),
    }
}

fn optional_input(m: &Module, text: Option<&str>) -> Result<Configuration> {
    match text {
        Some(t) => Ok(parse_configuration(t, m.inputs())?),
        None if m.inputs().is_empty() => Ok(Configuration::empty()),
        None => bail!("the module has inputs {}; pass --i", names(m.inputs())),
    }
}

fn names(vs: &[ban_core::VarName]) -> String {
    vs.iter().map(|v| v.as_str()).collect::<Vec<_>>().join(",")
}

pub fn eval(file: &Path, x: &str, i: Option<&str>, delta: &str) -> Result<Outcome> {
    let m = load(file)?;
    let x = parse_configuration(x, &m.automata())?;
    let i = optional_input(&m, i)?;
    let delta = parse_update(delta)?;
    let y = compute(&m, &x, &i, &delta)?;
    Ok(Outcome::new(Status::Done, json!({ "configuration": y.word(), "assignments": y.assignments() }))
        .line(y.word())
        .input("module", shown(file))
        .input("x", x.word())
        .input("i", i.word())
        .input("delta", delta.to_string()))
}

pub fn exec(file: &Path, x: &str, i: Option<&str>, mode: &str) -> Result<Outcome> {
    let m = load(file)?;
    let x = parse_configuration(x, &m.automata())?;
    let mode = parse_update_mode(mode, &m.automata())?;
    let inputs: Vec<Configuration> = match i {
        Some(t) => t.split(';').map(|w| parse_configuration(w, m.inputs())).collect::<Result<_, _>>()?,
        None => vec![optional_input(&m, None)?],
    };
    let inputs = if inputs.len() == 1 && mode.len() > 1 {
        vec![inputs[0].clone(); mode.len()]
    } else {
        inputs
    };
    let trace = execute_sequence(&m, &x, &inputs, &mode)?;
    let words: Vec<String> = trace.iter().map(Configuration::word).collect();
    let outcome = Outcome::new(Status::Done, json!({ "trace": words }))
        .input("module", shown(file))
        .input("x", x.word())
        .input("i", inputs.iter().map(Configuration::word).collect::<Vec<_>>().join(";"))
        .input("mode", mode.to_string());
    Ok(words.iter().fold(outcome, |o, w| o.line(w.clone())))
}

fn malformed(lenient: bool) -> OnMalformed {
    if lenient {
        OnMalformed::Empty
    } else {
        OnMalformed::Reject
    }
}

pub fn wire_two(a: &Path, b: &Path, map: &str, lenient: bool, out: Option<&Path>) -> Result<Outcome> {
    let (m, m2) = (load(a)?, load(b)?);
    let w = Wiring::parse(map)?;
    let wired = wire_non_recursive_with(&m, &m2, &w, malformed(lenient))?;
    let outcome = Outcome::new(Status::Done, json!({ "automata": wired.size(), "inputs": wired.inputs().len() }))
        .input("modules", json!([shown(a), shown(b)]))
        .input("map", w.to_string());
    emit(&write_ban(&wired), out, outcome)
}

pub fn wire_one(a: &Path, map: &str, lenient: bool, out: Option<&Path>) -> Result<Outcome> {
    let m = load(a)?;
    let w = Wiring::parse(map)?;
    let wired = wire_recursive_with(&m, &w, malformed(lenient))?;
    let outcome = Outcome::new(Status::Done, json!({ "automata": wired.size(), "inputs": wired.inputs().len() }))
        .input("module", shown(a))
        .input("map", w.to_string());
    emit(&write_ban(&wired), out, outcome)
}

/// `manifest.json` written by `split`: the partition, one module file per
/// part and the map from fresh inputs back to the automata they stand for.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Manifest {
    source: String,
    partition: String,
    parts: BTreeMap<String, String>,
    wires: BTreeMap<String, String>,
}

pub fn split_module(file: &Path, parts: &str, dir: &Path) -> Result<Outcome> {
    let m = load(file)?;
    let partition = Partition::parse(parts)?;
    let s = split(&m, &partition)?;
    let stem = file.file_stem().and_then(|s| s.to_str()).unwrap_or("M");
    let mut files = BTreeMap::new();
    let mut outcome = Outcome::new(Status::Done, Value::Null)
        .input("module", shown(file))
        .input("parts", partition.to_string());
    for sub in &s.parts {
        let name = format!("{stem}_{}.ban", sub.id);
        write_text(&dir.join(&name), &write_ban(&sub.module))?;
        outcome = outcome.line(format!("wrote {}", dir.join(&name).display()));
        files.insert(sub.id.to_string(), name);
    }
    let manifest = Manifest {
        source: shown(file),
        partition: partition.to_string(),
        parts: files.clone(),
        wires: s.wires.iter().map(|(e, q)| (e.to_string(), q.to_string())).collect(),
    };
    let path = dir.join("manifest.json");
    write_text(&path, &(serde_json::to_string_pretty(&manifest)? + "\n"))?;
    outcome.result = json!({ "parts": files, "manifest": shown(&path), "wires": s.wires.to_string() });
    Ok(outcome.line(format!("wrote {}", path.display())))
}

pub fn merge(manifest: &Path, out: Option<&Path>) -> Result<Outcome> {
    let text = read_text(manifest)?;
    let parsed: Manifest = serde_json::from_str(&text).with_context(|| format!("{}", manifest.display()))?;
    let base = manifest.parent().unwrap_or(Path::new("."));
    let modules = parsed.parts.values().map(|f| load(&base.join(f))).collect::<Result<Vec<_>>>()?;
    let wires: Wiring = parsed
        .wires
        .iter()
        .map(|(e, q)| Ok((e.parse()?, q.parse()?)))
        .collect::<Result<_, ban_core::Error>>()?;
    let m = recompose(&modules, &wires)?;
    let outcome = Outcome::new(Status::Done, json!({ "automata": m.size(), "inputs": m.inputs().len() }))
        .input("manifest", shown(manifest));
    emit(&write_ban(&m), out, outcome)
}

/// First automaton whose local function, inputs or presence differs.
fn first_difference(m: &Module, back: &Module) -> Value {
    let differs = m.nodes().iter().find(|n| back.node(n.name.as_str()) != Some(*n));
    match differs {
        Some(n) => json!({ "automaton": n.name.as_str(), "original": n.function.to_string(),
            "recomposed": back.function(n.name.as_str()).map(ToString::to_string) }),
        None => json!({ "automata": back.size(), "expected": m.size() }),
    }
}

pub fn verify_roundtrip(file: &Path, parts: &str) -> Result<Outcome> {
    let m = load(file)?;
    let partition = Partition::parse(parts)?;
    let back = split(&m, &partition)?.recompose()?;
    let passed = modules_equal(&back, &m)?;
    let witness = (!passed).then(|| first_difference(&m, &back));
    Ok(Outcome::verdict(passed, json!({ "verdict": verdict_word(passed) }))
        .line(verdict_word(passed))
        .input("module", shown(file))
        .input("parts", partition.to_string())
        .witness(witness))
}

fn local_line(r: &LocalReport) -> String {
    match &r.failure {
        None => format!("PASS {} ({} cases)", r.automaton, r.cases),
        Some(w) => format!(
            "FAIL {}: x={} x'={} inputs={} expected {} got {}",
            r.automaton,
            bits(&w.x),
            bits(&w.x_prime),
            bits(&w.inputs),
            maybe_bit(Some(w.expected)),
            maybe_bit(w.got)
        ),
    }
}

fn local_witness(r: &LocalReport) -> Option<Value> {
    r.failure.as_ref().map(|w| {
        json!({ "automaton": r.automaton.as_str(), "x": bits(&w.x), "x_prime": bits(&w.x_prime),
            "inputs": bits(&w.inputs), "expected": maybe_bit(Some(w.expected)), "got": maybe_bit(w.got) })
    })
}

fn local_reports(scheme: &SimulationScheme, only: Option<&str>) -> Result<Vec<LocalReport>> {
    let targets: Vec<String> = match only {
        Some(a) => {
            if !scheme.target().has_automaton(a) {
                bail!("`{a}` is not an automaton of the target network");
            }
            vec![a.to_string()]
        }
        None => scheme.target().automata().iter().map(ToString::to_string).collect(),
    };
    Ok(targets.iter().map(|a| check_local_simulation(scheme, a)).collect::<Result<_, _>>()?)
}

pub fn check_local(file: &Path, automaton: Option<&str>) -> Result<Outcome> {
    let scheme = load_scheme(file)?;
    let reports = local_reports(&scheme, automaton)?;
    let passed = reports.iter().all(LocalReport::passed);
    let per: BTreeMap<String, Value> = reports
        .iter()
        .map(|r| (r.automaton.to_string(), json!({ "verdict": verdict_word(r.passed()), "cases": r.cases })))
        .collect();
    let witness = reports.iter().find_map(local_witness);
    let outcome = Outcome::verdict(passed, json!({ "verdict": verdict_word(passed), "automata": per }))
        .input("scheme", shown(file))
        .input("automaton", automaton.map_or(Value::Null, |a| json!(a)))
        .witness(witness);
    Ok(reports.iter().fold(outcome, |o, r| o.line(local_line(r))))
}

pub fn assemble_scheme(file: &Path, out: Option<&Path>) -> Result<Outcome> {
    let scheme = load_scheme(file)?;
    let m = assemble(&scheme)?;
    let outcome = Outcome::new(Status::Done, json!({ "automata": m.size() })).input("scheme", shown(file));
    emit(&write_ban(&m), out, outcome)
}

fn global_witness(r: &GlobalReport) -> Option<Value> {
    r.failure.as_ref().map(|w| {
        json!({ "x_prime": bits(&w.x_prime), "update": w.update.to_string(), "mode": w.mode.to_string(),
            "expected": bits(&w.expected), "got": maybe_bits(w.got.as_ref()) })
    })
}

fn global_line(r: &GlobalReport) -> String {
    match &r.failure {
        None => format!("PASS ({} cases)", r.cases),
        Some(w) => format!(
            "FAIL: x'={} update {} via {} expected {} got {}",
            bits(&w.x_prime),
            w.update,
            w.mode,
            bits(&w.expected),
            maybe_bits(w.got.as_ref())
        ),
    }
}

pub fn check_sim(file: &Path) -> Result<Outcome> {
    let scheme = load_scheme(file)?;
    let report = check_global_simulation_constructive(&scheme)?;
    let passed = report.passed();
    Ok(Outcome::verdict(passed, json!({ "verdict": verdict_word(passed), "cases": report.cases }))
        .line(global_line(&report))
        .input("scheme", shown(file))
        .witness(global_witness(&report)))
}

pub fn check_sim_search(f: &Path, f_target: &Path, phi: &Path, maxlen: usize) -> Result<Outcome> {
    let (m, target) = (load(f)?, load(f_target)?);
    let encoding = PhiFile::load(phi)?.resolve(&m)?;
    let report = check_global_simulation_search(&m, &target, &encoding, maxlen)?;
    let passed = report.outcome == SearchOutcome::Pass;
    let word = if passed { "PASS" } else { "INCONCLUSIVE" };
    let witness = report.witness.as_ref().map(|w| {
        json!({ "x": bits(&w.x), "update": w.update.to_string(), "expected": bits(&w.expected) })
    });
    let line = match &report.witness {
        None => format!("{word} ({} cases, maxlen {maxlen})", report.cases),
        Some(w) => format!(
            "{word}: no mode of at most {maxlen} steps from x={} reproduces update {} (expected {})",
            bits(&w.x),
            w.update,
            bits(&w.expected)
        ),
    };
    Ok(Outcome::verdict(passed, json!({ "verdict": word, "cases": report.cases, "maxlen": maxlen }))
        .line(line)
        .input("network", shown(f))
        .input("target", shown(f_target))
        .input("phi", shown(phi))
        .input("maxlen", maxlen)
        .witness(witness))
}

#[derive(Clone, Copy, Debug, clap::ValueEnum)]
pub enum Target {
    Clauses,
    Monotone,
}

struct Verification {
    shape: Option<String>,
    local: Vec<LocalReport>,
    global: GlobalReport,
}

impl Verification {
    fn passed(&self) -> bool {
        self.shape.is_none() && self.local.iter().all(LocalReport::passed) && self.global.passed()
    }
}

fn verify(t: &Transformed, target: Target) -> Result<Verification> {
    let mut shape = None;
    for n in t.network.nodes() {
        let ok = match target {
            Target::Clauses => is_clause(&n.function),
            Target::Monotone => is_monotone(&n.function)?,
        };
        if !ok {
            shape = Some(format!("f_{} = {}", n.name, n.function));
            break;
        }
    }
    let local = local_reports(&t.scheme, None)?;
    let global = check_global_simulation_constructive(&t.scheme)?;
    Ok(Verification { shape, local, global })
}

fn transformed(f: &Module, target: Target) -> Result<Transformed> {
    Ok(match target {
        Target::Clauses => to_clause_network(f)?,
        Target::Monotone => to_monotone_network(f)?,
    })
}

pub fn transform(file: &Path, target: Target, dir: &Path) -> Result<Outcome> {
    let f = load(file)?;
    let t = transformed(&f, target)?;
    let v = verify(&t, target)?;
    let scheme_path = write_scheme_dir(&t.scheme, dir)?;
    let network_path = dir.join("network.ban");
    write_text(&network_path, &write_ban(&t.network))?;
    let passed = v.passed();
    let per: BTreeMap<String, Value> = v
        .local
        .iter()
        .map(|r| (r.automaton.to_string(), json!({ "verdict": verdict_word(r.passed()), "cases": r.cases })))
        .collect();
    let result = json!({
        "verdict": verdict_word(passed),
        "automata": t.network.size(),
        "shape": v.shape.clone().map_or(json!("ok"), Value::String),
        "local": per,
        "global": { "verdict": verdict_word(v.global.passed()), "cases": v.global.cases },
        "network": shown(&network_path),
        "scheme": shown(&scheme_path),
    });
    let report_path = dir.join("report.json");
    write_text(&report_path, &(serde_json::to_string_pretty(&result)? + "\n"))?;
    let witness = v.local.iter().find_map(local_witness).or_else(|| global_witness(&v.global));
    let mut outcome = Outcome::verdict(passed, result)
        .input("network", shown(file))
        .input("to", format!("{target:?}").to_lowercase())
        .witness(witness);
    if let Some(s) = &v.shape {
        outcome = outcome.line(format!("FAIL shape: {s}"));
    }
    for r in &v.local {
        outcome = outcome.line(local_line(r));
    }
    Ok(outcome
        .line(format!("global {}", global_line(&v.global)))
        .line(format!("wrote {}, {}, {}", network_path.display(), scheme_path.display(), report_path.display())))
}

fn seeds(f: &Module, trap: &Predicate) -> Result<Vec<Configuration>> {
    let automata = f.automata();
    if automata.len() > limits::max_bits() {
        bail!("{} automata exceed the cap of {} bits", automata.len(), limits::max_bits());
    }
    Ok((0..1u64 << automata.len())
        .map(|k| Configuration::from_index(&automata, k))
        .filter(|x| trap.holds(x))
        .collect())
}

pub fn dynamics(file: &Path, mode: &str, seed_pred: Option<&str>, dot: Option<&Path>, report: Option<&Path>) -> Result<Outcome> {
    let f = load(file)?;
    let mode = StgMode::parse(mode)?;
    let trap = match seed_pred {
        Some(t) => Predicate::parse(t)?,
        None => Predicate::always(),
    };
    if let Some(v) = trap.conditions().keys().find(|v| !f.has_automaton(v.as_str())) {
        bail!("seed predicate mentions `{v}`, which is not an automaton");
    }
    let seeded = match seed_pred {
        Some(_) => Some(seeds(&f, &trap)?),
        None => None,
    };
    let graph = build_stg(&f, &mode, seeded.as_deref())?;
    let fixed = fixed_points(&f)?;
    let mut result = json!({
        "mode": mode.to_string(),
        "nodes": graph.nodes().len(),
        "edges": graph.edges().len(),
        "fixed_points": fixed.iter().map(Configuration::word).collect::<Vec<_>>(),
    });
    let mut outcome = Outcome::new(Status::Done, Value::Null)
        .input("network", shown(file))
        .input("mode", mode.to_string())
        .input("seed_pred", seed_pred.map_or(Value::Null, |p| json!(p)))
        .line(format!("{} configurations, {} transitions", graph.nodes().len(), graph.edges().len()))
        .line(format!("fixed points: {}", fixed.iter().map(Configuration::word).collect::<Vec<_>>().join(" ")));
    if matches!(mode, StgMode::Asynchronous) {
        let fair = check_fair_convergence(&f, &trap)?;
        result["fair"] = json!({
            "verdict": verdict_word(fair.converges),
            "seeds": fair.seeds,
            "reachable": fair.reachable,
            "terminal_components": fair.terminal_components,
            "fixed_points": fair.fixed_points.iter().map(Configuration::word).collect::<Vec<_>>(),
        });
        outcome = outcome.line(format!(
            "fair convergence from {} seeds: {} ({} terminal components)",
            fair.seeds,
            verdict_word(fair.converges),
            fair.terminal_components
        ));
        if let Some(cycle) = &fair.cycle {
            let words: Vec<String> = cycle.iter().map(Configuration::word).collect();
            outcome = outcome.line(format!("terminal cycle: {}", words.join(" ")));
            outcome.witness = Some(json!({ "cycle": cycle.iter().map(bits).collect::<Vec<_>>() }));
        }
        outcome.status = if fair.converges { Status::Pass } else { Status::Fail };
    }
    if let Some(path) = dot {
        write_text(path, &graph.to_dot())?;
        outcome = outcome.line(format!("wrote {}", path.display())).input("dot", shown(path));
    }
    if let Some(path) = report {
        write_text(path, &(serde_json::to_string_pretty(&result)? + "\n"))?;
        outcome = outcome.line(format!("wrote {}", path.display())).input("report", shown(path));
    }
    outcome.result = result;
    Ok(outcome)
}

/// Seeded sweep over random modules and networks exercising the round trip
/// and both transforms.
pub fn self_test(seed: u64) -> Result<Outcome> {
    let mut r = rng(seed);
    let mut failures = Vec::new();
    let mut partitions = 0usize;
    for k in 0..20 {
        let m = random_module(&mut r, 4, 3);
        for p in all_partitions(&m.automata(), 3) {
            partitions += 1;
            if !modules_equal(&split(&m, &p)?.recompose()?, &m)? {
                failures.push(format!("module {k}: round trip through {p} differs"));
            }
        }
    }
    let mut networks = 0usize;
    for k in 0..10 {
        let f = random_ban(&mut r, 3, 3, true);
        for target in [Target::Clauses, Target::Monotone] {
            networks += 1;
            let v = verify(&transformed(&f, target)?, target)?;
            if !v.passed() {
                failures.push(format!("network {k}: {target:?} transform fails verification"));
            }
        }
    }
    let passed = failures.is_empty();
    let mut outcome = Outcome::verdict(
        passed,
        json!({ "verdict": verdict_word(passed), "partitions": partitions, "transforms": networks, "failures": failures }),
    )
    .input("seed", seed)
    .line(format!(
        "{} ({partitions} round trips, {networks} transforms)",
        verdict_word(passed)
    ));
    for f in &failures {
        outcome = outcome.line(f.clone());
    }
    Ok(outcome)
}
