use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use ban_core::dynamics::{build_stg, check_fair_convergence, fixed_points, Predicate, StgMode};
use ban_core::expr::{equivalent, name};
use ban_core::network::{compute, interaction_graph};
use ban_core::scheme_file::{load_module, PhiFile, SchemeFile};
use ban_core::simulation::{assemble, check_global_simulation_search, SearchOutcome};
use ban_core::wiring::{modules_equal, wire_recursive, Wiring};
use ban_core::{Configuration, Update, VarName};

fn data(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(rel)
}

#[test]
fn six_input_golden() {
    let m = load_module(&data("six_inputs.ban")).unwrap();
    let x = Configuration::from_word(&m.automata(), "101").unwrap();
    let i = Configuration::from_word(m.inputs(), "000010").unwrap();
    let y = compute(&m, &x, &i, &Update::new([name("a"), name("b")])).unwrap();
    assert_eq!(y.word(), "011");
}

#[test]
fn signed_and_plain_forms_agree() {
    let signed = load_module(&data("signed8.sban")).unwrap();
    let plain = load_module(&data("signed8.ban")).unwrap();
    assert!(modules_equal(&signed, &plain).unwrap());
    assert!(equivalent(signed.function("h").unwrap(), &"c | !e".parse().unwrap()).unwrap());
}

#[test]
fn signed_fixed_points_by_brute_force() {
    let f = load_module(&data("signed8.sban")).unwrap();
    let automata = f.automata();
    let mut expected = Vec::new();
    for index in 0..1u64 << automata.len() {
        let env: BTreeMap<VarName, bool> = automata
            .iter()
            .enumerate()
            .map(|(k, v)| (v.clone(), index >> (automata.len() - 1 - k) & 1 == 1))
            .collect();
        let stable = automata.iter().all(|v| f.function(v.as_str()).unwrap().eval(&env).unwrap() == env[v]);
        if stable {
            expected.push(index);
        }
    }
    let got: Vec<u64> = fixed_points(&f).unwrap().iter().map(Configuration::index).collect();
    assert_eq!(got, expected);
    assert_eq!(build_stg(&f, &StgMode::Parallel, None).unwrap().nodes().len(), 256);
}

#[test]
fn signed_trap_converges_to_one_point() {
    let f = load_module(&data("signed8.sban")).unwrap();
    let report = check_fair_convergence(&f, &Predicate::parse("a=1,d=1").unwrap()).unwrap();
    assert!(report.converges);
    let words: Vec<String> = report.fixed_points.iter().map(Configuration::word).collect();
    assert_eq!(words, ["11011110"]);
}

#[test]
fn partition_example_wires_back() {
    let m = load_module(&data("partition_example.ban")).unwrap();
    let g = interaction_graph(&m).unwrap();
    for (u, v) in [("d", "a"), ("a", "b"), ("b", "b"), ("b", "d"), ("c", "d"), ("e", "c")] {
        assert!(g.has_edge(u, v), "{u}->{v}");
    }
    let closed = wire_recursive(&m, &Wiring::parse("e=a").unwrap()).unwrap();
    assert!(closed.is_ban());
}

#[test]
fn four_part_scheme_assembles_closed() {
    let path = data("four_parts/scheme.json");
    let scheme = SchemeFile::load(&path).unwrap().resolve(path.parent().unwrap()).unwrap();
    let m = assemble(&scheme).unwrap();
    assert!(m.is_ban());
    assert_eq!(m.size(), 10);
    let g = interaction_graph(&m).unwrap();
    for (u, v) in [("e", "f"), ("g", "f"), ("h", "e"), ("h", "g"), ("i", "j"), ("k", "i"), ("l", "m"), ("m", "l"), ("n", "n")] {
        assert!(g.has_edge(u, v), "{u}->{v}");
    }
}

#[test]
fn identity_phi_simulates_itself() {
    let f = load_module(&data("two_node.ban")).unwrap();
    let phi = PhiFile::load(&data("identity_phi.json")).unwrap().resolve(&f).unwrap();
    let report = check_global_simulation_search(&f, &f, &phi, 1).unwrap();
    assert_eq!(report.outcome, SearchOutcome::Pass);
}
