use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;

use ban_core::decomposition::{all_partitions, split, Partition};
use ban_core::dynamics::{build_stg, check_fair_convergence, fixed_points, Predicate, StgMode};
use ban_core::expr::{equivalent, is_monotone, name, parse_expr, to_cnf, TruthTable};
use ban_core::generate::{random_ban, random_module, rng};
use ban_core::network::{compute, execute_fixed};
use ban_core::transforms::monotone_extension;
use ban_core::wiring::{modules_equal, union, union_all, wire_recursive, Wiring};
use ban_core::{BoolExpr, Configuration, Module, NodeDef, Update, UpdateMode, VarName};

fn expr_strategy() -> impl Strategy<Value = BoolExpr> {
    let leaf = prop_oneof![
        any::<bool>().prop_map(BoolExpr::Const),
        prop::sample::select(vec!["a", "b", "c", "d"]).prop_map(BoolExpr::var),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| !e),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| l & r),
            (inner.clone(), inner).prop_map(|(l, r)| l | r),
        ]
    })
}

fn update_strategy() -> impl Strategy<Value = Update> {
    prop::collection::btree_set(prop::sample::select(vec!["a", "b", "c", "d"]), 0..4)
        .prop_map(|s| Update::new(s.into_iter().map(name)))
}

fn mode_strategy() -> impl Strategy<Value = UpdateMode> {
    prop::collection::vec(update_strategy(), 0..4).prop_map(UpdateMode::new)
}

fn prefixed(m: &Module, p: &str) -> Module {
    let map: BTreeMap<VarName, VarName> =
        m.all_names().into_iter().map(|v| (v.clone(), name(&format!("{p}{v}")))).collect();
    let nodes = m
        .nodes()
        .iter()
        .map(|n| NodeDef::new(map[&n.name].clone(), n.inputs.iter().map(|e| map[e].clone()).collect(), n.function.rename(&map)))
        .collect();
    Module::new(nodes).unwrap()
}

fn reversed(m: &Module) -> Module {
    let mut nodes = m.nodes().to_vec();
    nodes.reverse();
    Module::new(nodes).unwrap()
}

fn fixed_set(points: &[Configuration]) -> BTreeSet<BTreeMap<VarName, bool>> {
    points.iter().map(Configuration::to_map).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn cnf_is_equivalent(e in expr_strategy()) {
        match to_cnf(&e) {
            Ok(clauses) => {
                let back = BoolExpr::all(clauses.iter().map(|c| c.to_expr()));
                prop_assert!(equivalent(&back, &e).unwrap());
            }
            Err(_) => {
                let vars: Vec<VarName> = e.vars().into_iter().collect();
                prop_assert_eq!(TruthTable::of(&e, &vars).unwrap().constant(), Some(false));
            }
        }
    }

    #[test]
    fn printing_then_parsing_is_identity(e in expr_strategy()) {
        prop_assert_eq!(parse_expr(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn extension_is_monotone_and_agrees(e in expr_strategy()) {
        let ext = monotone_extension(&e).unwrap();
        prop_assert!(is_monotone(&ext.expr).unwrap());
        let vars: Vec<VarName> = e.vars().into_iter().collect();
        let table = TruthTable::of(&e, &vars).unwrap();
        for point in 0..table.len() {
            let mut env = table.assignment(point);
            for (s, neg) in &ext.pairs {
                env.insert(neg.clone(), !env[s]);
            }
            prop_assert_eq!(ext.expr.eval(&env).unwrap(), table.get(point));
        }
    }

    #[test]
    fn mode_union_laws(x in mode_strategy(), y in mode_strategy(), z in mode_strategy()) {
        prop_assert_eq!(x.union(&y), y.union(&x));
        prop_assert_eq!(x.union(&y).union(&z), x.union(&y.union(&z)));
        prop_assert_eq!(x.union(&UpdateMode::default()), x.clone());
        let u = x.union(&y);
        for k in 1..=u.len() {
            prop_assert_eq!(u.step(k), x.step(k).union(&y.step(k)));
        }
    }

    #[test]
    fn empty_recursive_wiring_is_identity(seed in any::<u64>()) {
        let m = random_module(&mut rng(seed), 4, 3);
        prop_assert!(modules_equal(&wire_recursive(&m, &Wiring::empty()).unwrap(), &m).unwrap());
    }

    #[test]
    fn union_fold_is_associative(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ms: Vec<Module> = ["p", "q", "r"].iter().map(|p| prefixed(&random_module(&mut r, 3, 2), p)).collect();
        let folded = union_all(&ms).unwrap();
        let nested = union(&ms[0], &union(&ms[1], &ms[2]).unwrap()).unwrap();
        prop_assert!(modules_equal(&folded, &nested).unwrap());
        let swapped = union_all([&ms[2], &ms[0], &ms[1]]).unwrap();
        prop_assert!(modules_equal(&folded, &swapped).unwrap());
    }

    #[test]
    fn split_preserves_the_partition(seed in any::<u64>(), pick in any::<prop::sample::Index>()) {
        let m = random_module(&mut rng(seed), 5, 3);
        let partitions = all_partitions(&m.automata(), 5);
        let p = pick.get(&partitions);
        let s = split(&m, p).unwrap();
        prop_assert_eq!(s.parts.len(), p.len());
        for (sub, part) in s.parts.iter().zip(p.parts()) {
            let got: BTreeSet<VarName> = sub.module.automata().into_iter().collect();
            prop_assert_eq!(&got, &part.members.iter().cloned().collect::<BTreeSet<_>>());
        }
        prop_assert!(modules_equal(&s.recompose().unwrap(), &m).unwrap());
    }

    #[test]
    fn split_agrees_pointwise(seed in any::<u64>(), pick in any::<prop::sample::Index>(), xs in any::<u64>(), is in any::<u64>(), d in any::<u64>()) {
        let m = random_module(&mut rng(seed), 5, 3);
        let automata = m.automata();
        let p = pick.get(&all_partitions(&automata, 5)).clone();
        let s = split(&m, &p).unwrap();
        let x = Configuration::from_index(&automata, xs % (1 << automata.len()));
        let i = Configuration::from_index(m.inputs(), is % (1 << m.inputs().len()));
        let delta = Update::new(automata.iter().enumerate().filter(|(k, _)| d >> k & 1 == 1).map(|(_, v)| v.clone()));
        let whole = compute(&m, &x, &i, &delta).unwrap();
        for sub in &s.parts {
            let t = sub.module.automata();
            let inputs = sub.module.inputs();
            let values: Vec<bool> = inputs
                .iter()
                .map(|e| match s.wires.get(e.as_str()) {
                    Some(q) => x.get(q.as_str()).unwrap(),
                    None => i.get(e.as_str()).unwrap(),
                })
                .collect();
            let local_i = Configuration::new(inputs.to_vec(), values).unwrap();
            let local_delta = Update::new(delta.iter().filter(|v| t.contains(v)).cloned());
            let got = compute(&sub.module, &x.restrict(&t).unwrap(), &local_i, &local_delta).unwrap();
            prop_assert_eq!(got, whole.restrict(&t).unwrap());
        }
    }

    #[test]
    fn atomic_split_round_trips(seed in any::<u64>()) {
        let m = random_module(&mut rng(seed), 5, 3);
        for p in [Partition::atomic(&m), Partition::whole(&m)] {
            prop_assert!(modules_equal(&split(&m, &p).unwrap().recompose().unwrap(), &m).unwrap());
        }
    }

    #[test]
    fn parallel_graph_is_iterated_parallel_step(seed in any::<u64>()) {
        let f = random_ban(&mut rng(seed), 5, 3, false);
        let automata = f.automata();
        let g = build_stg(&f, &StgMode::Parallel, None).unwrap();
        let step = UpdateMode::parallel(&automata);
        for &n in g.nodes() {
            let x = Configuration::from_index(&automata, n);
            let y = execute_fixed(&f, &x, &Configuration::empty(), &step).unwrap();
            prop_assert_eq!(g.successors(n), vec![y.index()]);
        }
    }

    #[test]
    fn fixed_points_are_async_sinks(seed in any::<u64>()) {
        let f = random_ban(&mut rng(seed), 5, 3, false);
        let g = build_stg(&f, &StgMode::Asynchronous, None).unwrap();
        let sinks: Vec<u64> = g.nodes().iter().copied().filter(|&n| g.successors(n).iter().all(|&m| m == n)).collect();
        let fixed: Vec<u64> = fixed_points(&f).unwrap().iter().map(Configuration::index).collect();
        prop_assert_eq!(fixed, sinks);
    }

    #[test]
    fn fair_convergence_ignores_node_order(seed in any::<u64>(), bit in any::<bool>()) {
        let f = random_ban(&mut rng(seed), 5, 3, false);
        let first = f.automata()[0].clone();
        let trap = Predicate::new([(first, bit)].into_iter().collect());
        let a = check_fair_convergence(&f, &trap).unwrap();
        let b = check_fair_convergence(&reversed(&f), &trap).unwrap();
        prop_assert_eq!(a.converges, b.converges);
        prop_assert_eq!(a.reachable, b.reachable);
        prop_assert_eq!(fixed_set(&a.fixed_points), fixed_set(&b.fixed_points));
    }
}
