//! Rewriting a network into one whose local functions are all disjunctive
//! clauses, or all monotone, together with the simulation scheme that
//! proves the rewriting correct.
//!
//! Clause gadget for `a` with `f_a = c_1 ∧ … ∧ c_n`. There is one node `u_a_k`
//! per clause and a result node `r_a`, and `r_a` holds `¬x_a`. Node `u_a_k`
//! evaluates `c_k` with `x_a` read as `¬r_a` and a neighbour `x_b` read as
//! `¬e`, where the input `e` is wired to `r_b`. Then
//! `r_a = ¬u_a_1 ∨ … ∨ ¬u_a_n`. The mode is `({u_a_k}, {r_a})`.
//!
//! Monotone gadget for `a`. Node `u_a_pos` computes the monotone extension of
//! `f_a` and `u_a_neg` the one of `¬f_a`. Every variable is read through a
//! pair `(s, s⁻)` that is wired to `(u_s_pos, u_s_neg)`. The gadget codes
//! `1` as `(1, 0)`, `0` as `(0, 1)` and `•` as `(0, 0)` or `(1, 1)`.
//! The mode is the single step `{u_a_pos, u_a_neg}`.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::expr::{to_cnf, BoolExpr, TruthTable, VarName};
use crate::limits;
use crate::network::{Module, NodeDef, Update, UpdateMode};
use crate::simulation::{assemble, Channel, Encoding, LocalSimulator, SimulationScheme};

/// Monotone extension to the doubled variable set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneExtension {
    pub expr: BoolExpr,
    /// `(s, s⁻)` for every essential variable of the source function.
    pub pairs: Vec<(VarName, VarName)>,
}

/// Extends `f` over `S` to a monotone `f′` over `S ∪ S⁻` with
/// `f(x) = f′(x ⊔ (s⁻ ↦ ¬x(s)))`. `S` is the semantic support of `f` and
/// `s⁻` is named `s_neg` (suffixed if that name is taken).
pub fn monotone_extension(f: &BoolExpr) -> Result<MonotoneExtension> {
    let support = f.support()?;
    limits::check_bits(2 * support.len(), limits::max_bits(), "monotone extension")?;
    let mut taken: BTreeSet<VarName> = f.vars();
    let pairs: Vec<(VarName, VarName)> = support
        .iter()
        .map(|s| (s.clone(), fresh(format!("{s}_neg"), &mut taken)))
        .collect();
    Ok(MonotoneExtension {
        expr: extend_over(f, &pairs),
        pairs,
    })
}

/// `H ∧ (⋁_s (s ∧ s⁻) ∨ g)` with `H = ⋀_s (s ∨ s⁻)` and `g` the negation
/// normal form of `f` with each `¬s` read as `s⁻`. Variables of `f` missing
/// from `pairs` must be inessential.
fn extend_over(f: &BoolExpr, pairs: &[(VarName, VarName)]) -> BoolExpr {
    let negs: BTreeMap<&VarName, &VarName> = pairs.iter().map(|(s, n)| (s, n)).collect();
    let pinned = f.substitute(&|v: &VarName| (!negs.contains_key(v)).then_some(BoolExpr::Const(false)));
    let g = positive_form(&pinned.nnf(), &negs);
    if pairs.is_empty() {
        return g;
    }
    let h = BoolExpr::all(pairs.iter().map(|(s, n)| BoolExpr::var(s) | BoolExpr::var(n)));
    let overflow = BoolExpr::any(pairs.iter().map(|(s, n)| BoolExpr::var(s) & BoolExpr::var(n)));
    h & (overflow | g)
}

fn positive_form(e: &BoolExpr, negs: &BTreeMap<&VarName, &VarName>) -> BoolExpr {
    match e {
        BoolExpr::Not(inner) => match inner.as_ref() {
            BoolExpr::Var(v) => BoolExpr::var(negs[v]),
            BoolExpr::Const(b) => BoolExpr::Const(!b),
            _ => unreachable!("negation normal form"),
        },
        BoolExpr::And(l, r) => BoolExpr::and(positive_form(l, negs), positive_form(r, negs)),
        BoolExpr::Or(l, r) => BoolExpr::or(positive_form(l, negs), positive_form(r, negs)),
        other => other.clone(),
    }
}

fn fresh(base: String, taken: &mut BTreeSet<VarName>) -> VarName {
    let mut candidate = base.clone();
    let mut k = 1;
    while taken.contains(candidate.as_str()) {
        candidate = format!("{base}_{k}");
        k += 1;
    }
    let v = VarName::new(candidate).expect("generated names are identifiers");
    taken.insert(v.clone());
    v
}

/// A rewritten network with its simulation scheme.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transformed {
    pub scheme: SimulationScheme,
    pub network: Module,
}

fn closed_target(f: &Module) -> Result<()> {
    if f.is_ban() {
        Ok(())
    } else {
        Err(Error::InvalidScheme("transforms apply to networks without inputs".into()))
    }
}

/// Builds the clause gadget of every automaton.
pub fn to_clause_network(f: &Module) -> Result<Transformed> {
    closed_target(f)?;
    let mut taken = BTreeSet::new();
    let r: BTreeMap<VarName, VarName> = f
        .automata()
        .into_iter()
        .map(|a| {
            let r = fresh(format!("r_{a}"), &mut taken);
            (a, r)
        })
        .collect();
    let mut cnfs = BTreeMap::new();
    for node in f.nodes() {
        let vars: Vec<VarName> = node.function.vars().into_iter().collect();
        limits::check_bits(vars.len(), limits::max_bits(), "clause decomposition")?;
        if TruthTable::of(&node.function, &vars)?.constant() == Some(false) {
            return Err(Error::ConstantZeroFunction(node.name.to_string()));
        }
        cnfs.insert(node.name.clone(), to_cnf(&node.function)?);
    }

    let mut parts = Vec::new();
    let mut interfaces: BTreeMap<(VarName, VarName), BTreeMap<VarName, VarName>> = BTreeMap::new();
    for a in f.automata() {
        let r_a = &r[&a];
        let mut nodes = Vec::new();
        let mut clause_nodes = Vec::new();
        for (k, clause) in cnfs[&a].iter().enumerate() {
            let u = fresh(format!("u_{a}_{}", k + 1), &mut taken);
            let mut inputs = Vec::new();
            let mut literals = Vec::new();
            for (b, positive) in clause.literals() {
                if *b == a {
                    literals.push(BoolExpr::literal(r_a.clone(), !positive));
                    continue;
                }
                let e = fresh(format!("e_{b}_{a}_{}", k + 1), &mut taken);
                literals.push(BoolExpr::literal(e.clone(), !positive));
                inputs.push(e.clone());
                interfaces
                    .entry((b.clone(), a.clone()))
                    .or_default()
                    .insert(e, r[b].clone());
            }
            nodes.push(NodeDef::new(u.clone(), inputs, BoolExpr::any(literals)));
            clause_nodes.push(u);
        }
        let result = BoolExpr::any(clause_nodes.iter().map(|u| !BoolExpr::var(u)));
        nodes.push(NodeDef::closed(r_a.clone(), result));
        let mode = UpdateMode::new(vec![
            Update::new(clause_nodes.iter().cloned()),
            Update::new([r_a.clone()]),
        ]);
        let encoding = Encoding::inferred(!BoolExpr::var(r_a), BoolExpr::var(r_a))?;
        parts.push((
            a.clone(),
            LocalSimulator {
                module: Module::new(nodes)?,
                encoding,
                mode,
            },
        ));
    }
    let channels = interfaces
        .into_iter()
        .map(|((b, a), interface)| {
            let r_b = r[&b].clone();
            Ok(Channel {
                encoding: Encoding::new(vec![r_b.clone()], !BoolExpr::var(&r_b), BoolExpr::var(&r_b))?,
                from: b,
                to: a,
                interface,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let scheme = SimulationScheme::new(f.clone(), parts, channels)?;
    let network = assemble(&scheme)?;
    Ok(Transformed { scheme, network })
}

fn pair_encoding(pos: &VarName, neg: &VarName) -> Result<Encoding> {
    let (p, n) = (BoolExpr::var(pos), BoolExpr::var(neg));
    Encoding::new(vec![pos.clone(), neg.clone()], p.clone() & !n.clone(), !p & n)
}

fn part_encoding(pos: &VarName, neg: &VarName) -> Result<Encoding> {
    let pair = pair_encoding(pos, neg)?;
    Encoding::inferred(pair.one().clone(), pair.zero().clone())
}

/// Builds the monotone gadget of every automaton.
pub fn to_monotone_network(f: &Module) -> Result<Transformed> {
    closed_target(f)?;
    let mut taken = BTreeSet::new();
    let poles: BTreeMap<VarName, (VarName, VarName)> = f
        .automata()
        .into_iter()
        .map(|a| {
            let pos = fresh(format!("u_{a}_pos"), &mut taken);
            let neg = fresh(format!("u_{a}_neg"), &mut taken);
            (a, (pos, neg))
        })
        .collect();

    let mut parts = Vec::new();
    let mut interfaces: BTreeMap<(VarName, VarName), BTreeMap<VarName, VarName>> = BTreeMap::new();
    for node in f.nodes() {
        let a = &node.name;
        let support = node.function.support()?;
        limits::check_bits(2 * support.len(), limits::max_bits(), "monotone extension")?;
        let (pos, neg) = &poles[a];
        let mut readers = Vec::new();
        for (reader, tag, function) in [
            (pos, 'p', node.function.clone()),
            (neg, 'n', !node.function.clone()),
        ] {
            let mut inputs = Vec::new();
            let pairs: Vec<(VarName, VarName)> = support
                .iter()
                .map(|b| {
                    if b == a {
                        return (pos.clone(), neg.clone());
                    }
                    let (b_pos, b_neg) = &poles[b];
                    let plain = fresh(format!("e_{b}_{a}_{tag}p"), &mut taken);
                    let minus = fresh(format!("e_{b}_{a}_{tag}n"), &mut taken);
                    let wires = interfaces.entry((b.clone(), a.clone())).or_default();
                    wires.insert(plain.clone(), b_pos.clone());
                    wires.insert(minus.clone(), b_neg.clone());
                    inputs.push(plain.clone());
                    inputs.push(minus.clone());
                    (plain, minus)
                })
                .collect();
            // f is re-expressed over the gadget names first, then extended.
            let renaming: BTreeMap<VarName, VarName> = support
                .iter()
                .zip(&pairs)
                .map(|(b, (plain, _))| (b.clone(), plain.clone()))
                .collect();
            let over_gadget = function.substitute(&|v: &VarName| {
                Some(renaming.get(v).map_or(BoolExpr::Const(false), BoolExpr::var))
            });
            readers.push(NodeDef::new(reader.clone(), inputs, extend_over(&over_gadget, &pairs)));
        }
        parts.push((
            a.clone(),
            LocalSimulator {
                module: Module::new(readers)?,
                encoding: part_encoding(pos, neg)?,
                mode: UpdateMode::new(vec![Update::new([pos.clone(), neg.clone()])]),
            },
        ));
    }
    let channels = interfaces
        .into_iter()
        .map(|((b, a), interface)| {
            let (b_pos, b_neg) = &poles[&b];
            Ok(Channel {
                encoding: pair_encoding(b_pos, b_neg)?,
                from: b,
                to: a,
                interface,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let scheme = SimulationScheme::new(f.clone(), parts, channels)?;
    let network = assemble(&scheme)?;
    Ok(Transformed { scheme, network })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{is_clause, is_monotone, name, names, parse_expr, Clause};
    use crate::simulation::{check_global_simulation_constructive, check_local_simulation};

    fn e(s: &str) -> BoolExpr {
        parse_expr(s).unwrap()
    }

    /// Direct three-case definition: `f` on coding points, 1 when every
    /// non-coding pair is (1,1), 0 otherwise.
    fn extension_oracle(f: &BoolExpr, pairs: &[(VarName, VarName)], point: &BTreeMap<VarName, bool>) -> bool {
        let coding = pairs.iter().all(|(s, n)| point[s] != point[n]);
        if coding {
            let env: BTreeMap<VarName, bool> = pairs.iter().map(|(s, _)| (s.clone(), point[s])).collect();
            return f.eval_with(&|v: &VarName| Some(env.get(v).copied().unwrap_or(false))).unwrap();
        }
        pairs
            .iter()
            .all(|(s, n)| point[s] != point[n] || (point[s] && point[n]))
    }

    fn check_extension(f: &BoolExpr) {
        let ext = monotone_extension(f).unwrap();
        assert!(is_monotone(&ext.expr).unwrap(), "{f} -> {}", ext.expr);
        let vars: Vec<VarName> = ext.pairs.iter().flat_map(|(s, n)| [s.clone(), n.clone()]).collect();
        let table = TruthTable::of(&ext.expr, &vars).unwrap();
        for p in 0..table.len() {
            let point = table.assignment(p);
            assert_eq!(table.get(p), extension_oracle(f, &ext.pairs, &point), "{f} at {point:?}");
        }
    }

    #[test]
    fn negation_extension_points() {
        let ext = monotone_extension(&e("!a")).unwrap();
        assert_eq!(ext.pairs, vec![(name("a"), name("a_neg"))]);
        let at = |a: bool, n: bool| ext.expr.eval(&BTreeMap::from([(name("a"), a), (name("a_neg"), n)])).unwrap();
        assert!(at(false, true));
        assert!(!at(true, false));
        assert!(at(true, true));
        assert!(!at(false, false));
        check_extension(&e("!a"));
        check_extension(&e("a"));
        check_extension(&e("a & !b | !a & b"));
        check_extension(&e("1"));
        check_extension(&e("b & !b | c"));
    }

    #[test]
    fn two_clause_gadget() {
        let f = Module::ban(vec![
            (name("a"), e("a & (!b | d)")),
            (name("b"), e("b")),
            (name("d"), e("!d")),
        ])
        .unwrap();
        let t = to_clause_network(&f).unwrap();
        let gadget = &t.scheme.part("a").unwrap().module;
        assert_eq!(gadget.automata(), names(["u_a_1", "u_a_2", "r_a"]));
        let clauses = to_cnf(&e("a & (!b | d)")).unwrap();
        assert_eq!(
            clauses,
            vec![
                Clause::new([(name("a"), true)]).unwrap(),
                Clause::new([(name("b"), false), (name("d"), true)]).unwrap()
            ]
        );
        assert_eq!(gadget.function("u_a_1").unwrap(), &e("!r_a"));
        assert_eq!(gadget.function("u_a_2").unwrap(), &e("e_b_a_2 | !e_d_a_2"));
        assert_eq!(gadget.function("r_a").unwrap(), &e("!u_a_1 | !u_a_2"));
        assert_eq!(t.scheme.part("a").unwrap().mode.to_string(), "{u_a_1,u_a_2};{r_a}");
        assert!(t.network.nodes().iter().all(|n| is_clause(&n.function)));
        for a in ["a", "b", "d"] {
            assert!(check_local_simulation(&t.scheme, a).unwrap().passed());
        }
        assert!(check_global_simulation_constructive(&t.scheme).unwrap().passed());
    }

    #[test]
    fn clause_gadget_constants() {
        let one = Module::ban(vec![(name("a"), e("1"))]).unwrap();
        let t = to_clause_network(&one).unwrap();
        assert_eq!(t.network.function("r_a").unwrap(), &BoolExpr::Const(false));
        assert!(check_global_simulation_constructive(&t.scheme).unwrap().passed());
        let zero = Module::ban(vec![(name("a"), e("a & !a"))]).unwrap();
        assert!(matches!(to_clause_network(&zero), Err(Error::ConstantZeroFunction(_))));
    }

    #[test]
    fn clause_gadget_identity() {
        let f = Module::ban(vec![(name("a"), e("a"))]).unwrap();
        let t = to_clause_network(&f).unwrap();
        assert_eq!(t.network.automata(), names(["u_a_1", "r_a"]));
        assert!(check_local_simulation(&t.scheme, "a").unwrap().passed());
    }

    #[test]
    fn monotone_two_node() {
        let f = Module::ban(vec![(name("a"), e("!b")), (name("b"), e("a"))]).unwrap();
        let t = to_monotone_network(&f).unwrap();
        assert_eq!(t.network.size(), 4);
        assert!(t
            .network
            .nodes()
            .iter()
            .all(|n| is_monotone(&n.function).unwrap()));
        for a in ["a", "b"] {
            assert!(check_local_simulation(&t.scheme, a).unwrap().passed());
        }
        assert!(check_global_simulation_constructive(&t.scheme).unwrap().passed());
    }

    #[test]
    fn monotone_gadget_loops() {
        let f = Module::ban(vec![
            (name("a"), e("a & (!b | c)")),
            (name("b"), e("b")),
            (name("c"), e("c")),
        ])
        .unwrap();
        let t = to_monotone_network(&f).unwrap();
        let g = crate::network::interaction_graph(&t.network).unwrap();
        for (x, y) in [
            ("u_a_pos", "u_a_pos"),
            ("u_a_pos", "u_a_neg"),
            ("u_a_neg", "u_a_pos"),
            ("u_a_neg", "u_a_neg"),
        ] {
            assert!(g.has_edge(x, y), "{x} -> {y}");
        }
        assert!(check_global_simulation_constructive(&t.scheme).unwrap().passed());
    }

    #[test]
    fn monotone_negation_loop() {
        let f = Module::ban(vec![(name("a"), e("!a"))]).unwrap();
        let t = to_monotone_network(&f).unwrap();
        assert!(is_monotone(t.network.function("u_a_pos").unwrap()).unwrap());
        assert!(check_local_simulation(&t.scheme, "a").unwrap().passed());
    }
}
