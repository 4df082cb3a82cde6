//! Seeded random instances for property tests and self-checks.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::expr::{BoolExpr, VarName};
use crate::network::{Module, NodeDef};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn numbered(prefix: &str, count: usize) -> Vec<VarName> {
    (0..count)
        .map(|k| VarName::new(format!("{prefix}{k}")).expect("valid name"))
        .collect()
}

/// Random syntax tree of depth at most `depth` over `vars`.
pub fn random_expr(rng: &mut impl Rng, vars: &[VarName], depth: usize) -> BoolExpr {
    let leaf = depth == 0 || rng.gen_bool(0.3);
    if leaf {
        if vars.is_empty() || rng.gen_bool(0.1) {
            return BoolExpr::Const(rng.gen());
        }
        return BoolExpr::var(vars.choose(rng).expect("non-empty"));
    }
    match rng.gen_range(0..3) {
        0 => !random_expr(rng, vars, depth - 1),
        1 => random_expr(rng, vars, depth - 1) & random_expr(rng, vars, depth - 1),
        _ => random_expr(rng, vars, depth - 1) | random_expr(rng, vars, depth - 1),
    }
}

/// Disjunction of the minterms of the points set in `table`; point `p`
/// assigns bit `i` of `p` to `vars[i]`.
pub fn expr_from_table(vars: &[VarName], table: &[bool]) -> BoolExpr {
    BoolExpr::any(table.iter().enumerate().filter(|(_, &v)| v).map(|(p, _)| {
        BoolExpr::all(
            vars.iter()
                .enumerate()
                .map(|(i, v)| BoolExpr::literal(v.clone(), p >> i & 1 == 1)),
        )
    }))
}

/// Uniformly random function over `vars`, written as a minterm disjunction.
pub fn random_function(rng: &mut impl Rng, vars: &[VarName]) -> BoolExpr {
    let table: Vec<bool> = (0..1usize << vars.len()).map(|_| rng.gen()).collect();
    expr_from_table(vars, &table)
}

fn subset(rng: &mut impl Rng, pool: &[VarName], max: usize) -> Vec<VarName> {
    let mut picked: Vec<VarName> = pool.to_vec();
    picked.shuffle(rng);
    picked.truncate(rng.gen_range(0..=max.min(pool.len())));
    picked.sort();
    picked
}

/// Module with `1..=max_s` automata `s0, s1, …` and `0..=max_e` inputs
/// `i0, i1, …`, each input declared on a random automaton. Local functions
/// are random trees over the automata and the automaton's own inputs.
pub fn random_module(rng: &mut impl Rng, max_s: usize, max_e: usize) -> Module {
    let s = numbered("s", rng.gen_range(1..=max_s.max(1)));
    let e = numbered("i", rng.gen_range(0..=max_e));
    let mut alpha: Vec<Vec<VarName>> = vec![Vec::new(); s.len()];
    for input in e {
        alpha[rng.gen_range(0..s.len())].push(input);
    }
    let nodes = s
        .iter()
        .zip(alpha)
        .map(|(name, inputs)| {
            let pool: Vec<VarName> = s.iter().chain(&inputs).cloned().collect();
            let function = random_expr(rng, &pool, 3);
            NodeDef::new(name.clone(), inputs, function)
        })
        .collect();
    Module::new(nodes).expect("generated module is well formed")
}

/// Network with `1..=max_s` automata named `a, b, c, …` (then `n<k>`), each
/// reading a random set of at most `max_vars` automata through a uniformly
/// random function. With `avoid_zero`, constant-0 functions are redrawn.
pub fn random_ban(rng: &mut impl Rng, max_s: usize, max_vars: usize, avoid_zero: bool) -> Module {
    let count = rng.gen_range(1..=max_s.max(1));
    let s: Vec<VarName> = (0..count)
        .map(|k| {
            let raw = if k < 26 {
                char::from(b'a' + k as u8).to_string()
            } else {
                format!("n{k}")
            };
            VarName::new(raw).expect("valid name")
        })
        .collect();
    let functions = s
        .iter()
        .map(|a| {
            let vars = subset(rng, &s, max_vars);
            loop {
                let table: Vec<bool> = (0..1usize << vars.len()).map(|_| rng.gen()).collect();
                if avoid_zero && !table.contains(&true) {
                    continue;
                }
                break (a.clone(), expr_from_table(&vars, &table));
            }
        })
        .collect();
    Module::ban(functions).expect("generated network is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{names, TruthTable};

    #[test]
    fn table_expression_matches_table() {
        let vars = names(["x", "y", "z"]);
        let table = [false, true, true, false, true, false, false, true];
        let e = expr_from_table(&vars, &table);
        let t = TruthTable::of(&e, &vars).unwrap();
        for (p, &v) in table.iter().enumerate() {
            assert_eq!(t.get(p as u64), v);
        }
        assert_eq!(expr_from_table(&vars, &[false; 8]), BoolExpr::Const(false));
    }

    #[test]
    fn generation_is_reproducible() {
        let a = random_module(&mut rng(7), 4, 3);
        let b = random_module(&mut rng(7), 4, 3);
        assert_eq!(a, b);
        let f = random_ban(&mut rng(11), 3, 3, true);
        assert!(f.is_ban());
        assert!(f.size() <= 3);
    }
}
