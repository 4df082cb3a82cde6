//! Non-recursive and recursive wirings, and extensional module equality.
//!
//! A wiring is a partial map from input names to automaton names. Wiring an
//! input `e` to an automaton `s` replaces every occurrence of `e` in the local
//! functions by the variable `s` and removes `e` from the input declaration.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::expr::{BoolExpr, TruthTable, VarName};
use crate::limits;
use crate::network::{Module, NodeDef};

/// Partial map from inputs to automata.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Wiring(BTreeMap<VarName, VarName>);

impl Wiring {
    pub fn new(map: BTreeMap<VarName, VarName>) -> Self {
        Wiring(map)
    }

    pub fn empty() -> Self {
        Wiring(BTreeMap::new())
    }

    /// Parses `e1=s1,e2=s2`. An empty string is the empty wiring.
    pub fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (e, s) = item
                .split_once('=')
                .ok_or_else(|| Error::parse(1, 1, format!("wiring entry `{item}` is not `input=automaton`")))?;
            let e = VarName::new(e.trim())?;
            if map.insert(e.clone(), VarName::new(s.trim())?).is_some() {
                return Err(Error::DomainViolation(format!("input `{e}` wired twice")));
            }
        }
        Ok(Wiring(map))
    }

    pub fn insert(&mut self, input: VarName, automaton: VarName) -> Option<VarName> {
        self.0.insert(input, automaton)
    }

    pub fn get(&self, input: &str) -> Option<&VarName> {
        self.0.get(input)
    }

    pub fn map(&self) -> &BTreeMap<VarName, VarName> {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VarName, &VarName)> {
        self.0.iter()
    }
}

impl FromIterator<(VarName, VarName)> for Wiring {
    fn from_iter<I: IntoIterator<Item = (VarName, VarName)>>(iter: I) -> Self {
        Wiring(iter.into_iter().collect())
    }
}

impl fmt::Display for Wiring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.0.iter().map(|(e, s)| format!("{e}={s}")).collect();
        f.write_str(&items.join(","))
    }
}

/// What to do with a wiring that is not defined over the right sets.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OnMalformed {
    #[default]
    Reject,
    /// Operator convention: the result is the empty module.
    Empty,
}

fn rewire(node: &NodeDef, w: &Wiring) -> NodeDef {
    let inputs = node.inputs.iter().filter(|e| w.get(e.as_str()).is_none()).cloned().collect();
    let function = node
        .function
        .substitute(&|v: &VarName| w.get(v.as_str()).map(BoolExpr::var));
    NodeDef::new(node.name.clone(), inputs, function)
}

/// `M ↣_ω M′`: inputs of `M′` listed in `ω` read automata of `M`.
pub fn wire_non_recursive(m: &Module, m2: &Module, w: &Wiring) -> Result<Module> {
    let left = m.all_names();
    if let Some(shared) = m2.all_names().iter().find(|v| left.contains(*v)) {
        return Err(Error::NameCollision(format!("`{shared}` occurs in both modules")));
    }
    for (e, s) in w.iter() {
        if !m2.has_input(e.as_str()) {
            return Err(Error::DomainViolation(format!(
                "`{e}` is not an input of the right-hand module"
            )));
        }
        if !m.has_automaton(s.as_str()) {
            return Err(Error::DomainViolation(format!(
                "`{e}` is wired to `{s}`, which is not an automaton of the left-hand module"
            )));
        }
    }
    let mut nodes = m.nodes().to_vec();
    nodes.extend(m2.nodes().iter().map(|n| rewire(n, w)));
    Module::new(nodes)
}

pub fn wire_non_recursive_with(m: &Module, m2: &Module, w: &Wiring, on_malformed: OnMalformed) -> Result<Module> {
    match (wire_non_recursive(m, m2, w), on_malformed) {
        (Err(Error::DomainViolation(_) | Error::NameCollision(_)), OnMalformed::Empty) => Ok(Module::empty()),
        (other, _) => other,
    }
}

/// `M ∪ M′ = M ↣_∅ M′`.
pub fn union(m: &Module, m2: &Module) -> Result<Module> {
    wire_non_recursive(m, m2, &Wiring::empty())
}

pub fn union_all<'a>(modules: impl IntoIterator<Item = &'a Module>) -> Result<Module> {
    let mut nodes = Vec::new();
    let mut seen = BTreeSet::new();
    for m in modules {
        for v in m.all_names() {
            if !seen.insert(v.clone()) {
                return Err(Error::NameCollision(format!("`{v}` occurs in more than one module")));
            }
        }
        nodes.extend(m.nodes().iter().cloned());
    }
    Module::new(nodes)
}

/// `↻_ω M`: inputs of `M` listed in `ω` read automata of `M` itself.
pub fn wire_recursive(m: &Module, w: &Wiring) -> Result<Module> {
    for (e, s) in w.iter() {
        if !m.has_input(e.as_str()) {
            return Err(Error::DomainViolation(format!("`{e}` is not an input of the module")));
        }
        if !m.has_automaton(s.as_str()) {
            return Err(Error::DomainViolation(format!(
                "`{e}` is wired to `{s}`, which is not an automaton of the module"
            )));
        }
    }
    Module::new(m.nodes().iter().map(|n| rewire(n, w)).collect())
}

pub fn wire_recursive_with(m: &Module, w: &Wiring, on_malformed: OnMalformed) -> Result<Module> {
    match (wire_recursive(m, w), on_malformed) {
        (Err(Error::DomainViolation(_)), OnMalformed::Empty) => Ok(Module::empty()),
        (other, _) => other,
    }
}

/// Two modules reading each other: `forward` maps inputs of `m2` to automata
/// of `m`, then `backward` maps inputs of `m` to automata of `m2`.
pub fn wire_bidirectional(m: &Module, m2: &Module, forward: &Wiring, backward: &Wiring) -> Result<Module> {
    for (e, s) in backward.iter() {
        if !m.has_input(e.as_str()) || !m2.has_automaton(s.as_str()) {
            return Err(Error::DomainViolation(format!(
                "backward entry `{e}={s}` must map an input of the left module to an automaton of the right one"
            )));
        }
    }
    wire_recursive(&wire_non_recursive(m, m2, forward)?, backward)
}

/// Extensional equality: same `(S, E, α)` as sets and pointwise equal local
/// functions.
pub fn modules_equal(m: &Module, m2: &Module) -> Result<bool> {
    let ours: BTreeSet<VarName> = m.automata().into_iter().collect();
    let theirs: BTreeSet<VarName> = m2.automata().into_iter().collect();
    if ours != theirs {
        return Ok(false);
    }
    let ours_e: BTreeSet<&VarName> = m.inputs().iter().collect();
    let theirs_e: BTreeSet<&VarName> = m2.inputs().iter().collect();
    if ours_e != theirs_e {
        return Ok(false);
    }
    for node in m.nodes() {
        let other = m2.node(node.name.as_str()).expect("same automata");
        let a: BTreeSet<&VarName> = node.inputs.iter().collect();
        let b: BTreeSet<&VarName> = other.inputs.iter().collect();
        if a != b {
            return Ok(false);
        }
        if !functions_agree(&node.function, &other.function)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub(crate) fn functions_agree(f: &BoolExpr, g: &BoolExpr) -> Result<bool> {
    if f == g {
        return Ok(true);
    }
    let vars: Vec<VarName> = f.vars().union(&g.vars()).cloned().collect();
    limits::check_bits(vars.len(), limits::max_bits(), "extensional comparison")?;
    Ok(TruthTable::of(f, &vars)? == TruthTable::of(g, &vars)?)
}
