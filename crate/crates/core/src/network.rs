//! Configurations, updates, modules and their executions.
//!
//! A [`Module`] is a set of automata `S`, a set of inputs `E` and an input
//! declaration assigning every input to exactly one automaton. A Boolean
//! automata network is the special case `E = ∅`.
//!
//! Configurations are rendered as binary words in declaration order, so with
//! `S = [a, b, c]` the word `101` means `a = 1, b = 0, c = 1`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::expr::{BoolExpr, Compiled, TruthTable, VarName};

/// Total assignment over an ordered support set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Configuration {
    support: Vec<VarName>,
    values: Vec<bool>,
}

/// Input configurations are configurations over `E`.
pub type InputConfiguration = Configuration;

impl Configuration {
    pub fn new(support: Vec<VarName>, values: Vec<bool>) -> Result<Self> {
        if support.len() != values.len() {
            return Err(Error::SupportMismatch(format!(
                "{} names for {} values",
                support.len(),
                values.len()
            )));
        }
        let distinct: BTreeSet<&VarName> = support.iter().collect();
        if distinct.len() != support.len() {
            return Err(Error::SupportMismatch("repeated name in support".into()));
        }
        Ok(Configuration { support, values })
    }

    pub fn empty() -> Self {
        Configuration {
            support: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn zeros(support: &[VarName]) -> Self {
        Configuration {
            support: support.to_vec(),
            values: vec![false; support.len()],
        }
    }

    /// Parses a binary word read in support order.
    pub fn from_word(support: &[VarName], word: &str) -> Result<Self> {
        let bits: Vec<char> = word.chars().filter(|c| !c.is_whitespace()).collect();
        if bits.len() != support.len() {
            return Err(Error::SupportMismatch(format!(
                "word `{word}` has {} bits, support has {} names",
                bits.len(),
                support.len()
            )));
        }
        let values = bits
            .iter()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::SupportMismatch(format!("`{other}` is not a bit"))),
            })
            .collect::<Result<Vec<bool>>>()?;
        Configuration::new(support.to_vec(), values)
    }

    /// Builds a configuration from `name -> bit` pairs that must cover the
    /// support exactly.
    pub fn from_pairs(support: &[VarName], pairs: &BTreeMap<VarName, bool>) -> Result<Self> {
        let values = support
            .iter()
            .map(|v| {
                pairs
                    .get(v)
                    .copied()
                    .ok_or_else(|| Error::SupportMismatch(format!("no value for `{v}`")))
            })
            .collect::<Result<Vec<bool>>>()?;
        if let Some(extra) = pairs.keys().find(|k| !support.contains(k)) {
            return Err(Error::SupportMismatch(format!("`{extra}` is not in the support")));
        }
        Configuration::new(support.to_vec(), values)
    }

    /// Configuration whose binary word, read as a number with the first
    /// name most significant, equals `index`.
    pub fn from_index(support: &[VarName], index: u64) -> Self {
        let n = support.len();
        Configuration {
            support: support.to_vec(),
            values: (0..n).map(|k| index >> (n - 1 - k) & 1 == 1).collect(),
        }
    }

    pub fn index(&self) -> u64 {
        self.values.iter().fold(0, |acc, &b| acc << 1 | u64::from(b))
    }

    pub fn support(&self) -> &[VarName] {
        &self.support
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, v: &str) -> Option<bool> {
        self.support
            .iter()
            .position(|s| s.as_str() == v)
            .map(|k| self.values[k])
    }

    pub fn set(&mut self, v: &str, value: bool) -> Result<()> {
        let k = self
            .support
            .iter()
            .position(|s| s.as_str() == v)
            .ok_or_else(|| Error::SupportMismatch(format!("`{v}` is not in the support")))?;
        self.values[k] = value;
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VarName, bool)> {
        self.support.iter().zip(self.values.iter().copied())
    }

    pub fn to_map(&self) -> BTreeMap<VarName, bool> {
        self.iter().map(|(k, v)| (k.clone(), v)).collect()
    }

    pub fn word(&self) -> String {
        self.values.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }

    /// `name=bit` list in support order, as printed in counterexamples.
    pub fn assignments(&self) -> String {
        self.iter()
            .map(|(k, v)| format!("{k}={}", u8::from(v)))
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Values re-read in the order of `order`, which must be a permutation of
    /// the support.
    pub fn aligned_to(&self, order: &[VarName]) -> Result<Vec<bool>> {
        if order.len() != self.support.len() {
            return Err(Error::SupportMismatch(format!(
                "expected a configuration over {} names, got {}",
                order.len(),
                self.support.len()
            )));
        }
        order
            .iter()
            .map(|v| {
                self.get(v.as_str())
                    .ok_or_else(|| Error::SupportMismatch(format!("`{v}` missing from configuration")))
            })
            .collect()
    }

    pub fn restrict(&self, names: &[VarName]) -> Result<Configuration> {
        let values = names
            .iter()
            .map(|v| {
                self.get(v.as_str())
                    .ok_or_else(|| Error::SupportMismatch(format!("`{v}` missing from configuration")))
            })
            .collect::<Result<Vec<bool>>>()?;
        Ok(Configuration {
            support: names.to_vec(),
            values,
        })
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.word())
    }
}

/// Set of automata refreshed simultaneously.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Update(BTreeSet<VarName>);

impl Update {
    pub fn new(members: impl IntoIterator<Item = VarName>) -> Self {
        Update(members.into_iter().collect())
    }

    pub fn empty() -> Self {
        Update(BTreeSet::new())
    }

    pub fn contains(&self, v: &str) -> bool {
        self.0.contains(v)
    }

    pub fn iter(&self) -> impl Iterator<Item = &VarName> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn union(&self, other: &Update) -> Update {
        Update(self.0.union(&other.0).cloned().collect())
    }

    pub fn members(&self) -> &BTreeSet<VarName> {
        &self.0
    }
}

impl FromIterator<VarName> for Update {
    fn from_iter<I: IntoIterator<Item = VarName>>(iter: I) -> Self {
        Update::new(iter)
    }
}

impl fmt::Display for Update {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inner: Vec<&str> = self.0.iter().map(VarName::as_str).collect();
        write!(f, "{{{}}}", inner.join(","))
    }
}

/// Finite sequence of updates. Steps past the end are empty.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct UpdateMode(Vec<Update>);

impl UpdateMode {
    pub fn new(steps: Vec<Update>) -> Self {
        UpdateMode(steps)
    }

    /// One step updating every automaton.
    pub fn parallel(automata: &[VarName]) -> Self {
        UpdateMode(vec![Update::new(automata.iter().cloned())])
    }

    /// One singleton step per automaton, in the given order.
    pub fn sequential(order: &[VarName]) -> Self {
        UpdateMode(order.iter().map(|v| Update::new([v.clone()])).collect())
    }

    pub fn steps(&self) -> &[Update] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The `k`-th update, counting from 1; empty beyond the size.
    pub fn step(&self, k: usize) -> Update {
        k.checked_sub(1)
            .and_then(|i| self.0.get(i))
            .cloned()
            .unwrap_or_default()
    }

    pub fn union(&self, other: &UpdateMode) -> UpdateMode {
        let len = self.len().max(other.len());
        UpdateMode((1..=len).map(|k| self.step(k).union(&other.step(k))).collect())
    }

    pub fn concat(&self, other: &UpdateMode) -> UpdateMode {
        UpdateMode(self.0.iter().chain(other.0.iter()).cloned().collect())
    }

    pub fn members(&self) -> BTreeSet<VarName> {
        self.0.iter().flat_map(|u| u.iter().cloned()).collect()
    }
}

impl fmt::Display for UpdateMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(Update::to_string).collect();
        f.write_str(&parts.join(";"))
    }
}

pub fn union_update_modes(a: &UpdateMode, b: &UpdateMode) -> UpdateMode {
    a.union(b)
}

/// One automaton of a module as written in a `.ban` file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeDef {
    pub name: VarName,
    pub inputs: Vec<VarName>,
    pub function: BoolExpr,
}

impl NodeDef {
    pub fn new(name: VarName, inputs: Vec<VarName>, function: BoolExpr) -> Self {
        NodeDef { name, inputs, function }
    }

    pub fn closed(name: VarName, function: BoolExpr) -> Self {
        NodeDef {
            name,
            inputs: Vec::new(),
            function,
        }
    }
}

/// Module over `(S, E, α)` with one local function per automaton.
#[derive(Clone, Debug)]
pub struct Module {
    nodes: Vec<NodeDef>,
    inputs: Vec<VarName>,
    input_owner: BTreeMap<VarName, usize>,
    automaton_index: BTreeMap<VarName, usize>,
    kernel: OnceLock<Kernel>,
}

impl PartialEq for Module {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes
    }
}

impl Eq for Module {}

impl Module {
    /// Validates the input declaration and the local function signatures.
    pub fn new(nodes: Vec<NodeDef>) -> Result<Self> {
        let mut automaton_index = BTreeMap::new();
        for (k, node) in nodes.iter().enumerate() {
            if automaton_index.insert(node.name.clone(), k).is_some() {
                return Err(Error::InvalidModule(format!("automaton `{}` declared twice", node.name)));
            }
        }
        let mut inputs = Vec::new();
        let mut input_owner = BTreeMap::new();
        for (k, node) in nodes.iter().enumerate() {
            for e in &node.inputs {
                if automaton_index.contains_key(e) {
                    return Err(Error::InvalidModule(format!("`{e}` is both an automaton and an input")));
                }
                if let Some(prev) = input_owner.insert(e.clone(), k) {
                    return Err(Error::InvalidModule(format!(
                        "input `{e}` declared on both `{}` and `{}`",
                        nodes[prev].name, node.name
                    )));
                }
                inputs.push(e.clone());
            }
        }
        for node in &nodes {
            for v in node.function.vars() {
                let ok = automaton_index.contains_key(&v) || node.inputs.contains(&v);
                if !ok {
                    let why = if input_owner.contains_key(&v) {
                        "an input declared on another automaton"
                    } else {
                        "undeclared"
                    };
                    return Err(Error::InvalidModule(format!(
                        "function of `{}` reads `{v}`, {why}",
                        node.name
                    )));
                }
            }
        }
        Ok(Module {
            nodes,
            inputs,
            input_owner,
            automaton_index,
            kernel: OnceLock::new(),
        })
    }

    /// A network without inputs.
    pub fn ban(functions: Vec<(VarName, BoolExpr)>) -> Result<Self> {
        Module::new(functions.into_iter().map(|(n, f)| NodeDef::closed(n, f)).collect())
    }

    pub fn empty() -> Self {
        Module::new(Vec::new()).expect("empty module is valid")
    }

    pub fn nodes(&self) -> &[NodeDef] {
        &self.nodes
    }

    pub fn into_nodes(self) -> Vec<NodeDef> {
        self.nodes
    }

    pub fn automata(&self) -> Vec<VarName> {
        self.nodes.iter().map(|n| n.name.clone()).collect()
    }

    pub fn inputs(&self) -> &[VarName] {
        &self.inputs
    }

    pub fn size(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_ban(&self) -> bool {
        self.inputs.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn has_automaton(&self, v: &str) -> bool {
        self.automaton_index.contains_key(v)
    }

    pub fn has_input(&self, v: &str) -> bool {
        self.input_owner.contains_key(v)
    }

    pub fn node(&self, v: &str) -> Option<&NodeDef> {
        self.automaton_index.get(v).map(|&k| &self.nodes[k])
    }

    pub fn function(&self, v: &str) -> Option<&BoolExpr> {
        self.node(v).map(|n| &n.function)
    }

    /// `α(s)`.
    pub fn declared_inputs(&self, v: &str) -> Option<&[VarName]> {
        self.node(v).map(|n| n.inputs.as_slice())
    }

    /// The automaton an input is declared on.
    pub fn owner_of(&self, input: &str) -> Option<&VarName> {
        self.input_owner.get(input).map(|&k| &self.nodes[k].name)
    }

    /// Position of an automaton in declaration order.
    pub fn automaton_position(&self, v: &str) -> Option<usize> {
        self.automaton_index.get(v).copied()
    }

    pub fn input_position(&self, v: &str) -> Option<usize> {
        self.inputs.iter().position(|e| e.as_str() == v)
    }

    /// Every name of `S ∪ E`.
    pub fn all_names(&self) -> BTreeSet<VarName> {
        self.nodes
            .iter()
            .map(|n| n.name.clone())
            .chain(self.inputs.iter().cloned())
            .collect()
    }

    pub(crate) fn kernel(&self) -> &Kernel {
        self.kernel.get_or_init(|| Kernel::compile(self))
    }

    fn positions(&self, update: &Update) -> Result<Vec<usize>> {
        update
            .iter()
            .map(|v| {
                self.automaton_index
                    .get(v)
                    .copied()
                    .ok_or_else(|| Error::SupportMismatch(format!("update member `{v}` is not an automaton")))
            })
            .collect()
    }

    fn state_of(&self, x: &Configuration, i: &InputConfiguration) -> Result<Vec<bool>> {
        let mut state = x.aligned_to(&self.automata())?;
        state.extend(i.aligned_to(&self.inputs)?);
        Ok(state)
    }

    fn configuration_of(&self, state: &[bool]) -> Configuration {
        Configuration {
            support: self.automata(),
            values: state[..self.size()].to_vec(),
        }
    }
}

/// Module with local functions compiled against the slot layout
/// `[automata..., inputs...]`.
#[derive(Clone, Debug)]
pub(crate) struct Kernel {
    programs: Vec<Compiled>,
}

impl Kernel {
    fn compile(m: &Module) -> Kernel {
        let slots: BTreeMap<&VarName, usize> = m
            .nodes
            .iter()
            .map(|n| &n.name)
            .chain(m.inputs.iter())
            .enumerate()
            .map(|(k, v)| (v, k))
            .collect();
        let programs = m
            .nodes
            .iter()
            .map(|n| {
                n.function
                    .compile(&|v: &VarName| slots.get(v).copied())
                    .expect("module signatures are validated at construction")
            })
            .collect();
        Kernel { programs }
    }

    /// Applies one update in place. `state` holds automata then inputs;
    /// `scratch` is reused between calls.
    pub(crate) fn step(&self, state: &mut [bool], update: &[usize], scratch: &mut Vec<bool>) {
        scratch.clear();
        scratch.extend(update.iter().map(|&k| self.programs[k].eval(state)));
        for (&k, &v) in update.iter().zip(scratch.iter()) {
            state[k] = v;
        }
    }

    pub(crate) fn run(&self, state: &mut [bool], mode: &[Vec<usize>], scratch: &mut Vec<bool>) {
        for step in mode {
            self.step(state, step, scratch);
        }
    }

    /// Closed-network step on packed bits (automaton `k` is bit `k`).
    pub(crate) fn step_bits(&self, state: u64, update_mask: u64) -> u64 {
        let mut next = state;
        let mut mask = update_mask;
        while mask != 0 {
            let k = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            let v = self.programs[k].eval_bits(state);
            next = (next & !(1 << k)) | (u64::from(v) << k);
        }
        next
    }
}

/// Mode resolved to automaton positions of `m`.
pub(crate) fn resolve_mode(m: &Module, mode: &UpdateMode) -> Result<Vec<Vec<usize>>> {
    mode.steps().iter().map(|u| m.positions(u)).collect()
}

pub(crate) fn mode_masks(m: &Module, mode: &UpdateMode) -> Result<Vec<u64>> {
    Ok(resolve_mode(m, mode)?
        .into_iter()
        .map(|step| step.into_iter().fold(0u64, |acc, k| acc | 1 << k))
        .collect())
}

/// `M_δ(x ⊔ i)`.
pub fn compute(m: &Module, x: &Configuration, i: &InputConfiguration, delta: &Update) -> Result<Configuration> {
    let mut state = m.state_of(x, i)?;
    let update = m.positions(delta)?;
    m.kernel().step(&mut state, &update, &mut Vec::new());
    Ok(m.configuration_of(&state))
}

/// Execution under a fixed input: the left fold of [`compute`] over the
/// steps of `mode`. For a network without inputs pass an empty `i`.
pub fn execute_fixed(m: &Module, x: &Configuration, i: &InputConfiguration, mode: &UpdateMode) -> Result<Configuration> {
    let mut state = m.state_of(x, i)?;
    let steps = resolve_mode(m, mode)?;
    m.kernel().run(&mut state, &steps, &mut Vec::new());
    Ok(m.configuration_of(&state))
}

/// Execution with time-varying inputs: `x_{k+1} = M_{Δ_k}(x_k ⊔ i_k)`.
///
/// Returns `x_1 = x0` followed by one configuration per step.
pub fn execute_sequence(
    m: &Module,
    x0: &Configuration,
    inputs: &[InputConfiguration],
    mode: &UpdateMode,
) -> Result<Vec<Configuration>> {
    if inputs.is_empty() || inputs.len() != mode.len() {
        return Err(Error::LengthMismatch(format!(
            "{} input configurations for an update mode of size {} (need equal and at least 1)",
            inputs.len(),
            mode.len()
        )));
    }
    let steps = resolve_mode(m, mode)?;
    let mut x = x0.aligned_to(&m.automata())?;
    let mut trace = vec![m.configuration_of(&x)];
    let mut scratch = Vec::new();
    for (i, step) in inputs.iter().zip(&steps) {
        let mut state = x.clone();
        state.extend(i.aligned_to(m.inputs())?);
        m.kernel().step(&mut state, step, &mut scratch);
        state.truncate(m.size());
        trace.push(m.configuration_of(&state));
        x = state;
    }
    Ok(trace)
}

/// Interaction graph over `S ∪ E`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InteractionGraph {
    automata: Vec<VarName>,
    inputs: Vec<VarName>,
    edges: BTreeSet<(VarName, VarName)>,
}

impl InteractionGraph {
    pub fn automata(&self) -> &[VarName] {
        &self.automata
    }

    pub fn inputs(&self) -> &[VarName] {
        &self.inputs
    }

    pub fn edges(&self) -> &BTreeSet<(VarName, VarName)> {
        &self.edges
    }

    pub fn has_edge(&self, from: &str, to: &str) -> bool {
        self.edges
            .iter()
            .any(|(a, b)| a.as_str() == from && b.as_str() == to)
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph interaction {\n");
        for a in &self.automata {
            out.push_str(&format!("  \"{a}\" [shape=circle];\n"));
        }
        for e in &self.inputs {
            out.push_str(&format!("  \"{e}\" [shape=plaintext];\n"));
        }
        for (a, b) in &self.edges {
            out.push_str(&format!("  \"{a}\" -> \"{b}\";\n"));
        }
        out.push_str("}\n");
        out
    }
}

/// Semantic interaction graph: `s -> s'` iff flipping `s` alone changes
/// `f_{s'}` somewhere. Every input points to the automaton it is declared on.
pub fn interaction_graph(m: &Module) -> Result<InteractionGraph> {
    let mut edges = BTreeSet::new();
    for node in m.nodes() {
        let vars: Vec<VarName> = node.function.vars().into_iter().collect();
        let table = TruthTable::of(&node.function, &vars).map_err(|e| match e {
            Error::TooManyVariables { count, cap } => Error::TooLarge(format!(
                "function of `{}` reads {count} variables, cap is {cap}",
                node.name
            )),
            other => other,
        })?;
        for (k, v) in vars.iter().enumerate() {
            if m.has_automaton(v.as_str()) && table.depends_on(k) {
                edges.insert((v.clone(), node.name.clone()));
            }
        }
        for e in &node.inputs {
            edges.insert((e.clone(), node.name.clone()));
        }
    }
    Ok(InteractionGraph {
        automata: m.automata(),
        inputs: m.inputs().to_vec(),
        edges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{name, names, parse_expr};

    pub(crate) fn example_one() -> Module {
        Module::new(vec![
            NodeDef::new(name("a"), names(["a1", "a2", "a3"]), parse_expr("b | a1 | a2 | a3").unwrap()),
            NodeDef::new(name("b"), names(["b1", "b2"]), parse_expr("!b | c | !b1 & b2").unwrap()),
            NodeDef::new(name("c"), names(["c1"]), parse_expr("!c1").unwrap()),
        ])
        .unwrap()
    }

    fn upd(items: &[&str]) -> Update {
        Update::new(names(items.iter().copied()))
    }

    #[test]
    fn example_one_computation() {
        let m = example_one();
        let x = Configuration::from_word(&m.automata(), "101").unwrap();
        let i = Configuration::from_word(m.inputs(), "000010").unwrap();
        let out = compute(&m, &x, &i, &upd(&["a", "b"])).unwrap();
        assert_eq!(out.word(), "011");
        assert_eq!(compute(&m, &x, &i, &Update::empty()).unwrap(), x);
        let once = execute_fixed(&m, &x, &i, &UpdateMode::new(vec![upd(&["a", "b"])])).unwrap();
        assert_eq!(once.word(), "011");
        assert_eq!(execute_fixed(&m, &x, &i, &UpdateMode::default()).unwrap(), x);
        let trace = execute_sequence(&m, &x, std::slice::from_ref(&i), &UpdateMode::new(vec![upd(&["a", "b"])])).unwrap();
        let words: Vec<String> = trace.iter().map(Configuration::word).collect();
        assert_eq!(words, ["101", "011"]);
    }

    #[test]
    fn two_node_ban_parallel_step() {
        let m = Module::ban(vec![
            (name("a"), parse_expr("!b").unwrap()),
            (name("b"), parse_expr("a").unwrap()),
        ])
        .unwrap();
        let x = Configuration::from_word(&m.automata(), "10").unwrap();
        let out = compute(&m, &x, &Configuration::empty(), &upd(&["a", "b"])).unwrap();
        assert_eq!(out.word(), "11");
    }

    #[test]
    fn double_negation_and_varying_inputs() {
        let neg = Module::ban(vec![(name("a"), parse_expr("!a").unwrap())]).unwrap();
        let x = Configuration::from_word(&neg.automata(), "0").unwrap();
        let mode = UpdateMode::new(vec![upd(&["a"]), upd(&["a"])]);
        assert_eq!(execute_fixed(&neg, &x, &Configuration::empty(), &mode).unwrap().word(), "0");

        let m = Module::new(vec![NodeDef::new(name("c"), names(["c1"]), parse_expr("!c1").unwrap())]).unwrap();
        let x0 = Configuration::from_word(&m.automata(), "0").unwrap();
        let inputs = [
            Configuration::from_word(m.inputs(), "0").unwrap(),
            Configuration::from_word(m.inputs(), "1").unwrap(),
        ];
        let trace = execute_sequence(&m, &x0, &inputs, &UpdateMode::new(vec![upd(&["c"]), upd(&["c"])])).unwrap();
        let words: Vec<String> = trace.iter().map(Configuration::word).collect();
        assert_eq!(words, ["0", "1", "0"]);
    }

    #[test]
    fn sequence_length_mismatch() {
        let m = example_one();
        let x = Configuration::zeros(&m.automata());
        let i = Configuration::zeros(m.inputs());
        let err = execute_sequence(&m, &x, &[i.clone(), i], &UpdateMode::new(vec![upd(&["a"])])).unwrap_err();
        assert!(matches!(err, Error::LengthMismatch(_)));
        assert!(matches!(
            execute_sequence(&m, &x, &[], &UpdateMode::default()),
            Err(Error::LengthMismatch(_))
        ));
    }

    #[test]
    fn support_mismatch() {
        let m = example_one();
        let bad = Configuration::from_word(&names(["a", "b"]), "10").unwrap();
        let i = Configuration::zeros(m.inputs());
        assert!(matches!(compute(&m, &bad, &i, &Update::empty()), Err(Error::SupportMismatch(_))));
        let x = Configuration::zeros(&m.automata());
        assert!(matches!(compute(&m, &x, &i, &upd(&["z"])), Err(Error::SupportMismatch(_))));
        assert!(matches!(
            compute(&m, &x, &Configuration::empty(), &Update::empty()),
            Err(Error::SupportMismatch(_))
        ));
    }

    #[test]
    fn union_of_modes() {
        let a = UpdateMode::new(vec![upd(&["a"]), upd(&["b"])]);
        let b = UpdateMode::new(vec![upd(&["c"])]);
        assert_eq!(a.union(&b), UpdateMode::new(vec![upd(&["a", "c"]), upd(&["b"])]));
        assert_eq!(a.union(&UpdateMode::default()), a);
        let c = UpdateMode::new(vec![upd(&["a"]), upd(&["a"])]);
        let d = UpdateMode::new(vec![upd(&["a", "b"]), Update::empty()]);
        assert_eq!(c.union(&d), UpdateMode::new(vec![upd(&["a", "b"]), upd(&["a"])]));
        assert_eq!(a.to_string(), "{a};{b}");
    }

    #[test]
    fn module_validation() {
        // input on two nodes
        let err = Module::new(vec![
            NodeDef::new(name("a"), names(["e"]), parse_expr("e").unwrap()),
            NodeDef::new(name("b"), names(["e"]), parse_expr("e").unwrap()),
        ])
        .unwrap_err();
        assert!(matches!(err, Error::InvalidModule(_)));
        // reading another node's input
        assert!(Module::new(vec![
            NodeDef::new(name("a"), names(["e"]), parse_expr("e").unwrap()),
            NodeDef::closed(name("b"), parse_expr("e").unwrap()),
        ])
        .is_err());
        // S ∩ E ≠ ∅
        assert!(Module::new(vec![NodeDef::new(name("a"), names(["a"]), parse_expr("a").unwrap())]).is_err());
        assert!(Module::ban(vec![(name("a"), parse_expr("zz").unwrap())]).is_err());
        assert!(Module::empty().is_ban());
    }

    #[test]
    fn example_one_interaction_graph() {
        // f_c = !c1 does not read c, so there is no loop on c
        let g = interaction_graph(&example_one()).unwrap();
        let expected: BTreeSet<(VarName, VarName)> = [
            ("b", "a"),
            ("b", "b"),
            ("c", "b"),
            ("a1", "a"),
            ("a2", "a"),
            ("a3", "a"),
            ("b1", "b"),
            ("b2", "b"),
            ("c1", "c"),
        ]
        .iter()
        .map(|(x, y)| (name(x), name(y)))
        .collect();
        assert_eq!(g.edges(), &expected);
    }

    #[test]
    fn interaction_graph_is_semantic() {
        let m = Module::ban(vec![
            (name("a"), parse_expr("b & !b").unwrap()),
            (name("b"), parse_expr("1").unwrap()),
        ])
        .unwrap();
        assert!(interaction_graph(&m).unwrap().edges().is_empty());
    }

    #[test]
    fn configuration_words_and_indices() {
        let s = names(["a", "b", "c"]);
        let x = Configuration::from_word(&s, "101").unwrap();
        assert_eq!(x.get("a"), Some(true));
        assert_eq!(x.get("b"), Some(false));
        assert_eq!(x.index(), 5);
        assert_eq!(Configuration::from_index(&s, 5), x);
        assert_eq!(x.assignments(), "a=1,b=0,c=1");
        assert!(Configuration::from_word(&s, "10").is_err());
        assert!(Configuration::from_word(&s, "1x1").is_err());
    }
}
