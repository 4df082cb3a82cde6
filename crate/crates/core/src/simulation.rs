//! Boolean encodings, simulation schemes and their exhaustive checkers.
//!
//! A [`SimulationScheme`] simulates a target network `F` over `S` by one
//! module `M_a` per automaton `a`. Each `M_a` owns the automata `T_a`, is
//! decoded by `φ_a`, and runs an input-first update mode `Δ_a`. For an ordered
//! pair `a -> b`, the channel exposes `U_{a,b} ⊆ T_a` to `M_b` through the
//! interface `I_{a,b}`, which attaches inputs of `M_b` to automata of `U_{a,b}`.
//!
//! The "no value" outcome of an encoding is represented as `None`.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::expr::{BoolExpr, Compiled, TruthTable, VarName};
use crate::limits;
use crate::network::{mode_masks, Configuration, Module, Update, UpdateMode};
use crate::wiring::{union_all, wire_recursive, Wiring};

/// Partial decoding `(A -> B) -> {0, 1, •}` given by two exclusive predicates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Encoding {
    support: Vec<VarName>,
    one: BoolExpr,
    zero: BoolExpr,
}

impl Encoding {
    pub fn new(support: Vec<VarName>, one: BoolExpr, zero: BoolExpr) -> Result<Self> {
        let names: BTreeSet<&VarName> = support.iter().collect();
        if names.len() != support.len() {
            return Err(Error::InvalidEncoding("repeated name in encoding support".into()));
        }
        for v in one.vars().iter().chain(zero.vars().iter()) {
            if !names.contains(v) {
                return Err(Error::InvalidEncoding(format!("`{v}` is outside the encoding support")));
            }
        }
        limits::check_bits(support.len(), limits::max_bits(), "encoding support")?;
        let t1 = TruthTable::of(&one, &support)?;
        let t0 = TruthTable::of(&zero, &support)?;
        if let Some(p) = (0..t1.len()).find(|&p| t1.get(p) && t0.get(p)) {
            return Err(Error::InvalidEncoding(format!(
                "`{one}` and `{zero}` both hold at {}",
                describe(&t1.assignment(p))
            )));
        }
        if t1.count_ones() == 0 {
            return Err(Error::InvalidEncoding(format!("no configuration encodes 1 (`{one}`)")));
        }
        if t0.count_ones() == 0 {
            return Err(Error::InvalidEncoding(format!("no configuration encodes 0 (`{zero}`)")));
        }
        Ok(Encoding { support, one, zero })
    }

    /// Encoding over exactly the variables mentioned by the two predicates.
    pub fn inferred(one: BoolExpr, zero: BoolExpr) -> Result<Self> {
        let support: Vec<VarName> = one.vars().union(&zero.vars()).cloned().collect();
        Encoding::new(support, one, zero)
    }

    /// `1` iff `v` is set, `0` otherwise.
    pub fn identity(v: VarName) -> Self {
        Encoding {
            one: BoolExpr::var(&v),
            zero: !BoolExpr::var(&v),
            support: vec![v],
        }
    }

    pub fn support(&self) -> &[VarName] {
        &self.support
    }

    pub fn one(&self) -> &BoolExpr {
        &self.one
    }

    pub fn zero(&self) -> &BoolExpr {
        &self.zero
    }

    /// The same predicates with the roles of 0 and 1 exchanged.
    pub fn swapped(&self) -> Encoding {
        Encoding {
            support: self.support.clone(),
            one: self.zero.clone(),
            zero: self.one.clone(),
        }
    }

    /// Decodes a configuration covering at least the support.
    pub fn decode(&self, x: &Configuration) -> Result<Option<bool>> {
        let lookup = |v: &VarName| x.get(v.as_str());
        let one = self.one.eval_with(&lookup)?;
        let zero = self.zero.eval_with(&lookup)?;
        Ok(decoded(one, zero))
    }

    fn compile(&self, slots: &impl Fn(&VarName) -> Option<usize>) -> Result<CompiledEncoding> {
        Ok(CompiledEncoding {
            one: self.one.compile(slots)?,
            zero: self.zero.compile(slots)?,
        })
    }
}

fn decoded(one: bool, zero: bool) -> Option<bool> {
    match (one, zero) {
        (true, _) => Some(true),
        (false, true) => Some(false),
        (false, false) => None,
    }
}

#[derive(Clone, Debug)]
struct CompiledEncoding {
    one: Compiled,
    zero: Compiled,
}

impl CompiledEncoding {
    fn decode_bits(&self, bits: u64) -> Option<bool> {
        decoded(self.one.eval_bits(bits), self.zero.eval_bits(bits))
    }
}

fn describe(map: &BTreeMap<VarName, bool>) -> String {
    map.iter()
        .map(|(k, v)| format!("{k}={}", u8::from(*v)))
        .collect::<Vec<_>>()
        .join(",")
}

fn slot_in(order: &[VarName]) -> impl Fn(&VarName) -> Option<usize> + '_ {
    move |v: &VarName| order.iter().position(|w| w == v)
}

/// Configuration over `order` where bit `k` holds `order[k]`.
fn unpack(order: &[VarName], bits: u64) -> Configuration {
    Configuration::new(order.to_vec(), (0..order.len()).map(|k| bits >> k & 1 == 1).collect())
        .expect("support and values have equal length")
}

/// `Φ(x)(a) = φ_a(x)`, and `•` as soon as one component is `•`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalEncoding {
    source: Vec<VarName>,
    components: Vec<(VarName, Encoding)>,
}

impl GlobalEncoding {
    pub fn new(source: Vec<VarName>, components: Vec<(VarName, Encoding)>) -> Result<Self> {
        let known: BTreeSet<&VarName> = source.iter().collect();
        let mut targets = BTreeSet::new();
        for (a, enc) in &components {
            if !targets.insert(a) {
                return Err(Error::InvalidEncoding(format!("component `{a}` given twice")));
            }
            if let Some(v) = enc.support().iter().find(|v| !known.contains(v)) {
                return Err(Error::InvalidEncoding(format!(
                    "component `{a}` reads `{v}`, which is not a simulating automaton"
                )));
            }
        }
        Ok(GlobalEncoding { source, components })
    }

    pub fn source(&self) -> &[VarName] {
        &self.source
    }

    pub fn components(&self) -> &[(VarName, Encoding)] {
        &self.components
    }

    pub fn targets(&self) -> Vec<VarName> {
        self.components.iter().map(|(a, _)| a.clone()).collect()
    }

    pub fn decode(&self, x: &Configuration) -> Result<Option<Configuration>> {
        let mut values = Vec::with_capacity(self.components.len());
        for (_, enc) in &self.components {
            match enc.decode(x)? {
                Some(b) => values.push(b),
                None => return Ok(None),
            }
        }
        Ok(Some(Configuration::new(self.targets(), values)?))
    }

    /// Every target configuration is the image of some source configuration.
    pub fn is_surjective(&self) -> Result<bool> {
        let n = self.source.len();
        limits::check_bits(n, limits::max_bits(), "global encoding surjectivity")?;
        let compiled = self.compiled(&self.source)?;
        let images: HashSet<u64> = (0..1u64 << n)
            .into_par_iter()
            .filter_map(|x| decode_all(&compiled, x))
            .collect();
        Ok(images.len() as u64 == 1u64 << self.components.len())
    }

    fn compiled(&self, order: &[VarName]) -> Result<Vec<CompiledEncoding>> {
        self.components
            .iter()
            .map(|(_, enc)| enc.compile(&slot_in(order)))
            .collect()
    }
}

/// Packed image: bit `k` is component `k`.
fn decode_all(components: &[CompiledEncoding], x: u64) -> Option<u64> {
    let mut out = 0;
    for (k, c) in components.iter().enumerate() {
        out |= u64::from(c.decode_bits(x)?) << k;
    }
    Some(out)
}

/// `(M_a, φ_a, Δ_a)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalSimulator {
    pub module: Module,
    pub encoding: Encoding,
    pub mode: UpdateMode,
}

/// `(U_{a,b}, φ_{a,b}, I_{a,b})` for the ordered pair `from -> to`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Channel {
    pub from: VarName,
    pub to: VarName,
    pub encoding: Encoding,
    /// Input of `M_to` -> automaton of `U`.
    pub interface: BTreeMap<VarName, VarName>,
}

impl Channel {
    /// `U_{a,b}`, the support of the channel encoding.
    pub fn exposed(&self) -> &[VarName] {
        self.encoding.support()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimulationScheme {
    target: Module,
    parts: Vec<(VarName, LocalSimulator)>,
    channels: Vec<Channel>,
}

/// Which automata of a simulator may carry inputs after step 1.
fn check_input_first(a: &VarName, sim: &LocalSimulator) -> Result<()> {
    for (k, step) in sim.mode.steps().iter().enumerate().skip(1) {
        if let Some(s) = step.iter().find(|s| {
            sim.module
                .declared_inputs(s.as_str())
                .is_some_and(|inputs| !inputs.is_empty())
        }) {
            return Err(Error::NotInputFirst {
                automaton: a.to_string(),
                step: k + 1,
                node: s.to_string(),
            });
        }
    }
    Ok(())
}

impl SimulationScheme {
    /// Validates the scheme: one simulator per target automaton, disjoint
    /// automaton and input sets, input-first modes, coherent channel
    /// encodings, surjective interfaces and a total input cover.
    pub fn new(target: Module, parts: Vec<(VarName, LocalSimulator)>, channels: Vec<Channel>) -> Result<Self> {
        if !target.is_ban() {
            return Err(Error::InvalidScheme("the simulated network must not have inputs".into()));
        }
        let by_name: BTreeMap<&VarName, &LocalSimulator> = parts.iter().map(|(a, s)| (a, s)).collect();
        if by_name.len() != parts.len() {
            return Err(Error::InvalidScheme("an automaton has two simulators".into()));
        }
        for a in target.automata() {
            if !by_name.contains_key(&a) {
                return Err(Error::InvalidScheme(format!("no simulator for `{a}`")));
            }
        }
        if let Some((a, _)) = parts.iter().find(|(a, _)| !target.has_automaton(a.as_str())) {
            return Err(Error::InvalidScheme(format!("`{a}` is not an automaton of the target")));
        }
        let mut seen = BTreeSet::new();
        for (a, sim) in &parts {
            for v in sim.module.all_names() {
                if !seen.insert(v.clone()) {
                    return Err(Error::InvalidScheme(format!(
                        "`{v}` (in the simulator of `{a}`) is used by two simulators"
                    )));
                }
            }
            if let Some(v) = sim.encoding.support().iter().find(|v| !sim.module.has_automaton(v.as_str())) {
                return Err(Error::InvalidScheme(format!("φ_{a} reads `{v}`, which is not in T_{a}")));
            }
            for v in sim.mode.members() {
                if !sim.module.has_automaton(v.as_str()) {
                    return Err(Error::InvalidScheme(format!("Δ_{a} updates `{v}`, which is not in T_{a}")));
                }
            }
            check_input_first(a, sim)?;
        }

        let mut pairs = BTreeSet::new();
        let mut cover: BTreeMap<&VarName, (&VarName, &VarName)> = BTreeMap::new();
        for ch in &channels {
            let (Some(src), Some(dst)) = (by_name.get(&ch.from), by_name.get(&ch.to)) else {
                return Err(Error::InvalidScheme(format!(
                    "channel {}->{} joins unknown automata",
                    ch.from, ch.to
                )));
            };
            if ch.from == ch.to {
                return Err(Error::InvalidScheme(format!("channel {0}->{0} is a self-channel", ch.from)));
            }
            if !pairs.insert((&ch.from, &ch.to)) {
                return Err(Error::InvalidScheme(format!("channel {}->{} given twice", ch.from, ch.to)));
            }
            if let Some(v) = ch.exposed().iter().find(|v| !src.module.has_automaton(v.as_str())) {
                return Err(Error::InvalidScheme(format!(
                    "U_{{{},{}}} contains `{v}`, which is not in T_{}",
                    ch.from, ch.to, ch.from
                )));
            }
            for (e, u) in &ch.interface {
                if !dst.module.has_input(e.as_str()) {
                    return Err(Error::InvalidScheme(format!(
                        "interface {}->{} maps `{e}`, which is not an input of the simulator of `{}`",
                        ch.from, ch.to, ch.to
                    )));
                }
                if !ch.exposed().contains(u) {
                    return Err(Error::InvalidScheme(format!(
                        "interface {}->{} maps `{e}` to `{u}`, which is not in U",
                        ch.from, ch.to
                    )));
                }
                if let Some((f, _)) = cover.insert(e, (&ch.from, &ch.to)) {
                    return Err(Error::InvalidScheme(format!(
                        "input `{e}` is attached by both {f}->{} and {}->{}",
                        ch.to, ch.from, ch.to
                    )));
                }
            }
            let image: BTreeSet<&VarName> = ch.interface.values().collect();
            if let Some(u) = ch.exposed().iter().find(|u| !image.contains(u)) {
                return Err(Error::InvalidScheme(format!(
                    "interface {}->{} is not surjective: nothing reads `{u}`",
                    ch.from, ch.to
                )));
            }
            if !ch.exposed().is_empty() {
                check_coherence(ch, &src.encoding)?;
            }
        }
        for (b, sim) in &parts {
            if let Some(e) = sim.module.inputs().iter().find(|e| !cover.contains_key(e)) {
                return Err(Error::DanglingInput(format!(
                    "input `{e}` of the simulator of `{b}` is attached by no interface"
                )));
            }
        }

        let order = target.automata();
        let rank = |a: &VarName| order.iter().position(|s| s == a);
        let mut parts = parts;
        parts.sort_by_key(|(a, _)| rank(a));
        let mut channels = channels;
        channels.sort_by_key(|c| (rank(&c.from), rank(&c.to)));
        Ok(SimulationScheme { target, parts, channels })
    }

    pub fn target(&self) -> &Module {
        &self.target
    }

    /// Simulators in the declaration order of the target.
    pub fn parts(&self) -> &[(VarName, LocalSimulator)] {
        &self.parts
    }

    pub fn part(&self, a: &str) -> Option<&LocalSimulator> {
        self.parts.iter().find(|(n, _)| n.as_str() == a).map(|(_, s)| s)
    }

    pub fn channels(&self) -> &[Channel] {
        &self.channels
    }

    pub fn channel(&self, from: &str, to: &str) -> Option<&Channel> {
        self.channels
            .iter()
            .find(|c| c.from.as_str() == from && c.to.as_str() == to)
    }

    /// `ω = ⋃ I_{a,b}`.
    pub fn wiring(&self) -> Wiring {
        self.channels
            .iter()
            .flat_map(|c| c.interface.iter().map(|(e, u)| (e.clone(), u.clone())))
            .collect()
    }
}

/// `φ_{a,b}(x↾U) = φ_a(x)` wherever `φ_a(x) ≠ •`.
fn check_coherence(ch: &Channel, source: &Encoding) -> Result<()> {
    let vars: Vec<VarName> = source
        .support()
        .iter()
        .chain(ch.exposed())
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    limits::check_bits(vars.len(), limits::max_bits(), "coherence check")?;
    let part = source.compile(&slot_in(&vars))?;
    let chan = ch.encoding.compile(&slot_in(&vars))?;
    for x in 0..1u64 << vars.len() {
        if let Some(v) = part.decode_bits(x) {
            if chan.decode_bits(x) != Some(v) {
                return Err(Error::InvalidScheme(format!(
                    "channel {}->{} is incoherent at {}",
                    ch.from,
                    ch.to,
                    unpack(&vars, x).assignments()
                )));
            }
        }
    }
    Ok(())
}

/// Counterexample to local simulation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalWitness {
    pub x: Configuration,
    pub x_prime: Configuration,
    pub inputs: Configuration,
    pub expected: bool,
    pub got: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalReport {
    pub automaton: VarName,
    pub cases: u64,
    pub failure: Option<LocalWitness>,
}

impl LocalReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Exhaustive check that `M_a` under `Δ_a` computes `f_a`.
///
/// Sweeps every `x` over `S`, every `x′` over `T_a` with `φ_a(x′) = x_a` and,
/// for every neighbour `b` with a non-empty channel into `a`, every
/// assignment of `U_{b,a}` that `φ_{b,a}` decodes to `x_b`. Inputs of `M_a`
/// are pulled back through the interfaces.
pub fn check_local_simulation(scheme: &SimulationScheme, a: &str) -> Result<LocalReport> {
    let sim = scheme
        .part(a)
        .ok_or_else(|| Error::InvalidScheme(format!("`{a}` is not an automaton of the target")))?;
    let automaton = VarName::new(a)?;
    check_input_first(&automaton, sim)?;
    let target = scheme.target();
    let s_names = target.automata();
    let t_names = sim.module.automata();
    let incoming: Vec<&Channel> = scheme
        .channels()
        .iter()
        .filter(|c| c.to.as_str() == a && !c.exposed().is_empty())
        .collect();
    let u_bits: usize = incoming.iter().map(|c| c.exposed().len()).sum();
    limits::check_bits(
        s_names.len() + t_names.len() + u_bits,
        limits::max_bits(),
        "local simulation sweep",
    )?;

    let f_a = target
        .function(a)
        .expect("target automaton")
        .compile(&slot_in(&s_names))?;
    let a_pos = target.automaton_position(a).expect("target automaton");
    let phi_a = sim.encoding.compile(&slot_in(&t_names))?;
    let kernel = sim.module.kernel();
    let masks = mode_masks(&sim.module, &sim.mode)?;
    let inputs = sim.module.inputs();
    let n_t = t_names.len();

    // For each incoming channel and each value of x_b, the assignments of U
    // decoding to it.
    let mut decoding: Vec<[Vec<u64>; 2]> = Vec::new();
    let mut senders = Vec::new();
    for ch in &incoming {
        let enc = ch.encoding.compile(&slot_in(ch.exposed()))?;
        let mut by_value = [Vec::new(), Vec::new()];
        for u in 0..1u64 << ch.exposed().len() {
            if let Some(v) = enc.decode_bits(u) {
                by_value[usize::from(v)].push(u);
            }
        }
        decoding.push(by_value);
        senders.push(target.automaton_position(ch.from.as_str()).expect("validated"));
    }
    // Input slot k of M_a reads bit `pull[k].1` of the assignment of channel
    // `pull[k].0`.
    let pull: Vec<(usize, usize)> = inputs
        .iter()
        .map(|e| {
            incoming
                .iter()
                .enumerate()
                .find_map(|(c, ch)| {
                    ch.interface
                        .get(e)
                        .map(|u| (c, ch.exposed().iter().position(|w| w == u).expect("validated")))
                })
                .ok_or_else(|| {
                    Error::DanglingInput(format!("input `{e}` of the simulator of `{a}` has no non-empty channel"))
                })
        })
        .collect::<Result<_>>()?;

    let t_candidates: [Vec<u64>; 2] = {
        let mut by_value = [Vec::new(), Vec::new()];
        for xp in 0..1u64 << n_t {
            if let Some(v) = phi_a.decode_bits(xp) {
                by_value[usize::from(v)].push(xp);
            }
        }
        by_value
    };

    let mut cases = 0u64;
    for x in 0..1u64 << s_names.len() {
        let expected = f_a.eval_bits(x);
        let x_a = x >> a_pos & 1 == 1;
        let choices: Vec<&Vec<u64>> = decoding
            .iter()
            .zip(&senders)
            .map(|(d, &b)| &d[usize::from(x >> b & 1 == 1)])
            .collect();
        if choices.iter().any(|c| c.is_empty()) {
            continue;
        }
        let mut odometer = vec![0usize; choices.len()];
        loop {
            let mut input_bits = 0u64;
            for (k, &(c, bit)) in pull.iter().enumerate() {
                let u = choices[c][odometer[c]];
                input_bits |= (u >> bit & 1) << k;
            }
            for &xp in &t_candidates[usize::from(x_a)] {
                cases += 1;
                let mut state = xp | input_bits << n_t;
                for &m in &masks {
                    state = kernel.step_bits(state, m);
                }
                let got = phi_a.decode_bits(state);
                if got != Some(expected) {
                    return Ok(LocalReport {
                        automaton,
                        cases,
                        failure: Some(LocalWitness {
                            x: unpack(&s_names, x),
                            x_prime: unpack(&t_names, xp),
                            inputs: unpack(inputs, input_bits),
                            expected,
                            got,
                        }),
                    });
                }
            }
            if !advance(&mut odometer, &choices) {
                break;
            }
        }
    }
    Ok(LocalReport {
        automaton,
        cases,
        failure: None,
    })
}

fn advance(odometer: &mut [usize], choices: &[&Vec<u64>]) -> bool {
    for (digit, options) in odometer.iter_mut().zip(choices) {
        *digit += 1;
        if *digit < options.len() {
            return true;
        }
        *digit = 0;
    }
    false
}

/// `↻_ω(⋃_a M_a)` with `ω = ⋃ I_{a,b}`; the result must be closed.
pub fn assemble(scheme: &SimulationScheme) -> Result<Module> {
    let whole = union_all(scheme.parts().iter().map(|(_, s)| &s.module))?;
    let closed = wire_recursive(&whole, &scheme.wiring())?;
    if !closed.is_ban() {
        let left: Vec<&str> = closed.inputs().iter().map(VarName::as_str).collect();
        return Err(Error::DanglingInput(format!("inputs left after assembly: {}", left.join(", "))));
    }
    Ok(closed)
}

/// `Φ` over the automata of the assembled network.
pub fn derive_global_encoding(scheme: &SimulationScheme) -> GlobalEncoding {
    let source: Vec<VarName> = scheme.parts().iter().flat_map(|(_, s)| s.module.automata()).collect();
    GlobalEncoding {
        source,
        components: scheme
            .parts()
            .iter()
            .map(|(a, s)| (a.clone(), s.encoding.clone()))
            .collect(),
    }
}

/// `Δ = ⋃_{a ∈ δ′} Δ_a`.
pub fn constructive_mode(scheme: &SimulationScheme, delta: &Update) -> UpdateMode {
    scheme
        .parts()
        .iter()
        .filter(|(a, _)| delta.contains(a.as_str()))
        .fold(UpdateMode::default(), |acc, (_, s)| acc.union(&s.mode))
}

/// Counterexample to global simulation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalWitness {
    pub x_prime: Configuration,
    pub update: Update,
    pub mode: UpdateMode,
    pub expected: Configuration,
    pub got: Option<Configuration>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalReport {
    /// Encoded configurations times updates checked.
    pub cases: u64,
    pub failure: Option<GlobalWitness>,
}

impl GlobalReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

fn all_updates(names: &[VarName]) -> Vec<(u64, Update)> {
    (0..1u64 << names.len())
        .map(|mask| {
            let members = names
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, v)| v.clone());
            (mask, Update::new(members))
        })
        .collect()
}

/// Checks `Φ(F′_Δ(x′)) = F_{δ′}(Φ(x′))` for every `x′` with `Φ(x′) ≠ •` and
/// every `δ′ ⊆ S`, with `Δ` built from the local modes.
pub fn check_global_simulation_constructive(scheme: &SimulationScheme) -> Result<GlobalReport> {
    let big = assemble(scheme)?;
    let phi = derive_global_encoding(scheme);
    let order = big.automata();
    limits::check_bits(order.len(), limits::max_bits(), "global simulation sweep")?;
    let target = scheme.target();
    let s_names = target.automata();
    limits::check_bits(s_names.len(), limits::max_bits(), "global simulation sweep")?;
    let components = phi.compiled(&order)?;
    let updates = all_updates(&s_names);
    let modes: Vec<(UpdateMode, Vec<u64>)> = updates
        .iter()
        .map(|(_, d)| {
            let mode = constructive_mode(scheme, d);
            let masks = mode_masks(&big, &mode)?;
            Ok((mode, masks))
        })
        .collect::<Result<_>>()?;
    let big_kernel = big.kernel();
    let small_kernel = target.kernel();

    let failure = (0..1u64 << order.len()).into_par_iter().find_map_first(|x| {
        let y = decode_all(&components, x)?;
        updates.iter().zip(&modes).find_map(|((mask, update), (mode, masks))| {
            let want = small_kernel.step_bits(y, *mask);
            let mut state = x;
            for &m in masks {
                state = big_kernel.step_bits(state, m);
            }
            let got = decode_all(&components, state);
            (got != Some(want)).then(|| GlobalWitness {
                x_prime: unpack(&order, x),
                update: update.clone(),
                mode: mode.clone(),
                expected: unpack(&s_names, want),
                got: got.map(|g| unpack(&s_names, g)),
            })
        })
    });
    let cases = if failure.is_none() {
        let encoded = (0..1u64 << order.len())
            .into_par_iter()
            .filter(|&x| decode_all(&components, x).is_some())
            .count() as u64;
        encoded * updates.len() as u64
    } else {
        0
    };
    Ok(GlobalReport { cases, failure })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Pass,
    /// No mode of the searched length was found for some case; this is not
    /// a proof that none exists.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchWitness {
    pub x: Configuration,
    pub update: Update,
    pub expected: Configuration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchReport {
    pub outcome: SearchOutcome,
    pub maxlen: usize,
    pub cases: u64,
    pub witness: Option<SearchWitness>,
}

/// Bounded search for `F ∼ F′`: for every `x` with `Φ(x) ≠ •` and every
/// update `δ′` of `F′`, looks for a mode of `F` with at most `maxlen` steps,
/// each step any subset of automata, such that `Φ(F_Δ(x)) = F′_{δ′}(Φ(x))`.
pub fn check_global_simulation_search(
    f: &Module,
    f_target: &Module,
    phi: &GlobalEncoding,
    maxlen: usize,
) -> Result<SearchReport> {
    if maxlen == 0 {
        return Err(Error::InvalidScheme("maxlen must be at least 1".into()));
    }
    if !f.is_ban() || !f_target.is_ban() {
        return Err(Error::InvalidScheme("both networks must be closed".into()));
    }
    let order = f.automata();
    let src: BTreeSet<&VarName> = phi.source().iter().collect();
    if src != order.iter().collect() {
        return Err(Error::InvalidEncoding(
            "the encoding must be defined over the automata of the simulating network".into(),
        ));
    }
    let s_names = f_target.automata();
    let targets: BTreeSet<VarName> = phi.targets().into_iter().collect();
    if targets != s_names.iter().cloned().collect() {
        return Err(Error::InvalidEncoding(
            "the encoding must have one component per automaton of the simulated network".into(),
        ));
    }
    limits::check_bits(order.len(), limits::max_bits(), "simulation search")?;
    limits::check_bits(s_names.len(), limits::max_bits(), "simulation search")?;

    // Components re-ordered to the simulated network's declaration order.
    let components: Vec<CompiledEncoding> = s_names
        .iter()
        .map(|a| {
            let (_, enc) = phi.components().iter().find(|(c, _)| c == a).expect("checked");
            enc.compile(&slot_in(&order))
        })
        .collect::<Result<_>>()?;
    let big = f.kernel();
    let small = f_target.kernel();
    let n = order.len();
    let updates = all_updates(&s_names);

    let reachable_images = |x: u64| -> Vec<HashSet<u64>> {
        let mut layer: HashSet<u64> = HashSet::from([x]);
        let mut images = Vec::with_capacity(maxlen);
        let mut seen_images = HashSet::new();
        for _ in 0..maxlen {
            let next: HashSet<u64> = layer
                .iter()
                .flat_map(|&y| (0..1u64 << n).map(move |m| big.step_bits(y, m)))
                .collect();
            seen_images.extend(next.iter().filter_map(|&y| decode_all(&components, y)));
            images.push(seen_images.clone());
            if next == layer {
                images.resize(maxlen, seen_images.clone());
                break;
            }
            layer = next;
        }
        images
    };

    let witness = (0..1u64 << n).into_par_iter().find_map_first(|x| {
        let y = decode_all(&components, x)?;
        let images = reachable_images(x);
        let reached = images.last().expect("maxlen >= 1");
        updates.iter().find_map(|(mask, update)| {
            let want = small.step_bits(y, *mask);
            (!reached.contains(&want)).then(|| SearchWitness {
                x: unpack(&order, x),
                update: update.clone(),
                expected: unpack(&s_names, want),
            })
        })
    });
    let encoded = (0..1u64 << n)
        .filter(|&x| decode_all(&components, x).is_some())
        .count() as u64;
    Ok(SearchReport {
        outcome: if witness.is_some() {
            SearchOutcome::Inconclusive
        } else {
            SearchOutcome::Pass
        },
        maxlen,
        cases: encoded * updates.len() as u64,
        witness,
    })
}
