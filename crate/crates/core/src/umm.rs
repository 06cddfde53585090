//! Memprocessors, memprocessor networks, and the universal memcomputing machine.
//!
//! A memprocessor is `(state, internal, connections, rule)`: the rule maps the current state,
//! the internal variables and the values on its connections to the next state and internal
//! variables. A network steps every cell at once from the same connection values and then
//! lets its coupling rule update those values. Time is discrete.
//!
//! A [`UmmMachine`] is addressed through a pointer: transition `alpha` reads the cells listed
//! in the pointer, writes any number of cells in a single step, and names the next transition
//! and pointer. [`encode_utm`] builds the one-transition machine that simulates a Turing
//! machine: a reserved cell holds the control state and the pointer is `[state cell, head]`.

use crate::tm::{TmConfig, TmSpec};
use crate::{Error, Result};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConnectionId(pub u32);

impl fmt::Display for ConnectionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "z{}", self.0)
    }
}

pub type CustomRule = Arc<dyn Fn(&[f64], &[f64], &[f64]) -> (Vec<f64>, Vec<f64>) + Send + Sync>;

/// Evolution rule of a single memprocessor.
#[derive(Clone)]
pub enum CellRule {
    /// No dynamics: state and internal variables are kept.
    Isolated,
    /// `state[0] += sum of connection values`.
    Additive,
    /// `state[0] += data` whenever `gate` is nonzero; one cell of a broadcast-add row.
    GatedAccumulate { gate: ConnectionId, data: ConnectionId },
    /// Arbitrary rule: `(state, internal, connection values) -> (state', internal')`.
    Custom(CustomRule),
}

impl fmt::Debug for CellRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CellRule::Isolated => write!(f, "Isolated"),
            CellRule::Additive => write!(f, "Additive"),
            CellRule::GatedAccumulate { gate, data } => write!(f, "GatedAccumulate({gate}, {data})"),
            CellRule::Custom(_) => write!(f, "Custom"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Memprocessor {
    pub state: Vec<f64>,
    pub internal: Vec<f64>,
    pub connections: Vec<ConnectionId>,
    pub rule: CellRule,
}

impl Memprocessor {
    pub fn new(state: Vec<f64>, connections: Vec<ConnectionId>, rule: CellRule) -> Self {
        Self { state, internal: Vec::new(), connections, rule }
    }

    pub fn isolated(state: Vec<f64>) -> Self {
        Self::new(state, Vec::new(), CellRule::Isolated)
    }

    pub fn is_isolated(&self) -> bool {
        matches!(self.rule, CellRule::Isolated)
    }
}

pub type Signals = BTreeMap<ConnectionId, f64>;

/// Next `(state, internal)` of `cell` given the values on the shared connections.
pub fn memprocessor_step(cell: &Memprocessor, shared: &Signals) -> Result<(Vec<f64>, Vec<f64>)> {
    let values = cell
        .connections
        .iter()
        .map(|id| shared.get(id).copied().ok_or_else(|| Error::UnboundConnection(id.to_string())))
        .collect::<Result<Vec<f64>>>()?;
    let lookup = |id: &ConnectionId| shared.get(id).copied().ok_or_else(|| Error::UnboundConnection(id.to_string()));
    match &cell.rule {
        CellRule::Isolated => Ok((cell.state.clone(), cell.internal.clone())),
        CellRule::Additive => {
            let mut state = cell.state.clone();
            if let Some(x) = state.first_mut() {
                *x += values.iter().sum::<f64>();
            }
            Ok((state, cell.internal.clone()))
        }
        CellRule::GatedAccumulate { gate, data } => {
            let mut state = cell.state.clone();
            if lookup(gate)? != 0.0 {
                if let Some(x) = state.first_mut() {
                    *x += lookup(data)?;
                }
            }
            Ok((state, cell.internal.clone()))
        }
        CellRule::Custom(f) => Ok(f(&cell.state, &cell.internal, &values)),
    }
}

pub type CustomCoupling = Arc<dyn Fn(&[Memprocessor], &Signals) -> Signals + Send + Sync>;

/// How the connection values evolve after the cells have stepped.
#[derive(Clone)]
pub enum Coupling {
    /// Values persist (including any stimulus just applied).
    Hold,
    Custom(CustomCoupling),
}

impl fmt::Debug for Coupling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coupling::Hold => write!(f, "Hold"),
            Coupling::Custom(_) => write!(f, "Custom"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct MemprocessorNetwork {
    pub cells: Vec<Memprocessor>,
    pub shared: Signals,
    pub coupling: Coupling,
}

impl MemprocessorNetwork {
    pub fn new(cells: Vec<Memprocessor>, shared: Signals) -> Self {
        Self { cells, shared, coupling: Coupling::Hold }
    }

    /// Two cells are connected iff they share a connection variable.
    pub fn connected(&self, i: usize, j: usize) -> bool {
        let a = &self.cells[i].connections;
        self.cells[j].connections.iter().any(|id| a.contains(id))
    }

    pub fn states(&self) -> Vec<Vec<f64>> {
        self.cells.iter().map(|c| c.state.clone()).collect()
    }
}

/// One step of the whole network under `stimulus`.
///
/// The stimulus overwrites the addressed connections, every cell steps from those values
/// simultaneously, and then the coupling rule produces the next connection values.
pub fn network_step(net: &MemprocessorNetwork, stimulus: &Signals) -> Result<MemprocessorNetwork> {
    let mut driven = net.shared.clone();
    for (id, &v) in stimulus {
        match driven.get_mut(id) {
            Some(slot) => *slot = v,
            None => return Err(Error::UnknownConnection(id.to_string())),
        }
    }
    let mut cells = net.cells.clone();
    for (cell, old) in cells.iter_mut().zip(&net.cells) {
        let (state, internal) = memprocessor_step(old, &driven)?;
        cell.state = state;
        cell.internal = internal;
    }
    let shared = match &net.coupling {
        Coupling::Hold => driven,
        Coupling::Custom(xi) => xi(&cells, &driven),
    };
    Ok(MemprocessorNetwork { cells, shared, coupling: net.coupling.clone() })
}

pub type CellIndex = i64;

/// Reserved index of the control-state cell in a Turing embedding.
pub const STATE_CELL: CellIndex = i64::MIN;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StateDomain {
    Digital,
    Analog,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Next {
    Transition(usize),
    /// Terminal index: the machine halts.
    Halt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionOutput {
    pub writes: Vec<(CellIndex, i64)>,
    pub next: Next,
    pub pointer: Vec<CellIndex>,
}

pub type TransitionFn = Arc<dyn Fn(&[i64], &[CellIndex]) -> Result<TransitionOutput> + Send + Sync>;

/// `delta_alpha`: reads `reads` cells through the pointer and writes exactly `writes` cells.
#[derive(Clone)]
pub struct Transition {
    pub name: String,
    pub reads: usize,
    pub writes: usize,
    pub apply: TransitionFn,
}

impl fmt::Debug for Transition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Transition({:?}, reads {}, writes {})", self.name, self.reads, self.writes)
    }
}

#[derive(Clone, Debug)]
pub struct UmmMachine {
    pub domain: StateDomain,
    /// Sparse memory; absent cells hold `default_value`.
    pub memory: BTreeMap<CellIndex, i64>,
    pub default_value: i64,
    pub transitions: Vec<Transition>,
    pub pointer: Vec<CellIndex>,
    pub index: Next,
    /// Values of `halt_cell` that stop the machine.
    pub finals: BTreeSet<i64>,
    pub halt_cell: Option<CellIndex>,
}

impl UmmMachine {
    pub fn read(&self, i: CellIndex) -> i64 {
        self.memory.get(&i).copied().unwrap_or(self.default_value)
    }

    pub fn is_halted(&self) -> bool {
        match self.halt_cell {
            Some(cell) => self.finals.contains(&self.read(cell)),
            None => self.index == Next::Halt,
        }
    }

    /// Applies the current transition in place.
    pub fn step(&mut self) -> Result<()> {
        let alpha = match self.index {
            Next::Transition(a) => a,
            Next::Halt => return Err(Error::InvalidMachine("machine is at its terminal index".into())),
        };
        let delta = self.transitions.get(alpha).ok_or(Error::UnknownTransition(alpha))?.clone();
        if self.pointer.len() != delta.reads {
            return Err(Error::InvalidMachine(format!(
                "transition {:?} reads {} cells but the pointer has {}",
                delta.name,
                delta.reads,
                self.pointer.len()
            )));
        }
        let read: Vec<i64> = self.pointer.iter().map(|&i| self.read(i)).collect();
        let out = (delta.apply)(&read, &self.pointer)?;
        let targets: BTreeSet<CellIndex> = out.writes.iter().map(|(i, _)| *i).collect();
        if out.writes.len() != delta.writes || targets.len() != delta.writes {
            return Err(Error::InvalidMachine(format!(
                "transition {:?} must write {} distinct cells, wrote {:?}",
                delta.name, delta.writes, out.writes
            )));
        }
        if let Next::Transition(b) = out.next {
            if b >= self.transitions.len() {
                return Err(Error::UnknownTransition(b));
            }
        }
        for (i, v) in out.writes {
            if v == self.default_value {
                self.memory.remove(&i);
            } else {
                self.memory.insert(i, v);
            }
        }
        self.pointer = out.pointer;
        self.index = out.next;
        Ok(())
    }
}

/// One transition as a value-to-value map: returns the new machine with the chosen next
/// index and pointer.
pub fn apply_transition(m: &UmmMachine) -> Result<(UmmMachine, Next, Vec<CellIndex>)> {
    let mut next = m.clone();
    next.step()?;
    let (index, pointer) = (next.index, next.pointer.clone());
    Ok((next, index, pointer))
}

#[derive(Clone, Debug)]
pub struct UmmRun {
    pub machine: UmmMachine,
    pub steps: usize,
    pub halted: bool,
}

/// Applies transitions until the machine halts or `max_steps` have been taken.
pub fn run_umm(m: UmmMachine, max_steps: usize) -> Result<UmmRun> {
    run_umm_observed(m, max_steps, |_| {})
}

/// [`run_umm`], calling `observe` on the initial machine and after every step.
pub fn run_umm_observed(
    mut m: UmmMachine,
    max_steps: usize,
    mut observe: impl FnMut(&UmmMachine),
) -> Result<UmmRun> {
    observe(&m);
    let mut steps = 0;
    while steps < max_steps && !m.is_halted() {
        m.step()?;
        steps += 1;
        observe(&m);
    }
    let halted = m.is_halted();
    Ok(UmmRun { machine: m, steps, halted })
}

/// A Turing machine embedded in a one-transition UMM, with the symbol tables needed to read
/// configurations back.
#[derive(Clone, Debug)]
pub struct EmbeddedTm {
    pub machine: UmmMachine,
    pub states: Vec<String>,
    pub symbols: Vec<String>,
    pub blank: String,
}

impl EmbeddedTm {
    /// The Turing configuration currently held by the memory.
    pub fn config_of(&self, m: &UmmMachine) -> TmConfig {
        let tape = m
            .memory
            .iter()
            .filter(|(&i, _)| i != STATE_CELL)
            .map(|(&i, &v)| (i, self.symbols[v as usize].clone()))
            .filter(|(_, s)| *s != self.blank)
            .collect();
        TmConfig {
            state: self.states[m.read(STATE_CELL) as usize].clone(),
            head: m.pointer[1],
            tape,
        }
    }

    pub fn config(&self) -> TmConfig {
        self.config_of(&self.machine)
    }

    /// Runs the embedded machine and returns every configuration, the initial one included.
    pub fn trace(&self, max_steps: usize) -> Result<(Vec<TmConfig>, UmmRun)> {
        let mut trace = Vec::new();
        let run = run_umm_observed(self.machine.clone(), max_steps, |m| trace.push(self.config_of(m)))?;
        Ok((trace, run))
    }
}

/// Embeds `tm` with `input` written from cell 0: the control state lives at [`STATE_CELL`],
/// tape symbols at their integer positions, and the single transition implements the table
/// on the pointer `[STATE_CELL, head]`.
pub fn encode_utm(tm: &TmSpec, input: &[String]) -> Result<EmbeddedTm> {
    tm.check_input(input)?;
    let state_code: HashMap<&str, i64> =
        tm.states.iter().enumerate().map(|(i, s)| (s.as_str(), i as i64)).collect();
    let symbol_code: HashMap<&str, i64> =
        tm.alphabet.iter().enumerate().map(|(i, s)| (s.as_str(), i as i64)).collect();
    let blank = symbol_code[tm.blank.as_str()];

    let table: HashMap<(i64, i64), (i64, i64, i64)> = tm
        .table
        .iter()
        .map(|((q, g), (q2, g2, shift))| {
            (
                (state_code[q.as_str()], symbol_code[g.as_str()]),
                (state_code[q2.as_str()], symbol_code[g2.as_str()], shift.offset()),
            )
        })
        .collect();
    let states = tm.states.clone();
    let symbols = tm.alphabet.clone();
    let (names_q, names_g) = (states.clone(), symbols.clone());
    let delta = Transition {
        name: "tm".into(),
        reads: 2,
        writes: 2,
        apply: Arc::new(move |read: &[i64], pointer: &[CellIndex]| {
            let (q, g) = (read[0], read[1]);
            let Some(&(q2, g2, shift)) = table.get(&(q, g)) else {
                return Err(Error::StuckConfiguration {
                    state: names_q[q as usize].clone(),
                    symbol: names_g[g as usize].clone(),
                });
            };
            let head = pointer[1];
            Ok(TransitionOutput {
                writes: vec![(STATE_CELL, q2), (head, g2)],
                next: Next::Transition(0),
                pointer: vec![STATE_CELL, head + shift],
            })
        }),
    };

    let mut memory = BTreeMap::new();
    memory.insert(STATE_CELL, state_code[tm.initial.as_str()]);
    for (i, s) in input.iter().enumerate() {
        let code = symbol_code[s.as_str()];
        if code != blank {
            memory.insert(i as i64, code);
        }
    }
    let machine = UmmMachine {
        domain: StateDomain::Digital,
        memory,
        default_value: blank,
        transitions: vec![delta],
        pointer: vec![STATE_CELL, 0],
        index: Next::Transition(0),
        finals: tm.finals.iter().map(|q| state_code[q.as_str()]).collect(),
        halt_cell: Some(STATE_CELL),
    };
    Ok(EmbeddedTm { machine, states, symbols, blank: tm.blank.clone() })
}
