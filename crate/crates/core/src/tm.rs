//! Deterministic single-tape Turing machines: specification, JSON format, and a direct
//! simulator used as the reference for the memcomputing embedding.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Shift {
    L,
    N,
    R,
}

impl Shift {
    pub fn offset(self) -> i64 {
        match self {
            Shift::L => -1,
            Shift::N => 0,
            Shift::R => 1,
        }
    }
}

/// On-disk layout: `transitions` is a list of `[q, read, q', write, shift]`.
#[derive(Clone, Debug, Serialize, Deserialize)]
struct TmFile {
    states: Vec<String>,
    alphabet: Vec<String>,
    blank: String,
    input_alphabet: Vec<String>,
    transitions: Vec<(String, String, String, String, Shift)>,
    initial: String,
    finals: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TmSpec {
    pub states: Vec<String>,
    pub alphabet: Vec<String>,
    pub blank: String,
    pub input_alphabet: Vec<String>,
    pub table: BTreeMap<(String, String), (String, String, Shift)>,
    pub initial: String,
    pub finals: BTreeSet<String>,
}

impl TmSpec {
    pub fn new(
        states: &[&str],
        alphabet: &[&str],
        blank: &str,
        input_alphabet: &[&str],
        transitions: &[(&str, &str, &str, &str, Shift)],
        initial: &str,
        finals: &[&str],
    ) -> Result<Self> {
        let owned = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        Self::from_file(TmFile {
            states: owned(states),
            alphabet: owned(alphabet),
            blank: blank.into(),
            input_alphabet: owned(input_alphabet),
            transitions: transitions
                .iter()
                .map(|&(q, g, q2, g2, s)| (q.into(), g.into(), q2.into(), g2.into(), s))
                .collect(),
            initial: initial.into(),
            finals: owned(finals),
        })
    }

    fn from_file(file: TmFile) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidMachine(m));
        let states: BTreeSet<&String> = file.states.iter().collect();
        let alphabet: BTreeSet<&String> = file.alphabet.iter().collect();
        if states.len() != file.states.len() || alphabet.len() != file.alphabet.len() {
            return bad("duplicate state or symbol".into());
        }
        if !alphabet.contains(&file.blank) {
            return bad(format!("blank {:?} is not in the tape alphabet", file.blank));
        }
        if let Some(s) = file.input_alphabet.iter().find(|s| !alphabet.contains(s)) {
            return bad(format!("input symbol {s:?} is not in the tape alphabet"));
        }
        if !states.contains(&file.initial) {
            return bad(format!("initial state {:?} is not a state", file.initial));
        }
        if let Some(q) = file.finals.iter().find(|q| !states.contains(q)) {
            return bad(format!("final state {q:?} is not a state"));
        }
        let mut table = BTreeMap::new();
        for (q, g, q2, g2, shift) in file.transitions {
            for s in [&q, &q2] {
                if !states.contains(s) {
                    return bad(format!("transition uses unknown state {s:?}"));
                }
            }
            for s in [&g, &g2] {
                if !alphabet.contains(s) {
                    return bad(format!("transition uses unknown symbol {s:?}"));
                }
            }
            if table.insert((q.clone(), g.clone()), (q2, g2, shift)).is_some() {
                return bad(format!("duplicate transition for ({q:?}, {g:?})"));
            }
        }
        Ok(Self {
            states: file.states,
            alphabet: file.alphabet,
            blank: file.blank,
            input_alphabet: file.input_alphabet,
            table,
            initial: file.initial,
            finals: file.finals.into_iter().collect(),
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_file(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        let file = TmFile {
            states: self.states.clone(),
            alphabet: self.alphabet.clone(),
            blank: self.blank.clone(),
            input_alphabet: self.input_alphabet.clone(),
            transitions: self
                .table
                .iter()
                .map(|((q, g), (q2, g2, s))| (q.clone(), g.clone(), q2.clone(), g2.clone(), *s))
                .collect(),
            initial: self.initial.clone(),
            finals: self.finals.iter().cloned().collect(),
        };
        serde_json::to_string_pretty(&file).expect("plain data serializes")
    }

    /// True when every non-final state has a move for every symbol.
    pub fn is_total(&self) -> bool {
        self.states.iter().filter(|q| !self.finals.contains(*q)).all(|q| {
            self.alphabet.iter().all(|g| self.table.contains_key(&(q.clone(), g.clone())))
        })
    }

    /// Checks that every input symbol is allowed on the input tape.
    pub fn check_input(&self, input: &[String]) -> Result<()> {
        match input.iter().find(|s| !self.input_alphabet.contains(s)) {
            Some(s) => Err(Error::InvalidMachine(format!("{s:?} is not an input symbol"))),
            None => Ok(()),
        }
    }

    /// Splits a string into single-character symbols.
    pub fn tape_from_str(text: &str) -> Vec<String> {
        text.chars().map(String::from).collect()
    }
}

/// One machine configuration. `tape` holds the non-blank cells only.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TmConfig {
    pub state: String,
    pub head: i64,
    pub tape: BTreeMap<i64, String>,
}

impl TmConfig {
    /// Tape contents from the leftmost to the rightmost non-blank cell.
    pub fn tape_string(&self, blank: &str) -> String {
        let (Some(&lo), Some(&hi)) = (self.tape.keys().next(), self.tape.keys().next_back()) else {
            return String::new();
        };
        (lo..=hi).map(|i| self.tape.get(&i).map_or(blank, String::as_str)).collect()
    }
}

/// Runs `tm` from `input` (written from cell 0 rightwards) and returns every configuration,
/// the initial one included, until a final state or `max_steps` moves.
pub fn simulate_tm_direct(tm: &TmSpec, input: &[String], max_steps: usize) -> Result<Vec<TmConfig>> {
    tm.check_input(input)?;
    let mut config = TmConfig {
        state: tm.initial.clone(),
        head: 0,
        tape: input
            .iter()
            .enumerate()
            .filter(|(_, s)| **s != tm.blank)
            .map(|(i, s)| (i as i64, s.clone()))
            .collect(),
    };
    let mut trace = vec![config.clone()];
    for _ in 0..max_steps {
        if tm.finals.contains(&config.state) {
            break;
        }
        let symbol = config.tape.get(&config.head).cloned().unwrap_or_else(|| tm.blank.clone());
        let Some((next, write, shift)) = tm.table.get(&(config.state.clone(), symbol.clone())) else {
            return Err(Error::StuckConfiguration { state: config.state, symbol });
        };
        if *write == tm.blank {
            config.tape.remove(&config.head);
        } else {
            config.tape.insert(config.head, write.clone());
        }
        config.state = next.clone();
        config.head += shift.offset();
        trace.push(config.clone());
    }
    Ok(trace)
}

/// Small machines used in tests, examples and the CLI.
pub mod library {
    use super::{Shift::*, TmSpec};

    /// Starts in its final state.
    pub fn immediate_halt() -> TmSpec {
        TmSpec::new(&["halt"], &["_", "1"], "_", &["1"], &[], "halt", &["halt"]).unwrap()
    }

    /// Appends one `1` to a unary number.
    pub fn unary_increment() -> TmSpec {
        TmSpec::new(
            &["inc", "done"],
            &["_", "1"],
            "_",
            &["1"],
            &[("inc", "1", "inc", "1", R), ("inc", "_", "done", "1", N)],
            "inc",
            &["done"],
        )
        .unwrap()
    }

    /// Two-state, two-symbol busy beaver: halts after 6 moves with four `1`s.
    pub fn busy_beaver_2() -> TmSpec {
        TmSpec::new(
            &["A", "B", "H"],
            &["0", "1"],
            "0",
            &["0", "1"],
            &[
                ("A", "0", "B", "1", R),
                ("A", "1", "B", "1", L),
                ("B", "0", "A", "1", L),
                ("B", "1", "H", "1", R),
            ],
            "A",
            &["H"],
        )
        .unwrap()
    }

    /// Walks right forever over blanks.
    pub fn right_mover() -> TmSpec {
        TmSpec::new(&["go", "never"], &["_"], "_", &[], &[("go", "_", "go", "_", R)], "go", &["never"])
            .unwrap()
    }

    /// Never halts: sweeps back and forth over a growing block of `x`s.
    pub fn zigzag() -> TmSpec {
        TmSpec::new(
            &["right", "left", "never"],
            &["_", "x"],
            "_",
            &["x"],
            &[
                ("right", "x", "right", "x", R),
                ("right", "_", "left", "x", L),
                ("left", "x", "left", "x", L),
                ("left", "_", "right", "x", R),
            ],
            "right",
            &["never"],
        )
        .unwrap()
    }
}
