//! Mealy automata and the action of states on words.
//!
//! A [`StateWord`] `[q_1, ..., q_k]` denotes the product `q_1 ⋯ q_k` where the
//! rightmost state touches the input first, so that
//! `(st)·u = s·(t·u)` and `(st)@u = (s@(t·u))(t@u)`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::element::{self, Element};
use crate::error::{Error, Result, ValidationError};
use crate::word::{FiniteWord, UpWord};
use crate::{Letter, StateId};

/// Ordered list of distinct, non-empty letter names.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Alphabet {
    letters: Vec<String>,
}

impl Alphabet {
    pub fn new(letters: Vec<String>) -> Result<Self, ValidationError> {
        if letters.is_empty() {
            return Err(ValidationError::EmptyAlphabet);
        }
        check_names(&letters, "letter", ValidationError::DuplicateLetter)?;
        Ok(Alphabet { letters })
    }

    /// Alphabet `{0, 1, ..., n-1}` with decimal names.
    pub fn numeric(n: usize) -> Self {
        Alphabet {
            letters: (0..n).map(|i| i.to_string()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.letters
    }

    pub fn name(&self, a: Letter) -> &str {
        &self.letters[a]
    }

    pub fn index(&self, name: &str) -> Option<Letter> {
        self.letters.iter().position(|l| l == name)
    }

    fn single_char_names(&self) -> bool {
        self.letters.iter().all(|l| l.chars().count() == 1)
    }

    /// Parses a word. Letters are written back to back when every letter name is a
    /// single character, and dot-separated otherwise. `""` and `"ε"` are the empty word.
    pub fn parse_word(&self, text: &str) -> Result<FiniteWord> {
        let text = text.trim();
        if text.is_empty() || text == "ε" {
            return Ok(FiniteWord::empty());
        }
        let pieces: Vec<String> = if text.contains('.') || !self.single_char_names() {
            text.split('.').map(str::to_owned).collect()
        } else {
            text.chars().map(String::from).collect()
        };
        pieces
            .iter()
            .map(|p| self.index(p).ok_or_else(|| Error::UnknownLetter(p.clone())))
            .collect::<Result<Vec<_>>>()
            .map(FiniteWord)
    }

    pub fn render_word(&self, w: &FiniteWord) -> String {
        if w.is_empty() {
            return "ε".to_owned();
        }
        self.render_letters(w.letters())
    }

    fn render_letters(&self, w: &[Letter]) -> String {
        let sep = if self.single_char_names() { "" } else { "." };
        w.iter().map(|&a| self.name(a)).collect::<Vec<_>>().join(sep)
    }

    /// Parses `pre(period)`, optionally followed by `^ω` or `^w`.
    pub fn parse_upword(&self, text: &str) -> Result<UpWord> {
        let bad = || Error::MalformedUpWord(text.to_owned());
        let body = text.trim();
        let body = body
            .strip_suffix("^ω")
            .or_else(|| body.strip_suffix("^w"))
            .unwrap_or(body);
        let open = body.find('(').ok_or_else(bad)?;
        let inner = body[open + 1..].strip_suffix(')').ok_or_else(bad)?;
        let pre = self.parse_word(&body[..open])?;
        let per = self.parse_word(inner)?;
        UpWord::new(pre, per).map_err(|_| bad())
    }

    pub fn render_upword(&self, x: &UpWord) -> String {
        format!(
            "{}({})^ω",
            self.render_letters(x.preperiod().letters()),
            self.render_letters(x.period().letters())
        )
    }
}

pub(crate) fn check_names(
    names: &[String],
    kind: &'static str,
    dup: fn(String) -> ValidationError,
) -> Result<(), ValidationError> {
    let mut seen = std::collections::HashSet::new();
    for n in names {
        if n.is_empty() {
            return Err(ValidationError::EmptyName(kind));
        }
        if !seen.insert(n.as_str()) {
            return Err(dup(n.clone()));
        }
    }
    Ok(())
}

/// A non-empty product of states; the rightmost state acts first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StateWord(Vec<StateId>);

impl StateWord {
    pub fn new(states: Vec<StateId>) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::EmptyStateWord);
        }
        Ok(StateWord(states))
    }

    pub fn single(q: StateId) -> Self {
        StateWord(vec![q])
    }

    pub fn states(&self) -> &[StateId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The product `self · other` (apply `other` first).
    pub fn concat(&self, other: &StateWord) -> StateWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        StateWord(v)
    }
}

/// A complete deterministic letter-to-letter transducer `τ: Q × A → A × Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MealyAutomaton {
    alphabet: Alphabet,
    states: Vec<String>,
    /// Row-major: `table[q * |A| + a] = (q·a, q@a)`.
    table: Vec<(Letter, StateId)>,
}

impl MealyAutomaton {
    /// Builds an automaton from a complete table indexed `[state][letter]`.
    pub fn new(
        alphabet: Alphabet,
        states: Vec<String>,
        rows: Vec<Vec<(Letter, StateId)>>,
    ) -> Result<Self, ValidationError> {
        if states.is_empty() {
            return Err(ValidationError::NoStates);
        }
        check_names(&states, "state", ValidationError::DuplicateState)?;
        let n = alphabet.len();
        let mut table = Vec::with_capacity(states.len() * n);
        for (q, name) in states.iter().enumerate() {
            let row = rows.get(q);
            for a in 0..n {
                let here = || (name.clone(), alphabet.name(a).to_owned());
                let &(out, next) = row.and_then(|r| r.get(a)).ok_or_else(|| {
                    let (state, letter) = here();
                    ValidationError::MissingTransition { state, letter }
                })?;
                if out >= n || next >= states.len() {
                    let (state, letter) = here();
                    return Err(ValidationError::OutOfRange { state, letter });
                }
                table.push((out, next));
            }
        }
        Ok(MealyAutomaton { alphabet, states, table })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn arity(&self) -> usize {
        self.alphabet.len()
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.states[q]
    }

    pub fn state_index(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name)
    }

    /// `(q·a, q@a)`.
    #[inline]
    pub fn step(&self, q: StateId, a: Letter) -> (Letter, StateId) {
        self.table[q * self.alphabet.len() + a]
    }

    /// `(q·u, q@u)`.
    pub fn act_word(&self, q: StateId, u: &FiniteWord) -> (FiniteWord, StateId) {
        let mut state = q;
        let out = u
            .letters()
            .iter()
            .map(|&a| {
                let (b, next) = self.step(state, a);
                state = next;
                b
            })
            .collect();
        (FiniteWord(out), state)
    }

    /// `(s·u, s@u)` for a product of states, rightmost first.
    pub fn act_stateword(&self, s: &StateWord, u: &FiniteWord) -> (FiniteWord, StateWord) {
        let mut sections = s.0.clone();
        let mut word = u.clone();
        for slot in sections.iter_mut().rev() {
            let (out, sec) = self.act_word(*slot, &word);
            *slot = sec;
            word = out;
        }
        (word, StateWord(sections))
    }

    /// `s·x` for an ultimately periodic `x`, in canonical form.
    pub fn act_upword(&self, s: &StateWord, x: &UpWord, budget: &UpwordBudget) -> Result<UpWord> {
        let e = element::element_of(self, s, budget.tuple_bound)?;
        e.act_upword(x, budget.max_cycle)
    }

    /// The identity transformation of this automaton's alphabet as an element.
    pub fn identity_element(&self) -> Element {
        Element::identity(self.arity())
    }

    pub fn parse_state_word(&self, text: &str) -> Result<StateWord> {
        let states = text
            .trim()
            .split('.')
            .map(|n| self.state_index(n).ok_or_else(|| Error::UnknownState(n.to_owned())))
            .collect::<Result<Vec<_>>>()?;
        StateWord::new(states)
    }

    pub fn render_state_word(&self, s: &StateWord) -> String {
        s.states()
            .iter()
            .map(|&q| self.state_name(q))
            .collect::<Vec<_>>()
            .join(".")
    }

    /// Moore diagram in Graphviz DOT: one node per state and one edge `q -> q@a`
    /// labelled `a|q·a` per transition, ordered by state then letter.
    pub fn export_dot(&self) -> String {
        let mut out = String::from("digraph mealy {\n    rankdir=LR;\n    node [shape=circle];\n");
        for (q, name) in self.states.iter().enumerate() {
            let _ = writeln!(out, "    q{q} [label={}];", dot_quote(name));
        }
        for q in 0..self.num_states() {
            for a in 0..self.arity() {
                let (b, next) = self.step(q, a);
                let label = format!("{}|{}", self.alphabet.name(a), self.alphabet.name(b));
                let _ = writeln!(out, "    q{q} -> q{next} [label={}];", dot_quote(&label));
            }
        }
        out.push_str("}\n");
        out
    }
}

pub(crate) fn dot_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Resource limits for acting on ultimately periodic words.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpwordBudget {
    /// Bound on the product-transducer states built for a state word.
    pub tuple_bound: usize,
    /// Bound on the number of letters simulated before the output cycle closes.
    pub max_cycle: usize,
}

impl Default for UpwordBudget {
    fn default() -> Self {
        UpwordBudget {
            tuple_bound: element::DEFAULT_TUPLE_BOUND,
            max_cycle: 1_000_000,
        }
    }
}
