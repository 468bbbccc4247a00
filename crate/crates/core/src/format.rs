//! The JSON automaton file format.
//!
//! ```json
//! {
//!   "alphabet": ["0", "1"],
//!   "states": ["t", "s"],
//!   "transitions": {
//!     "t": { "0": ["0", "s"], "1": ["0", "t"] },
//!     "s": { "0": ["1", "s"], "1": ["0", "s"] }
//!   }
//! }
//! ```
//!
//! List order fixes letter and state indices. Each `(state, letter)` pair must
//! appear exactly once.

use std::fmt;
use std::marker::PhantomData;

use serde::de::{MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::automaton::{check_names, Alphabet, MealyAutomaton};
use crate::error::{Result, ValidationError};

/// A JSON object whose entries keep their file order, duplicates included.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entries<V>(pub Vec<(String, V)>);

impl<V: Serialize> Serialize for Entries<V> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

impl<'de, V: Deserialize<'de>> Deserialize<'de> for Entries<V> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct EntriesVisitor<V>(PhantomData<V>);

        impl<'de, V: Deserialize<'de>> Visitor<'de> for EntriesVisitor<V> {
            type Value = Entries<V>;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an object")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> std::result::Result<Self::Value, A::Error> {
                let mut out = Vec::new();
                while let Some(entry) = access.next_entry()? {
                    out.push(entry);
                }
                Ok(Entries(out))
            }
        }

        d.deserialize_map(EntriesVisitor(PhantomData))
    }
}

/// An automaton description as read from a file, before validation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawAutomaton {
    pub alphabet: Vec<String>,
    pub states: Vec<String>,
    pub transitions: Entries<Entries<(String, String)>>,
}

impl RawAutomaton {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Checks names, totality and ranges, reporting the first offending `(state, letter)`.
pub fn validate(raw: &RawAutomaton) -> Result<MealyAutomaton, ValidationError> {
    let alphabet = Alphabet::new(raw.alphabet.clone())?;
    if raw.states.is_empty() {
        return Err(ValidationError::NoStates);
    }
    check_names(&raw.states, "state", ValidationError::DuplicateState)?;
    let state_index = |n: &str| raw.states.iter().position(|s| s == n);
    let n = alphabet.len();
    let mut rows: Vec<Vec<Option<(usize, usize)>>> = vec![vec![None; n]; raw.states.len()];
    for (state, row) in &raw.transitions.0 {
        let q = state_index(state).ok_or_else(|| ValidationError::UnknownSourceState(state.clone()))?;
        for (letter, (output, target)) in &row.0 {
            let here = || (state.clone(), letter.clone());
            let Some(a) = alphabet.index(letter) else {
                let (state, letter) = here();
                return Err(ValidationError::UnknownInputLetter { state, letter });
            };
            let Some(b) = alphabet.index(output) else {
                let (state, letter) = here();
                return Err(ValidationError::UnknownOutputLetter { state, letter, output: output.clone() });
            };
            let Some(t) = state_index(target) else {
                let (state, letter) = here();
                return Err(ValidationError::UnknownTargetState { state, letter, target: target.clone() });
            };
            if rows[q][a].replace((b, t)).is_some() {
                let (state, letter) = here();
                return Err(ValidationError::DuplicateTransition { state, letter });
            }
        }
    }
    let mut table = Vec::with_capacity(rows.len());
    for (q, row) in rows.into_iter().enumerate() {
        let mut full = Vec::with_capacity(n);
        for (a, cell) in row.into_iter().enumerate() {
            full.push(cell.ok_or_else(|| ValidationError::MissingTransition {
                state: raw.states[q].clone(),
                letter: alphabet.name(a).to_owned(),
            })?);
        }
        table.push(full);
    }
    MealyAutomaton::new(alphabet, raw.states.clone(), table)
}

/// Parses and validates a JSON automaton description.
pub fn parse(text: &str) -> Result<MealyAutomaton> {
    Ok(validate(&RawAutomaton::from_json(text)?)?)
}

pub fn to_raw(m: &MealyAutomaton) -> RawAutomaton {
    let alphabet = m.alphabet();
    let transitions = (0..m.num_states())
        .map(|q| {
            let row = (0..m.arity())
                .map(|a| {
                    let (b, t) = m.step(q, a);
                    (
                        alphabet.name(a).to_owned(),
                        (alphabet.name(b).to_owned(), m.state_name(t).to_owned()),
                    )
                })
                .collect();
            (m.state_name(q).to_owned(), Entries(row))
        })
        .collect();
    RawAutomaton {
        alphabet: alphabet.names().to_vec(),
        states: m.state_names().to_vec(),
        transitions: Entries(transitions),
    }
}

/// Pretty-printed JSON with a trailing newline, as shipped under `data/`.
pub fn to_json(m: &MealyAutomaton) -> String {
    let mut s = serde_json::to_string_pretty(&to_raw(m)).expect("automaton serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::error::Error;

    const FIG1: &str = r#"{
        "alphabet": ["0", "1"],
        "states": ["t", "s"],
        "transitions": {
            "t": {"0": ["0", "s"], "1": ["0", "t"]},
            "s": {"0": ["1", "s"], "1": ["0", "s"]}
        }
    }"#;

    fn validation_error(text: &str) -> ValidationError {
        match parse(text) {
            Err(Error::Validation(v)) => v,
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn fig1_file_is_valid() {
        let m = parse(FIG1).unwrap();
        assert_eq!(m, catalog::fig1());
        assert_eq!(parse(&to_json(&m)).unwrap(), m);
    }

    #[test]
    fn missing_transition_is_named() {
        let text = FIG1.replace(r#", "1": ["0", "s"]}"#, "}");
        assert_eq!(
            validation_error(&text),
            ValidationError::MissingTransition { state: "s".into(), letter: "1".into() }
        );
    }

    #[test]
    fn duplicate_names_and_transitions() {
        let text = FIG1.replace(r#"["t", "s"]"#, r#"["s", "s"]"#);
        assert_eq!(validation_error(&text), ValidationError::DuplicateState("s".into()));
        let text = FIG1.replace(r#""1": ["0", "t"]}"#, r#""1": ["0", "t"], "1": ["1", "t"]}"#);
        assert_eq!(
            validation_error(&text),
            ValidationError::DuplicateTransition { state: "t".into(), letter: "1".into() }
        );
        let text = FIG1.replace(r#"["0", "1"]"#, r#"["0", "0"]"#);
        assert_eq!(validation_error(&text), ValidationError::DuplicateLetter("0".into()));
    }

    #[test]
    fn out_of_range_symbols() {
        let text = FIG1.replace(r#""0": ["1", "s"]"#, r#""0": ["2", "s"]"#);
        assert!(matches!(
            validation_error(&text),
            ValidationError::UnknownOutputLetter { ref state, ref letter, .. } if state == "s" && letter == "0"
        ));
        let text = FIG1.replace(r#""0": ["1", "s"]"#, r#""0": ["1", "u"]"#);
        assert!(matches!(validation_error(&text), ValidationError::UnknownTargetState { .. }));
        let text = FIG1.replace(r#""s": {"0""#, r#""u": {"0""#);
        assert_eq!(validation_error(&text), ValidationError::UnknownSourceState("u".into()));
        assert!(matches!(parse("{"), Err(Error::Parse(_))));
    }
}
