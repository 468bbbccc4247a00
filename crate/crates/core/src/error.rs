use thiserror::Error;

/// Problems found while turning a raw automaton description into a [`crate::MealyAutomaton`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("alphabet must contain at least one letter")]
    EmptyAlphabet,
    #[error("automaton must have at least one state")]
    NoStates,
    #[error("empty {0} name")]
    EmptyName(&'static str),
    #[error("duplicate letter name {0:?}")]
    DuplicateLetter(String),
    #[error("duplicate state name {0:?}")]
    DuplicateState(String),
    #[error("transitions mention unknown state {0:?}")]
    UnknownSourceState(String),
    #[error("transition ({state}, {letter}): unknown input letter")]
    UnknownInputLetter { state: String, letter: String },
    #[error("transition ({state}, {letter}): unknown output letter {output:?}")]
    UnknownOutputLetter { state: String, letter: String, output: String },
    #[error("transition ({state}, {letter}): unknown target state {target:?}")]
    UnknownTargetState { state: String, letter: String, target: String },
    #[error("transition ({state}, {letter}) given more than once")]
    DuplicateTransition { state: String, letter: String },
    #[error("missing transition ({state}, {letter})")]
    MissingTransition { state: String, letter: String },
    #[error("transition ({state}, {letter}): index out of range")]
    OutOfRange { state: String, letter: String },
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Validation(#[from] ValidationError),
    #[error("malformed automaton file: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("unknown state {0:?}")]
    UnknownState(String),
    #[error("unknown letter {0:?}")]
    UnknownLetter(String),
    #[error("state word must not be empty")]
    EmptyStateWord,
    #[error("malformed ultimately periodic word {0:?} (expected pre(period))")]
    MalformedUpWord(String),
    #[error("alphabet mismatch: {0} vs {1} letters")]
    AlphabetMismatch(usize, usize),
    #[error("product transducer exceeded {bound} states")]
    TupleBound { bound: usize },
    #[error("cycle detection exceeded {bound} letters")]
    CycleBound { bound: usize },
    #[error("orbit exceeded cap {cap}")]
    OrbitCap { cap: usize },
    #[error("unknown catalog automaton {0:?}")]
    UnknownCatalog(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
