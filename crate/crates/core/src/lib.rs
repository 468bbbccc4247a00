//! Finite-state Mealy automata and the semigroups they generate.
//!
//! The crate covers the action of states and state words on finite and
//! ultimately periodic words, canonical (minimized) semigroup elements,
//! growth enumeration, orbit computations on prefix levels of the rooted
//! tree, and a budgeted finiteness semi-decision procedure.
//!
//! Products of states are written as [`StateWord`]s whose **rightmost** state
//! acts first: the word `[s, t]` means "apply `t`, then `s`".

pub mod automaton;
pub mod catalog;
pub mod element;
pub mod error;
pub mod finiteness;
pub mod format;
pub mod orbits;
pub mod word;

pub use automaton::{Alphabet, MealyAutomaton, StateWord, UpwordBudget};
pub use element::{compose, element_equal, element_of, enumerate, Element, EnumBudget, GrowthReport};
pub use error::{Error, ValidationError};
pub use finiteness::{check_consistency, decide, ConsistencyReport, DecideBudgets, FinitenessVerdict};
pub use orbits::{
    m_depth, orbit_finite, orbit_signature, orbit_upword, signature_equal, witness_search, MDepthSolver,
    MDepthValue, Orbit, OrbitSignature, UpOrbit, WitnessBudget, WitnessChain,
};
pub use word::{FiniteWord, UpWord};

/// Index of a letter in an [`Alphabet`].
pub type Letter = usize;
/// Index of a state in a [`MealyAutomaton`] or an [`Element`].
pub type StateId = usize;
