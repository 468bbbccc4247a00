//! Budgeted finiteness semi-decision.
//!
//! A semigroup generated by a finite Mealy automaton is infinite exactly when
//! some right-infinite word has an infinite orbit. [`decide`] interleaves two
//! arms in fixed work slices:
//!
//! * the enumeration arm closes the semigroup under generator products and,
//!   when it closes, yields a certificate of finiteness;
//! * the evidence arm descends the tree greedily looking for prefixes whose
//!   orbits keep growing.
//!
//! Only finiteness is ever certified. Growing orbits are reported as evidence.

use serde::{Deserialize, Serialize};

use crate::automaton::{MealyAutomaton, StateWord};
use crate::element::{EnumBudget, Enumerator, GrowthReport};
use crate::error::Result;
use crate::orbits::{generator_elements, LevelMaps, MDepthSolver, WitnessBudget, WitnessChain, WitnessSearch};
use crate::word::FiniteWord;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecideBudgets {
    pub enumeration: EnumBudget,
    pub witness: WitnessBudget,
    /// Work units granted to each arm per round: products formed for the
    /// enumeration arm, orbit points expanded for the evidence arm.
    pub slice: u64,
}

impl Default for DecideBudgets {
    fn default() -> Self {
        DecideBudgets {
            enumeration: EnumBudget::default(),
            witness: WitnessBudget::default(),
            slice: 1000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Outcome {
    Finite {
        order: usize,
        report: GrowthReport,
    },
    Unknown {
        chain: WitnessChain,
        largest_orbit_lower_bound: usize,
        report: GrowthReport,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WorkUsed {
    pub enumeration: u64,
    pub witness: u64,
    pub rounds: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinitenessVerdict {
    pub outcome: Outcome,
    pub budgets: DecideBudgets,
    pub work: WorkUsed,
}

impl FinitenessVerdict {
    pub fn order(&self) -> Option<usize> {
        match self.outcome {
            Outcome::Finite { order, .. } => Some(order),
            Outcome::Unknown { .. } => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.order().is_some()
    }
}

pub fn decide(m: &MealyAutomaton, gens: &[StateWord], budgets: DecideBudgets) -> Result<FinitenessVerdict> {
    let elems = generator_elements(m, gens, budgets.enumeration.tuple_bound)?;
    let mut enumerator = Enumerator::from_elements(elems.clone(), budgets.enumeration);
    let mut search = WitnessSearch::new(elems, budgets.witness);
    let slice = budgets.slice.max(1);
    let mut enumeration_failed = false;
    let mut rounds = 0;
    loop {
        let enum_live = !enumerator.is_done() && !enumeration_failed;
        if !enum_live && search.is_done() {
            break;
        }
        rounds += 1;
        if enum_live && enumerator.run(slice).is_err() {
            // A product transducer outgrew the tuple bound: the arm stops without a certificate.
            enumeration_failed = true;
        }
        if enumerator.is_closed() {
            break;
        }
        let start = search.work();
        while !search.is_done() && search.work() - start < slice {
            search.advance();
        }
    }
    let work = WorkUsed {
        enumeration: enumerator.work_done,
        witness: search.work(),
        rounds,
    };
    let report = enumerator.report(true);
    let outcome = if enumerator.is_closed() {
        Outcome::Finite {
            order: enumerator.len(),
            report,
        }
    } else {
        let chain = search.into_chain();
        Outcome::Unknown {
            largest_orbit_lower_bound: chain.largest_orbit(),
            chain,
            report,
        }
    };
    Ok(FinitenessVerdict { outcome, budgets, work })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub word: FiniteWord,
    pub orbit_size: usize,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub consistent: bool,
    pub words_checked: u64,
    pub violation: Option<Violation>,
}

/// Audits a verdict against independent orbit computations.
///
/// For `Finite(N)` every orbit on every level up to `depth` must have at most
/// `N + 1` points (the basepoint plus its images). For `Unknown`, the witness
/// chain must be strictly increasing and every orbit size must recompute.
pub fn check_consistency(
    verdict: &FinitenessVerdict,
    m: &MealyAutomaton,
    gens: &[StateWord],
    depth: usize,
) -> Result<ConsistencyReport> {
    let elems = generator_elements(m, gens, verdict.budgets.enumeration.tuple_bound)?;
    let mut checked = 0u64;
    let fail = |checked, word: FiniteWord, orbit_size, detail: String| ConsistencyReport {
        consistent: false,
        words_checked: checked,
        violation: Some(Violation { word, orbit_size, detail }),
    };
    match &verdict.outcome {
        Outcome::Finite { order, .. } => {
            let bound = order + 1;
            for len in 0..=depth {
                let level = LevelMaps::new(&elems, len);
                for (code, size) in level.orbit_sizes(bound).into_iter().enumerate() {
                    checked += 1;
                    if size > bound {
                        return Ok(fail(checked, level.decode(code), size, format!("orbit exceeds {bound}")));
                    }
                }
            }
        }
        Outcome::Unknown { chain, .. } => {
            let mut solver = MDepthSolver::new(elems, chain.budget.orbit_cap);
            for (i, (p, &size)) in chain.prefixes.iter().zip(&chain.orbit_sizes).enumerate() {
                checked += 1;
                if i > 0 {
                    let prev = &chain.prefixes[i - 1];
                    if p.len() <= prev.len() || !p.letters().starts_with(prev.letters()) {
                        return Ok(fail(checked, p.clone(), size, "prefixes not strictly increasing".into()));
                    }
                    if size <= chain.orbit_sizes[i - 1] {
                        return Ok(fail(checked, p.clone(), size, "orbit sizes not strictly increasing".into()));
                    }
                }
                let again = solver.orbit_size(p);
                if again.size != size {
                    return Ok(fail(checked, p.clone(), size, format!("orbit recomputes to {}", again.size)));
                }
            }
        }
    }
    Ok(ConsistencyReport {
        consistent: true,
        words_checked: checked,
        violation: None,
    })
}
