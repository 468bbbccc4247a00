//! Finite words and ultimately periodic right-infinite words.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::Letter;

/// A finite word over an alphabet, stored as letter indices. The empty word is allowed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FiniteWord(pub Vec<Letter>);

impl FiniteWord {
    pub fn empty() -> Self {
        FiniteWord(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    /// `self ⧺ other`.
    pub fn concat(&self, other: &FiniteWord) -> FiniteWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        FiniteWord(v)
    }

    pub fn push(&mut self, a: Letter) {
        self.0.push(a);
    }

    pub fn with_letter(&self, a: Letter) -> FiniteWord {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.extend_from_slice(&self.0);
        v.push(a);
        FiniteWord(v)
    }

    pub fn prefix(&self, k: usize) -> FiniteWord {
        FiniteWord(self.0[..k.min(self.0.len())].to_vec())
    }

    /// Enumerates all words of length `len` over `arity` letters in lexicographic order.
    pub fn all_of_length(arity: usize, len: usize) -> impl Iterator<Item = FiniteWord> {
        let total = arity.checked_pow(len as u32).expect("word level too large");
        (0..total).map(move |mut code| {
            let mut v = vec![0; len];
            for slot in v.iter_mut().rev() {
                *slot = code % arity;
                code /= arity;
            }
            FiniteWord(v)
        })
    }
}

impl From<Vec<Letter>> for FiniteWord {
    fn from(v: Vec<Letter>) -> Self {
        FiniteWord(v)
    }
}

impl From<&[Letter]> for FiniteWord {
    fn from(v: &[Letter]) -> Self {
        FiniteWord(v.to_vec())
    }
}

/// An ultimately periodic right-infinite word `preperiod ⧺ period^ω`.
///
/// Values built through [`UpWord::new`] are always canonical: the period is
/// primitive and the preperiod is as short as possible, so two values denote
/// the same infinite word iff they compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct UpWord {
    preperiod: FiniteWord,
    period: FiniteWord,
}

/// Returned when the period of an ultimately periodic word is empty.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EmptyPeriod;

impl fmt::Display for EmptyPeriod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("period of an ultimately periodic word must be non-empty")
    }
}

impl std::error::Error for EmptyPeriod {}

impl UpWord {
    pub fn new(preperiod: FiniteWord, period: FiniteWord) -> Result<Self, EmptyPeriod> {
        if period.is_empty() {
            return Err(EmptyPeriod);
        }
        let mut pre = preperiod.0;
        let mut per = primitive_root(&period.0).to_vec();
        // Absorb trailing preperiod letters into the period by rotating it.
        while let (Some(&last_pre), Some(&last_per)) = (pre.last(), per.last()) {
            if last_pre != last_per {
                break;
            }
            pre.pop();
            per.rotate_right(1);
        }
        Ok(UpWord {
            preperiod: FiniteWord(pre),
            period: FiniteWord(per),
        })
    }

    /// The constant word `a^ω`.
    pub fn constant(a: Letter) -> Self {
        UpWord {
            preperiod: FiniteWord::empty(),
            period: FiniteWord(vec![a]),
        }
    }

    pub fn preperiod(&self) -> &FiniteWord {
        &self.preperiod
    }

    pub fn period(&self) -> &FiniteWord {
        &self.period
    }

    /// Letter at position `i` (0-based).
    pub fn letter_at(&self, i: usize) -> Letter {
        let p = self.preperiod.len();
        if i < p {
            self.preperiod.0[i]
        } else {
            self.period.0[(i - p) % self.period.len()]
        }
    }

    /// The prefix of length `k`.
    pub fn truncate(&self, k: usize) -> FiniteWord {
        FiniteWord((0..k).map(|i| self.letter_at(i)).collect())
    }

    /// True when `preperiod` and `period` already are in canonical form.
    pub fn is_canonical_pair(preperiod: &[Letter], period: &[Letter]) -> bool {
        !period.is_empty()
            && primitive_root(period).len() == period.len()
            && preperiod.last() != period.last()
    }
}

/// Shortest `r` with `w = r^k`.
pub fn primitive_root(w: &[Letter]) -> &[Letter] {
    let n = w.len();
    for d in 1..n {
        if n.is_multiple_of(d) && w.chunks(d).all(|c| c == &w[..d]) {
            return &w[..d];
        }
    }
    w
}
