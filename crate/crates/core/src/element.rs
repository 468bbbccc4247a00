//! Canonical semigroup elements and growth enumeration.
//!
//! An [`Element`] is a minimized initial transducer whose states are numbered
//! in breadth-first order from the initial state (letters in index order).
//! Two elements act identically on `A*` iff their tables are identical, so
//! equality and hashing are structural.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::automaton::{MealyAutomaton, StateWord};
use crate::error::{Error, Result};
use crate::word::{FiniteWord, UpWord};
use crate::{Letter, StateId};

pub const DEFAULT_TUPLE_BOUND: usize = 1_000_000;

#[derive(Clone, Debug)]
pub struct Element {
    arity: usize,
    /// Row-major `(output, next)`; state 0 is the initial state.
    table: Vec<(Letter, StateId)>,
    provenance: Option<StateWord>,
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.arity == other.arity && self.table == other.table
    }
}

impl Eq for Element {}

impl Hash for Element {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.arity.hash(state);
        self.table.hash(state);
    }
}

impl Element {
    pub fn identity(arity: usize) -> Self {
        Element {
            arity,
            table: (0..arity).map(|a| (a, 0)).collect(),
            provenance: None,
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn num_states(&self) -> usize {
        self.table.len() / self.arity
    }

    pub fn is_identity(&self) -> bool {
        *self == Element::identity(self.arity)
    }

    /// The state word this element was built from, if any.
    pub fn provenance(&self) -> Option<&StateWord> {
        self.provenance.as_ref()
    }

    pub fn with_provenance(mut self, s: StateWord) -> Self {
        self.provenance = Some(s);
        self
    }

    /// Transition rows, indexed `[state][letter]`.
    pub fn rows(&self) -> impl Iterator<Item = &[(Letter, StateId)]> {
        self.table.chunks(self.arity)
    }

    #[inline]
    pub fn step(&self, state: StateId, a: Letter) -> (Letter, StateId) {
        self.table[state * self.arity + a]
    }

    /// Image of `u` and the section state reached.
    pub fn act_from(&self, state: StateId, u: &[Letter]) -> (FiniteWord, StateId) {
        let mut q = state;
        let out = u
            .iter()
            .map(|&a| {
                let (b, next) = self.step(q, a);
                q = next;
                b
            })
            .collect();
        (FiniteWord(out), q)
    }

    pub fn act(&self, u: &FiniteWord) -> FiniteWord {
        self.act_from(0, u.letters()).0
    }

    /// Writes the image of `u` into `out` without allocating.
    #[inline]
    pub fn act_into(&self, u: &[Letter], out: &mut Vec<Letter>) {
        out.clear();
        let mut q = 0;
        for &a in u {
            let (b, next) = self.step(q, a);
            out.push(b);
            q = next;
        }
    }

    /// The section `self@u` as a canonical element.
    pub fn section(&self, u: &FiniteWord) -> Element {
        let (_, q) = self.act_from(0, u.letters());
        self.rooted_at(q)
    }

    /// The canonical element obtained by making `state` initial.
    pub fn rooted_at(&self, state: StateId) -> Element {
        if state == 0 {
            return Element {
                provenance: None,
                ..self.clone()
            };
        }
        // States of a minimal transducer stay pairwise inequivalent, so
        // renumbering the reachable part is enough.
        renumber(self.arity, &self.table, state)
    }

    /// `self·x` in canonical form.
    ///
    /// The element state at each period boundary lies in a finite set, so the
    /// simulation closes once a boundary state repeats.
    pub fn act_upword(&self, x: &UpWord, max_cycle: usize) -> Result<UpWord> {
        let (pre_out, mut q) = self.act_from(0, x.preperiod().letters());
        let period = x.period().letters();
        let mut seen: HashMap<StateId, usize> = HashMap::new();
        let mut blocks: Vec<Vec<Letter>> = Vec::new();
        loop {
            if let Some(&start) = seen.get(&q) {
                let mut pre = pre_out.0;
                for b in &blocks[..start] {
                    pre.extend_from_slice(b);
                }
                let per: Vec<Letter> = blocks[start..].concat();
                return Ok(UpWord::new(FiniteWord(pre), FiniteWord(per)).expect("non-empty period"));
            }
            if (blocks.len() + 1) * period.len() > max_cycle {
                return Err(Error::CycleBound { bound: max_cycle });
            }
            seen.insert(q, blocks.len());
            let (out, next) = self.act_from(q, period);
            blocks.push(out.0);
            q = next;
        }
    }
}

impl Serialize for Element {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ElementRepr {
            arity: self.arity,
            table: self.rows().map(<[_]>::to_vec).collect(),
            provenance: self.provenance.clone(),
        }
        .serialize(s)
    }
}

#[derive(Serialize, Deserialize)]
struct ElementRepr {
    arity: usize,
    table: Vec<Vec<(Letter, StateId)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<StateWord>,
}

/// Explores the transducer reachable from `init`, then minimizes and
/// canonically renumbers it.
fn build<K, F>(arity: usize, init: K, mut step: F, bound: usize) -> Result<Element>
where
    K: Clone + Eq + Hash,
    F: FnMut(&K, Letter) -> (Letter, K),
{
    let mut index: HashMap<K, StateId> = HashMap::new();
    let mut keys = vec![init.clone()];
    index.insert(init, 0);
    let mut table = Vec::new();
    let mut i = 0;
    while i < keys.len() {
        for a in 0..arity {
            let (b, next) = step(&keys[i], a);
            let id = match index.get(&next) {
                Some(&id) => id,
                None => {
                    if keys.len() >= bound {
                        return Err(Error::TupleBound { bound });
                    }
                    let id = keys.len();
                    index.insert(next.clone(), id);
                    keys.push(next);
                    id
                }
            };
            table.push((b, id));
        }
        i += 1;
    }
    Ok(canonicalize(arity, &table))
}

/// Minimizes a reachable transducer with initial state 0 and renumbers it.
pub(crate) fn canonicalize(arity: usize, table: &[(Letter, StateId)]) -> Element {
    let blocks = refine(arity, table);
    let nblocks = blocks.iter().max().map_or(0, |m| m + 1);
    let mut quotient = vec![(0, 0); nblocks * arity];
    for (q, &blk) in blocks.iter().enumerate() {
        for a in 0..arity {
            let (b, next) = table[q * arity + a];
            quotient[blk * arity + a] = (b, blocks[next]);
        }
    }
    renumber(arity, &quotient, blocks[0])
}

/// Coarsest partition compatible with outputs and transitions (Hopcroft's
/// algorithm over all letters). Returns a block id for every state.
fn refine(arity: usize, table: &[(Letter, StateId)]) -> Vec<usize> {
    let n = table.len() / arity;
    // Initial blocks: equal output rows.
    let mut by_outputs: HashMap<Vec<Letter>, usize> = HashMap::new();
    let mut initial = Vec::with_capacity(n);
    for q in 0..n {
        let row: Vec<Letter> = (0..arity).map(|a| table[q * arity + a].0).collect();
        let fresh = by_outputs.len();
        initial.push(*by_outputs.entry(row).or_insert(fresh));
    }
    let mut part = Partition::new(&initial, by_outputs.len());

    // Predecessors per letter in CSR form: preds[a] lists q with δ(q, a) = t
    // in preds_list[a][offsets[a][t]..offsets[a][t + 1]].
    let mut offsets = vec![vec![0usize; n + 1]; arity];
    for q in 0..n {
        for a in 0..arity {
            offsets[a][table[q * arity + a].1 + 1] += 1;
        }
    }
    for off in offsets.iter_mut() {
        for t in 0..n {
            off[t + 1] += off[t];
        }
    }
    let mut fill: Vec<Vec<usize>> = offsets.iter().map(|o| o[..n].to_vec()).collect();
    let mut preds = vec![vec![0usize; n]; arity];
    for q in 0..n {
        for a in 0..arity {
            let t = table[q * arity + a].1;
            preds[a][fill[a][t]] = q;
            fill[a][t] += 1;
        }
    }

    let mut pending: Vec<(usize, Letter)> = Vec::new();
    let mut queued: Vec<bool> = Vec::new();
    for b in 0..part.len() {
        for a in 0..arity {
            pending.push((b, a));
            queued.push(true);
        }
    }
    let mut splitter = Vec::new();
    while let Some((b, a)) = pending.pop() {
        queued[b * arity + a] = false;
        splitter.clear();
        splitter.extend_from_slice(part.members(b));
        for &t in &splitter {
            for &q in &preds[a][offsets[a][t]..offsets[a][t + 1]] {
                part.mark(q);
            }
        }
        for (old, new) in part.split_marked() {
            queued.resize((new + 1) * arity, false);
            for c in 0..arity {
                if queued[old * arity + c] {
                    queued[new * arity + c] = true;
                    pending.push((new, c));
                } else {
                    let smaller = if part.size(new) <= part.size(old) { new } else { old };
                    queued[smaller * arity + c] = true;
                    pending.push((smaller, c));
                }
            }
        }
    }
    part.block_of
}

/// Refinable partition of `0..n` with in-place marking.
struct Partition {
    elems: Vec<usize>,
    loc: Vec<usize>,
    block_of: Vec<usize>,
    start: Vec<usize>,
    end: Vec<usize>,
    marked: Vec<usize>,
    touched: Vec<usize>,
}

impl Partition {
    fn new(initial: &[usize], nblocks: usize) -> Self {
        let n = initial.len();
        let mut counts = vec![0usize; nblocks + 1];
        for &b in initial {
            counts[b + 1] += 1;
        }
        for b in 0..nblocks {
            counts[b + 1] += counts[b];
        }
        let start = counts[..nblocks].to_vec();
        let end = counts[1..].to_vec();
        let mut fill = start.clone();
        let mut elems = vec![0; n];
        let mut loc = vec![0; n];
        for (q, &b) in initial.iter().enumerate() {
            elems[fill[b]] = q;
            loc[q] = fill[b];
            fill[b] += 1;
        }
        Partition {
            elems,
            loc,
            block_of: initial.to_vec(),
            start,
            end,
            marked: vec![0; nblocks],
            touched: Vec::new(),
        }
    }

    fn len(&self) -> usize {
        self.start.len()
    }

    fn size(&self, b: usize) -> usize {
        self.end[b] - self.start[b]
    }

    fn members(&self, b: usize) -> &[usize] {
        &self.elems[self.start[b]..self.end[b]]
    }

    fn mark(&mut self, q: usize) {
        let b = self.block_of[q];
        let first_unmarked = self.start[b] + self.marked[b];
        let pos = self.loc[q];
        if pos < first_unmarked {
            return;
        }
        if self.marked[b] == 0 {
            self.touched.push(b);
        }
        let other = self.elems[first_unmarked];
        self.elems.swap(pos, first_unmarked);
        self.loc[other] = pos;
        self.loc[q] = first_unmarked;
        self.marked[b] += 1;
    }

    /// Moves the marked prefix of every partially marked block into a new block.
    fn split_marked(&mut self) -> Vec<(usize, usize)> {
        let mut splits = Vec::new();
        for b in std::mem::take(&mut self.touched) {
            let m = self.marked[b];
            self.marked[b] = 0;
            if m == self.size(b) {
                continue;
            }
            let nb = self.start.len();
            let s = self.start[b];
            self.start.push(s);
            self.end.push(s + m);
            self.marked.push(0);
            self.start[b] = s + m;
            for &q in &self.elems[s..s + m] {
                self.block_of[q] = nb;
            }
            splits.push((b, nb));
        }
        splits
    }
}

/// Breadth-first renumbering of the part of `table` reachable from `start`.
fn renumber(arity: usize, table: &[(Letter, StateId)], start: StateId) -> Element {
    let n = table.len() / arity;
    let mut order = vec![usize::MAX; n];
    let mut queue = VecDeque::from([start]);
    order[start] = 0;
    let mut seq = vec![start];
    while let Some(q) = queue.pop_front() {
        for a in 0..arity {
            let t = table[q * arity + a].1;
            if order[t] == usize::MAX {
                order[t] = seq.len();
                seq.push(t);
                queue.push_back(t);
            }
        }
    }
    let mut out = Vec::with_capacity(seq.len() * arity);
    for &q in &seq {
        for a in 0..arity {
            let (b, t) = table[q * arity + a];
            out.push((b, order[t]));
        }
    }
    Element {
        arity,
        table: out,
        provenance: None,
    }
}

/// Canonical element of the product `s` (rightmost state acts first).
///
/// The product transducer has one state per reachable tuple of sections; its size
/// is at most `|Q|^|s|`, and construction fails once it exceeds `bound`.
pub fn element_of(m: &MealyAutomaton, s: &StateWord, bound: usize) -> Result<Element> {
    let init: Vec<StateId> = s.states().to_vec();
    let e = build(
        m.arity(),
        init,
        |tuple, a| {
            let mut next = tuple.clone();
            let mut letter = a;
            for slot in next.iter_mut().rev() {
                let (b, q) = m.step(*slot, letter);
                *slot = q;
                letter = b;
            }
            (letter, next)
        },
        bound,
    )?;
    Ok(e.with_provenance(s.clone()))
}

pub fn element_equal(e1: &Element, e2: &Element) -> Result<bool> {
    if e1.arity != e2.arity {
        return Err(Error::AlphabetMismatch(e1.arity, e2.arity));
    }
    Ok(e1 == e2)
}

/// `e1 ∘ e2`: apply `e2` first, then `e1`.
pub fn compose(e1: &Element, e2: &Element, bound: usize) -> Result<Element> {
    if e1.arity != e2.arity {
        return Err(Error::AlphabetMismatch(e1.arity, e2.arity));
    }
    let mut e = build(
        e1.arity,
        (0usize, 0usize),
        |&(p, q), a| {
            let (mid, q2) = e2.step(q, a);
            let (b, p2) = e1.step(p, mid);
            (b, (p2, q2))
        },
        bound,
    )?;
    if let (Some(x), Some(y)) = (&e1.provenance, &e2.provenance) {
        e.provenance = Some(x.concat(y));
    }
    Ok(e)
}

/// Budgets for [`enumerate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumBudget {
    pub max_elements: usize,
    pub max_length: usize,
    pub tuple_bound: usize,
}

impl Default for EnumBudget {
    fn default() -> Self {
        EnumBudget {
            max_elements: 10_000,
            max_length: 12,
            tuple_bound: DEFAULT_TUPLE_BOUND,
        }
    }
}

/// Result of a growth enumeration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthReport {
    /// `b[k-1]` is the number of distinct elements given by products of length `≤ k`.
    pub b: Vec<usize>,
    pub closed: bool,
    pub total: Option<usize>,
    pub budgets: EnumBudget,
    /// One shortest product per element, in discovery order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<Vec<StateWord>>,
}

/// Resumable breadth-first closure of the generators under left multiplication.
///
/// Work is counted in products formed, so callers can interleave enumeration with
/// other searches deterministically.
pub struct Enumerator {
    gens: Vec<Element>,
    budget: EnumBudget,
    elements: Vec<Element>,
    index: HashMap<Element, usize>,
    /// Elements first reached at the current length.
    frontier: Vec<usize>,
    /// Elements found at the next length so far.
    next: Vec<usize>,
    /// Position in `frontier × gens` of the next product to form.
    cursor: usize,
    length: usize,
    b: Vec<usize>,
    status: Status,
    pub work_done: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Status {
    Running,
    Closed,
    Exhausted,
}

impl Enumerator {
    pub fn new(m: &MealyAutomaton, gens: &[StateWord], budget: EnumBudget) -> Result<Self> {
        let gens = gens
            .iter()
            .map(|g| element_of(m, g, budget.tuple_bound))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_elements(gens, budget))
    }

    pub fn from_elements(gens: Vec<Element>, budget: EnumBudget) -> Self {
        let mut en = Enumerator {
            gens: gens.clone(),
            budget,
            elements: Vec::new(),
            index: HashMap::new(),
            frontier: Vec::new(),
            next: Vec::new(),
            cursor: 0,
            length: 1,
            b: Vec::new(),
            status: Status::Running,
            work_done: 0,
        };
        for g in gens {
            if en.elements.len() >= budget.max_elements {
                en.status = Status::Exhausted;
                break;
            }
            if let Some(id) = en.insert(g) {
                en.frontier.push(id);
            }
        }
        en.b.push(en.elements.len());
        if budget.max_length <= 1 {
            en.status = Status::Exhausted;
        }
        en
    }

    fn insert(&mut self, e: Element) -> Option<usize> {
        if self.index.contains_key(&e) {
            return None;
        }
        let id = self.elements.len();
        self.index.insert(e.clone(), id);
        self.elements.push(e);
        Some(id)
    }

    pub fn is_done(&self) -> bool {
        self.status != Status::Running
    }

    pub fn is_closed(&self) -> bool {
        self.status == Status::Closed
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    /// Forms up to `units` products; returns the number formed.
    pub fn run(&mut self, units: u64) -> Result<u64> {
        let mut used = 0;
        while used < units && self.status == Status::Running {
            let per_level = self.frontier.len() * self.gens.len();
            if self.cursor == per_level {
                self.finish_level();
                continue;
            }
            let x = self.frontier[self.cursor / self.gens.len()];
            let g = self.cursor % self.gens.len();
            self.cursor += 1;
            used += 1;
            self.work_done += 1;
            let product = compose(&self.gens[g], &self.elements[x], self.budget.tuple_bound)?;
            if self.index.contains_key(&product) {
                continue;
            }
            if self.elements.len() >= self.budget.max_elements {
                self.status = Status::Exhausted;
                break;
            }
            let id = self.insert(product).expect("fresh element");
            self.next.push(id);
        }
        Ok(used)
    }

    fn finish_level(&mut self) {
        self.length += 1;
        self.b.push(self.elements.len());
        if self.next.is_empty() {
            self.status = if self.right_closed() { Status::Closed } else { Status::Exhausted };
            return;
        }
        self.frontier = std::mem::take(&mut self.next);
        self.cursor = 0;
        if self.length >= self.budget.max_length {
            self.status = Status::Exhausted;
        }
    }

    /// Every element times every generator on the right stays in the set.
    fn right_closed(&mut self) -> bool {
        for x in 0..self.elements.len() {
            for g in 0..self.gens.len() {
                self.work_done += 1;
                match compose(&self.elements[x], &self.gens[g], self.budget.tuple_bound) {
                    Ok(p) if self.index.contains_key(&p) => {}
                    _ => return false,
                }
            }
        }
        true
    }

    pub fn run_to_end(&mut self) -> Result<()> {
        while !self.is_done() {
            self.run(u64::MAX)?;
        }
        Ok(())
    }

    pub fn report(&self, with_witnesses: bool) -> GrowthReport {
        let closed = self.is_closed();
        GrowthReport {
            b: self.b.clone(),
            closed,
            total: closed.then_some(self.elements.len()),
            budgets: self.budget,
            witnesses: with_witnesses.then(|| {
                self.elements
                    .iter()
                    .filter_map(|e| e.provenance.clone())
                    .collect()
            }),
        }
    }
}

/// Breadth-first closure of `gens` under multiplication by generators.
///
/// `closed` is set only when a length level adds no new element and the set is
/// also stable under right multiplication, which certifies that the listed
/// elements form the whole generated semigroup.
pub fn enumerate(m: &MealyAutomaton, gens: &[StateWord], budget: EnumBudget) -> Result<GrowthReport> {
    let mut en = Enumerator::new(m, gens, budget)?;
    en.run_to_end()?;
    Ok(en.report(true))
}

/// Groups elements by their state count; used in reports.
pub fn size_histogram(elements: &[Element]) -> BTreeMap<usize, usize> {
    let mut h = BTreeMap::new();
    for e in elements {
        *h.entry(e.num_states()).or_default() += 1;
    }
    h
}
