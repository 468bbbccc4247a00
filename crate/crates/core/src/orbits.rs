//! Orbits of words under a finite set of generators.
//!
//! Orbits always contain their basepoint: they are the reachability closure of
//! `{u}` under `w ↦ g·w`, i.e. `{u} ∪ T·u` for the semigroup `T` generated by
//! the generators. On a fixed level `A^n` every orbit is finite; the depth
//! recursion [`m_depth`] approximates the supremum of orbit sizes along
//! right-infinite extensions from below.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::automaton::{dot_quote, Alphabet, MealyAutomaton, StateWord};
use crate::element::{element_of, Element};
use crate::error::{Error, Result};
use crate::word::{FiniteWord, UpWord};
use crate::{Letter, StateId};

/// Canonical elements of the given products.
pub fn generator_elements(m: &MealyAutomaton, gens: &[StateWord], tuple_bound: usize) -> Result<Vec<Element>> {
    gens.iter().map(|g| element_of(m, g, tuple_bound)).collect()
}

/// The orbit of a finite word, points in breadth-first order (basepoint first).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orbit {
    pub basepoint: FiniteWord,
    pub points: Vec<FiniteWord>,
    /// `edges[p][g]` is the index of `g·points[p]`.
    pub edges: Vec<Vec<usize>>,
}

impl Orbit {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, w: &FiniteWord) -> bool {
        self.points.contains(w)
    }

    /// Points as nodes, one edge per generator labelled by its name.
    pub fn to_dot(&self, alphabet: &Alphabet, gen_names: &[String]) -> String {
        let mut out = String::from("digraph orbit {\n");
        for (i, p) in self.points.iter().enumerate() {
            let _ = writeln!(out, "    p{i} [label={}];", dot_quote(&alphabet.render_word(p)));
        }
        for (i, row) in self.edges.iter().enumerate() {
            for (g, &j) in row.iter().enumerate() {
                let _ = writeln!(out, "    p{i} -> p{j} [label={}];", dot_quote(&gen_names[g]));
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Breadth-first closure of `{u}` under the generators. Fails with
/// [`Error::OrbitCap`] once more than `cap` points would be needed; `cap` points
/// have been found at that moment.
pub fn orbit_finite(gens: &[Element], u: &FiniteWord, cap: usize) -> Result<Orbit> {
    let mut index: HashMap<FiniteWord, usize> = HashMap::from([(u.clone(), 0)]);
    let mut points = vec![u.clone()];
    let mut edges = Vec::new();
    let mut i = 0;
    while i < points.len() {
        let mut row = Vec::with_capacity(gens.len());
        for g in gens {
            let image = g.act(&points[i]);
            let j = match index.get(&image) {
                Some(&j) => j,
                None => {
                    if points.len() >= cap {
                        return Err(Error::OrbitCap { cap });
                    }
                    index.insert(image.clone(), points.len());
                    points.push(image);
                    points.len() - 1
                }
            };
            row.push(j);
        }
        edges.push(row);
        i += 1;
    }
    Ok(Orbit {
        basepoint: u.clone(),
        points,
        edges,
    })
}

/// Size of an orbit, or a lower bound when the cap was hit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitSize {
    pub size: usize,
    pub exceeded: bool,
}

fn orbit_size(gens: &[Element], u: &[Letter], cap: usize, work: &mut u64) -> OrbitSize {
    let mut seen: HashSet<Vec<Letter>> = HashSet::from([u.to_vec()]);
    let mut queue = VecDeque::from([u.to_vec()]);
    let mut buf = Vec::with_capacity(u.len());
    while let Some(w) = queue.pop_front() {
        *work += 1;
        for g in gens {
            g.act_into(&w, &mut buf);
            if !seen.contains(&buf) {
                if seen.len() >= cap {
                    return OrbitSize { size: cap, exceeded: true };
                }
                seen.insert(buf.clone());
                queue.push_back(buf.clone());
            }
        }
    }
    OrbitSize {
        size: seen.len(),
        exceeded: false,
    }
}

/// `max_{w ∈ A^d} |orbit(v ⧺ w)|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MDepthValue {
    pub v: FiniteWord,
    pub depth: usize,
    pub value: usize,
    /// Some orbit below `v` hit the cap; `value` is then only a lower bound.
    pub exceeded: bool,
}

/// Memoized evaluation of the depth recursion
/// `m⁰(v) = |orbit(v)|`, `mᵈ(v) = max_a mᵈ⁻¹(v ⧺ a)`.
pub struct MDepthSolver {
    gens: Vec<Element>,
    arity: usize,
    cap: usize,
    orbits: HashMap<FiniteWord, OrbitSize>,
    memo: HashMap<(FiniteWord, usize), OrbitSize>,
    /// Orbit points expanded so far.
    pub work: u64,
}

impl MDepthSolver {
    pub fn new(gens: Vec<Element>, cap: usize) -> Self {
        let arity = gens.first().map_or(1, Element::arity);
        MDepthSolver {
            gens,
            arity,
            cap,
            orbits: HashMap::new(),
            memo: HashMap::new(),
            work: 0,
        }
    }

    pub fn generators(&self) -> &[Element] {
        &self.gens
    }

    pub fn orbit_size(&mut self, v: &FiniteWord) -> OrbitSize {
        if let Some(&s) = self.orbits.get(v) {
            return s;
        }
        let s = orbit_size(&self.gens, v.letters(), self.cap, &mut self.work);
        self.orbits.insert(v.clone(), s);
        s
    }

    pub fn value(&mut self, v: &FiniteWord, depth: usize) -> MDepthValue {
        let s = self.eval(v, depth);
        MDepthValue {
            v: v.clone(),
            depth,
            value: s.size,
            exceeded: s.exceeded,
        }
    }

    fn eval(&mut self, v: &FiniteWord, depth: usize) -> OrbitSize {
        if depth == 0 {
            return self.orbit_size(v);
        }
        let key = (v.clone(), depth);
        if let Some(&s) = self.memo.get(&key) {
            return s;
        }
        let mut best = OrbitSize { size: 0, exceeded: false };
        for a in 0..self.arity {
            let child = self.eval(&v.with_letter(a), depth - 1);
            best.size = best.size.max(child.size);
            best.exceeded |= child.exceeded;
        }
        self.memo.insert(key, best);
        best
    }
}

pub fn m_depth(gens: &[Element], v: &FiniteWord, depth: usize, cap: usize) -> MDepthValue {
    MDepthSolver::new(gens.to_vec(), cap).value(v, depth)
}

/// Closure of an ultimately periodic word under the generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpOrbit {
    pub basepoint: UpWord,
    /// Points in discovery order; all of them when `closed`.
    pub points: Vec<UpWord>,
    pub closed: bool,
    /// Number of distinct points found; a lower bound on the orbit size.
    pub lower_bound: usize,
}

pub fn orbit_upword(gens: &[Element], x: &UpWord, cap: usize, max_cycle: usize) -> Result<UpOrbit> {
    let mut seen: HashSet<UpWord> = HashSet::from([x.clone()]);
    let mut points = vec![x.clone()];
    let mut i = 0;
    while i < points.len() {
        for g in gens {
            let y = g.act_upword(&points[i], max_cycle)?;
            if seen.contains(&y) {
                continue;
            }
            if points.len() >= cap {
                return Ok(UpOrbit {
                    basepoint: x.clone(),
                    lower_bound: points.len(),
                    points,
                    closed: false,
                });
            }
            seen.insert(y.clone());
            points.push(y);
        }
        i += 1;
    }
    Ok(UpOrbit {
        basepoint: x.clone(),
        lower_bound: points.len(),
        points,
        closed: true,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessBudget {
    pub max_depth: usize,
    pub lookahead: usize,
    pub orbit_cap: usize,
}

impl Default for WitnessBudget {
    fn default() -> Self {
        WitnessBudget {
            max_depth: 10,
            lookahead: 2,
            orbit_cap: 100_000,
        }
    }
}

/// Prefixes `u_0 < u_1 < ...` with strictly increasing orbit sizes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessChain {
    pub prefixes: Vec<FiniteWord>,
    pub orbit_sizes: Vec<usize>,
    /// The last recorded orbit hit the cap, so its size is a lower bound.
    pub exceeded: bool,
    /// Length of the longest prefix examined.
    pub depth_reached: usize,
    /// Orbit points expanded.
    pub work: u64,
    pub budget: WitnessBudget,
}

impl WitnessChain {
    pub fn largest_orbit(&self) -> usize {
        self.orbit_sizes.last().copied().unwrap_or(0)
    }
}

/// Greedy descent from `ε`: at `v` move to the child `v ⧺ a` with the largest
/// lookahead score `m_depth(v ⧺ a, lookahead)` (smallest letter on ties) and
/// record every prefix whose orbit is strictly larger than the last recorded one.
pub struct WitnessSearch {
    solver: MDepthSolver,
    budget: WitnessBudget,
    current: FiniteWord,
    chain: WitnessChain,
    done: bool,
}

impl WitnessSearch {
    pub fn new(gens: Vec<Element>, budget: WitnessBudget) -> Self {
        WitnessSearch {
            solver: MDepthSolver::new(gens, budget.orbit_cap),
            budget,
            current: FiniteWord::empty(),
            chain: WitnessChain {
                prefixes: Vec::new(),
                orbit_sizes: Vec::new(),
                exceeded: false,
                depth_reached: 0,
                work: 0,
                budget,
            },
            done: budget.max_depth == 0,
        }
    }

    pub fn is_done(&self) -> bool {
        self.done
    }

    pub fn work(&self) -> u64 {
        self.solver.work
    }

    /// Descends one level.
    pub fn advance(&mut self) {
        if self.done {
            return;
        }
        let mut best: Option<(usize, Letter)> = None;
        for a in 0..self.solver.arity {
            let score = self.solver.eval(&self.current.with_letter(a), self.budget.lookahead).size;
            if best.is_none_or(|(s, _)| score > s) {
                best = Some((score, a));
            }
        }
        let (_, a) = best.expect("non-empty alphabet");
        self.current.push(a);
        self.chain.depth_reached = self.current.len();
        let here = self.solver.orbit_size(&self.current);
        if here.size > self.chain.largest_orbit() {
            self.chain.prefixes.push(self.current.clone());
            self.chain.orbit_sizes.push(here.size);
            self.chain.exceeded = here.exceeded;
        }
        self.chain.work = self.solver.work;
        if here.exceeded || self.current.len() >= self.budget.max_depth {
            self.done = true;
        }
    }

    pub fn run_to_end(&mut self) {
        while !self.done {
            self.advance();
        }
    }

    pub fn chain(&self) -> &WitnessChain {
        &self.chain
    }

    pub fn into_chain(self) -> WitnessChain {
        self.chain
    }
}

pub fn witness_search(gens: &[Element], budget: WitnessBudget) -> WitnessChain {
    let mut search = WitnessSearch::new(gens.to_vec(), budget);
    search.run_to_end();
    search.into_chain()
}

/// Per-generator action on a canonically labelled orbit together with the
/// sections at every point.
///
/// Labels are assigned breadth-first from the basepoint (label 0), generators
/// in index order. Since every point is reached from the basepoint by the
/// deterministic generator maps, two signatures admit a basepoint-preserving
/// intertwining bijection iff their `endomaps` and `sections` are identical.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Signature<S> {
    /// Orbit points by label.
    pub points: Vec<FiniteWord>,
    /// `endomaps[g][l]` is the label of `g·points[l]`.
    pub endomaps: Vec<Vec<usize>>,
    /// `sections[g][l]` is `g@points[l]`.
    pub sections: Vec<Vec<S>>,
}

/// Signature for generators that are single states; sections are states.
pub type OrbitSignature = Signature<StateId>;

impl<S> Signature<S> {
    pub fn size(&self) -> usize {
        self.points.len()
    }
}

fn label_orbit<S, F>(ngens: usize, v: &FiniteWord, cap: usize, mut act: F) -> Result<Signature<S>>
where
    F: FnMut(usize, &FiniteWord) -> (FiniteWord, S),
{
    let mut index: HashMap<FiniteWord, usize> = HashMap::from([(v.clone(), 0)]);
    let mut points = vec![v.clone()];
    let mut endomaps = vec![Vec::new(); ngens];
    let mut sections: Vec<Vec<S>> = (0..ngens).map(|_| Vec::new()).collect();
    let mut l = 0;
    while l < points.len() {
        for g in 0..ngens {
            let (image, sec) = act(g, &points[l]);
            let target = match index.get(&image) {
                Some(&t) => t,
                None => {
                    if points.len() >= cap {
                        return Err(Error::OrbitCap { cap });
                    }
                    index.insert(image.clone(), points.len());
                    points.push(image);
                    points.len() - 1
                }
            };
            endomaps[g].push(target);
            sections[g].push(sec);
        }
        l += 1;
    }
    Ok(Signature {
        points,
        endomaps,
        sections,
    })
}

pub fn orbit_signature(m: &MealyAutomaton, gens: &[StateId], v: &FiniteWord, cap: usize) -> Result<OrbitSignature> {
    label_orbit(gens.len(), v, cap, |g, w| m.act_word(gens[g], w))
}

/// Signature for arbitrary element generators; sections are canonical elements.
pub fn element_signature(gens: &[Element], v: &FiniteWord, cap: usize) -> Result<Signature<Element>> {
    label_orbit(gens.len(), v, cap, |g, w| {
        let (image, q) = gens[g].act_from(0, w.letters());
        (image, gens[g].rooted_at(q))
    })
}

/// True iff a basepoint-preserving bijection between the orbits intertwines
/// all generator maps and matches all sections.
pub fn signature_equal<S: PartialEq>(s1: &Signature<S>, s2: &Signature<S>) -> bool {
    s1.size() == s2.size() && s1.endomaps == s2.endomaps && s1.sections == s2.sections
}

/// Generator actions on a whole level `A^len`, with words coded in base `|A|`
/// (first letter most significant). Used for level-wide audits.
pub struct LevelMaps {
    pub arity: usize,
    pub len: usize,
    maps: Vec<Vec<u32>>,
}

impl LevelMaps {
    pub fn new(gens: &[Element], len: usize) -> Self {
        let arity = gens.first().map_or(1, Element::arity);
        let total = arity.pow(len as u32);
        let mut buf = Vec::with_capacity(len);
        let maps = gens
            .iter()
            .map(|g| {
                FiniteWord::all_of_length(arity, len)
                    .map(|w| {
                        g.act_into(w.letters(), &mut buf);
                        encode(arity, &buf) as u32
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
        debug_assert!(gens.is_empty() || total <= u32::MAX as usize);
        LevelMaps { arity, len, maps }
    }

    pub fn num_words(&self) -> usize {
        self.arity.pow(self.len as u32)
    }

    pub fn decode(&self, mut code: usize) -> FiniteWord {
        let mut v = vec![0; self.len];
        for slot in v.iter_mut().rev() {
            *slot = code % self.arity;
            code /= self.arity;
        }
        FiniteWord(v)
    }

    /// Orbit sizes of every word on the level, each capped at `cap + 1`.
    pub fn orbit_sizes(&self, cap: usize) -> Vec<usize> {
        let n = self.num_words();
        let mut stamp = vec![u32::MAX; n];
        let mut queue = Vec::new();
        (0..n)
            .map(|start| {
                let mark = start as u32;
                stamp[start] = mark;
                queue.clear();
                queue.push(start as u32);
                let mut head = 0;
                while head < queue.len() && queue.len() <= cap {
                    let w = queue[head] as usize;
                    head += 1;
                    for map in &self.maps {
                        let t = map[w];
                        if stamp[t as usize] != mark {
                            stamp[t as usize] = mark;
                            queue.push(t);
                        }
                    }
                }
                queue.len().min(cap + 1)
            })
            .collect()
    }
}

pub fn encode(arity: usize, w: &[Letter]) -> usize {
    w.iter().fold(0, |acc, &a| acc * arity + a)
}
