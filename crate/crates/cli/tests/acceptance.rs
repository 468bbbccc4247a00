//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p mealy-orbits-cli --test acceptance -- --nocapture`.

use std::collections::HashSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use mealy_orbits::catalog::{self, fig4_state, v_set};
use mealy_orbits::element::DEFAULT_TUPLE_BOUND;
use mealy_orbits::orbits::{generator_elements, LevelMaps, MDepthSolver};
use mealy_orbits::{
    decide, element_equal, element_of, enumerate, m_depth, orbit_finite, orbit_signature, signature_equal,
    witness_search, DecideBudgets, EnumBudget, FiniteWord, Letter, MealyAutomaton, StateId, StateWord,
    WitnessBudget,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Outcome,
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn all_states(m: &MealyAutomaton) -> Vec<StateWord> {
    (0..m.num_states()).map(StateWord::single).collect()
}

fn words_up_to(arity: usize, len: usize) -> impl Iterator<Item = FiniteWord> {
    (0..=len).flat_map(move |k| FiniteWord::all_of_length(arity, k))
}

fn random_state_word<R: Rng>(rng: &mut R, states: usize, max_len: usize) -> StateWord {
    let len = rng.random_range(1..=max_len);
    StateWord::new((0..len).map(|_| rng.random_range(0..states)).collect()).unwrap()
}

fn random_automaton<R: Rng>(rng: &mut R, max_states: usize, letters: std::ops::RangeInclusive<usize>) -> MealyAutomaton {
    let q = rng.random_range(1..=max_states);
    let a = rng.random_range(letters);
    catalog::random_with(rng, q, a)
}

/// Feeds the word one letter at a time through the tuple of states, rightmost first.
fn naive_image(m: &MealyAutomaton, s: &StateWord, u: &FiniteWord) -> (Vec<Letter>, Vec<StateId>) {
    let mut tuple = s.states().to_vec();
    let mut out = Vec::with_capacity(u.len());
    for &a in u.letters() {
        let mut letter = a;
        for slot in tuple.iter_mut().rev() {
            let (b, next) = m.step(*slot, letter);
            *slot = next;
            letter = b;
        }
        out.push(letter);
    }
    (out, tuple)
}

/// Compares two products on every word of length `≤ depth` by walking the
/// prefix tree. Subtrees are identified by the pair of raw section tuples, so
/// identical subtrees are visited once.
fn agree_to_depth(m: &MealyAutomaton, s1: &StateWord, s2: &StateWord, depth: usize) -> bool {
    let step_tuple = |tuple: &[StateId], a: Letter| {
        let mut next = tuple.to_vec();
        let mut letter = a;
        for slot in next.iter_mut().rev() {
            let (b, q) = m.step(*slot, letter);
            *slot = q;
            letter = b;
        }
        (letter, next)
    };
    let mut level: HashSet<(Vec<StateId>, Vec<StateId>)> = HashSet::from([(s1.states().to_vec(), s2.states().to_vec())]);
    let mut seen = level.clone();
    for _ in 0..depth {
        let mut next = HashSet::new();
        for (t1, t2) in &level {
            for a in 0..m.arity() {
                let (b1, n1) = step_tuple(t1, a);
                let (b2, n2) = step_tuple(t2, a);
                if b1 != b2 {
                    return false;
                }
                let pair = (n1, n2);
                if seen.insert(pair.clone()) {
                    next.insert(pair);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        level = next;
    }
    true
}

fn c1_action_oracle() -> Outcome {
    let mut rng = StdRng::seed_from_u64(1);
    let mut checked = 0u64;
    for n in 0..200 {
        let m = random_automaton(&mut rng, 3, 1..=3);
        let words: Vec<FiniteWord> = words_up_to(m.arity(), 6).collect();
        for _ in 0..4 {
            let s = random_state_word(&mut rng, m.num_states(), 4);
            for u in &words {
                let (image, section) = m.act_stateword(&s, u);
                let (naive, tuple) = naive_image(&m, &s, u);
                check(image.letters() == naive && section.states() == tuple, || {
                    format!("automaton #{n}, state word {s:?}, word {u:?}")
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (automaton, state word, word) triples agree"))
}

fn c2_element_equality_oracle() -> Outcome {
    let mut rng = StdRng::seed_from_u64(2);
    let (mut pairs, mut equal, mut exhaustive) = (0, 0, 0);
    for n in 0..100 {
        let m = random_automaton(&mut rng, 3, 1..=3);
        for _ in 0..10 {
            let s1 = random_state_word(&mut rng, m.num_states(), 4);
            let s2 = random_state_word(&mut rng, m.num_states(), 4);
            let e1 = element_of(&m, &s1, DEFAULT_TUPLE_BOUND).unwrap();
            let e2 = element_of(&m, &s2, DEFAULT_TUPLE_BOUND).unwrap();
            let depth = e1.num_states() + e2.num_states();
            let fast = element_equal(&e1, &e2).unwrap();
            let slow = agree_to_depth(&m, &s1, &s2, depth);
            check(fast == slow, || format!("automaton #{n}: {s1:?} vs {s2:?}: {fast} vs {slow}"))?;
            // Literal enumeration of every word where the level is small enough.
            if m.arity().checked_pow(depth as u32).is_some_and(|n| n <= 1 << 12) {
                let literal = words_up_to(m.arity(), depth).all(|u| naive_image(&m, &s1, &u).0 == naive_image(&m, &s2, &u).0);
                check(literal == fast, || format!("automaton #{n}: literal enumeration disagrees"))?;
                exhaustive += 1;
            }
            pairs += 1;
            equal += fast as usize;
        }
    }
    Ok(format!("{pairs} pairs ({equal} equal, {exhaustive} also enumerated word by word)"))
}

fn c3_fig1_goldens() -> Outcome {
    let m = catalog::fig1();
    let (t, s) = (m.state_index("t").unwrap(), m.state_index("s").unwrap());
    let goldens = [((t, 0), (0, s)), ((t, 1), (0, t)), ((s, 0), (1, s)), ((s, 1), (0, s))];
    for ((q, a), expected) in goldens {
        check(m.step(q, a) == expected, || format!("step({q}, {a}) = {:?}", m.step(q, a)))?;
    }
    let ss = element_of(&m, &StateWord::new(vec![s, s]).unwrap(), DEFAULT_TUPLE_BOUND).unwrap();
    check(ss.num_states() == 1 && ss.is_identity(), || "s.s is not the 1-state identity".into())?;
    Ok("4 transitions match; s.s is the 1-state identity".into())
}

fn c4_fig2_truncations() -> Outcome {
    let mut orders = Vec::new();
    for n in 1..=4 {
        let m = catalog::fig2(n);
        let gens = all_states(&m);
        let v = decide(&m, &gens, DecideBudgets::default()).unwrap();
        let mealy_orbits::finiteness::Outcome::Finite { order, report } = &v.outcome else {
            return Err(format!("fig2({n}) not certified finite"));
        };
        check(report.closed, || format!("fig2({n}) report not closed"))?;
        let elems = generator_elements(&m, &gens, DEFAULT_TUPLE_BOUND).unwrap();
        for u in words_up_to(3, 8) {
            let size = orbit_finite(&elems, &u, 100).unwrap().len();
            check(size <= 3, || format!("fig2({n}): orbit of {u:?} has {size} points"))?;
        }
        orders.push(*order);
    }
    Ok(format!("orders {orders:?}; every orbit up to depth 8 has at most 3 points"))
}

fn c5_fig4_transitivity() -> Outcome {
    let m = catalog::fig4(3);
    let elems = generator_elements(&m, &all_states(&m), DEFAULT_TUPLE_BOUND).unwrap();
    for i in 1..=3 {
        let v = v_set(i);
        for w in &v {
            let orbit = orbit_finite(&elems, w, 100_000).unwrap();
            for target in &v {
                check(orbit.contains(target), || format!("V_{i}: {target:?} not in orbit of {w:?}"))?;
            }
        }
    }
    Ok("for i = 1, 2, 3 each orbit contains all 2^i words of V_i".into())
}

fn c6_fig4_section_locality() -> Outcome {
    let m = catalog::fig4(3);
    let mut checked = 0;
    for i in 1..=3 {
        for j in 1..=i * i {
            for big_m in (1..=3).filter(|&k| k != i) {
                for x in 0..2 {
                    for y in 0..2 {
                        let mut w = vec![x];
                        w.extend(std::iter::repeat_n(2, big_m - 1));
                        w.push(y);
                        let (_, section) = m.act_word(fig4_state(i, j), &FiniteWord(w.clone()));
                        check(section == 0, || format!("a{i}_{j} @ {w:?} = {}", m.state_name(section)))?;
                        checked += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{checked} sections equal e"))
}

fn c7_adding_machine() -> Outcome {
    let m = catalog::adding_machine();
    let a = vec![StateWord::single(0)];
    let budget = EnumBudget {
        max_elements: 1000,
        max_length: 100_000,
        ..EnumBudget::default()
    };
    let report = enumerate(&m, &a, budget).unwrap();
    check(!report.closed, || "adding machine closed".into())?;
    let found = report.witnesses.as_ref().map_or(0, Vec::len);
    check(found == 1000, || format!("stopped at {found} elements"))?;
    let elems = generator_elements(&m, &a, DEFAULT_TUPLE_BOUND).unwrap();
    let chain = witness_search(
        &elems,
        WitnessBudget {
            max_depth: 10,
            ..WitnessBudget::default()
        },
    );
    let expected: Vec<usize> = (1..=10).map(|k| 1 << k).collect();
    check(chain.orbit_sizes == expected, || format!("chain {:?}", chain.orbit_sizes))?;
    Ok("not closed at 1000 elements; chain 2, 4, ..., 1024".into())
}

fn c8_depth_recursion() -> Outcome {
    let mut rng = StdRng::seed_from_u64(8);
    let mut checks = 0;
    for n in 0..50 {
        let m = random_automaton(&mut rng, 3, 2..=3);
        let elems = generator_elements(&m, &all_states(&m), DEFAULT_TUPLE_BOUND).unwrap();
        let len = rng.random_range(0..=3);
        let v = FiniteWord((0..len).map(|_| rng.random_range(0..m.arity())).collect());
        for d in 0..=3 {
            let whole = m_depth(&elems, &v, d + 1, 1_000_000).value;
            let children = (0..m.arity())
                .map(|a| m_depth(&elems, &v.with_letter(a), d, 1_000_000).value)
                .max()
                .unwrap();
            let brute = FiniteWord::all_of_length(m.arity(), d + 1)
                .map(|w| orbit_finite(&elems, &v.concat(&w), 1_000_000).unwrap().len())
                .max()
                .unwrap();
            check(whole == children && whole == brute, || {
                format!("automaton #{n}, v {v:?}, d {d}: {whole} / {children} / {brute}")
            })?;
            checks += 1;
        }
    }
    Ok(format!("{checks} identities hold (also against direct maximisation)"))
}

fn c9_signature_consequence() -> Outcome {
    let mut rng = StdRng::seed_from_u64(9);
    let (mut equal_pairs, mut comparisons) = (0, 0);
    for n in 0..50 {
        let m = random_automaton(&mut rng, 3, 2..=3);
        let states: Vec<StateId> = (0..m.num_states()).collect();
        let elems = generator_elements(&m, &all_states(&m), DEFAULT_TUPLE_BOUND).unwrap();
        let mut solver = MDepthSolver::new(elems, 1_000_000);
        let extensions: Vec<FiniteWord> = words_up_to(m.arity(), 2).collect();
        for len in 0..=3 {
            let level: Vec<FiniteWord> = FiniteWord::all_of_length(m.arity(), len).collect();
            let sigs: Vec<_> = level
                .iter()
                .map(|v| orbit_signature(&m, &states, v, 1_000_000).unwrap())
                .collect();
            for (i, v1) in level.iter().enumerate() {
                for (j, v2) in level.iter().enumerate().skip(i + 1) {
                    if !signature_equal(&sigs[i], &sigs[j]) {
                        continue;
                    }
                    equal_pairs += 1;
                    for w in &extensions {
                        for d in 0..=3 {
                            let x = solver.value(&v1.concat(w), d).value;
                            let y = solver.value(&v2.concat(w), d).value;
                            check(x == y, || format!("automaton #{n}: {v1:?}, {v2:?}, w {w:?}, d {d}: {x} != {y}"))?;
                            comparisons += 1;
                        }
                    }
                }
            }
        }
    }
    check(equal_pairs > 0, || "no pair with equal signatures was found".into())?;
    Ok(format!("{equal_pairs} signature-equal pairs, {comparisons} comparisons, 0 violations"))
}

fn c10_theorem_audit() -> Outcome {
    let mut rng = StdRng::seed_from_u64(10);
    let budgets = DecideBudgets {
        enumeration: EnumBudget {
            max_elements: 2000,
            max_length: 40,
            ..EnumBudget::default()
        },
        witness: WitnessBudget {
            max_depth: 6,
            lookahead: 1,
            orbit_cap: 5000,
        },
        slice: 500,
    };
    let (mut finite, mut audited_words) = (0, 0u64);
    for n in 0..100 {
        let m = random_automaton(&mut rng, 3, 2..=3);
        let gens = all_states(&m);
        let v = decide(&m, &gens, budgets).unwrap();
        let Some(order) = v.order() else { continue };
        finite += 1;
        let elems = generator_elements(&m, &gens, DEFAULT_TUPLE_BOUND).unwrap();
        for depth in 0..=10 {
            let level = LevelMaps::new(&elems, depth);
            for (code, size) in level.orbit_sizes(order + 1).into_iter().enumerate() {
                check(size <= order + 1, || {
                    format!("automaton #{n} (order {order}): orbit of {:?} exceeds", level.decode(code))
                })?;
                audited_words += 1;
            }
        }
    }
    check(finite > 0, || "no automaton was certified finite".into())?;
    Ok(format!("{finite} finite verdicts audited over {audited_words} words"))
}

fn c11_cli_determinism() -> Outcome {
    let catalogs = ["fig1", "fig2:2", "fig3:2", "fig4:2", "adding", "identity:2"];
    let mut runs = 0;
    for cat in catalogs {
        let m = catalog::by_name(cat).unwrap();
        let first = m.state_name(0).to_owned();
        let word = m.alphabet().name(0).repeat(3);
        let commands: Vec<Vec<&str>> = vec![
            vec!["validate"],
            vec!["act", "--element", &first, "--word", &word],
            vec!["act", "--element", &first, "--upword", "(0)"],
            vec!["orbit", "--word", &word],
            vec!["enumerate", "--max-elements", "300"],
            vec!["witness", "--depth", "6"],
            vec!["finiteness", "--max-elements", "300", "--depth", "6", "--check-depth", "4"],
            vec!["signature", "--word", &word],
            vec!["export-dot"],
        ];
        for cmd in &commands {
            let mut outputs = Vec::new();
            for _ in 0..3 {
                let out = Command::new(env!("CARGO_BIN_EXE_mealy-orbits"))
                    .args(cmd)
                    .args(["--catalog", cat, "--json"])
                    .output()
                    .map_err(|e| e.to_string())?;
                check(out.status.success(), || {
                    format!("{cat} {cmd:?}: {}", String::from_utf8_lossy(&out.stderr))
                })?;
                outputs.push(out.stdout);
                runs += 1;
            }
            check(outputs.windows(2).all(|w| w[0] == w[1]), || format!("{cat} {cmd:?} output varies"))?;
        }
    }
    Ok(format!("{runs} runs, byte-identical per command"))
}

#[test]
fn acceptance() {
    let criteria = [
        Criterion { id: 1, name: "action correctness oracle", limit: Some(Duration::from_secs(10)), run: c1_action_oracle },
        Criterion { id: 2, name: "element equality oracle", limit: Some(Duration::from_secs(60)), run: c2_element_equality_oracle },
        Criterion { id: 3, name: "Moore diagram goldens", limit: None, run: c3_fig1_goldens },
        Criterion { id: 4, name: "fig2 truncations finite with bounded orbits", limit: Some(Duration::from_secs(60)), run: c4_fig2_truncations },
        Criterion { id: 5, name: "fig4 transitivity on V_i", limit: Some(Duration::from_secs(60)), run: c5_fig4_transitivity },
        Criterion { id: 6, name: "fig4 section locality", limit: None, run: c6_fig4_section_locality },
        Criterion { id: 7, name: "adding machine evidence arm", limit: Some(Duration::from_secs(30)), run: c7_adding_machine },
        Criterion { id: 8, name: "depth recursion identity", limit: None, run: c8_depth_recursion },
        Criterion { id: 9, name: "equal signatures give equal depth values", limit: None, run: c9_signature_consequence },
        Criterion { id: 10, name: "finite verdicts have bounded orbits", limit: None, run: c10_theorem_audit },
        Criterion { id: 11, name: "CLI determinism", limit: None, run: c11_cli_determinism },
    ];
    let mut failures = Vec::new();
    for c in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let elapsed = start.elapsed();
        let result = match (result, c.limit) {
            (Ok(_), Some(limit)) if elapsed > limit => Err(format!("took {elapsed:.2?}, limit {limit:?}")),
            (r, _) => r,
        };
        match &result {
            Ok(detail) => println!("PASS [{:>2}] {}: {detail} ({elapsed:.2?})", c.id, c.name),
            Err(why) => {
                println!("FAIL [{:>2}] {}: {why} ({elapsed:.2?})", c.id, c.name);
                failures.push(c.id);
            }
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
