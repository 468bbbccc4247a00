//! Builders for reference automata.
//!
//! Families that are infinite in their original form are built as finite
//! truncations; every edge that would leave the truncation goes to the
//! identity state instead.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::automaton::{Alphabet, MealyAutomaton};
use crate::error::{Error, Result};
use crate::word::FiniteWord;
use crate::{Letter, StateId};

fn assemble(letters: usize, states: Vec<String>, rows: Vec<Vec<(Letter, StateId)>>) -> MealyAutomaton {
    MealyAutomaton::new(Alphabet::numeric(letters), states, rows).expect("catalog automaton is valid")
}

/// Two states `t, s` over `{0, 1}`: `s` swaps both letters and stays in `s`;
/// `t` maps `1 ↦ 0` staying in `t` and `0 ↦ 0` moving to `s`.
pub fn fig1() -> MealyAutomaton {
    let (t, s) = (0, 1);
    assemble(
        2,
        vec!["t".into(), "s".into()],
        vec![vec![(0, s), (0, t)], vec![(1, s), (0, s)]],
    )
}

/// States `a1..an, 1` over `{0, 1, 2}`. `a1` swaps `0` and `1`; `ak` for `k ≥ 2`
/// passes over a leading `2` into `a(k-1)`; all other edges go to the identity `1`.
pub fn fig2(n: usize) -> MealyAutomaton {
    assert!(n >= 1);
    let id = n;
    let mut states: Vec<String> = (1..=n).map(|k| format!("a{k}")).collect();
    states.push("1".into());
    let mut rows = Vec::with_capacity(n + 1);
    rows.push(vec![(1, id), (0, id), (2, id)]);
    for k in 2..=n {
        rows.push(vec![(0, id), (1, id), (2, k - 2)]);
    }
    rows.push(vec![(0, id), (1, id), (2, id)]);
    assemble(3, states, rows)
}

/// States `x0..xn, a1..an, 1` over `{0, 1}`.
///
/// `x0` sends `1` to the identity and reads `0` into `x1`; `xk` reads `0` into
/// `x(k+1)` and `1` into `ak`; `xn` reads `0` into the identity (truncation).
/// `a1` swaps letters into the identity; `ak` maps `0 ↦ 1` into the identity
/// and `1 ↦ 0` into `a(k-1)`.
pub fn fig3(n: usize) -> MealyAutomaton {
    assert!(n >= 1);
    let x = |k: usize| k;
    let a = |k: usize| n + k;
    let id = 2 * n + 1;
    let mut states: Vec<String> = (0..=n).map(|k| format!("x{k}")).collect();
    states.extend((1..=n).map(|k| format!("a{k}")));
    states.push("1".into());
    let mut rows = Vec::with_capacity(2 * n + 2);
    rows.push(vec![(0, x(1)), (1, id)]);
    for k in 1..n {
        rows.push(vec![(0, x(k + 1)), (1, a(k))]);
    }
    rows.push(vec![(0, id), (1, a(n))]);
    rows.push(vec![(1, id), (0, id)]);
    for k in 2..=n {
        rows.push(vec![(1, id), (0, a(k - 1))]);
    }
    rows.push(vec![(0, id), (1, id)]);
    assemble(2, states, rows)
}

/// Index of `a_ij` in [`fig4`], with `a_i0` meaning the identity `e` (index 0).
pub fn fig4_state(i: usize, j: usize) -> StateId {
    if j == 0 {
        0
    } else {
        1 + (1..i).map(|k| k * k).sum::<usize>() + (j - 1)
    }
}

/// States `e` and `a_ij` (`1 ≤ i ≤ big_n`, `1 ≤ j ≤ i²`) over `{0, 1, 2}`, named `ai_j`.
///
/// When `j ≡ 1 (mod i)`, `a_ij` swaps `0`/`1` moving to `a_i(j-1)` and fixes `2`
/// moving to `e`; otherwise it fixes `0`/`1` moving to `e` and fixes `2` moving
/// to `a_i(j-1)`. Here `a_i0 = e`.
pub fn fig4(big_n: usize) -> MealyAutomaton {
    assert!(big_n >= 1);
    let mut states = vec!["e".to_owned()];
    let mut rows = vec![vec![(0, 0), (1, 0), (2, 0)]];
    for i in 1..=big_n {
        for j in 1..=i * i {
            states.push(format!("a{i}_{j}"));
            let prev = fig4_state(i, j - 1);
            rows.push(if j % i == 1 % i {
                vec![(1, prev), (0, prev), (2, 0)]
            } else {
                vec![(0, 0), (1, 0), (2, prev)]
            });
        }
    }
    assemble(3, states, rows)
}

/// Binary odometer: states `a, e` over `{0, 1}`; `a` adds one with carry, `e` is the identity.
pub fn adding_machine() -> MealyAutomaton {
    assemble(
        2,
        vec!["a".into(), "e".into()],
        vec![vec![(1, 1), (0, 0)], vec![(0, 1), (1, 1)]],
    )
}

/// One identity state `e` over `{0, ..., letters-1}`.
pub fn identity(letters: usize) -> MealyAutomaton {
    assemble(letters, vec!["e".into()], vec![(0..letters).map(|a| (a, 0)).collect()])
}

/// A uniformly random complete automaton with numeric names `q0, q1, ...`.
pub fn random(seed: u64, states: usize, letters: usize) -> MealyAutomaton {
    let mut rng = StdRng::seed_from_u64(seed);
    random_with(&mut rng, states, letters)
}

pub fn random_with<R: Rng>(rng: &mut R, states: usize, letters: usize) -> MealyAutomaton {
    let rows = (0..states)
        .map(|_| {
            (0..letters)
                .map(|_| (rng.random_range(0..letters), rng.random_range(0..states)))
                .collect()
        })
        .collect();
    assemble(letters, (0..states).map(|q| format!("q{q}")).collect(), rows)
}

/// Words `a_1 ⋯ a_{i²}` with `a_k ∈ {0, 1}` when `k ≡ 1 (mod i)` and `a_k = 2`
/// otherwise, in lexicographic order.
pub fn v_set(i: usize) -> Vec<FiniteWord> {
    assert!(i >= 1);
    let len = i * i;
    let free: Vec<usize> = (0..len).filter(|k| (k + 1) % i == 1 % i).collect();
    (0..1usize << free.len())
        .map(|bits| {
            let mut w = vec![2; len];
            for (n, &pos) in free.iter().enumerate() {
                w[pos] = (bits >> (free.len() - 1 - n)) & 1;
            }
            FiniteWord(w)
        })
        .collect()
}

/// Catalog names accepted by [`by_name`].
pub const NAMES: &[&str] = &["fig1", "fig2:N", "fig3:N", "fig4:N", "adding", "identity[:K]"];

/// Resolves `name[:param]`, e.g. `fig2:3` or `adding`.
pub fn by_name(query: &str) -> Result<MealyAutomaton> {
    let unknown = || Error::UnknownCatalog(query.to_owned());
    let (name, param) = match query.split_once(':') {
        Some((n, p)) => (n, Some(p.parse::<usize>().map_err(|_| unknown())?)),
        None => (query, None),
    };
    let positive = |p: Option<usize>| p.filter(|&n| n >= 1).ok_or_else(unknown);
    Ok(match name {
        "fig1" if param.is_none() => fig1(),
        "fig2" => fig2(positive(param)?),
        "fig3" => fig3(positive(param)?),
        "fig4" => fig4(positive(param)?),
        "adding" | "adding_machine" if param.is_none() => adding_machine(),
        "identity" => identity(positive(param.or(Some(2)))?),
        _ => return Err(unknown()),
    })
}

/// Catalog entries shipped as files under `data/`.
pub const SHIPPED: &[(&str, &str)] = &[
    ("fig1", "fig1.json"),
    ("fig2:2", "fig2_2.json"),
    ("fig2:3", "fig2_3.json"),
    ("fig3:2", "fig3_2.json"),
    ("fig4:2", "fig4_2.json"),
    ("fig4:3", "fig4_3.json"),
    ("adding", "adding_machine.json"),
    ("identity:2", "identity_2.json"),
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fig2_edges() {
        let m = fig2(2);
        let (a1, a2, one) = (0, 1, 2);
        assert_eq!(m.step(a2, 2), (2, a1));
        assert_eq!(m.step(a1, 0), (1, one));
        assert_eq!(m.state_name(one), "1");
        let m1 = fig2(1);
        assert_eq!(m1.num_states(), 2);
        assert_eq!(m1.step(0, 1), (0, 1));
    }

    #[test]
    fn fig3_edges() {
        let m = fig3(2);
        let idx = |n: &str| m.state_index(n).unwrap();
        assert_eq!(m.step(idx("x0"), 1), (1, idx("1")));
        assert_eq!(m.step(idx("a1"), 0), (1, idx("1")));
        assert_eq!(m.step(idx("a1"), 1), (0, idx("1")));
        assert_eq!(m.step(idx("x0"), 0), (0, idx("x1")));
        assert_eq!(m.step(idx("x1"), 1), (1, idx("a1")));
        assert_eq!(m.step(idx("x2"), 0), (0, idx("1")));
        assert_eq!(m.step(idx("a2"), 1), (0, idx("a1")));
    }

    #[test]
    fn fig4_edges() {
        let m = fig4(2);
        let idx = |n: &str| m.state_index(n).unwrap();
        assert_eq!(m.num_states(), 1 + 1 + 4);
        assert_eq!(m.step(idx("a2_1"), 0), (1, idx("e")));
        assert_eq!(m.step(idx("a2_2"), 2), (2, idx("a2_1")));
        assert_eq!(m.step(idx("a2_3"), 1), (0, idx("a2_2")));
        let m1 = fig4(1);
        let a11 = m1.state_index("a1_1").unwrap();
        assert_eq!(m1.step(a11, 0), (1, 0));
        assert_eq!(m1.step(a11, 1), (0, 0));
        assert_eq!(m1.step(a11, 2), (2, 0));
        let m3 = fig4(3);
        for i in 1..=3 {
            for j in 1..=i * i {
                assert_eq!(m3.state_name(fig4_state(i, j)), format!("a{i}_{j}"));
            }
        }
    }

    #[test]
    fn adding_machine_edges() {
        let m = adding_machine();
        assert_eq!(m.act_word(0, &vec![1, 1].into()), (vec![0, 0].into(), 0));
        assert_eq!(m.act_word(0, &vec![0].into()), (vec![1].into(), 1));
        assert_eq!(m.act_word(1, &vec![0, 1, 1].into()), (vec![0, 1, 1].into(), 1));
    }

    #[test]
    fn v_sets() {
        assert_eq!(v_set(1), vec![FiniteWord(vec![0]), FiniteWord(vec![1])]);
        let v2 = v_set(2);
        assert_eq!(
            v2,
            [[0, 2, 0, 2], [0, 2, 1, 2], [1, 2, 0, 2], [1, 2, 1, 2]]
                .map(|w| FiniteWord(w.to_vec()))
                .to_vec()
        );
        for i in 1..=4 {
            let v = v_set(i);
            assert_eq!(v.len(), 1 << i);
            assert!(v.iter().all(|w| w.len() == i * i));
            assert!(v.windows(2).all(|p| p[0] < p[1]));
        }
    }

    #[test]
    fn names_resolve() {
        assert_eq!(by_name("fig2:3").unwrap(), fig2(3));
        assert_eq!(by_name("identity").unwrap(), identity(2));
        assert!(by_name("fig2").is_err());
        assert!(by_name("fig2:0").is_err());
        assert!(by_name("nope").is_err());
        for (name, _) in SHIPPED {
            by_name(name).unwrap();
        }
    }
}
