#![allow(dead_code)]

mod reference_table;

use std::collections::BTreeMap;

use orbitforge::symbolic::{Label, MarkovMap, PairType};

#[allow(unused_imports)]
pub use reference_table::REFERENCE_TABLE;

/// Label of integer node value `v` on a partition `1, 2, ..., N`.
pub fn label(v: u32) -> Label {
    Label(v - 1)
}

/// Pair type `j` (1-based) of the `b_{k,i,j,n}` indexing: `j(j+1)` except
/// `j = n` is `n(n+2)` and `j = n+1` is `(n+1)(2n+1)`.
pub fn indexed_pair(n: u32, j: u32) -> PairType {
    let (a, b) = if j == n {
        (n, n + 2)
    } else if j == n + 1 {
        (n + 1, 2 * n + 1)
    } else {
        (j, j + 1)
    };
    PairType::new(label(a), label(b))
}

/// Rules of the form `ab -> string`, keyed and valued by node values.
pub type RuleTable = BTreeMap<(u32, u32), Vec<u32>>;

/// `13 → 312, 31 → 213, 12 → 31, 21 → 13`.
pub fn three_point_rules() -> RuleTable {
    [
        ((1, 3), vec![3, 1, 2]),
        ((3, 1), vec![2, 1, 3]),
        ((1, 2), vec![3, 1]),
        ((2, 1), vec![1, 3]),
    ]
    .into_iter()
    .collect()
}

/// The four special rules for `f_n` plus `uv → f_n(u) f_n(v)` on the rest of
/// the `4n` ordered pairs.
pub fn family_rules(n: u32) -> RuleTable {
    let f = |x: u32| -> u32 {
        // Integer values of f_n: (n+1)(2n+1)(2n)...(n+2) n (n-1) ... 1.
        if x == 1 {
            n + 1
        } else if x <= n + 1 {
            2 * n + 3 - x
        } else {
            2 * n + 2 - x
        }
    };
    let mut rules = RuleTable::new();
    rules.insert((n, n + 2), vec![n + 3, n + 2, n]);
    rules.insert((n + 2, n), vec![n, n + 2, n + 3]);
    let mut down = vec![n + 2];
    down.extend((1..=n).rev());
    rules.insert((n + 1, 2 * n + 1), down.clone());
    down.reverse();
    rules.insert((2 * n + 1, n + 1), down);
    let plain = (1..n).chain(n + 2..=2 * n);
    for i in plain {
        rules.insert((i, i + 1), vec![f(i), f(i + 1)]);
        rules.insert((i + 1, i), vec![f(i + 1), f(i)]);
    }
    assert_eq!(rules.len() as u32, 4 * n);
    rules
}

/// Derived rules rendered with node values.
pub fn derived_rules(m: &MarkovMap) -> RuleTable {
    let rules = m.derive_rules().expect("Markov map");
    let value = |l: Label| -> u32 { m.render_label(l).parse().expect("integer node") };
    rules
        .iter()
        .map(|(&(a, b), rep)| ((value(a), value(b)), rep.labels().iter().map(|&l| value(l)).collect()))
        .collect()
}
