//! Symbolic representations of Markov piecewise-linear maps.
//!
//! A Markov map sends every node onto a node, so the graph of each iterate is
//! described by the sequence of node values it passes through. Replacing each
//! adjacent pair `ab` of that sequence by the base map's graph over `[a:b]`
//! yields the sequence for the next iterate. Tracking only *how many* branches
//! of each pair type sit over each base interval turns the string rewriting
//! into a linear recursion, and summing the branches whose value span covers
//! their interval counts the solutions of `f^k(x) = x`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::plmap::{is_integer, ExactRational, PlMap};

/// Default ceiling on representation length during expansion.
pub const DEFAULT_LABEL_CAP: usize = 10_000_000;

/// Default ceiling on the size of a refined Markov partition.
pub const DEFAULT_PARTITION_CAP: usize = 1024;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymbolicError {
    #[error("the orbit of node {index} does not close up (reached {y})")]
    NotMarkov { index: usize, y: ExactRational },
    #[error("restriction needs u < v, got {u} and {v}")]
    EmptyRestriction { u: usize, v: usize },
    #[error("label {0} is not a node of the map")]
    UnknownLabel(usize),
    #[error("no substitution rule for the pair {0}{1}")]
    MissingRule(Label, Label),
    #[error("representation would exceed {cap} labels")]
    LabelCap { cap: usize },
    #[error("representation needs at least two labels with no repeats side by side")]
    BadRepresentation,
    #[error("located counts have {got:?} cells but the mask has {want:?}")]
    DimensionMismatch {
        got: (usize, usize),
        want: (usize, usize),
    },
    #[error("cannot parse {0:?} as a label")]
    Parse(String),
}

/// A node of the base partition, by position (0-based) in the node list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(pub u32);

impl Label {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// An unordered pair of distinct labels, stored with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PairType {
    pub lo: Label,
    pub hi: Label,
}

impl PairType {
    pub fn new(a: Label, b: Label) -> Self {
        debug_assert_ne!(a, b);
        if a < b {
            Self { lo: a, hi: b }
        } else {
            Self { lo: b, hi: a }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Representation {
    labels: Vec<Label>,
}

impl Representation {
    pub fn new(labels: Vec<Label>) -> Result<Self, SymbolicError> {
        if labels.len() < 2 || labels.windows(2).any(|w| w[0] == w[1]) {
            return Err(SymbolicError::BadRepresentation);
        }
        Ok(Self { labels })
    }

    /// Drops consecutive repeats (constant pieces).
    fn merged(mut labels: Vec<Label>) -> Self {
        labels.dedup();
        Self { labels }
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn reversed(&self) -> Self {
        let mut labels = self.labels.clone();
        labels.reverse();
        Self { labels }
    }

    pub fn pairs(&self) -> impl Iterator<Item = (Label, Label)> + '_ {
        self.labels.windows(2).map(|w| (w[0], w[1]))
    }
}

/// Replacement string for every ordered adjacent pair reachable from the base
/// representation, plus the pair-type transition counts they induce.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubstitutionRules {
    rules: BTreeMap<(Label, Label), Representation>,
    universe: Vec<PairType>,
    /// `transition[j][j2]`: branches of type `j2` produced by one of type `j`.
    transition: Vec<Vec<u32>>,
}

impl SubstitutionRules {
    pub fn get(&self, a: Label, b: Label) -> Option<&Representation> {
        self.rules.get(&(a, b))
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(Label, Label), &Representation)> {
        self.rules.iter()
    }

    /// Pair types reachable from the base representation, sorted.
    pub fn universe(&self) -> &[PairType] {
        &self.universe
    }

    pub fn transition(&self) -> &[Vec<u32>] {
        &self.transition
    }

    fn pair_index(&self, p: PairType) -> Option<usize> {
        self.universe.binary_search(&p).ok()
    }
}

/// Branch counts `counts[i][j]`: branches of pair type `universe[j]` lying
/// over base interval `i` in the representation of the `step`-th iterate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocatedCounts {
    pub step: u32,
    pub universe: Vec<PairType>,
    pub counts: Vec<Vec<BigUint>>,
}

impl LocatedCounts {
    pub fn get(&self, interval: usize, pair: PairType) -> BigUint {
        match self.universe.binary_search(&pair) {
            Ok(j) => self.counts[interval][j].clone(),
            Err(_) => BigUint::zero(),
        }
    }

    pub fn total(&self) -> BigUint {
        self.counts.iter().flatten().sum()
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.counts.len(), self.universe.len())
    }
}

/// `selected[i][j]` is set when the value span of pair type `j` covers base
/// interval `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossingMask {
    pub universe: Vec<PairType>,
    pub selected: Vec<Vec<bool>>,
}

impl CrossingMask {
    pub fn cells(&self) -> Vec<(usize, PairType)> {
        let mut out = Vec::new();
        for (i, row) in self.selected.iter().enumerate() {
            for (j, &on) in row.iter().enumerate() {
                if on {
                    out.push((i, self.universe[j]));
                }
            }
        }
        out
    }
}

/// A representation whose nodes also carry exact x-coordinates; used to check
/// the count recursion against actual branch positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocatedRepresentation {
    pub xs: Vec<ExactRational>,
    pub labels: Vec<Label>,
}

/// The combinatorial view of a Markov [`PlMap`].
#[derive(Debug, Clone)]
pub struct MarkovMap {
    map: PlMap,
    xs: Vec<ExactRational>,
    /// Label of `f(x_i)` for every node, before merging repeats.
    node_labels: Vec<Label>,
}

impl MarkovMap {
    /// Builds the combinatorial view, refining the node set to the smallest
    /// forward-invariant set containing the given nodes.
    ///
    /// Maps whose node orbits do not close up within
    /// [`DEFAULT_PARTITION_CAP`] points are rejected as non-Markov.
    pub fn new(map: &PlMap) -> Result<Self, SymbolicError> {
        Self::with_partition_cap(map, DEFAULT_PARTITION_CAP)
    }

    pub fn with_partition_cap(map: &PlMap, cap: usize) -> Result<Self, SymbolicError> {
        let mut points: BTreeSet<ExactRational> = map.nodes().iter().map(|n| n.x.clone()).collect();
        let mut frontier: Vec<(usize, ExactRational)> = map
            .nodes()
            .iter()
            .enumerate()
            .map(|(i, n)| (i, n.x.clone()))
            .collect();
        while let Some((origin, x)) = frontier.pop() {
            let y = map.evaluate(&x).expect("closure stays in the domain");
            if points.contains(&y) {
                continue;
            }
            if points.len() >= cap {
                return Err(SymbolicError::NotMarkov { index: origin, y });
            }
            points.insert(y.clone());
            frontier.push((origin, y));
        }
        let refined = map
            .refine(points.iter().cloned())
            .expect("refinement keeps the map valid");
        let xs: Vec<ExactRational> = points.into_iter().collect();
        let node_labels = refined
            .nodes()
            .iter()
            .map(|n| Label(xs.binary_search(&n.y).expect("closed under the map") as u32))
            .collect();
        Ok(Self {
            map: refined,
            xs,
            node_labels,
        })
    }

    pub fn map(&self) -> &PlMap {
        &self.map
    }

    pub fn node_xs(&self) -> &[ExactRational] {
        &self.xs
    }

    pub fn interval_count(&self) -> usize {
        self.xs.len() - 1
    }

    pub fn value(&self, label: Label) -> &ExactRational {
        &self.xs[label.index()]
    }

    pub fn label_of(&self, x: &ExactRational) -> Option<Label> {
        self.xs.binary_search(x).ok().map(|i| Label(i as u32))
    }

    pub fn render_label(&self, label: Label) -> String {
        self.value(label).to_string()
    }

    /// Comma-separated node values, e.g. `3,1,2`.
    pub fn render(&self, rep: &Representation) -> String {
        let parts: Vec<String> = rep.labels.iter().map(|&l| self.render_label(l)).collect();
        parts.join(",")
    }

    pub fn render_pair(&self, p: PairType) -> String {
        format!("{}-{}", self.render_label(p.lo), self.render_label(p.hi))
    }

    pub fn parse(&self, text: &str) -> Result<Representation, SymbolicError> {
        let mut labels = Vec::new();
        for part in text.split(',') {
            let part = part.trim();
            let q: ExactRational = part
                .parse()
                .map_err(|_| SymbolicError::Parse(part.to_string()))?;
            labels.push(
                self.label_of(&q)
                    .ok_or_else(|| SymbolicError::Parse(part.to_string()))?,
            );
        }
        Representation::new(labels)
    }

    /// Node values of the base map, repeats merged.
    pub fn base_representation(&self) -> Representation {
        Representation::merged(self.node_labels.clone())
    }

    /// The graph of the base map over `[x_u, x_v]`, `u < v`.
    pub fn restrict(&self, u: Label, v: Label) -> Result<Representation, SymbolicError> {
        restrict(&self.node_labels, u, v)
    }

    /// Rule for the ordered pair `ab`: the restriction to `[a:b]`, read from
    /// `a` towards `b`.
    fn rule_for(&self, a: Label, b: Label) -> Result<Representation, SymbolicError> {
        if a < b {
            self.restrict(a, b)
        } else {
            Ok(self.restrict(b, a)?.reversed())
        }
    }

    /// Rules for every ordered pair reachable from the base representation.
    pub fn derive_rules(&self) -> Result<SubstitutionRules, SymbolicError> {
        let mut rules = BTreeMap::new();
        let mut pending: Vec<(Label, Label)> = self.base_representation().pairs().collect();
        while let Some((a, b)) = pending.pop() {
            if rules.contains_key(&(a, b)) {
                continue;
            }
            let rep = self.rule_for(a, b)?;
            pending.extend(rep.pairs().filter(|p| !rules.contains_key(p)));
            // The reversed pair always has the reversed rule.
            if !rules.contains_key(&(b, a)) {
                pending.push((b, a));
            }
            rules.insert((a, b), rep);
        }
        let universe: Vec<PairType> = rules
            .keys()
            .map(|&(a, b)| PairType::new(a, b))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let mut transition = vec![vec![0u32; universe.len()]; universe.len()];
        for (j, p) in universe.iter().enumerate() {
            let rep = &rules[&(p.lo, p.hi)];
            for (a, b) in rep.pairs() {
                let j2 = universe
                    .binary_search(&PairType::new(a, b))
                    .expect("rule pairs are in the closure");
                transition[j][j2] += 1;
            }
        }
        Ok(SubstitutionRules {
            rules,
            universe,
            transition,
        })
    }

    /// One rewriting step: each adjacent pair is replaced by its rule, with
    /// the shared endpoints of neighbouring replacements merged.
    pub fn expand(
        &self,
        rep: &Representation,
        rules: &SubstitutionRules,
    ) -> Result<Representation, SymbolicError> {
        self.expand_with_cap(rep, rules, DEFAULT_LABEL_CAP)
    }

    pub fn expand_with_cap(
        &self,
        rep: &Representation,
        rules: &SubstitutionRules,
        cap: usize,
    ) -> Result<Representation, SymbolicError> {
        let mut out: Vec<Label> = Vec::new();
        for (a, b) in rep.pairs() {
            let r = rules.get(a, b).ok_or(SymbolicError::MissingRule(a, b))?;
            let skip = usize::from(!out.is_empty());
            debug_assert!(out.is_empty() || out.last() == r.labels.first());
            if out.len() + r.labels.len() - skip > cap {
                return Err(SymbolicError::LabelCap { cap });
            }
            out.extend_from_slice(&r.labels[skip..]);
        }
        Ok(Representation::merged(out))
    }

    /// Representation of the `k`-th iterate, by `k - 1` expansions.
    pub fn representation(
        &self,
        k: u32,
        rules: &SubstitutionRules,
        cap: usize,
    ) -> Result<Representation, SymbolicError> {
        let mut rep = self.base_representation();
        for _ in 1..k {
            rep = self.expand_with_cap(&rep, rules, cap)?;
        }
        Ok(rep)
    }

    /// Step-1 counts: each branch of the base map, located at its own interval.
    pub fn initial_counts(&self, rules: &SubstitutionRules) -> LocatedCounts {
        let universe = rules.universe.clone();
        let mut counts = vec![vec![BigUint::zero(); universe.len()]; self.interval_count()];
        for (i, w) in self.node_labels.windows(2).enumerate() {
            if w[0] != w[1] {
                let j = rules
                    .pair_index(PairType::new(w[0], w[1]))
                    .expect("base pairs are in the closure");
                counts[i][j] += 1u32;
            }
        }
        LocatedCounts {
            step: 1,
            universe,
            counts,
        }
    }

    /// Advances located counts by one iterate. Locations are kept; each
    /// branch type is replaced by the types its rule produces.
    pub fn step_counts(&self, counts: &LocatedCounts, rules: &SubstitutionRules) -> LocatedCounts {
        step_counts(counts, rules)
    }

    /// Counts for steps `1..=k_max`.
    pub fn count_sequence(&self, rules: &SubstitutionRules, k_max: u32) -> Vec<LocatedCounts> {
        let mut out: Vec<LocatedCounts> = Vec::with_capacity(k_max as usize);
        if k_max == 0 {
            return out;
        }
        out.push(self.initial_counts(rules));
        for _ in 1..k_max {
            let next = step_counts(out.last().expect("non-empty"), rules);
            out.push(next);
        }
        out
    }

    pub fn crossing_mask(&self, rules: &SubstitutionRules) -> CrossingMask {
        let universe = rules.universe.clone();
        let selected = (0..self.interval_count())
            .map(|i| {
                universe
                    .iter()
                    .map(|p| p.lo.index() <= i && p.hi.index() > i)
                    .collect()
            })
            .collect();
        CrossingMask { universe, selected }
    }

    /// The `k`-th representation with exact node positions, starting from the
    /// base nodes and placing each rule's interior nodes at the preimages of
    /// the base nodes they came from.
    pub fn located_representation(
        &self,
        k: u32,
        cap: usize,
    ) -> Result<LocatedRepresentation, SymbolicError> {
        let mut xs = self.xs.clone();
        let mut labels = self.node_labels.clone();
        dedup_located(&mut xs, &mut labels);
        for _ in 1..k {
            let mut nx: Vec<ExactRational> = vec![xs[0].clone()];
            let mut nl: Vec<Label> = vec![self.node_labels[labels[0].index()]];
            for w in 0..labels.len() - 1 {
                let (a, b) = (labels[w], labels[w + 1]);
                let (xa, xb) = (&xs[w], &xs[w + 1]);
                let (va, vb) = (self.value(a), self.value(b));
                let path: Vec<usize> = if a < b {
                    (a.index() + 1..=b.index()).collect()
                } else {
                    (b.index()..a.index()).rev().collect()
                };
                for q in path {
                    let x = xa + (&self.xs[q] - va) * (xb - xa) / (vb - va);
                    nx.push(x);
                    nl.push(self.node_labels[q]);
                }
                if nl.len() > cap {
                    return Err(SymbolicError::LabelCap { cap });
                }
            }
            dedup_located(&mut nx, &mut nl);
            xs = nx;
            labels = nl;
        }
        Ok(LocatedRepresentation { xs, labels })
    }

    /// Located pair counts read directly off [`Self::located_representation`].
    pub fn counts_from_positions(
        &self,
        located: &LocatedRepresentation,
        rules: &SubstitutionRules,
        step: u32,
    ) -> Option<LocatedCounts> {
        let universe = rules.universe.clone();
        let mut counts = vec![vec![BigUint::zero(); universe.len()]; self.interval_count()];
        for w in 0..located.labels.len() - 1 {
            let (xa, xb) = (&located.xs[w], &located.xs[w + 1]);
            // Interval i with x_i <= xa and xb <= x_{i+1}.
            let i = self.xs.partition_point(|x| x <= xa).checked_sub(1)?;
            if i >= self.interval_count() || *xb > self.xs[i + 1] {
                return None;
            }
            let j = rules.pair_index(PairType::new(located.labels[w], located.labels[w + 1]))?;
            counts[i][j] += 1u32;
        }
        Some(LocatedCounts {
            step,
            universe,
            counts,
        })
    }

    /// Serializes counts as `{"step": k, "counts": [[i, lo, hi, count], ...]}`
    /// with 1-based intervals, node values for the pair ends, and zero cells
    /// omitted.
    pub fn counts_to_json(&self, counts: &LocatedCounts) -> Value {
        let mut cells = Vec::new();
        for (i, row) in counts.counts.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let p = counts.universe[j];
                cells.push(json!([
                    i + 1,
                    label_json(self.value(p.lo)),
                    label_json(self.value(p.hi)),
                    big_json(c)
                ]));
            }
        }
        json!({ "step": counts.step, "counts": cells })
    }
}

/// Restricts a per-node label sequence to the nodes `u..=v`, merging repeats.
pub fn restrict(node_labels: &[Label], u: Label, v: Label) -> Result<Representation, SymbolicError> {
    if u >= v {
        return Err(SymbolicError::EmptyRestriction {
            u: u.index(),
            v: v.index(),
        });
    }
    if v.index() >= node_labels.len() {
        return Err(SymbolicError::UnknownLabel(v.index()));
    }
    Ok(Representation::merged(
        node_labels[u.index()..=v.index()].to_vec(),
    ))
}

/// Advances located counts by one step using the rule-induced transitions.
pub fn step_counts(counts: &LocatedCounts, rules: &SubstitutionRules) -> LocatedCounts {
    let width = rules.universe.len();
    let next = counts
        .counts
        .iter()
        .map(|row| {
            let mut out = vec![BigUint::zero(); width];
            for (j, c) in row.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for (j2, &t) in rules.transition[j].iter().enumerate() {
                    if t != 0 {
                        out[j2] += c * t;
                    }
                }
            }
            out
        })
        .collect();
    LocatedCounts {
        step: counts.step + 1,
        universe: counts.universe.clone(),
        counts: next,
    }
}

/// Sum of the counts in the cells the mask selects.
pub fn count_crossings(counts: &LocatedCounts, mask: &CrossingMask) -> Result<BigUint, SymbolicError> {
    let want = (mask.selected.len(), mask.universe.len());
    if counts.dims() != want || counts.universe != mask.universe {
        return Err(SymbolicError::DimensionMismatch {
            got: counts.dims(),
            want,
        });
    }
    let mut total = BigUint::zero();
    for (row, sel) in counts.counts.iter().zip(&mask.selected) {
        for (c, &on) in row.iter().zip(sel) {
            if on {
                total += c;
            }
        }
    }
    Ok(total)
}

fn dedup_located(xs: &mut Vec<ExactRational>, labels: &mut Vec<Label>) {
    let mut keep_x = Vec::with_capacity(xs.len());
    let mut keep_l = Vec::with_capacity(labels.len());
    for (x, l) in xs.drain(..).zip(labels.drain(..)) {
        if keep_l.last() == Some(&l) {
            continue;
        }
        keep_x.push(x);
        keep_l.push(l);
    }
    *xs = keep_x;
    *labels = keep_l;
}

fn label_json(q: &ExactRational) -> Value {
    if is_integer(q) {
        if let Some(v) = q.numer().to_i64() {
            return json!(v);
        }
    }
    json!(q.to_string())
}

/// JSON number when the value fits in `u64`, decimal string otherwise.
pub fn big_json(v: &BigUint) -> Value {
    match v.to_u64() {
        Some(s) => json!(s),
        None => json!(v.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plmap::integer;

    fn thm1() -> MarkovMap {
        MarkovMap::new(&PlMap::theorem1()).unwrap()
    }

    fn fam(n: u32) -> MarkovMap {
        MarkovMap::new(&PlMap::family(n).unwrap()).unwrap()
    }

    /// Label for the integer node value `v` of a map whose nodes are 1, 2, ...
    fn l(v: u32) -> Label {
        Label(v - 1)
    }

    fn pt(a: u32, b: u32) -> PairType {
        PairType::new(l(a), l(b))
    }

    #[test]
    fn base_representations() {
        let m = thm1();
        assert_eq!(m.render(&m.base_representation()), "3,1,2");
        let m = fam(2);
        assert_eq!(m.render(&m.base_representation()), "3,5,4,2,1");
    }

    #[test]
    fn non_markov_map_rejected() {
        let f = PlMap::new(vec![
            (integer(0), crate::plmap::rational(1, 2)),
            (integer(1), integer(0)),
        ])
        .unwrap();
        assert!(matches!(
            MarkovMap::with_partition_cap(&f, 64),
            Err(SymbolicError::NotMarkov { .. })
        ));
        // A node value off the original node set is fine once its orbit closes.
        let g = PlMap::new(vec![
            (integer(0), integer(1)),
            (crate::plmap::rational(1, 2), integer(0)),
            (integer(1), crate::plmap::rational(1, 2)),
        ])
        .unwrap();
        assert_eq!(MarkovMap::new(&g).unwrap().node_xs().len(), 3);
    }

    #[test]
    fn restriction() {
        let m = thm1();
        assert_eq!(m.render(&m.restrict(l(1), l(2)).unwrap()), "3,1");
        assert_eq!(m.restrict(l(1), l(3)).unwrap(), m.base_representation());
        let m = fam(2);
        assert_eq!(m.render(&m.restrict(l(3), l(5)).unwrap()), "4,2,1");
        assert!(matches!(
            m.restrict(l(3), l(3)),
            Err(SymbolicError::EmptyRestriction { .. })
        ));
        assert_eq!(m.restrict(l(1), Label(9)), Err(SymbolicError::UnknownLabel(9)));
    }

    #[test]
    fn constant_pieces_merge() {
        let f = PlMap::from_integers(&[(0, 2), (1, 2), (2, 0)]).unwrap();
        let m = MarkovMap::new(&f).unwrap();
        assert_eq!(m.render(&m.base_representation()), "2,0");
    }

    #[test]
    fn theorem1_rules() {
        let m = thm1();
        let rules = m.derive_rules().unwrap();
        let got: Vec<(String, String)> = rules
            .iter()
            .map(|(&(a, b), r)| (format!("{}{}", m.render_label(a), m.render_label(b)), m.render(r)))
            .collect();
        let mut want = vec![
            ("13".to_string(), "3,1,2".to_string()),
            ("31".to_string(), "2,1,3".to_string()),
            ("12".to_string(), "3,1".to_string()),
            ("21".to_string(), "1,3".to_string()),
        ];
        want.sort();
        let mut got = got;
        got.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn family_rule_examples() {
        let m = fam(2);
        let rules = m.derive_rules().unwrap();
        assert_eq!(m.render(rules.get(l(2), l(4)).unwrap()), "5,4,2");
        let m = fam(3);
        let rules = m.derive_rules().unwrap();
        assert_eq!(m.render(rules.get(l(4), l(7)).unwrap()), "5,3,2,1");
    }

    #[test]
    fn rules_reverse_each_other() {
        for m in [thm1(), fam(2), fam(4)] {
            let rules = m.derive_rules().unwrap();
            for (&(a, b), r) in rules.iter() {
                assert_eq!(rules.get(b, a).unwrap(), &r.reversed());
            }
        }
    }

    #[test]
    fn expansion() {
        let m = thm1();
        let rules = m.derive_rules().unwrap();
        let base = m.base_representation();
        let r2 = m.expand(&base, &rules).unwrap();
        assert_eq!(m.render(&r2), "2,1,3,1");
        let r3 = m.expand(&r2, &rules).unwrap();
        assert_eq!(m.render(&r3), "1,3,1,2,1,3");
        let missing = Representation::new(vec![l(2), l(3)]).unwrap();
        assert_eq!(
            m.expand(&missing, &rules),
            Err(SymbolicError::MissingRule(l(2), l(3)))
        );
        assert_eq!(
            m.expand_with_cap(&r3, &rules, 8),
            Err(SymbolicError::LabelCap { cap: 8 })
        );
    }

    #[test]
    fn initial_counts_examples() {
        let m = fam(2);
        let rules = m.derive_rules().unwrap();
        let c = m.initial_counts(&rules);
        assert_eq!(c.get(0, pt(3, 5)), BigUint::from(1u32));
        assert_eq!(c.get(1, pt(4, 5)), BigUint::from(1u32));
        assert_eq!(c.get(2, pt(2, 4)), BigUint::from(1u32));
        assert_eq!(c.get(3, pt(1, 2)), BigUint::from(1u32));
        assert_eq!(c.total(), BigUint::from(4u32));

        let m = thm1();
        let rules = m.derive_rules().unwrap();
        let c = m.initial_counts(&rules);
        // u_{1,1} = 1 (pair 1-3 over [1,2]); v_{2,1} = 1 (pair 1-2 over [2,3]).
        assert_eq!(c.get(0, pt(1, 3)), BigUint::from(1u32));
        assert_eq!(c.get(1, pt(1, 2)), BigUint::from(1u32));
        assert_eq!(c.total(), BigUint::from(2u32));
    }

    #[test]
    fn family_step_two() {
        let m = fam(2);
        let rules = m.derive_rules().unwrap();
        let c2 = m.step_counts(&m.initial_counts(&rules), &rules);
        assert_eq!(c2.step, 2);
        let expect = [
            (0, pt(1, 2)),
            (1, pt(1, 2)),
            (0, pt(2, 4)),
            (2, pt(2, 4)),
            (3, pt(3, 5)),
            (2, pt(4, 5)),
        ];
        for (i, p) in expect {
            assert_eq!(c2.get(i, p), BigUint::from(1u32), "cell ({i}, {p:?})");
        }
        assert_eq!(c2.total(), BigUint::from(6u32));
    }

    #[test]
    fn theorem1_counts_follow_two_interval_recursion() {
        let m = thm1();
        let rules = m.derive_rules().unwrap();
        let seq = m.count_sequence(&rules, 20);
        for w in seq.windows(2) {
            for i in 0..2 {
                let (u, v) = (w[0].get(i, pt(1, 3)), w[0].get(i, pt(1, 2)));
                assert_eq!(w[1].get(i, pt(1, 3)), &u + &v);
                assert_eq!(w[1].get(i, pt(1, 2)), u);
            }
        }
    }

    #[test]
    fn crossing_masks() {
        let m = thm1();
        let rules = m.derive_rules().unwrap();
        let mut cells = m.crossing_mask(&rules).cells();
        cells.sort();
        assert_eq!(cells, vec![(0, pt(1, 2)), (0, pt(1, 3)), (1, pt(1, 3))]);

        for n in 2..=5u32 {
            let m = fam(n);
            let rules = m.derive_rules().unwrap();
            let mut cells = m.crossing_mask(&rules).cells();
            cells.sort();
            // Pair index j -> unordered pair.
            let pair = |j: u32| -> PairType {
                if j == n {
                    pt(n, n + 2)
                } else if j == n + 1 {
                    pt(n + 1, 2 * n + 1)
                } else {
                    pt(j, j + 1)
                }
            };
            let mut want: Vec<(usize, PairType)> =
                (1..=2 * n).map(|i| (i as usize - 1, pair(i))).collect();
            want.push((n as usize, pair(n)));
            want.extend((n + 2..=2 * n).map(|i| (i as usize - 1, pair(n + 1))));
            want.sort();
            assert_eq!(cells, want, "n = {n}");
        }
    }

    #[test]
    fn crossing_counts_small_cases() {
        let m = fam(2);
        let rules = m.derive_rules().unwrap();
        let mask = m.crossing_mask(&rules);
        let seq = m.count_sequence(&rules, 2);
        assert_eq!(count_crossings(&seq[0], &mask).unwrap(), BigUint::from(1u32));
        assert_eq!(count_crossings(&seq[1], &mask).unwrap(), BigUint::from(3u32));

        let other = thm1();
        let other_rules = other.derive_rules().unwrap();
        let bad = other.initial_counts(&other_rules);
        assert!(matches!(
            count_crossings(&bad, &mask),
            Err(SymbolicError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn counts_json_shape() {
        let m = fam(2);
        let rules = m.derive_rules().unwrap();
        let v = m.counts_to_json(&m.initial_counts(&rules));
        assert_eq!(
            v.to_string(),
            r#"{"counts":[[1,3,5,1],[2,4,5,1],[3,2,4,1],[4,1,2,1]],"step":1}"#
        );
    }

    #[test]
    fn parse_representation() {
        let m = fam(2);
        let rep = m.parse("3, 5,4,2,1").unwrap();
        assert_eq!(rep, m.base_representation());
        assert!(m.parse("3,3").is_err());
        assert!(m.parse("3,9").is_err());
    }
}
