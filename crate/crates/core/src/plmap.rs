//! Continuous piecewise-linear self-maps of a compact interval, held exactly.
//!
//! Everything here works in [`ExactRational`] arithmetic. Iterates are built
//! by composition, fixed points are solved piece by piece, and minimal
//! periods are found by iterating each periodic point. That makes this module
//! the brute-force ground truth the combinatorial counts are checked against.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::Exec;

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
pub type ExactRational = BigRational;

/// Default ceiling on the number of linear pieces an iterate may have.
pub const DEFAULT_PIECE_CAP: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlMapError {
    #[error("a map needs at least two nodes, got {0}")]
    TooFewNodes(usize),
    #[error("node x-coordinates must be strictly increasing (at node {0})")]
    NonIncreasing(usize),
    #[error("node {index} has value {y} outside the domain [{lo}, {hi}]")]
    NotSelfMap {
        index: usize,
        y: ExactRational,
        lo: ExactRational,
        hi: ExactRational,
    },
    #[error("{x} lies outside the domain [{lo}, {hi}]")]
    OutOfDomain {
        x: ExactRational,
        lo: ExactRational,
        hi: ExactRational,
    },
    #[error("iterate index must be at least 1")]
    ZeroIterate,
    #[error("iterate would exceed the piece cap of {cap}")]
    PieceCap { cap: usize },
    #[error("iterate {k} has a piece lying on the diagonal; its fixed points are not isolated")]
    Degenerate { k: u32 },
    #[error("the family map needs n >= 2, got {0}")]
    FamilyIndex(u32),
    #[error("{points} points of minimal period {m} do not split into whole orbits")]
    OrbitSplit { points: usize, m: u32 },
    #[error("invalid node list: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub x: ExactRational,
    pub y: ExactRational,
}

/// A continuous piecewise-linear map `[c, d] -> [c, d]` given by its nodes.
///
/// The map is linear between consecutive nodes. Nodes need not be genuine
/// breakpoints; collinear interior nodes are allowed on input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlMap {
    nodes: Vec<Node>,
}

/// All solutions of `g(x) = x` for a map `g`.
///
/// When `degenerate` is set some piece lies on the diagonal, and `points`
/// holds only the isolated solutions plus that piece's endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionSet {
    pub points: Vec<ExactRational>,
    pub degenerate: bool,
}

pub fn rational(n: i64, d: i64) -> ExactRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn integer(n: i64) -> ExactRational {
    BigRational::from_integer(BigInt::from(n))
}

impl PlMap {
    pub fn new(points: Vec<(ExactRational, ExactRational)>) -> Result<Self, PlMapError> {
        if points.len() < 2 {
            return Err(PlMapError::TooFewNodes(points.len()));
        }
        for (i, w) in points.windows(2).enumerate() {
            if w[0].0 >= w[1].0 {
                return Err(PlMapError::NonIncreasing(i + 1));
            }
        }
        let lo = points[0].0.clone();
        let hi = points[points.len() - 1].0.clone();
        for (index, (_, y)) in points.iter().enumerate() {
            if *y < lo || *y > hi {
                return Err(PlMapError::NotSelfMap {
                    index,
                    y: y.clone(),
                    lo,
                    hi,
                });
            }
        }
        Ok(Self {
            nodes: points.into_iter().map(|(x, y)| Node { x, y }).collect(),
        })
    }

    pub fn from_integers(points: &[(i64, i64)]) -> Result<Self, PlMapError> {
        Self::new(
            points
                .iter()
                .map(|&(x, y)| (integer(x), integer(y)))
                .collect(),
        )
    }

    /// `x ↦ -2x + 5` on `[1, 2]`, `x ↦ x - 1` on `[2, 3]`.
    pub fn theorem1() -> Self {
        Self::from_integers(&[(1, 3), (2, 1), (3, 2)]).expect("valid node list")
    }

    /// The map `f_n` on `[1, 2n+1]`: linear off `{2, n+1, n+2}` with
    /// `1 ↦ n+1`, `2 ↦ 2n+1`, `n+1 ↦ n+2`, `n+2 ↦ n`, `2n+1 ↦ 1`.
    pub fn family(n: u32) -> Result<Self, PlMapError> {
        if n < 2 {
            return Err(PlMapError::FamilyIndex(n));
        }
        let n = i64::from(n);
        Self::from_integers(&[
            (1, n + 1),
            (2, 2 * n + 1),
            (n + 1, n + 2),
            (n + 2, n),
            (2 * n + 1, 1),
        ])
    }

    /// The same map with extra nodes inserted at `points` (ignored when
    /// already present or outside the domain).
    pub fn refine<I>(&self, points: I) -> Result<PlMap, PlMapError>
    where
        I: IntoIterator<Item = ExactRational>,
    {
        let mut xs: BTreeSet<ExactRational> = self.nodes.iter().map(|n| n.x.clone()).collect();
        xs.extend(points.into_iter().filter(|x| self.contains(x)));
        let nodes = xs
            .into_iter()
            .map(|x| {
                let y = self.eval_unchecked(&x);
                (x, y)
            })
            .collect();
        PlMap::new(nodes)
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn piece_count(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn domain(&self) -> (&ExactRational, &ExactRational) {
        (&self.nodes[0].x, &self.nodes[self.nodes.len() - 1].x)
    }

    pub fn contains(&self, x: &ExactRational) -> bool {
        let (lo, hi) = self.domain();
        x >= lo && x <= hi
    }

    pub fn evaluate(&self, x: &ExactRational) -> Result<ExactRational, PlMapError> {
        if !self.contains(x) {
            let (lo, hi) = self.domain();
            return Err(PlMapError::OutOfDomain {
                x: x.clone(),
                lo: lo.clone(),
                hi: hi.clone(),
            });
        }
        Ok(self.eval_unchecked(x))
    }

    fn eval_unchecked(&self, x: &ExactRational) -> ExactRational {
        // First node strictly right of x; x is in the domain so idx >= 1.
        let idx = self.nodes.partition_point(|n| n.x <= *x);
        if idx == self.nodes.len() {
            return self.nodes[idx - 1].y.clone();
        }
        let a = &self.nodes[idx - 1];
        if a.x == *x {
            return a.y.clone();
        }
        let b = &self.nodes[idx];
        &a.y + (&b.y - &a.y) * (x - &a.x) / (&b.x - &a.x)
    }

    /// `self ∘ inner`, with collinear consecutive nodes merged.
    ///
    /// `inner` must map into the domain of `self`.
    pub fn compose(&self, inner: &PlMap, cap: usize) -> Result<PlMap, PlMapError> {
        let xs: Vec<&ExactRational> = self.nodes.iter().map(|n| &n.x).collect();
        let mut out = NodeBuilder::default();
        let first = &inner.nodes[0];
        out.push(first.x.clone(), self.eval_unchecked(&first.y), cap)?;
        for w in inner.nodes.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            if a.y != b.y {
                // Breakpoints of the outer map strictly inside the value span.
                let (lo, hi) = if a.y < b.y { (&a.y, &b.y) } else { (&b.y, &a.y) };
                let start = xs.partition_point(|x| *x <= lo);
                let end = xs.partition_point(|x| *x < hi);
                let dx = &b.x - &a.x;
                let dy = &b.y - &a.y;
                let mut emit = |i: usize| -> Result<(), PlMapError> {
                    let node = &self.nodes[i];
                    let x = &a.x + (&node.x - &a.y) * &dx / &dy;
                    out.push(x, node.y.clone(), cap)
                };
                if a.y < b.y {
                    for i in start..end {
                        emit(i)?;
                    }
                } else {
                    for i in (start..end).rev() {
                        emit(i)?;
                    }
                }
            }
            out.push(b.x.clone(), self.eval_unchecked(&b.y), cap)?;
        }
        Ok(PlMap { nodes: out.nodes })
    }

    /// The `k`-th iterate, under the default piece cap.
    pub fn iterate(&self, k: u32) -> Result<PlMap, PlMapError> {
        self.iterate_with_cap(k, DEFAULT_PIECE_CAP)
    }

    pub fn iterate_with_cap(&self, k: u32, cap: usize) -> Result<PlMap, PlMapError> {
        if k == 0 {
            return Err(PlMapError::ZeroIterate);
        }
        let mut current = self.clone();
        for _ in 1..k {
            current = self.compose(&current, cap)?;
        }
        Ok(current)
    }

    /// Iterates `1..=k_max`, each built from the previous one.
    pub fn iterates(&self, k_max: u32, cap: usize) -> Result<Vec<PlMap>, PlMapError> {
        let mut out = Vec::with_capacity(k_max as usize);
        if k_max == 0 {
            return Ok(out);
        }
        out.push(self.clone());
        for _ in 1..k_max {
            let next = self.compose(out.last().expect("non-empty"), cap)?;
            out.push(next);
        }
        Ok(out)
    }

    pub fn fixed_points(&self) -> SolutionSet {
        let mut points = BTreeSet::new();
        let mut degenerate = false;
        for w in self.nodes.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            let d0 = &a.y - &a.x;
            let d1 = &b.y - &b.x;
            if d0.is_zero() && d1.is_zero() {
                degenerate = true;
            }
            if d0.is_zero() {
                points.insert(a.x.clone());
            }
            if d1.is_zero() {
                points.insert(b.x.clone());
            }
            if d0.is_positive() != d1.is_positive() && !d0.is_zero() && !d1.is_zero() {
                let x = &a.x + &d0 * (&b.x - &a.x) / (&d0 - &d1);
                points.insert(x);
            }
        }
        SolutionSet {
            points: points.into_iter().collect(),
            degenerate,
        }
    }

    /// Number of distinct solutions of `f^k(x) = x`.
    pub fn count_periodic_points(&self, k: u32) -> Result<BigUint, PlMapError> {
        self.count_periodic_points_with_cap(k, DEFAULT_PIECE_CAP)
    }

    pub fn count_periodic_points_with_cap(&self, k: u32, cap: usize) -> Result<BigUint, PlMapError> {
        let sol = self.iterate_with_cap(k, cap)?.fixed_points();
        if sol.degenerate {
            return Err(PlMapError::Degenerate { k });
        }
        Ok(BigUint::from(sol.points.len()))
    }

    /// Least `p <= max` with `f^p(x) = x`, if any.
    pub fn minimal_period(&self, x: &ExactRational, max: u32) -> Result<Option<u32>, PlMapError> {
        let mut y = self.evaluate(x)?;
        for p in 1..=max {
            if y == *x {
                return Ok(Some(p));
            }
            y = self.eval_unchecked(&y);
        }
        Ok(None)
    }

    /// Orbits of minimal period exactly `m`, found by solving `f^m(x) = x`
    /// and iterating every solution until it returns.
    pub fn count_minimal_period_orbits(&self, m: u32) -> Result<BigUint, PlMapError> {
        self.count_minimal_period_orbits_with_cap(m, DEFAULT_PIECE_CAP)
    }

    pub fn count_minimal_period_orbits_with_cap(
        &self,
        m: u32,
        cap: usize,
    ) -> Result<BigUint, PlMapError> {
        let iterate = self.iterate_with_cap(m, cap)?;
        self.orbits_from_iterate(&iterate, m)
    }

    fn orbits_from_iterate(&self, iterate: &PlMap, m: u32) -> Result<BigUint, PlMapError> {
        let sol = iterate.fixed_points();
        if sol.degenerate {
            return Err(PlMapError::Degenerate { k: m });
        }
        let mut exact = 0usize;
        for x in &sol.points {
            if self.minimal_period(x, m)? == Some(m) {
                exact += 1;
            }
        }
        if exact % m as usize != 0 {
            return Err(PlMapError::OrbitSplit { points: exact, m });
        }
        Ok(BigUint::from(exact / m as usize))
    }

    /// Periodic-point and minimal-period orbit counts for `k = 1..=k_max`.
    ///
    /// Iterates are composed sequentially; solving and classifying each one
    /// is spread over `exec`.
    pub fn oracle_sweep(
        &self,
        k_max: u32,
        cap: usize,
        exec: Exec,
    ) -> Result<Vec<OracleRow>, PlMapError> {
        let iterates = self.iterates(k_max, cap)?;
        let work: Vec<(u32, &PlMap)> = (1..=k_max).zip(iterates.iter()).collect();
        exec.try_map(work, |(k, g)| {
            let sol = g.fixed_points();
            if sol.degenerate {
                return Err(PlMapError::Degenerate { k });
            }
            Ok(OracleRow {
                k,
                pieces: g.piece_count(),
                periodic_points: BigUint::from(sol.points.len()),
                minimal_period_orbits: self.orbits_from_iterate(g, k)?,
            })
        })
    }

    pub fn to_json(&self) -> String {
        let wire = NodeListJson {
            nodes: self
                .nodes
                .iter()
                .map(|n| {
                    [
                        JsonInt::from(n.x.numer()),
                        JsonInt::from(n.x.denom()),
                        JsonInt::from(n.y.numer()),
                        JsonInt::from(n.y.denom()),
                    ]
                })
                .collect(),
        };
        serde_json::to_string(&wire).expect("node lists always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, PlMapError> {
        let wire: NodeListJson =
            serde_json::from_str(text).map_err(|e| PlMapError::Parse(e.to_string()))?;
        let mut points = Vec::with_capacity(wire.nodes.len());
        for [xn, xd, yn, yd] in wire.nodes {
            points.push((fraction(xn, xd)?, fraction(yn, yd)?));
        }
        Self::new(points)
    }
}

impl fmt::Display for PlMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, n) in self.nodes.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "({}, {})", n.x, n.y)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleRow {
    pub k: u32,
    pub pieces: usize,
    pub periodic_points: BigUint,
    pub minimal_period_orbits: BigUint,
}

/// Accumulates nodes, dropping any node collinear with its neighbours.
#[derive(Default)]
struct NodeBuilder {
    nodes: Vec<Node>,
}

impl NodeBuilder {
    fn push(&mut self, x: ExactRational, y: ExactRational, cap: usize) -> Result<(), PlMapError> {
        if let Some(last) = self.nodes.last() {
            if last.x == x {
                return Ok(());
            }
        }
        let len = self.nodes.len();
        if len >= 2 {
            let (a, b) = (&self.nodes[len - 2], &self.nodes[len - 1]);
            if (&b.y - &a.y) * (&x - &b.x) == (&y - &b.y) * (&b.x - &a.x) {
                self.nodes[len - 1] = Node { x, y };
                return Ok(());
            }
        }
        if len > cap {
            return Err(PlMapError::PieceCap { cap });
        }
        self.nodes.push(Node { x, y });
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct NodeListJson {
    nodes: Vec<[JsonInt; 4]>,
}

/// Integers that fit in `i64` go out as JSON numbers, larger ones as strings.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum JsonInt {
    Small(i64),
    Big(String),
}

impl From<&BigInt> for JsonInt {
    fn from(v: &BigInt) -> Self {
        match v.to_i64() {
            Some(s) => JsonInt::Small(s),
            None => JsonInt::Big(v.to_string()),
        }
    }
}

impl JsonInt {
    fn into_bigint(self) -> Result<BigInt, PlMapError> {
        match self {
            JsonInt::Small(v) => Ok(BigInt::from(v)),
            JsonInt::Big(s) => s
                .trim()
                .parse()
                .map_err(|_| PlMapError::Parse(format!("not an integer: {s:?}"))),
        }
    }
}

fn fraction(num: JsonInt, den: JsonInt) -> Result<ExactRational, PlMapError> {
    let den = den.into_bigint()?;
    if den.is_zero() {
        return Err(PlMapError::Parse("zero denominator".into()));
    }
    Ok(BigRational::new(num.into_bigint()?, den))
}

/// `true` when the rational is an integer; used by callers that print labels.
pub fn is_integer(q: &ExactRational) -> bool {
    q.denom().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ys(map: &PlMap) -> Vec<ExactRational> {
        map.nodes().iter().map(|n| n.y.clone()).collect()
    }

    fn xs(map: &PlMap) -> Vec<ExactRational> {
        map.nodes().iter().map(|n| n.x.clone()).collect()
    }

    fn ints(v: &[i64]) -> Vec<ExactRational> {
        v.iter().map(|&i| integer(i)).collect()
    }

    #[test]
    fn theorem1_map_nodes_and_values() {
        let f = PlMap::theorem1();
        assert_eq!(xs(&f), ints(&[1, 2, 3]));
        assert_eq!(ys(&f), ints(&[3, 1, 2]));
        assert_eq!(f.evaluate(&integer(2)).unwrap(), integer(1));
        assert_eq!(f.evaluate(&rational(3, 2)).unwrap(), integer(2));
        assert_eq!(f.evaluate(&rational(5, 3)).unwrap(), rational(5, 3));
    }

    #[test]
    fn family_map_integer_values() {
        let f2 = PlMap::family(2).unwrap();
        let vals: Vec<_> = (1..=5).map(|x| f2.evaluate(&integer(x)).unwrap()).collect();
        assert_eq!(vals, ints(&[3, 5, 4, 2, 1]));
        assert_eq!(f2.evaluate(&integer(5)).unwrap(), integer(1));
        assert_eq!(f2.evaluate(&rational(7, 2)).unwrap(), integer(3));

        let f3 = PlMap::family(3).unwrap();
        assert_eq!(f3.evaluate(&integer(4)).unwrap(), integer(5));
        for n in 2..7u32 {
            let f = PlMap::family(n).unwrap();
            let n = i64::from(n);
            // (n+1)(2n+1)(2n)...(n+2) n (n-1) ... 1
            let mut expect = vec![n + 1];
            expect.extend((n + 2..=2 * n + 1).rev());
            expect.extend((1..=n).rev());
            let got: Vec<_> = (1..=2 * n + 1)
                .map(|x| f.evaluate(&integer(x)).unwrap())
                .collect();
            assert_eq!(got, ints(&expect), "n = {n}");
        }
    }

    #[test]
    fn family_rejects_small_n() {
        assert_eq!(PlMap::family(1), Err(PlMapError::FamilyIndex(1)));
        assert_eq!(PlMap::family(0), Err(PlMapError::FamilyIndex(0)));
    }

    #[test]
    fn constructor_validation() {
        assert_eq!(
            PlMap::from_integers(&[(0, 0)]),
            Err(PlMapError::TooFewNodes(1))
        );
        assert_eq!(
            PlMap::from_integers(&[(0, 0), (0, 1), (1, 1)]),
            Err(PlMapError::NonIncreasing(1))
        );
        assert!(matches!(
            PlMap::from_integers(&[(0, 0), (1, 2)]),
            Err(PlMapError::NotSelfMap { index: 1, .. })
        ));
    }

    #[test]
    fn evaluate_outside_domain() {
        let f = PlMap::theorem1();
        assert!(matches!(
            f.evaluate(&integer(4)),
            Err(PlMapError::OutOfDomain { .. })
        ));
        assert!(f.evaluate(&rational(1, 2)).is_err());
    }

    #[test]
    fn second_iterate_of_theorem1_map() {
        let f = PlMap::theorem1();
        assert_eq!(f.iterate(1).unwrap(), f);
        let f2 = f.iterate(2).unwrap();
        assert_eq!(xs(&f2), vec![integer(1), rational(3, 2), integer(2), integer(3)]);
        assert_eq!(ys(&f2), ints(&[2, 1, 3, 1]));
        assert_eq!(f.iterate(0), Err(PlMapError::ZeroIterate));
    }

    #[test]
    fn fixed_points_of_reference_maps() {
        let f = PlMap::theorem1();
        let s = f.fixed_points();
        assert_eq!(s.points, vec![rational(5, 3)]);
        assert!(!s.degenerate);
        for n in 2..6u32 {
            let s = PlMap::family(n).unwrap().fixed_points();
            let n = i64::from(n);
            assert_eq!(s.points, vec![rational(3 * n + 4, 3)]);
        }
    }

    #[test]
    fn identity_map_is_degenerate() {
        let id = PlMap::from_integers(&[(0, 0), (1, 1)]).unwrap();
        let s = id.fixed_points();
        assert!(s.degenerate);
        assert_eq!(id.count_periodic_points(1), Err(PlMapError::Degenerate { k: 1 }));
    }

    #[test]
    fn periodic_point_counts() {
        let f = PlMap::theorem1();
        let f3 = f.iterate(3).unwrap().fixed_points();
        assert_eq!(f3.points, vec![integer(1), rational(5, 3), integer(2), integer(3)]);
        assert_eq!(f.count_periodic_points(3).unwrap(), BigUint::from(4u32));
        let f2 = PlMap::family(2).unwrap();
        assert_eq!(f2.count_periodic_points(1).unwrap(), BigUint::from(1u32));
        assert_eq!(f2.count_periodic_points(2).unwrap(), BigUint::from(3u32));
        assert_eq!(f2.count_periodic_points(4).unwrap(), BigUint::from(7u32));
    }

    #[test]
    fn minimal_period_orbits() {
        let f = PlMap::theorem1();
        assert_eq!(f.count_minimal_period_orbits(3).unwrap(), BigUint::from(1u32));
        assert_eq!(f.count_minimal_period_orbits(5).unwrap(), BigUint::from(2u32));
        let f2 = PlMap::family(2).unwrap();
        assert_eq!(f2.count_minimal_period_orbits(3).unwrap(), BigUint::zero());
        assert_eq!(f.minimal_period(&integer(1), 10).unwrap(), Some(3));
        assert_eq!(f.minimal_period(&rational(5, 3), 10).unwrap(), Some(1));
    }

    #[test]
    fn piece_cap_is_a_resource_error() {
        let f = PlMap::theorem1();
        assert_eq!(
            f.iterate_with_cap(12, 50),
            Err(PlMapError::PieceCap { cap: 50 })
        );
    }

    #[test]
    fn json_round_trip() {
        let f = PlMap::new(vec![
            (integer(0), rational(1, 3)),
            (rational(1, 2), integer(1)),
            (integer(1), integer(0)),
        ])
        .unwrap();
        let text = f.to_json();
        assert_eq!(text, r#"{"nodes":[[0,1,1,3],[1,2,1,1],[1,1,0,1]]}"#);
        assert_eq!(PlMap::from_json(&text).unwrap(), f);
        let big = r#"{"nodes":[[0,1,0,1],["1","1","99999999999999999999","100000000000000000000"]]}"#;
        assert_eq!(PlMap::from_json(big).unwrap().nodes().len(), 2);
        assert!(PlMap::from_json(r#"{"nodes":[[0,0,0,1],[1,1,1,1]]}"#).is_err());
    }

    #[test]
    fn oracle_sweep_matches_single_queries() {
        let f = PlMap::theorem1();
        let rows = f.oracle_sweep(8, DEFAULT_PIECE_CAP, Exec::Parallel).unwrap();
        for row in rows {
            assert_eq!(row.periodic_points, f.count_periodic_points(row.k).unwrap());
            assert_eq!(
                row.minimal_period_orbits,
                f.count_minimal_period_orbits(row.k).unwrap()
            );
        }
    }
}
