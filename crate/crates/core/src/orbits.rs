//! Orbit counting: the Lucas and `c_{k,n}` fixed-point sequences, the
//! inclusion–exclusion transform that turns them into minimal-period counts,
//! the orbit table, and the identity suites the sequences satisfy.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exec::Exec;

pub type Count = BigUint;

/// Largest period accepted by the trial-division factorizer.
pub const MAX_PERIOD: u64 = 1_000_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrbitError {
    #[error("index must be at least 1")]
    ZeroIndex,
    #[error("the c-sequence needs n >= 2, got {0}")]
    FamilyIndex(u32),
    #[error("orbit family selector must be at least 1")]
    ZeroFamily,
    #[error("period {0} exceeds the supported maximum of {MAX_PERIOD}")]
    PeriodTooLarge(u64),
    #[error("{m} does not divide the minimal-period point count {value}")]
    NotDivisible { m: u64, value: BigInt },
    #[error("{0}")]
    Domain(String),
}

/// `a_1 = 1, a_2 = 3, a_{k+2} = a_{k+1} + a_k`.
pub fn lucas(k: u32) -> Result<Count, OrbitError> {
    if k == 0 {
        return Err(OrbitError::ZeroIndex);
    }
    Ok(lucas_sequence(k).pop().expect("k >= 1"))
}

/// `[a_1, ..., a_{k_max}]`.
pub fn lucas_sequence(k_max: u32) -> Vec<Count> {
    let mut out: Vec<Count> = Vec::with_capacity(k_max as usize);
    for k in 0..k_max as usize {
        let next = match k {
            0 => BigUint::one(),
            1 => BigUint::from(3u32),
            _ => &out[k - 1] + &out[k - 2],
        };
        out.push(next);
    }
    out
}

/// The located branch counts `b_{k,i,j,n}` generated by their defining
/// recursion, for `k = 1..=k_max` and `1 <= i, j <= 2n`.
#[derive(Debug, Clone)]
pub struct BRecursion {
    n: u32,
    steps: Vec<Vec<Vec<Count>>>,
}

impl BRecursion {
    pub fn new(n: u32, k_max: u32) -> Result<Self, OrbitError> {
        if n < 2 {
            return Err(OrbitError::FamilyIndex(n));
        }
        let nn = n as usize;
        let size = 2 * nn;
        let mut first = vec![vec![BigUint::zero(); size]; size];
        // Q_n, 1-based: (1, n+1), (m, 2n+2-m) for 2 <= m <= n,
        // (m, 2n+1-m) for n+1 <= m <= 2n.
        first[0][nn] = BigUint::one();
        for m in 2..=nn {
            first[m - 1][2 * nn + 2 - m - 1] = BigUint::one();
        }
        for m in nn + 1..=2 * nn {
            first[m - 1][2 * nn + 1 - m - 1] = BigUint::one();
        }
        let mut steps = Vec::with_capacity(k_max as usize);
        if k_max >= 1 {
            steps.push(first);
        }
        for _ in 1..k_max {
            let prev = steps.last().expect("non-empty");
            let next = prev
                .iter()
                .map(|row| {
                    let at = |j: usize| &row[j - 1];
                    (1..=size)
                        .map(|j| {
                            if j < nn {
                                at(2 * nn + 1 - j) + at(nn + 1)
                            } else if j == nn {
                                at(nn) + at(nn + 1)
                            } else if j == nn + 1 {
                                at(1).clone()
                            } else {
                                at(2 * nn + 2 - j).clone()
                            }
                        })
                        .collect()
                })
                .collect();
            steps.push(next);
        }
        Ok(Self { n, steps })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k_max(&self) -> u32 {
        self.steps.len() as u32
    }

    /// `b_{k,i,j,n}` with 1-based indices; zero for `k <= 0`.
    pub fn b(&self, k: i64, i: usize, j: usize) -> Count {
        if k <= 0 {
            return BigUint::zero();
        }
        self.steps[(k - 1) as usize][i - 1][j - 1].clone()
    }

    pub fn matrix(&self, k: u32) -> &[Vec<Count>] {
        &self.steps[k as usize - 1]
    }

    /// `c_{k,n} = Σ_i b_{k,i,i} + b_{k,n+1,n} + Σ_{i=n+2}^{2n} b_{k,i,n+1}`.
    pub fn c(&self, k: u32) -> Count {
        let n = self.n as usize;
        let b = self.matrix(k);
        let diag: BigUint = (0..2 * n).map(|i| &b[i][i]).sum();
        let tail: BigUint = (n + 2..=2 * n).map(|i| &b[i - 1][n]).sum();
        diag + &b[n][n - 1] + tail
    }

    pub fn c_values(&self) -> Vec<Count> {
        (1..=self.k_max()).map(|k| self.c(k)).collect()
    }
}

/// `[c_{1,n}, ..., c_{k_max,n}]`.
pub fn c_sequence(n: u32, k_max: u32) -> Result<Vec<Count>, OrbitError> {
    Ok(BRecursion::new(n, k_max)?.c_values())
}

/// Which fixed-point count sequence a [`CountFunction`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CountKind {
    Lucas,
    /// `c_{k,n}`, `n >= 2`.
    Family(u32),
    /// `2^k`.
    Power2,
}

impl CountKind {
    /// Selector `n = 1` is the Lucas sequence, `n >= 2` the `c_{·,n}` family.
    pub fn for_family(n: u32) -> Result<Self, OrbitError> {
        match n {
            0 => Err(OrbitError::ZeroFamily),
            1 => Ok(CountKind::Lucas),
            n => Ok(CountKind::Family(n)),
        }
    }
}

impl fmt::Display for CountKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CountKind::Lucas => f.write_str("lucas"),
            CountKind::Family(n) => write!(f, "c_{n}"),
            CountKind::Power2 => f.write_str("power2"),
        }
    }
}

/// `m ↦ #{x : f^m(x) = x}` for one of the built-in map families, tabulated
/// for `1 <= m <= m_max` at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountFunction {
    kind: CountKind,
    values: Vec<Count>,
}

impl CountFunction {
    pub fn new(kind: CountKind, m_max: u32) -> Result<Self, OrbitError> {
        let values = match kind {
            CountKind::Lucas => lucas_sequence(m_max),
            CountKind::Family(n) => c_sequence(n, m_max)?,
            CountKind::Power2 => (1..=m_max).map(|k| BigUint::one() << k).collect(),
        };
        Ok(Self { kind, values })
    }

    pub fn kind(&self) -> CountKind {
        self.kind
    }

    pub fn name(&self) -> String {
        self.kind.to_string()
    }

    pub fn m_max(&self) -> u32 {
        self.values.len() as u32
    }

    /// `φ(m)`; panics when `m` is outside `1..=m_max`.
    pub fn eval(&self, m: u64) -> &Count {
        &self.values[m as usize - 1]
    }

    pub fn values(&self) -> &[Count] {
        &self.values
    }
}

/// Distinct prime factors with multiplicity, by trial division.
pub fn factorize(m: u64) -> Result<Vec<(u64, u32)>, OrbitError> {
    if m == 0 {
        return Err(OrbitError::ZeroIndex);
    }
    if m > MAX_PERIOD {
        return Err(OrbitError::PeriodTooLarge(m));
    }
    let mut out = Vec::new();
    let mut rest = m;
    let mut p = 2u64;
    while p * p <= rest {
        if rest % p == 0 {
            let mut e = 0;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        out.push((rest, 1));
    }
    Ok(out)
}

pub fn mobius(m: u64) -> Result<i32, OrbitError> {
    let f = factorize(m)?;
    if f.iter().any(|&(_, e)| e > 1) {
        return Ok(0);
    }
    Ok(if f.len() % 2 == 0 { 1 } else { -1 })
}

pub fn divisors(m: u64) -> Result<Vec<u64>, OrbitError> {
    let mut out = vec![1u64];
    for (p, e) in factorize(m)? {
        let len = out.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// `Φ(m, φ) = Σ_{d | m} μ(m/d) φ(d)`.
pub fn mobius_combine(m: u64, phi: &CountFunction) -> Result<BigInt, OrbitError> {
    check_range(m, phi)?;
    let mut total = BigInt::zero();
    for d in divisors(m)? {
        match mobius(m / d)? {
            1 => total += BigInt::from(phi.eval(d).clone()),
            -1 => total -= BigInt::from(phi.eval(d).clone()),
            _ => {}
        }
    }
    Ok(total)
}

/// The same transform written as the alternating sum over subsets of the
/// distinct prime divisors of `m`.
pub fn inclusion_exclusion(m: u64, phi: &CountFunction) -> Result<BigInt, OrbitError> {
    check_range(m, phi)?;
    let primes: Vec<u64> = factorize(m)?.into_iter().map(|(p, _)| p).collect();
    let mut total = BigInt::zero();
    for subset in 0u32..(1 << primes.len()) {
        let mut d = m;
        for (bit, p) in primes.iter().enumerate() {
            if subset & (1 << bit) != 0 {
                d /= p;
            }
        }
        let term = BigInt::from(phi.eval(d).clone());
        if subset.count_ones() % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    Ok(total)
}

fn check_range(m: u64, phi: &CountFunction) -> Result<(), OrbitError> {
    if m == 0 {
        return Err(OrbitError::ZeroIndex);
    }
    if m > u64::from(phi.m_max()) {
        return Err(OrbitError::Domain(format!(
            "{} is tabulated only up to {}",
            phi.name(),
            phi.m_max()
        )));
    }
    Ok(())
}

/// `Φ(m, φ) / m`, which must be a non-negative integer.
pub fn orbits_of_period(m: u64, phi: &CountFunction) -> Result<Count, OrbitError> {
    let value = mobius_combine(m, phi)?;
    let (q, r) = value.div_rem(&BigInt::from(m));
    if !r.is_zero() || value.is_negative() {
        return Err(OrbitError::NotDivisible { m, value });
    }
    Ok(q.to_biguint().expect("non-negative"))
}

/// `Φ_n(m)/m`: orbits of minimal period `m` of the three-point map (`n = 1`)
/// or of `f_n` (`n >= 2`).
pub fn orbit_count(n: u32, m: u64) -> Result<Count, OrbitError> {
    let phi = CountFunction::new(CountKind::for_family(n)?, period_index(m)?)?;
    orbits_of_period(m, &phi)
}

/// `Ψ(m)/m` with `ψ(k) = 2^k`.
pub fn psi_orbits(m: u64) -> Result<Count, OrbitError> {
    let phi = CountFunction::new(CountKind::Power2, period_index(m)?)?;
    orbits_of_period(m, &phi)
}

/// `[Φ(1,φ)/1, ..., Φ(m_max,φ)/m_max]` for one count function.
pub fn orbit_column(kind: CountKind, m_max: u32) -> Result<Vec<Count>, OrbitError> {
    let phi = CountFunction::new(kind, m_max)?;
    (1..=u64::from(m_max))
        .map(|m| orbits_of_period(m, &phi))
        .collect()
}

fn period_index(m: u64) -> Result<u32, OrbitError> {
    if m == 0 {
        return Err(OrbitError::ZeroIndex);
    }
    if m > 100_000 {
        return Err(OrbitError::PeriodTooLarge(m));
    }
    Ok(m as u32)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableRow {
    pub m: u32,
    /// `Φ_n(m)/m` for `n = 1..=n_max`.
    pub phi: Vec<Count>,
    pub psi: Count,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitTable {
    pub n_max: u32,
    pub m_max: u32,
    pub rows: Vec<TableRow>,
}

/// Builds the orbit table; each column is computed independently.
pub fn build_table(n_max: u32, m_max: u32, exec: Exec) -> Result<OrbitTable, OrbitError> {
    if n_max == 0 || m_max == 0 {
        return Err(OrbitError::ZeroIndex);
    }
    let mut kinds: Vec<CountKind> = (1..=n_max)
        .map(CountKind::for_family)
        .collect::<Result<_, _>>()?;
    kinds.push(CountKind::Power2);
    let mut columns = exec.try_map(kinds, |kind| orbit_column(kind, m_max))?;
    let psi = columns.pop().expect("psi column");
    let rows = (0..m_max as usize)
        .map(|r| TableRow {
            m: r as u32 + 1,
            phi: columns.iter().map(|c| c[r].clone()).collect(),
            psi: psi[r].clone(),
        })
        .collect();
    Ok(OrbitTable { n_max, m_max, rows })
}

impl OrbitTable {
    pub fn header(&self) -> Vec<String> {
        let mut h = vec!["m".to_string()];
        h.extend((1..=self.n_max).map(|n| format!("phi{n}")));
        h.push("psi".to_string());
        h
    }

    /// `m,phi1,...,phiN,psi` header and one LF-terminated row per period.
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(self.header()).expect("in-memory write");
        for row in &self.rows {
            let mut rec = vec![row.m.to_string()];
            rec.extend(row.phi.iter().map(|v| v.to_string()));
            rec.push(row.psi.to_string());
            w.write_record(rec).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("ascii")
    }

    pub fn from_csv(text: &str) -> Result<Self, OrbitError> {
        let bad = |msg: String| OrbitError::Domain(format!("malformed table: {msg}"));
        let mut r = csv::ReaderBuilder::new().from_reader(text.as_bytes());
        let header = r.headers().map_err(|e| bad(e.to_string()))?.clone();
        let width = header.len();
        if width < 3 || &header[0] != "m" || &header[width - 1] != "psi" {
            return Err(bad("unexpected header".into()));
        }
        let n_max = (width - 2) as u32;
        for (n, name) in header.iter().skip(1).take(width - 2).enumerate() {
            if name != format!("phi{}", n + 1) {
                return Err(bad(format!("unexpected column {name:?}")));
            }
        }
        let mut rows = Vec::new();
        for rec in r.records() {
            let rec = rec.map_err(|e| bad(e.to_string()))?;
            let int = |s: &str| -> Result<Count, OrbitError> {
                s.parse().map_err(|_| bad(format!("not an integer: {s:?}")))
            };
            let m: u32 = rec[0].parse().map_err(|_| bad(format!("bad period {:?}", &rec[0])))?;
            let phi = (1..width - 1).map(|c| int(&rec[c])).collect::<Result<_, _>>()?;
            rows.push(TableRow {
                m,
                phi,
                psi: int(&rec[width - 1])?,
            });
        }
        Ok(Self {
            n_max,
            m_max: rows.len() as u32,
            rows,
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        use crate::symbolic::big_json;
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|r| {
                serde_json::json!({
                    "m": r.m,
                    "phi": r.phi.iter().map(big_json).collect::<Vec<_>>(),
                    "psi": big_json(&r.psi),
                })
            })
            .collect();
        serde_json::json!({ "m_max": self.m_max, "n_max": self.n_max, "rows": rows })
    }

    /// Right-aligned plain-text rendering.
    pub fn to_text(&self) -> String {
        let mut cells: Vec<Vec<String>> = vec![self.header()];
        for row in &self.rows {
            let mut line = vec![row.m.to_string()];
            line.extend(row.phi.iter().map(|v| v.to_string()));
            line.push(row.psi.to_string());
            cells.push(line);
        }
        let widths: Vec<usize> = (0..cells[0].len())
            .map(|c| cells.iter().map(|r| r[c].len()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for line in cells {
            let parts: Vec<String> = line
                .iter()
                .zip(&widths)
                .map(|(s, w)| format!("{s:>w$}"))
                .collect();
            out.push_str(&parts.join("  "));
            out.push('\n');
        }
        out
    }
}

/// One verified statement: `{property, range, pass, counterexample?}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub property: String,
    pub range: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

impl Check {
    fn new(property: impl Into<String>, range: impl Into<String>, first_failure: Option<String>) -> Self {
        Self {
            property: property.into(),
            range: range.into(),
            pass: first_failure.is_none(),
            counterexample: first_failure,
        }
    }
}

pub fn all_pass(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.pass)
}

fn first_failure<I, F>(range: I, mut bad: F) -> Option<String>
where
    I: IntoIterator,
    F: FnMut(I::Item) -> Option<String>,
{
    range.into_iter().find_map(&mut bad)
}

/// Checks properties (i)–(vi) of the `b`/`c` sequences for one `n`.
///
/// Sequences are generated far enough to cover every property's own range;
/// `k_max` bounds the open-ended ranges of (i), (ii), (iii) and (vi).
pub fn check_properties(n: u32, k_max: u32) -> Result<Vec<Check>, OrbitError> {
    if n < 2 {
        return Err(OrbitError::FamilyIndex(n));
    }
    let nn = n as usize;
    let ni = i64::from(n);
    let depth = k_max.max(6 * n + 2);
    let rec = BRecursion::new(n, depth)?;
    let next = BRecursion::new(n + 1, 6 * n + 2)?;
    let b = |k: i64, i: usize, j: usize| rec.b(k, i, j);
    let c = |k: i64| rec.c(k as u32);
    let k_top = i64::from(k_max);
    let mut out = Vec::new();

    // (i)
    let mono = first_failure(1..k_top, |k| {
        (b(k + 1, 1, nn) < b(k, 1, nn)).then(|| format!("b_{{{},1,n,n}} < b_{{{k},1,n,n}}", k + 1))
    });
    let dom = first_failure(2..=k_top, |k| {
        if b(k, 1, nn) < b(k, nn + 1, nn) {
            return Some(format!("k={k}: b_{{k,1,n,n}} < b_{{k,n+1,n,n}}"));
        }
        (1..nn).find_map(|i| {
            (b(k, 1, i + 1) < b(k, 1, i)).then(|| format!("k={k}, i={i}: b_{{k,1,i+1,n}} < b_{{k,1,i,n}}"))
        })
    });
    out.push(Check::new(
        "(i) b_{k,1,n,n} non-decreasing",
        format!("n={n}, 1<=k<={k_max}"),
        mono,
    ));
    out.push(Check::new(
        "(i) b_{k,1,n,n} >= b_{k,n+1,n,n} and b_{k,1,i+1,n} >= b_{k,1,i,n}",
        format!("n={n}, 2<=k<={k_max}"),
        dom,
    ));

    // (ii): rebuild b_{k,i,j,n} for i in {1, n+1}, 1 <= j <= n from the
    // short recursion alone and compare.
    let mut alt_fail = None;
    for i in [1usize, nn + 1] {
        let mut alt: Vec<Vec<Count>> = Vec::new(); // alt[k-1][j-1]
        for k in 1..=k_max as usize {
            let row: Vec<Count> = if k <= 2 {
                (1..=nn)
                    .map(|j| {
                        let one = if i == 1 { k == 2 } else { j == nn };
                        if one { BigUint::one() } else { BigUint::zero() }
                    })
                    .collect()
            } else {
                let (two_back, one_back) = (&alt[k - 3], &alt[k - 2]);
                (1..=nn)
                    .map(|j| {
                        if j == nn {
                            &two_back[0] + &one_back[nn - 1]
                        } else {
                            &two_back[0] + &two_back[j]
                        }
                    })
                    .collect()
            };
            alt.push(row);
        }
        alt_fail = alt_fail.or_else(|| {
            first_failure(1..=k_max as usize, |k| {
                (1..=nn).find_map(|j| {
                    (alt[k - 1][j - 1] != b(k as i64, i, j))
                        .then(|| format!("i={i}, j={j}, k={k}"))
                })
            })
        });
    }
    out.push(Check::new(
        "(ii) short recursion for b_{k,1,j,n}, b_{k,n+1,j,n}",
        format!("n={n}, 1<=k<={k_max}"),
        alt_fail,
    ));

    // (iii)
    let top = k_top - 2 * ni + 2;
    let first_formula = first_failure(-2 * ni + 3..=top, |k| {
        let sum: BigUint = (1..=nn).map(|j| b(k + 2 * ni - 2 * j as i64, 1, j)).sum();
        let rhs = b(k + 2 * ni - 2, nn + 1, nn) + sum * 2u32;
        (c(k + 2 * ni - 2) != rhs).then(|| format!("k={k}"))
    });
    out.push(Check::new(
        "(iii) c_{k+2n-2,n} = b_{k+2n-2,n+1,n,n} + 2 Σ_j b_{k+2n-2j,1,j,n}",
        format!("n={n}, {}<=k<={top}", -2 * ni + 3),
        first_formula,
    ));
    let second_formula = first_failure(1..=top, |k| {
        let mut rhs = b(k + 2 * ni - 2, nn + 1, nn) + b(k, 1, nn) * (2 * nn);
        for i in 2..=nn {
            rhs += b(k, 1, nn + 1 - i) * ((BigUint::one() << i) - 2u32);
        }
        (c(k + 2 * ni - 2) != rhs).then(|| format!("k={k}"))
    });
    out.push(Check::new(
        "(iii) c_{k+2n-2,n} = b_{k+2n-2,n+1,n,n} + 2n b_{k,1,n,n} + Σ_i (2^i-2) b_{k,1,n+1-i,n}",
        format!("n={n}, 1<=k<={top}"),
        second_formula,
    ));

    // (iv)
    let iv = first_failure(1..=2 * ni, |k| {
        let want = (BigUint::one() << (k + 1)) - 1u32;
        (c(2 * k) != want).then(|| format!("k={k}: c_{{2k,n}} = {}", c(2 * k)))
    });
    out.push(Check::new(
        "(iv) c_{2k,n} = 2^{k+1} - 1",
        format!("n={n}, 1<=k<={}", 2 * n),
        iv,
    ));

    // (v)
    let v = first_failure(ni + 1..=3 * ni, |k| {
        let idx = (2 * k + 1) as u32;
        let want = next.c(idx) * 2u32 - 1u32;
        (rec.c(idx) != want).then(|| format!("k={k}"))
    });
    out.push(Check::new(
        "(v) c_{2k+1,n} = 2 c_{2k+1,n+1} - 1",
        format!("n={n}, {}<=k<={}", n + 1, 3 * n),
        v,
    ));

    // (vi)
    let vi = first_failure(2 * ni + 1..=k_top, |k| {
        let mut rhs = BigInt::from(b(k - 1, 1, nn));
        for i in 2..=2 * ni {
            let term = BigInt::from(b(k - i, 1, nn));
            if i % 2 == 0 {
                rhs += term;
            } else {
                rhs -= term;
            }
        }
        (BigInt::from(b(k, 1, nn)) != rhs).then(|| format!("k={k}"))
    });
    out.push(Check::new(
        "(vi) b_{k,1,n,n} = b_{k-1,1,n,n} + Σ_{i=2}^{2n} (-1)^i b_{k-i,1,n,n}",
        format!("n={n}, {}<=k<={k_max}", 2 * n + 1),
        vi,
    ));
    Ok(out)
}

/// `a_{k+2} = 3 + Σ_{i<=k} a_i` for `1 <= k <= k_max`.
pub fn check_lucas_partial_sums(k_max: u32) -> Check {
    let a = lucas_sequence(k_max + 2);
    let mut sum = BigUint::zero();
    let mut fail = None;
    for k in 1..=k_max as usize {
        sum += &a[k - 1];
        if a[k + 1] != &sum + 3u32 {
            fail = Some(format!("k={k}"));
            break;
        }
    }
    Check::new("a_{k+2} = 3 + Σ_{i<=k} a_i", format!("1<=k<={k_max}"), fail)
}

/// `Σ_{d|m} Φ(d, φ) = φ(m)`, the two forms of `Φ` agree, and `m | Φ(m, φ)`,
/// for `1 <= m <= m_max`.
pub fn check_inversion(kind: CountKind, m_max: u32) -> Result<Vec<Check>, OrbitError> {
    let phi = CountFunction::new(kind, m_max)?;
    let transformed: Vec<BigInt> = (1..=u64::from(m_max))
        .map(|m| mobius_combine(m, &phi))
        .collect::<Result<_, _>>()?;
    let range = format!("{kind}, 1<=m<={m_max}");
    let mut inversion = None;
    let mut literal = None;
    let mut divisibility = None;
    for m in 1..=u64::from(m_max) {
        let back: BigInt = divisors(m)?
            .into_iter()
            .map(|d| transformed[d as usize - 1].clone())
            .sum();
        if inversion.is_none() && back != BigInt::from(phi.eval(m).clone()) {
            inversion = Some(format!("m={m}"));
        }
        let value = &transformed[m as usize - 1];
        if literal.is_none() && inclusion_exclusion(m, &phi)? != *value {
            literal = Some(format!("m={m}"));
        }
        if divisibility.is_none()
            && (value.sign() == Sign::Minus || !value.is_multiple_of(&BigInt::from(m)))
        {
            divisibility = Some(format!("m={m}: Φ = {value}"));
        }
    }
    Ok(vec![
        Check::new("Σ_{d|m} Φ(d,φ) = φ(m)", range.clone(), inversion),
        Check::new("Möbius form = prime-subset form", range.clone(), literal),
        Check::new("m | Φ(m,φ) and Φ(m,φ) >= 0", range, divisibility),
    ])
}

/// Outcome of a conjecture scan: proven-range equalities are checks; the
/// conjectured strict inequalities are only reported.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub equalities: Vec<Check>,
    pub findings: Vec<Finding>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub statement: String,
    pub range: String,
    pub cases_checked: usize,
    pub counterexamples: Vec<String>,
    pub note: Option<String>,
}

/// Scans the two orbit-count patterns for `n <= n_max` over periods
/// `<= m_max`:
///
/// * `Φ_n(2m+1)/(2m+1) = 2^{m-n}` for `n <= m <= 3n+1`, and strictly greater
///   for `m > 3n+1`;
/// * `Φ_n(2k+2)/(2k+2) = Ψ(k+1)/(k+1)` for `1 <= k <= 2n`, and strictly
///   greater for `k > 2n`.
pub fn scan_conjectures(n_max: u32, m_max: u32, exec: Exec) -> Result<ScanReport, OrbitError> {
    if n_max == 0 || m_max == 0 {
        return Err(OrbitError::ZeroIndex);
    }
    let psi = orbit_column(CountKind::Power2, m_max)?;
    let per_n = exec.try_map((1..=n_max).collect(), |n| {
        orbit_column(CountKind::for_family(n)?, m_max).map(|col| (n, col))
    })?;
    let at = |col: &[Count], period: u64| col[period as usize - 1].clone();
    let m_top = u64::from(m_max);

    let mut equalities = Vec::new();
    let mut findings = Vec::new();
    for (n, col) in &per_n {
        let n = u64::from(*n);
        // Odd periods.
        let eq_hi = (3 * n + 1).min((m_top.saturating_sub(1)) / 2);
        let odd_eq = first_failure(n..=eq_hi, |m| {
            let got = at(col, 2 * m + 1);
            let want = BigUint::one() << (m - n);
            (got != want).then(|| format!("m={m}: {got} != {want}"))
        });
        equalities.push(Check::new(
            "Φ_n(2m+1)/(2m+1) = 2^{m-n}",
            format!("n={n}, {n}<=m<={eq_hi}"),
            odd_eq,
        ));
        let strict: Vec<u64> = (3 * n + 2..).take_while(|m| 2 * m + 1 <= m_top).collect();
        let bad: Vec<String> = strict
            .iter()
            .filter(|&&m| at(col, 2 * m + 1) <= BigUint::one() << (m - n))
            .map(|m| format!("m={m}"))
            .collect();
        findings.push(Finding {
            statement: "Φ_n(2m+1)/(2m+1) > 2^{m-n}".into(),
            range: format!("n={n}, m>{}, 2m+1<={m_top}", 3 * n + 1),
            cases_checked: strict.len(),
            counterexamples: bad,
            note: Some("range read as m > 3n+1".into()),
        });

        // Even periods against Ψ.
        let k_eq_hi = (2 * n).min((m_top.saturating_sub(2)) / 2);
        let even_eq = first_failure(1..=k_eq_hi, |k| {
            let (got, want) = (at(col, 2 * k + 2), at(&psi, k + 1));
            (got != want).then(|| format!("k={k}: {got} != {want}"))
        });
        equalities.push(Check::new(
            "Φ_n(2k+2)/(2k+2) = Ψ(k+1)/(k+1)",
            format!("n={n}, 1<=k<={k_eq_hi}"),
            even_eq,
        ));
        let strict: Vec<u64> = (2 * n + 1..).take_while(|k| 2 * k + 2 <= m_top).collect();
        let bad: Vec<String> = strict
            .iter()
            .filter(|&&k| at(col, 2 * k + 2) <= at(&psi, k + 1))
            .map(|k| format!("k={k}"))
            .collect();
        findings.push(Finding {
            statement: "Φ_n(2k+2)/(2k+2) > Ψ(k+1)/(k+1)".into(),
            range: format!("n={n}, k>{}, 2k+2<={m_top}", 2 * n),
            cases_checked: strict.len(),
            counterexamples: bad,
            note: None,
        });
    }
    Ok(ScanReport {
        equalities,
        findings,
    })
}

/// Bowen–Franks count `2^{k/m} / (2^d k)` for period `2^d k`, given a periodic
/// orbit of period `2^d m` with odd `m > 1`.
pub fn bowen_franks_bound(d: u32, m: u64, k: u64) -> Result<f64, OrbitError> {
    if m <= 1 || m % 2 == 0 {
        return Err(OrbitError::Domain(format!("m must be odd and > 1, got {m}")));
    }
    if k == 0 {
        return Err(OrbitError::Domain("k must be positive".into()));
    }
    let log2 = k as f64 / m as f64 - f64::from(d) - (k as f64).log2();
    Ok(log2.exp2())
}

/// Jonker count `2^{(n-m)/2}` for odd `1 < m < n`.
pub fn jonker_bound(m: u64, n: u64) -> Result<Count, OrbitError> {
    if m <= 1 || m % 2 == 0 || n % 2 == 0 || m >= n {
        return Err(OrbitError::Domain(format!(
            "need odd 1 < m < n, got m={m}, n={n}"
        )));
    }
    let e = (n - m) / 2;
    let e = e
        .to_usize()
        .ok_or_else(|| OrbitError::Domain("exponent too large".into()))?;
    Ok(BigUint::one() << e)
}
