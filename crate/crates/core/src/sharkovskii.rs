//! The Sharkovskii ordering
//! `3 ≺ 5 ≺ 7 ≺ … ≺ 2·3 ≺ 2·5 ≺ … ≺ 2²·3 ≺ … ≺ 2³ ≺ 2² ≺ 2 ≺ 1`
//! and the sharp orbit-count bound it supports.

use std::cmp::Ordering;

use serde::Serialize;
use thiserror::Error;

use crate::orbits::{orbit_count, Count, OrbitError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SharkovskiiError {
    #[error("periods start at 1")]
    ZeroPeriod,
    #[error("{0} is a power of two; the bound needs an odd factor greater than 1")]
    PowerOfTwo(u64),
    #[error("{s} does not force {t} in the Sharkovskii ordering")]
    NotForced { s: u64, t: u64 },
    #[error(transparent)]
    Orbit(#[from] OrbitError),
}

/// `m = 2^k · odd_part`; `n = (odd_part - 1) / 2` when `odd_part > 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PeriodDecomposition {
    pub k: u32,
    pub odd_part: u64,
    pub n: Option<u64>,
}

pub fn decompose(s: u64) -> Result<PeriodDecomposition, SharkovskiiError> {
    if s == 0 {
        return Err(SharkovskiiError::ZeroPeriod);
    }
    let k = s.trailing_zeros();
    let odd_part = s >> k;
    Ok(PeriodDecomposition {
        k,
        odd_part,
        n: (odd_part > 1).then(|| (odd_part - 1) / 2),
    })
}

/// Sort key realising the ordering: odd-factor periods first, by power of two
/// then odd part; powers of two last, largest exponent first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct OrderKey {
    tier: u8,
    major: u64,
    minor: u64,
}

impl OrderKey {
    pub fn of(m: u64) -> Result<Self, SharkovskiiError> {
        let d = decompose(m)?;
        Ok(if d.odd_part > 1 {
            OrderKey {
                tier: 0,
                major: u64::from(d.k),
                minor: d.odd_part,
            }
        } else {
            OrderKey {
                tier: 1,
                major: u64::MAX - u64::from(d.k),
                minor: 0,
            }
        })
    }
}

/// `a ≺ b`: a periodic orbit of period `a` forces one of period `b`.
/// Irreflexive.
pub fn precedes(a: u64, b: u64) -> Result<bool, SharkovskiiError> {
    Ok(OrderKey::of(a)? < OrderKey::of(b)?)
}

pub fn compare(a: u64, b: u64) -> Result<Ordering, SharkovskiiError> {
    Ok(OrderKey::of(a)?.cmp(&OrderKey::of(b)?))
}

/// `1..=m_max` listed in Sharkovskii order.
pub fn sorted_periods(m_max: u64) -> Vec<u64> {
    let mut v: Vec<u64> = (1..=m_max).collect();
    v.sort_by_key(|&m| OrderKey::of(m).expect("positive"));
    v
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundStatus {
    /// The count formula applies and is attained by an explicit map.
    Sharp,
    /// `2^k` does not divide `t`; only the single forced orbit is claimed.
    FormulaInapplicable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bound {
    pub value: Count,
    pub status: BoundStatus,
}

/// Minimal number of period-`t` orbits for a map whose ≺-least period is
/// `s = 2^k (2n+1)`: `Φ_n(t/2^k) / (t/2^k)` when `2^k | t`.
pub fn theorem3_bound(s: u64, t: u64) -> Result<Bound, SharkovskiiError> {
    let d = decompose(s)?;
    let n = d.n.ok_or(SharkovskiiError::PowerOfTwo(s))?;
    if !precedes(s, t)? {
        return Err(SharkovskiiError::NotForced { s, t });
    }
    if t % (1u64 << d.k) != 0 {
        return Ok(Bound {
            value: Count::from(1u32),
            status: BoundStatus::FormulaInapplicable,
        });
    }
    let q = t >> d.k;
    let n = u32::try_from(n).map_err(|_| OrbitError::Domain(format!("odd part of {s} too large")))?;
    Ok(Bound {
        value: orbit_count(n, q)?,
        status: BoundStatus::Sharp,
    })
}
