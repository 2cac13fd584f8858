//! Verification suites behind `orbitforge verify`.

use anyhow::Result;
use num_bigint::BigUint;
use orbitforge::orbits::{
    c_sequence, check_inversion, check_lucas_partial_sums, check_properties, lucas_sequence,
    orbit_column, Check, CountKind,
};
use orbitforge::plmap::PlMap;
use orbitforge::spectral::thm1c_checks;
use orbitforge::symbolic::{count_crossings, MarkovMap, DEFAULT_LABEL_CAP};
use orbitforge::Exec;

use crate::MapChoice;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Properties,
    Oracle,
    Symbolic,
    Mobius,
    Thm1c,
    All,
}

pub struct Ranges {
    pub n: Option<u32>,
    pub k_max: Option<u32>,
    pub m_max: Option<u32>,
    pub map: MapChoice,
    pub piece_cap: usize,
}

pub fn run(suite: Suite, r: &Ranges) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let all = suite == Suite::All;
    if all || suite == Suite::Properties {
        out.extend(check_properties(r.n.unwrap_or(2), r.k_max.unwrap_or(40))?);
        if all {
            out.push(check_lucas_partial_sums(r.k_max.unwrap_or(40)));
        }
    }
    // Oracle work grows exponentially in k, so `all` keeps it at k <= 10.
    let oracle_k = if all { r.k_max.unwrap_or(10).min(10) } else { r.k_max.unwrap_or(10) };
    if all || suite == Suite::Oracle {
        let k_max = oracle_k;
        if all {
            out.extend(oracle(MapChoice::Thm1, None, k_max, r.piece_cap)?);
            out.extend(oracle(MapChoice::Fn, Some(r.n.unwrap_or(2)), k_max, r.piece_cap)?);
        } else {
            out.extend(oracle(r.map, r.n, k_max, r.piece_cap)?);
        }
    }
    if all || suite == Suite::Symbolic {
        let k_max = oracle_k;
        if all {
            out.extend(symbolic(MapChoice::Thm1, None, k_max, r.piece_cap)?);
            out.extend(symbolic(MapChoice::Fn, Some(r.n.unwrap_or(2)), k_max, r.piece_cap)?);
        } else {
            out.extend(symbolic(r.map, r.n, k_max, r.piece_cap)?);
        }
    }
    if all || suite == Suite::Mobius {
        let m_max = r.m_max.unwrap_or(200);
        let mut kinds = vec![CountKind::Lucas, CountKind::Power2];
        match r.n {
            Some(n) if !all => kinds.push(CountKind::for_family(n)?),
            _ => kinds.extend((2..=5).map(CountKind::Family)),
        }
        for kind in kinds {
            out.extend(check_inversion(kind, m_max)?);
        }
    }
    if all || suite == Suite::Thm1c {
        out.extend(thm1c_checks(r.m_max.unwrap_or(64).max(8))?);
    }
    Ok(out)
}

fn build_map(map: MapChoice, n: Option<u32>) -> Result<(PlMap, CountKind, String)> {
    Ok(match map {
        MapChoice::Thm1 => (PlMap::theorem1(), CountKind::Lucas, "thm1".into()),
        MapChoice::Fn => {
            let n = n.unwrap_or(2);
            (PlMap::family(n)?, CountKind::for_family(n)?, format!("f_{n}"))
        }
    })
}

fn expected_points(kind: CountKind, k_max: u32) -> Result<Vec<BigUint>> {
    Ok(match kind {
        CountKind::Lucas => lucas_sequence(k_max),
        CountKind::Family(n) => c_sequence(n, k_max)?,
        CountKind::Power2 => (1..=k_max).map(|k| BigUint::from(1u32) << k).collect(),
    })
}

fn first_mismatch<T: PartialEq + std::fmt::Display>(
    got: impl IntoIterator<Item = (u32, T)>,
    want: &[T],
) -> Option<String> {
    got.into_iter()
        .zip(want)
        .find(|((_, g), w)| g != *w)
        .map(|((k, g), w)| format!("k={k}: {g} != {w}"))
}

fn check(property: String, range: String, counterexample: Option<String>) -> Check {
    Check {
        property,
        range,
        pass: counterexample.is_none(),
        counterexample,
    }
}

/// Exact fixed-point and orbit counts of the map against the recursions.
fn oracle(map: MapChoice, n: Option<u32>, k_max: u32, cap: usize) -> Result<Vec<Check>> {
    let (f, kind, name) = build_map(map, n)?;
    let rows = f.oracle_sweep(k_max, cap, Exec::default())?;
    let points = expected_points(kind, k_max)?;
    let orbits = orbit_column(kind, k_max)?;
    let range = format!("{name}, 1<=k<={k_max}");
    Ok(vec![
        check(
            format!("oracle #Fix({name}^k) = {kind}(k)"),
            range.clone(),
            first_mismatch(rows.iter().map(|r| (r.k, r.periodic_points.clone())), &points),
        ),
        check(
            format!("oracle minimal-period orbits = Φ({kind})(k)/k"),
            range,
            first_mismatch(rows.iter().map(|r| (r.k, r.minimal_period_orbits.clone())), &orbits),
        ),
    ])
}

/// Symbolic counts against the recursion, the exact oracle and the string
/// expansion.
fn symbolic(map: MapChoice, n: Option<u32>, k_max: u32, cap: usize) -> Result<Vec<Check>> {
    let (f, kind, name) = build_map(map, n)?;
    let m = MarkovMap::new(&f)?;
    let rules = m.derive_rules()?;
    let mask = m.crossing_mask(&rules);
    let seq = m.count_sequence(&rules, k_max);
    let crossings = seq
        .iter()
        .zip(1..)
        .map(|(c, k)| Ok((k, count_crossings(c, &mask)?)))
        .collect::<Result<Vec<_>>>()?;
    let points = expected_points(kind, k_max)?;
    let mut out = vec![check(
        format!("crossing assembly = {kind}(k)"),
        format!("{name}, 1<=k<={k_max}"),
        first_mismatch(crossings.iter().cloned(), &points),
    )];

    let oracle_k = k_max.min(10);
    let rows = f.oracle_sweep(oracle_k, cap, Exec::default())?;
    let oracle: Vec<BigUint> = rows.into_iter().map(|r| r.periodic_points).collect();
    out.push(check(
        "crossing assembly = exact oracle".into(),
        format!("{name}, 1<=k<={oracle_k}"),
        first_mismatch(crossings.iter().take(oracle_k as usize).cloned(), &oracle),
    ));

    let located_k = k_max.min(8);
    let mut bad = None;
    for (k, counts) in (1..=located_k).zip(&seq) {
        let located = m.located_representation(k, DEFAULT_LABEL_CAP)?;
        if m.counts_from_positions(&located, &rules, k).as_ref() != Some(counts) {
            bad = Some(format!("k={k}"));
            break;
        }
    }
    out.push(check(
        "located counts = counts read from exact positions".into(),
        format!("{name}, 1<=k<={located_k}"),
        bad,
    ));
    Ok(out)
}
