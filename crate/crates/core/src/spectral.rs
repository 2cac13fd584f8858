//! Growth rates: the polynomial `x^{2n+1} - 2x^{2n-1} - 1`, its dominant
//! root `λ_n`, and how fast the orbit counts approach `λ_n^m`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::orbits::{
    mobius_combine, orbit_column, BRecursion, Check, CountFunction, CountKind, OrbitError,
};
use crate::plmap::{integer, rational, ExactRational};

/// Bisection never runs longer than this.
pub const MAX_BISECTIONS: u32 = 200;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("n must be at least 1")]
    ZeroIndex,
    #[error("tolerance must be positive and finite, got {0}")]
    BadTolerance(f64),
    #[error("tolerance {0} not reached within {MAX_BISECTIONS} bisections")]
    ToleranceUnreachable(f64),
    #[error("polynomial has no nonzero coefficient")]
    ZeroPolynomial,
    #[error("Φ_{n}({m}) = 0, so its logarithm is undefined")]
    Undefined { n: u32, m: u64 },
    #[error("need m_max >= 8, got {0}")]
    RangeTooShort(u32),
    #[error(transparent)]
    Orbit(#[from] OrbitError),
}

/// Integer polynomial, coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Result<Self, SpectralError> {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(SpectralError::ZeroPolynomial);
        }
        Ok(Self { coeffs })
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: &ExactRational) -> ExactRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }
}

/// `x^{2n+1} - 2x^{2n-1} - 1`.
pub fn char_poly(n: u32) -> Result<IntPolynomial, SpectralError> {
    if n == 0 {
        return Err(SpectralError::ZeroIndex);
    }
    let deg = 2 * n as usize + 1;
    let mut coeffs = vec![BigInt::zero(); deg + 1];
    coeffs[0] = BigInt::from(-1);
    coeffs[deg - 2] = BigInt::from(-2);
    coeffs[deg] = BigInt::one();
    IntPolynomial::new(coeffs)
}

/// A root held as an exact rational bracket `[lo, hi]` with a sign change;
/// `value` is the midpoint and `radius` half the bracket width.
#[derive(Debug, Clone, PartialEq)]
pub struct RootApprox {
    pub value: f64,
    pub radius: f64,
    pub lo: ExactRational,
    pub hi: ExactRational,
    pub iterations: u32,
}

impl RootApprox {
    pub fn midpoint(&self) -> ExactRational {
        (&self.lo + &self.hi) / integer(2)
    }

    /// Midpoint rounded half-up to `digits` decimal places.
    pub fn decimal(&self, digits: usize) -> String {
        let mid = self.midpoint();
        let scale = BigInt::from(10u32).pow(digits as u32);
        let scaled = (mid * BigRational::from_integer(scale) + rational(1, 2)).floor();
        let n = scaled.to_integer();
        let sign = if n.is_negative() { "-" } else { "" };
        let digits_str = n.abs().to_string();
        if digits == 0 {
            return format!("{sign}{digits_str}");
        }
        let padded = format!("{digits_str:0>width$}", width = digits + 1);
        let (int, frac) = padded.split_at(padded.len() - digits);
        format!("{sign}{int}.{frac}")
    }

    pub fn to_json(&self, n: u32, tol: f64, digits: usize) -> serde_json::Value {
        serde_json::json!({
            "n": n,
            "lambda": self.decimal(digits),
            "tol": tol,
            "bracket": [self.lo.to_string(), self.hi.to_string()],
        })
    }
}

/// `λ_n` by bisection on `[7/5, 2]`. The polynomial is negative at `7/5`
/// (since `x^2 < 2` there) and positive at 2.
pub fn dominant_root(n: u32, tol: f64) -> Result<RootApprox, SpectralError> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(SpectralError::BadTolerance(tol));
    }
    let p = char_poly(n)?;
    let target = BigRational::from_float(tol).expect("finite");
    let mut lo = rational(7, 5);
    let mut hi = integer(2);
    debug_assert!(p.eval(&lo).is_negative() && p.eval(&hi).is_positive());
    let mut iterations = 0;
    while (&hi - &lo) / integer(2) > target {
        if iterations == MAX_BISECTIONS {
            return Err(SpectralError::ToleranceUnreachable(tol));
        }
        let mid = (&lo + &hi) / integer(2);
        let v = p.eval(&mid);
        if v.is_zero() {
            lo = mid.clone();
            hi = mid;
        } else if v.is_negative() {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    let mid = (&lo + &hi) / integer(2);
    Ok(RootApprox {
        value: mid.to_f64().expect("bounded"),
        radius: ((&hi - &lo) / integer(2)).to_f64().expect("bounded"),
        lo,
        hi,
        iterations,
    })
}

/// Natural log of a big unsigned integer.
pub fn ln_big(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits <= 1000 {
        return v.to_f64().expect("fits").ln();
    }
    let shift = bits - 64;
    let top = (v >> shift).to_f64().expect("fits");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Two estimates of how far `Φ_n(m)` is from growing like `λ_n^m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthGap {
    /// `log Φ_n(m) / m - log λ_n`.
    pub unbiased: f64,
    /// `log(Φ_n(m)/m) / m - log λ_n`, carrying a `log(m)/m` bias.
    pub per_orbit: f64,
}

pub fn growth_gap(n: u32, m: u64) -> Result<GrowthGap, SpectralError> {
    let kind = CountKind::for_family(n)?;
    let m_idx = u32::try_from(m).map_err(|_| OrbitError::PeriodTooLarge(m))?;
    let phi = CountFunction::new(kind, m_idx)?;
    let total = mobius_combine(m, &phi)?;
    let total = total
        .to_biguint()
        .filter(|t| !t.is_zero())
        .ok_or(SpectralError::Undefined { n, m })?;
    let ln_lambda = dominant_root(n, 1e-15)?.value.ln();
    let ln_total = ln_big(&total);
    let mf = m as f64;
    Ok(GrowthGap {
        unbiased: ln_total / mf - ln_lambda,
        per_orbit: (ln_total - mf.ln()) / mf - ln_lambda,
    })
}

/// Growth of `b_{k,1,n,n}` against `log λ_n`: the one-point estimate
/// `log(b_k)/k` and the two-step ratio `log(b_k / b_{k-2}) / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BranchGrowth {
    pub log_lambda: f64,
    pub one_point: f64,
    pub two_step: f64,
}

pub fn branch_growth(n: u32, k: u32) -> Result<BranchGrowth, SpectralError> {
    if k < 3 {
        return Err(SpectralError::RangeTooShort(k));
    }
    let rec = BRecursion::new(n, k)?;
    let nn = n as usize;
    let bk = ln_big(&rec.b(i64::from(k), 1, nn));
    let bk2 = ln_big(&rec.b(i64::from(k) - 2, 1, nn));
    Ok(BranchGrowth {
        log_lambda: dominant_root(n, 1e-15)?.value.ln(),
        one_point: bk / f64::from(k),
        two_step: (bk - bk2) / 2.0,
    })
}

/// Growth behaviour of `Φ_1(m)/m`: strict increase from `m = 6` on, and the
/// ratio of consecutive counts approaching the golden ratio.
pub fn thm1c_checks(m_max: u32) -> Result<Vec<Check>, SpectralError> {
    if m_max < 8 {
        return Err(SpectralError::RangeTooShort(m_max));
    }
    let col = orbit_column(CountKind::Lucas, m_max)?;
    let at = |m: u32| &col[m as usize - 1];
    let increase = (6..m_max).find(|&m| at(m + 1) <= at(m)).map(|m| {
        format!("m={m}: Φ_1({})/{} = {} <= {}", m + 1, m + 1, at(m + 1), at(m))
    });
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    let m = m_max - 1;
    let ratio = |a: &BigUint, b: &BigUint| (ln_big(a) - ln_big(b)).exp();
    let raw = ratio(at(m + 1), at(m));
    let corrected = raw * f64::from(m + 1) / f64::from(m);
    let mut out = vec![Check {
        property: "Φ_1(m+1)/(m+1) > Φ_1(m)/m".into(),
        range: format!("6<=m<{m_max}"),
        pass: increase.is_none(),
        counterexample: increase,
    }];
    let close = (corrected - golden).abs() < 0.01;
    out.push(Check {
        property: "corrected consecutive ratio within 0.01 of (1+√5)/2".into(),
        range: format!("m={m}: ratio {corrected:.6}, uncorrected {raw:.6}"),
        pass: close,
        counterexample: (!close).then(|| format!("|{corrected} - {golden}| >= 0.01")),
    });
    Ok(out)
}
