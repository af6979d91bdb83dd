//! Even-index Bernoulli numbers and the Taylor coefficients of
//! `-log cos x` and `-log(x / tan x)`.
//!
//! Both functions are even with positive coefficients:
//!
//! ```text
//! -log cos x       = Σ_{k≥1} 2^{2k-1} (2^{2k} - 1) |B_{2k}| / (k (2k)!) · x^{2k}
//! -log(x / tan x)  = Σ_{k≥1} 2^{2k} (2^{2k-1} - 1) |B_{2k}| / (k (2k)!) · x^{2k}
//! ```
//!
//! Values are memoized in process-wide tables that only ever grow.

use std::fmt;
use std::str::FromStr;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::kernel::ExactRational;

/// Largest `k` for which `B_{2k}` will be generated.
pub const BERNOULLI_CAP: usize = 512;

/// The two series families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// `-log cos x`, bounding `cos x`.
    LogCos,
    /// `-log(x / tan x)`, bounding `x / tan x`.
    LogTanRatio,
}

impl Family {
    pub const ALL: [Family; 2] = [Family::LogCos, Family::LogTanRatio];

    /// First series coefficient: 1/2 for `LogCos`, 1/3 for `LogTanRatio`.
    pub fn c1(self) -> ExactRational {
        match self {
            Family::LogCos => ExactRational::frac(1, 2),
            Family::LogTanRatio => ExactRational::frac(1, 3),
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Family::LogCos => "logcos",
            Family::LogTanRatio => "logtan",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Family::LogCos => "exp(-theta x^2) < cos x < exp(-x^2/2)",
            Family::LogTanRatio => "exp(-theta x^2) < x/tan x < exp(-x^2/3)",
        }
    }

    fn slot(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "logcos" => Ok(Family::LogCos),
            "logtan" => Ok(Family::LogTanRatio),
            other => Err(Error::InvalidArgument(format!(
                "unknown family {other:?} (expected logcos or logtan)"
            ))),
        }
    }
}

/// `EVEN[i] = B_{2i}` with the sign convention B_1 = -1/2.
static EVEN: RwLock<Vec<BigRational>> = RwLock::new(Vec::new());

fn extend_bernoulli(table: &mut Vec<BigRational>, upto: usize) {
    if table.is_empty() {
        table.push(BigRational::one());
    }
    let b1 = BigRational::new(BigInt::from(-1), BigInt::from(2));
    while table.len() <= upto {
        // Σ_{j=0}^{n} C(n+1, j) B_j = 0, solved for B_n; odd B_j vanish for j ≥ 3.
        let n = 2 * table.len();
        let mut binom = BigInt::one();
        let mut acc = BigRational::zero();
        for j in 0..n {
            if j == 1 {
                acc += &b1 * &binom;
            } else if j % 2 == 0 {
                acc += &table[j / 2] * &binom;
            }
            binom = binom * BigInt::from(n + 1 - j) / BigInt::from(j + 1);
        }
        table.push(-acc / BigInt::from(n + 1));
    }
}

/// Signed `B_{2k}`, `k ≥ 0`.
pub fn bernoulli_2k(k: usize) -> Result<ExactRational> {
    if k > BERNOULLI_CAP {
        return Err(Error::Resource {
            requested: k,
            cap: BERNOULLI_CAP,
        });
    }
    if let Some(b) = EVEN.read().unwrap_or_else(|e| e.into_inner()).get(k) {
        return Ok(ExactRational::from_big(b.clone()));
    }
    let mut table = EVEN.write().unwrap_or_else(|e| e.into_inner());
    extend_bernoulli(&mut table, k);
    Ok(ExactRational::from_big(table[k].clone()))
}

/// `|B_{2k}|` for `k ≥ 1`.
pub fn bernoulli_abs_2k(k: usize) -> Result<ExactRational> {
    if k == 0 {
        return Err(Error::InvalidArgument(
            "bernoulli index k must be >= 1".into(),
        ));
    }
    Ok(bernoulli_2k(k)?.abs())
}

static COEFFS: [RwLock<Vec<ExactRational>>; 2] = [RwLock::new(Vec::new()), RwLock::new(Vec::new())];

fn closed_form(family: Family, k: usize, abs_b: &ExactRational, fact_2k: &BigInt) -> ExactRational {
    let p2k = BigInt::one() << (2 * k);
    let factor = match family {
        Family::LogCos => (BigInt::one() << (2 * k - 1)) * (&p2k - 1),
        Family::LogTanRatio => &p2k * ((BigInt::one() << (2 * k - 1)) - 1),
    };
    let denom = BigInt::from(k) * fact_2k;
    abs_b * &ExactRational::from_big(BigRational::new(factor, denom))
}

/// Series coefficient γ_k of the family, `k ≥ 1`.
pub fn coeff(family: Family, k: usize) -> Result<ExactRational> {
    if k == 0 {
        return Err(Error::InvalidArgument(
            "coefficient index k must be >= 1".into(),
        ));
    }
    Ok(coeff_prefix(family, k)?.pop().expect("non-empty prefix"))
}

/// `[γ_1, ..., γ_n]`.
pub fn coeff_prefix(family: Family, n: usize) -> Result<Vec<ExactRational>> {
    if n == 0 {
        return Err(Error::InvalidArgument("prefix length must be >= 1".into()));
    }
    if n > BERNOULLI_CAP {
        return Err(Error::Resource {
            requested: n,
            cap: BERNOULLI_CAP,
        });
    }
    let lock = &COEFFS[family.slot()];
    {
        let table = lock.read().unwrap_or_else(|e| e.into_inner());
        if table.len() >= n {
            return Ok(table[..n].to_vec());
        }
    }
    // Make sure the Bernoulli table is filled before taking the write lock.
    bernoulli_2k(n)?;
    let mut table = lock.write().unwrap_or_else(|e| e.into_inner());
    let mut fact = BigInt::one();
    for j in 1..=2 * table.len() {
        fact *= j;
    }
    while table.len() < n {
        let k = table.len() + 1;
        fact *= 2 * k - 1;
        fact *= 2 * k;
        let b = bernoulli_abs_2k(k)?;
        table.push(closed_form(family, k, &b, &fact));
    }
    Ok(table[..n].to_vec())
}

/// Closed-form sign argument: every factor of γ_k is positive for k ≥ 1.
pub(crate) fn coefficient_factors_positive(family: Family, k: usize) -> bool {
    let abs_b_positive = bernoulli_abs_2k(k)
        .map(|b| b.is_positive())
        .unwrap_or(false);
    let p2k = BigInt::one() << (2 * k);
    let factor: BigInt = match family {
        Family::LogCos => &p2k - 1,
        Family::LogTanRatio => (BigInt::one() << (2 * k - 1)) - 1,
    };
    abs_b_positive && factor.is_positive()
}
