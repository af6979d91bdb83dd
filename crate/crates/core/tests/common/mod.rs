//! Independent reference computations shared by the integration tests.
//!
//! Nothing here calls into the library's numerics: π comes from Machin's
//! formula, Bernoulli numbers from the Akiyama–Tanigawa table, series
//! coefficients from formal power-series arithmetic, and function values from
//! big fixed-point Taylor sums.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use squeeze_core::{ExactRational, Family};

pub fn q(s: &str) -> ExactRational {
    s.parse().unwrap()
}

pub fn to_big(r: &ExactRational) -> BigRational {
    BigRational::new(r.numer().clone(), r.denom().clone())
}

pub fn from_big(r: &BigRational) -> ExactRational {
    ExactRational::new(r.numer().clone(), r.denom().clone()).unwrap()
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

// ---------------------------------------------------------------- π

fn atan_inv(n: u32, scale: &BigInt) -> BigInt {
    // atan(1/n) = Σ (-1)^j / ((2j+1) n^{2j+1})
    let n2 = BigInt::from(n) * n;
    let mut power = scale / BigInt::from(n);
    let mut sum = BigInt::zero();
    let mut j = 0u32;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * j + 1);
        if j.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &n2;
        j += 1;
    }
    sum
}

/// π/2 to within 10^-70, as `[lo, hi]`.
pub fn machin_pi_half() -> (BigRational, BigRational) {
    let scale = BigInt::from(10).pow(80);
    let pi = (atan_inv(5, &scale) * 16 - atan_inv(239, &scale) * 4) / 2;
    let slack = BigInt::from(10).pow(10);
    (
        BigRational::new(&pi - &slack, scale.clone()),
        BigRational::new(&pi + &slack, scale),
    )
}

// ---------------------------------------------------------------- Bernoulli

/// B_0..=B_n by the Akiyama–Tanigawa algorithm (B_1 = +1/2 convention).
pub fn akiyama_tanigawa(n: usize) -> Vec<BigRational> {
    let mut a: Vec<BigRational> = Vec::with_capacity(n + 1);
    let mut out = Vec::with_capacity(n + 1);
    for m in 0..=n {
        a.push(rat(1, m as i64 + 1));
        for j in (1..=m).rev() {
            let next = BigRational::from_integer(j.into()) * (&a[j - 1] - &a[j]);
            a[j - 1] = next;
        }
        out.push(a[0].clone());
    }
    out
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// Closed-form coefficient from Bernoulli numbers.
pub fn closed_form_coeff(family: Family, k: usize, bern: &[BigRational]) -> BigRational {
    let b = bern[2 * k].abs();
    let two = BigInt::from(2);
    let num = match family {
        Family::LogCos => two.pow(2 * k as u32 - 1) * (two.pow(2 * k as u32) - 1),
        Family::LogTanRatio => two.pow(2 * k as u32) * (two.pow(2 * k as u32 - 1) - 1),
    };
    b * BigRational::new(num, factorial(2 * k) * k)
}

// ---------------------------------------------------------------- formal series

type Series = Vec<BigRational>;

fn series_div(a: &Series, b: &Series, n: usize) -> Series {
    let mut out = vec![BigRational::zero(); n];
    for i in 0..n {
        let mut acc = a.get(i).cloned().unwrap_or_else(BigRational::zero);
        for j in 1..=i {
            if let Some(bj) = b.get(j) {
                acc -= bj * &out[i - j];
            }
        }
        out[i] = acc / &b[0];
    }
    out
}

/// log f for a series with f(0) = 1, via ∫ f'/f.
fn series_log(f: &Series, n: usize) -> Series {
    let deriv: Series = (1..n)
        .map(|i| &f[i] * BigRational::from_integer(i.into()))
        .collect();
    let ratio = series_div(&deriv, f, n - 1);
    let mut out = vec![BigRational::zero(); n];
    for i in 1..n {
        out[i] = &ratio[i - 1] / BigRational::from_integer(i.into());
    }
    out
}

fn cos_series(n: usize) -> Series {
    (0..n)
        .map(|i| {
            if i % 2 == 1 {
                return BigRational::zero();
            }
            let s = if (i / 2) % 2 == 0 { 1 } else { -1 };
            BigRational::new(s.into(), factorial(i))
        })
        .collect()
}

fn sinc_series(n: usize) -> Series {
    (0..n)
        .map(|i| {
            if i % 2 == 1 {
                return BigRational::zero();
            }
            let s = if (i / 2) % 2 == 0 { 1 } else { -1 };
            BigRational::new(s.into(), factorial(i + 1))
        })
        .collect()
}

/// Coefficients γ_1..=γ_k of x², x⁴, ... in −log cos x or log(tan x / x).
pub fn series_coeffs(family: Family, k: usize) -> Vec<BigRational> {
    let n = 2 * k + 1;
    let neg_log_cos: Series = series_log(&cos_series(n), n)
        .into_iter()
        .map(|c| -c)
        .collect();
    let target = match family {
        Family::LogCos => neg_log_cos,
        Family::LogTanRatio => {
            let log_sinc = series_log(&sinc_series(n), n);
            log_sinc
                .iter()
                .zip(&neg_log_cos)
                .map(|(a, b)| a + b)
                .collect()
        }
    };
    (1..=k).map(|j| target[2 * j].clone()).collect()
}

// ---------------------------------------------------------------- fixed point

/// Working precision of the fixed-point oracle, in bits.
pub const FIX_BITS: u32 = 480;
/// Guaranteed accuracy of oracle values, in bits.
pub const FIX_ACCURACY: u32 = 400;

fn fx_one() -> BigInt {
    BigInt::one() << FIX_BITS
}

fn fx_from(r: &BigRational) -> BigInt {
    (r.numer() << FIX_BITS).div_floor(r.denom())
}

fn fx_mul(a: &BigInt, b: &BigInt) -> BigInt {
    (a * b) >> FIX_BITS
}

fn fx_div(a: &BigInt, b: &BigInt) -> BigInt {
    (a << FIX_BITS).div_floor(b)
}

fn fx_sin_cos(x: &BigInt) -> (BigInt, BigInt) {
    let mut sin = BigInt::zero();
    let mut cos = BigInt::zero();
    let mut term = fx_one();
    let mut i: u64 = 0;
    loop {
        // term = x^i / i!
        if term.is_zero() {
            break;
        }
        match i % 4 {
            0 => cos += &term,
            1 => sin += &term,
            2 => cos -= &term,
            _ => sin -= &term,
        }
        i += 1;
        term = fx_mul(&term, x) / BigInt::from(i);
    }
    (sin, cos)
}

fn fx_atanh(z: &BigInt) -> BigInt {
    let z2 = fx_mul(z, z);
    let mut power = z.clone();
    let mut sum = BigInt::zero();
    let mut j: u64 = 0;
    while !power.is_zero() {
        sum += &power / BigInt::from(2 * j + 1);
        power = fx_mul(&power, &z2);
        j += 1;
    }
    sum
}

fn fx_log(y: &BigInt) -> BigInt {
    assert!(y.is_positive());
    let shift = y.bits() as i64 - (FIX_BITS as i64 + 1);
    let m = if shift >= 0 {
        y >> shift as usize
    } else {
        y << (-shift) as usize
    };
    let one = fx_one();
    let z = fx_div(&(&m - &one), &(&m + &one));
    let ln2 = fx_atanh(&fx_div(&one, &(&one * 3))) * 2;
    fx_atanh(&z) * 2 + ln2 * shift
}

/// F_θ^{(d)}(x) for d ≤ 2 as an interval of width 2^{1-FIX_ACCURACY}.
pub fn oracle_value(
    family: Family,
    theta: &BigRational,
    x: &BigRational,
    d: usize,
) -> (BigRational, BigRational) {
    let xf = fx_from(x);
    let th = fx_from(theta);
    let one = fx_one();
    let (s, c) = fx_sin_cos(&xf);
    let v = match (family, d) {
        (Family::LogCos, 0) => -fx_log(&c) - fx_mul(&th, &fx_mul(&xf, &xf)),
        (Family::LogCos, 1) => fx_div(&s, &c) - fx_mul(&th, &xf) * 2,
        (Family::LogCos, 2) => fx_div(&one, &fx_mul(&c, &c)) - &th * 2,
        (Family::LogTanRatio, 0) => {
            fx_log(&s) - fx_log(&xf) - fx_log(&c) - fx_mul(&th, &fx_mul(&xf, &xf))
        }
        (Family::LogTanRatio, 1) => {
            fx_div(&one, &fx_mul(&s, &c)) - fx_div(&one, &xf) - fx_mul(&th, &xf) * 2
        }
        (Family::LogTanRatio, 2) => {
            let sc = fx_mul(&s, &c);
            let cos2 = fx_mul(&c, &c) - fx_mul(&s, &s);
            fx_div(&one, &fx_mul(&xf, &xf)) - fx_div(&cos2, &fx_mul(&sc, &sc)) - &th * 2
        }
        _ => panic!("oracle supports d <= 2"),
    };
    let den = BigInt::one() << FIX_BITS;
    let slack = BigInt::one() << (FIX_BITS - FIX_ACCURACY);
    (
        BigRational::new(&v - &slack, den.clone()),
        BigRational::new(v + slack, den),
    )
}

// ---------------------------------------------------------------- floats

/// −log h(x) in double precision.
pub fn neg_log_target(family: Family, x: f64) -> f64 {
    match family {
        Family::LogCos => -x.cos().ln(),
        Family::LogTanRatio => (x.tan() / x).ln(),
    }
}

/// h(x) in double precision.
pub fn target(family: Family, x: f64) -> f64 {
    match family {
        Family::LogCos => x.cos(),
        Family::LogTanRatio => x / x.tan(),
    }
}

/// Best constant −log h(x0)/x0² in double precision.
pub fn float_best_constant(family: Family, x0: f64) -> f64 {
    neg_log_target(family, x0) / (x0 * x0)
}
