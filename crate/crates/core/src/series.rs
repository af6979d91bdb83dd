//! Rigorous evaluation of the perturbed even series
//!
//! ```text
//! F_θ(x) = (c1 - θ) x² + Σ_{k≥2} γ_k x^{2k}
//! ```
//!
//! and its first three derivatives. For `LogCos` this is `-θx² - log cos x`,
//! for `LogTanRatio` it is `-θx² - log(x / tan x)`.
//!
//! Every term with `k ≥ 2` is positive on `(0, π/2)`, so truncating after
//! index `N` leaves a nonnegative tail. An enclosure is the exact partial sum
//! `S` together with `S + T`, where `T` dominates the tail through the
//! majorant `γ_k ≤ (5/3)(2/π)^{2k}/k`.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;

use crate::bernoulli::{coeff_prefix, Family};
use crate::error::{Error, Result};
use crate::kernel::{pi_half_lo, pow_round_up, Enclosure, ExactRational, Rounding, Sign};
use crate::settings::Settings;

/// Highest derivative order the series module evaluates.
pub const MAX_ORDER: usize = 3;

/// Partial sums whose denominator exceeds this many bits are rounded outward.
const ROUND_TRIGGER_BITS: u64 = 4096;
/// Dyadic budget used for that rounding.
const ROUND_BUDGET: u32 = 256;
/// Significant bits kept in tail-bound intermediates (always rounded up).
const TAIL_BITS: u32 = 128;
const FIRST_DEPTH: usize = 8;

/// `F_θ` for a family and a candidate exponent constant θ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerturbedSeries {
    family: Family,
    theta: ExactRational,
    lambda: ExactRational,
}

/// Parameters of the geometric tail majorant at a point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TailParams {
    pub depth: usize,
    /// `(2x / π_lo)²`, rounded up to 64 significant bits.
    pub ratio: ExactRational,
    /// The ζ(2) bound 5/3.
    pub majorant: ExactRational,
}

/// Result of one series evaluation.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub enclosure: Enclosure,
    /// Exact partial sum through `depth`, before any outward rounding.
    pub partial_sum: ExactRational,
    pub tail: ExactRational,
    pub depth: usize,
}

impl PerturbedSeries {
    pub fn new(family: Family, theta: ExactRational) -> Self {
        let lambda = &family.c1() - &theta;
        PerturbedSeries {
            family,
            theta,
            lambda,
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn theta(&self) -> &ExactRational {
        &self.theta
    }

    /// λ = c1 − θ, the coefficient of x².
    pub fn leading_coefficient(&self) -> &ExactRational {
        &self.lambda
    }

    /// Exact `d`-th derivative of the truncated series `Σ_{k≤depth}`.
    pub fn partial_sum(&self, x: &ExactRational, d: usize, depth: usize) -> Result<ExactRational> {
        check_order(d)?;
        check_point(x)?;
        if depth < 2 {
            return Err(Error::InvalidArgument("series depth must be >= 2".into()));
        }
        let scaled = scaled_prefix(self.family, depth)?;
        let p = x.numer();
        let q = x.denom();
        let pp = p * p;
        let qq = q * q;

        // h = Σ_{k=2}^{N} A_k f(k) P^{k-2} Q^{N-k}, with f the derivative factor.
        let mut h = &scaled.numerators[depth - 2] * falling(2 * depth, d);
        let mut qpow = BigInt::one();
        for k in (2..depth).rev() {
            qpow *= &qq;
            h = h * &pp + &scaled.numerators[k - 2] * falling(2 * k, d) * &qpow;
        }
        let mut num = h * &pp * &pp;
        let mut den = &scaled.denominator * qpow * &qq * &qq;
        for _ in 0..d {
            num *= q;
            den *= p;
        }
        let tail_terms = ExactRational::from_big(BigRational::new(num, den));

        let lam = &self.lambda;
        let leading = match d {
            0 => lam * &(x * x),
            1 => lam * &(x * &ExactRational::from(2)),
            2 => lam * &ExactRational::from(2),
            _ => ExactRational::zero(),
        };
        Ok(leading + tail_terms)
    }

    /// Enclosure at a fixed truncation depth.
    pub fn eval_at_depth(&self, x: &ExactRational, d: usize, depth: usize) -> Result<Evaluation> {
        let tail = tail_bound(self.family, x, depth, d)?;
        let s = self.partial_sum(x, d, depth)?;
        Ok(assemble(s, tail, depth))
    }

    /// Enclosure of `F_θ^{(d)}(x)` of width at most `target_width`.
    pub fn eval(
        &self,
        x: &ExactRational,
        d: usize,
        target_width: &ExactRational,
        settings: &Settings,
    ) -> Result<Enclosure> {
        Ok(self.eval_detailed(x, d, target_width, settings)?.enclosure)
    }

    pub fn eval_detailed(
        &self,
        x: &ExactRational,
        d: usize,
        target_width: &ExactRational,
        settings: &Settings,
    ) -> Result<Evaluation> {
        check_order(d)?;
        check_point(x)?;
        if !target_width.is_positive() {
            return Err(Error::InvalidArgument(
                "target width must be positive".into(),
            ));
        }
        let depth = depth_for(self.family, x, d, target_width, settings)?;
        self.eval_at_depth(x, d, depth)
    }

    /// Sign of `F_θ^{(d)}(x)`, escalating precision until it is certified or
    /// the escalation budget runs out.
    pub fn certified_sign(
        &self,
        x: &ExactRational,
        d: usize,
        settings: &Settings,
    ) -> Result<Evaluation> {
        let start = FIRST_DEPTH.min(settings.depth_cap);
        let mut ev = self.eval_at_depth(x, d, start)?;
        if ev.enclosure.sign().is_determinate() {
            return Ok(ev);
        }
        // The partial sum is ≤ 0 here; aim for a width below its magnitude.
        let mut width = ev.partial_sum.abs() * ExactRational::frac(1, 2);
        if width.is_zero() {
            width = ExactRational::pow2(-32);
        }
        for _ in 0..=settings.escalation_cap {
            match self.eval_detailed(x, d, &width, settings) {
                Ok(next) => {
                    ev = next;
                    if ev.enclosure.sign().is_determinate() {
                        return Ok(ev);
                    }
                    let s = ev.partial_sum.abs() * ExactRational::frac(1, 2);
                    width = if s.is_zero() || s >= width {
                        width * ExactRational::frac(1, 2)
                    } else {
                        s
                    };
                }
                Err(Error::Convergence { .. }) => {
                    return self.eval_at_depth(x, d, settings.depth_cap);
                }
                Err(e) => return Err(e),
            }
        }
        Ok(ev)
    }
}

fn assemble(s: ExactRational, tail: ExactRational, depth: usize) -> Evaluation {
    let hi = &s + &tail;
    let enclosure =
        if s.denom_bits() > ROUND_TRIGGER_BITS || hi.denom_bits() > ROUND_TRIGGER_BITS {
            Enclosure::new(s.floor_dyadic(ROUND_BUDGET), hi.ceil_dyadic(ROUND_BUDGET))
        } else {
            Enclosure::new(s.clone(), hi)
        }
        .expect("tail bound is nonnegative");
    Evaluation {
        enclosure,
        partial_sum: s,
        tail,
        depth,
    }
}

/// Smallest depth on the doubling schedule whose tail fits the target width.
fn depth_for(
    family: Family,
    x: &ExactRational,
    d: usize,
    target_width: &ExactRational,
    settings: &Settings,
) -> Result<usize> {
    let slack = ExactRational::pow2(1 - ROUND_BUDGET as i64);
    let mut depth = FIRST_DEPTH.min(settings.depth_cap);
    loop {
        let t = tail_bound(family, x, depth, d)?;
        if &t + &slack <= *target_width {
            return Ok(depth);
        }
        if depth >= settings.depth_cap {
            return Err(Error::Convergence {
                target: target_width.to_decimal_directed(4, Rounding::Down),
                cap: settings.depth_cap,
                tail: t.to_decimal_directed(4, Rounding::Up),
            });
        }
        depth = (depth * 2).min(settings.depth_cap);
    }
}

fn check_order(d: usize) -> Result<()> {
    if d > MAX_ORDER {
        return Err(Error::InvalidArgument(format!(
            "derivative order {d} not supported (max {MAX_ORDER})"
        )));
    }
    Ok(())
}

fn check_point(x: &ExactRational) -> Result<()> {
    if !x.is_positive() || x >= pi_half_lo() {
        return Err(Error::Domain(format!(
            "x = {} must lie in (0, {})",
            x.to_decimal_directed(12, Rounding::Down),
            pi_half_lo().to_decimal_directed(12, Rounding::Down)
        )));
    }
    Ok(())
}

/// n (n-1) ... (n-d+1)
fn falling(n: usize, d: usize) -> BigInt {
    (0..d).fold(BigInt::one(), |acc, j| acc * BigInt::from(n - j))
}

/// Coefficients γ_2..γ_N over one common denominator.
struct ScaledPrefix {
    numerators: Vec<BigInt>,
    denominator: BigInt,
}

type PrefixCache = RwLock<HashMap<(Family, usize), Arc<ScaledPrefix>>>;

fn scaled_prefix(family: Family, depth: usize) -> Result<Arc<ScaledPrefix>> {
    static CACHE: std::sync::OnceLock<PrefixCache> = std::sync::OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache
        .read()
        .unwrap_or_else(|e| e.into_inner())
        .get(&(family, depth))
    {
        return Ok(hit.clone());
    }
    let coeffs = coeff_prefix(family, depth)?;
    let rest = &coeffs[1..];
    let denominator = rest.iter().fold(BigInt::one(), |m, c| m.lcm(c.denom()));
    let numerators = rest
        .iter()
        .map(|c| c.numer() * (&denominator / c.denom()))
        .collect();
    let entry = Arc::new(ScaledPrefix {
        numerators,
        denominator,
    });
    cache
        .write()
        .unwrap_or_else(|e| e.into_inner())
        .insert((family, depth), entry.clone());
    Ok(entry)
}

/// Majorant parameters at `x` for truncation after index `depth`.
pub fn tail_params(x: &ExactRational, depth: usize) -> Result<TailParams> {
    check_point(x)?;
    let r = (x / pi_half_lo()).pow(2);
    let up = r.round_relative(64, Rounding::Up);
    let ratio = if up < ExactRational::one() { up } else { r };
    Ok(TailParams {
        depth,
        ratio,
        majorant: ExactRational::frac(5, 3),
    })
}

/// Upper bound on `Σ_{k>N} γ_k · (2k)(2k-1)...(2k-d+1) · x^{2k-d}`.
///
/// The family is accepted for symmetry; both families share one majorant.
pub fn tail_bound(_family: Family, x: &ExactRational, n: usize, d: usize) -> Result<ExactRational> {
    check_order(d)?;
    if n < 2 {
        return Err(Error::InvalidArgument("tail depth must be >= 2".into()));
    }
    let params = tail_params(x, n)?;
    let r = &params.ratio;
    let one = ExactRational::one();
    let t = if d == 0 {
        pow_round_up(r, n as u64 + 1, TAIL_BITS) / (&one - r)
    } else {
        // (2k)^d r^k ≤ C r̃^k with r̃ = (1 + r)/2 and C = max_{k>N} (2k)^d (r/r̃)^k.
        let rt = (&one + r) * ExactRational::frac(1, 2);
        let q = r / &rt;
        let k = peak_index(&q, d, n + 1);
        let c = ExactRational::from(BigInt::from(2 * k).pow(d as u32))
            * pow_round_up(&q, k as u64, TAIL_BITS);
        let x_pow = x.pow(d as i32).recip().expect("x > 0");
        c * pow_round_up(&rt, n as u64 + 1, TAIL_BITS) / (&one - &rt) * x_pow
    };
    Ok((t * &params.majorant).round_relative(64, Rounding::Up))
}

/// Index k ≥ `from` maximising `k^d q^k` for 0 < q < 1, found with exact
/// comparisons of consecutive ratios `((k+1)/k)^d q`.
fn peak_index(q: &ExactRational, d: usize, from: usize) -> usize {
    let rising = |k: usize| -> bool {
        let lhs = BigInt::from(k + 1).pow(d as u32) * q.numer();
        let rhs = BigInt::from(k).pow(d as u32) * q.denom();
        lhs > rhs
    };
    if !rising(from) {
        return from;
    }
    let mut lo = from;
    let mut hi = from.max(1) * 2;
    while rising(hi) {
        lo = hi;
        hi *= 2;
    }
    // rising(lo) holds, rising(hi) does not.
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if rising(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// Enclosure of `c1 + Σ_{k≥2} γ_k x0^{2k-2}`, the smallest θ for which
/// `F_θ(x0) ≤ 0`.
pub fn eval_best_constant_series(
    family: Family,
    x0: &ExactRational,
    target_width: &ExactRational,
    settings: &Settings,
) -> Result<Enclosure> {
    check_point(x0)?;
    if !target_width.is_positive() {
        return Err(Error::InvalidArgument(
            "target width must be positive".into(),
        ));
    }
    let y = x0 * x0;
    // F_0(x0) / x0² with the tail scaled the same way.
    let scaled_target = target_width * &y;
    let depth = depth_for(family, x0, 0, &scaled_target, settings)?;
    let series = PerturbedSeries::new(family, ExactRational::zero());
    let s = series.partial_sum(x0, 0, depth)? / &y;
    let t = tail_bound(family, x0, depth, 0)? / &y;
    Ok(assemble(s, t, depth).enclosure)
}

/// Sign shorthand used by the certifier.
pub(crate) fn sign_of(ev: &Evaluation) -> Sign {
    ev.enclosure.sign()
}
