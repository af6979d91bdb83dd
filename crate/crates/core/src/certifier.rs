//! Sign-chain certificates for `F_θ`.
//!
//! For θ > c1 the chain runs from the third derivative down:
//!
//! 1. `F'''` > 0 on (0, π/2) because every contributing coefficient is
//!    positive and the x² term vanishes after three derivatives.
//! 2. `F''(0+) = 2λ < 0`; a positive witness for `F''` gives a unique zero
//!    `x2` of `F''`.
//! 3. `F'(0+) = 0` and `F'` falls on (0, x2), so `F' < 0` there; a positive
//!    witness for `F'` gives a unique zero `t0`, the only local minimum of `F`.
//! 4. `F(0+) = 0` and `F` falls on (0, t0); a positive witness for `F` gives
//!    the unique zero `x0 > t0`.
//!
//! Each zero is bracketed by bisection with certified endpoint signs. For
//! θ ≤ c1 every coefficient is nonnegative and `F > 0` outright.

use crate::bernoulli::{coeff_prefix, coefficient_factors_positive, Family};
use crate::error::{Error, Result};
use crate::kernel::{pi_half_bounds, pi_half_lo, Enclosure, ExactRational, Sign};
use crate::series::{sign_of, Evaluation, PerturbedSeries};
use crate::settings::Settings;

/// Order of the derivative whose positivity anchors the chain.
pub const CHAIN_ORDER: usize = 3;

/// Last index of the witness schedule `(π_lo/2)(1 - 2^-j)`.
const SCHEDULE_LEN: u32 = 40;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub point: ExactRational,
    pub derivative_order: usize,
    pub sign: Sign,
    pub enclosure: Enclosure,
}

impl Witness {
    fn from_eval(point: &ExactRational, derivative_order: usize, ev: &Evaluation) -> Self {
        Witness {
            point: point.clone(),
            derivative_order,
            sign: sign_of(ev),
            enclosure: ev.enclosure.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertificateKind {
    Positivity,
    UniqueZero,
}

impl CertificateKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CertificateKind::Positivity => "positivity",
            CertificateKind::UniqueZero => "unique_zero",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub family: Family,
    pub theta: ExactRational,
    pub m: usize,
    pub witnesses: Vec<Witness>,
    /// Encloses the unique zero x0 (UniqueZero only).
    pub zero_bracket: Option<Enclosure>,
    /// Encloses the unique minimum t0 (UniqueZero only).
    pub min_bracket: Option<Enclosure>,
    pub depth_used: usize,
    pub domain_end: Enclosure,
}

/// Outcome of [`verify_certificate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verification {
    pub valid: bool,
    pub reasons: Vec<String>,
}

/// Bisection output with the witnesses at both ends.
#[derive(Debug, Clone)]
pub struct RootBracket {
    pub bracket: Enclosure,
    pub lo: Witness,
    pub hi: Witness,
    pub depth_used: usize,
}

/// Certificate that `F_θ > 0` on (0, π/2), valid for θ ≤ c1.
pub fn certify_positivity(
    family: Family,
    theta: &ExactRational,
    settings: &Settings,
) -> Result<Certificate> {
    let series = PerturbedSeries::new(family, theta.clone());
    if series.leading_coefficient().is_negative() {
        return Err(Error::Precondition(format!(
            "positivity needs theta <= {}, got {theta}",
            family.c1()
        )));
    }
    let depth = settings.depth_cap;
    check_coefficients(family, depth).map_err(Error::Invariant)?;
    Ok(Certificate {
        kind: CertificateKind::Positivity,
        family,
        theta: theta.clone(),
        m: CHAIN_ORDER,
        witnesses: Vec::new(),
        zero_bracket: None,
        min_bracket: None,
        depth_used: depth,
        domain_end: pi_half_bounds().clone(),
    })
}

/// Unique-zero / unique-minimum certificate for θ > c1.
pub fn certify_unique_zero(
    family: Family,
    theta: &ExactRational,
    zero_tol: &ExactRational,
    min_tol: &ExactRational,
    settings: &Settings,
) -> Result<Certificate> {
    certify_unique_zero_anchored(family, theta, zero_tol, min_tol, None, settings)
}

/// As [`certify_unique_zero`]; when `anchor` is certified negative for `F`
/// it becomes the left end of the zero search, so the zero bracket starts
/// at or above it.
pub fn certify_unique_zero_anchored(
    family: Family,
    theta: &ExactRational,
    zero_tol: &ExactRational,
    min_tol: &ExactRational,
    anchor: Option<&ExactRational>,
    settings: &Settings,
) -> Result<Certificate> {
    let series = PerturbedSeries::new(family, theta.clone());
    if !series.leading_coefficient().is_negative() {
        return Err(Error::Precondition(format!(
            "unique-zero certificate needs theta > {}, got {theta}",
            family.c1()
        )));
    }
    if !zero_tol.is_positive() || !min_tol.is_positive() {
        return Err(Error::InvalidArgument("tolerances must be positive".into()));
    }
    let mut witnesses = Vec::new();
    let mut depth = 0;
    let mut record = |w: Witness, d: usize, ws: &mut Vec<Witness>| {
        depth = depth.max(d);
        ws.push(w);
    };

    // F'' crosses zero once.
    let (p, dp) = positive_witness(&series, 2, &ExactRational::zero(), settings)?;
    record(p.clone(), dp, &mut witnesses);
    let (s, ds) = negative_witness_below(&series, 2, &p.point, settings)?;
    record(s.clone(), ds, &mut witnesses);
    let mut tol2 = min_tol.clone();
    let (inflection, f1_at) = loop {
        let rb = bracket_root(&series, 2, &s.point, &p.point, &tol2, settings)?;
        let ev = series.certified_sign(rb.bracket.hi(), 1, settings)?;
        if sign_of(&ev) == Sign::Negative {
            let w = Witness::from_eval(rb.bracket.hi(), 1, &ev);
            break (rb, w);
        }
        if tol2 < min_tol * &ExactRational::pow2(-(settings.escalation_cap as i64)) {
            return Err(Error::Indeterminate {
                order: 1,
                point: rb.bracket.hi().to_string(),
                bracket: Box::new(rb.bracket),
            });
        }
        tol2 = tol2 * ExactRational::frac(1, 16);
    };
    let x2_hi = inflection.bracket.hi().clone();
    record(inflection.lo, inflection.depth_used, &mut witnesses);
    record(inflection.hi, inflection.depth_used, &mut witnesses);
    record(f1_at.clone(), 0, &mut witnesses);

    // F' crosses zero once, right of x2: the minimum t0.
    let (q, dq) = positive_witness(&series, 1, &x2_hi, settings)?;
    record(q.clone(), dq, &mut witnesses);
    let minimum = bracket_root(&series, 1, &x2_hi, &q.point, min_tol, settings)?;
    let min_bracket = minimum.bracket.clone();
    record(minimum.lo, minimum.depth_used, &mut witnesses);
    record(minimum.hi, minimum.depth_used, &mut witnesses);

    // F crosses zero once, right of t0: x0.
    let (r, dr) = positive_witness(&series, 0, min_bracket.hi(), settings)?;
    record(r.clone(), dr, &mut witnesses);
    let mut start = min_bracket.hi().clone();
    let ev = series.certified_sign(&start, 0, settings)?;
    if sign_of(&ev) != Sign::Negative {
        return Err(Error::Indeterminate {
            order: 0,
            point: start.to_string(),
            bracket: Box::new(Enclosure::new(start.clone(), r.point.clone())?),
        });
    }
    record(Witness::from_eval(&start, 0, &ev), ev.depth, &mut witnesses);
    if let Some(a) = anchor {
        if a > &start && a < &r.point {
            let ev = series.certified_sign(a, 0, settings)?;
            if sign_of(&ev) == Sign::Negative {
                start = a.clone();
                record(Witness::from_eval(a, 0, &ev), ev.depth, &mut witnesses);
            }
        }
    }
    let zero = bracket_root(&series, 0, &start, &r.point, zero_tol, settings)?;
    let zero_bracket = zero.bracket.clone();
    record(zero.lo, zero.depth_used, &mut witnesses);
    record(zero.hi, zero.depth_used, &mut witnesses);

    if min_bracket.hi() >= zero_bracket.lo() {
        return Err(Error::Invariant(format!(
            "minimum bracket {min_bracket:?} does not lie left of zero bracket {zero_bracket:?}"
        )));
    }
    check_coefficients(family, depth.max(2)).map_err(Error::Invariant)?;

    Ok(Certificate {
        kind: CertificateKind::UniqueZero,
        family,
        theta: theta.clone(),
        m: CHAIN_ORDER,
        witnesses,
        zero_bracket: Some(zero_bracket),
        min_bracket: Some(min_bracket),
        depth_used: depth,
        domain_end: pi_half_bounds().clone(),
    })
}

/// Bisection on `F^{(d)}` between a certified negative `lo_point` and a
/// certified positive `hi_point`.
pub fn bracket_root(
    series: &PerturbedSeries,
    derivative_order: usize,
    lo_point: &ExactRational,
    hi_point: &ExactRational,
    tol: &ExactRational,
    settings: &Settings,
) -> Result<RootBracket> {
    let d = derivative_order;
    if d >= CHAIN_ORDER {
        return Err(Error::InvalidArgument(format!(
            "bracketing supports orders 0..=2, got {d}"
        )));
    }
    if !tol.is_positive() {
        return Err(Error::InvalidArgument(
            "bracket tolerance must be positive".into(),
        ));
    }
    if lo_point >= hi_point {
        return Err(Error::InvalidArgument(
            "bracket endpoints out of order".into(),
        ));
    }
    let mut lo = lo_point.clone();
    let mut hi = hi_point.clone();
    let ev_lo = series.certified_sign(&lo, d, settings)?;
    let ev_hi = series.certified_sign(&hi, d, settings)?;
    if sign_of(&ev_lo) != Sign::Negative || sign_of(&ev_hi) != Sign::Positive {
        return Err(Error::Precondition(format!(
            "bracket needs negative/positive endpoint signs, found {}/{}",
            sign_of(&ev_lo).as_str(),
            sign_of(&ev_hi).as_str()
        )));
    }
    let mut depth = ev_lo.depth.max(ev_hi.depth);
    let mut w_lo = Witness::from_eval(&lo, d, &ev_lo);
    let mut w_hi = Witness::from_eval(&hi, d, &ev_hi);
    while &hi - &lo > *tol {
        let mid = split_point(&lo, &hi);
        let ev = series.certified_sign(&mid, d, settings)?;
        depth = depth.max(ev.depth);
        match sign_of(&ev) {
            Sign::Negative => {
                w_lo = Witness::from_eval(&mid, d, &ev);
                lo = mid;
            }
            Sign::Positive => {
                w_hi = Witness::from_eval(&mid, d, &ev);
                hi = mid;
            }
            Sign::Indeterminate => {
                return Err(Error::Indeterminate {
                    order: d,
                    point: mid.to_string(),
                    bracket: Box::new(Enclosure::new(lo, hi)?),
                });
            }
        }
    }
    Ok(RootBracket {
        bracket: Enclosure::new(lo, hi)?,
        lo: w_lo,
        hi: w_hi,
        depth_used: depth,
    })
}

/// A dyadic point in the middle of (lo, hi), within an eighth of the width
/// of the exact midpoint. Keeps denominators small across many bisections.
fn split_point(lo: &ExactRational, hi: &ExactRational) -> ExactRational {
    let w = hi - lo;
    let bits = (w.denom().bits() as i64 - w.numer().bits() as i64 + 4).max(1);
    let mid = (lo + hi) * ExactRational::frac(1, 2);
    let snapped = mid.floor_dyadic(bits as u32);
    if &snapped > lo {
        snapped
    } else {
        mid
    }
}

/// `(π_lo/2)(1 - 2^-j)` floored to a short dyadic.
fn schedule_point(j: u32) -> ExactRational {
    let x = pi_half_lo() * &(ExactRational::one() - ExactRational::pow2(-(j as i64)));
    x.floor_dyadic(j + 8)
}

fn positive_witness(
    series: &PerturbedSeries,
    d: usize,
    above: &ExactRational,
    settings: &Settings,
) -> Result<(Witness, usize)> {
    for j in 1..=SCHEDULE_LEN {
        let x = schedule_point(j);
        if &x <= above {
            continue;
        }
        let ev = series.certified_sign(&x, d, settings)?;
        if sign_of(&ev) == Sign::Positive {
            return Ok((Witness::from_eval(&x, d, &ev), ev.depth));
        }
    }
    Err(Error::WitnessSearch { order: d })
}

fn negative_witness_below(
    series: &PerturbedSeries,
    d: usize,
    below: &ExactRational,
    settings: &Settings,
) -> Result<(Witness, usize)> {
    let mut x = below.clone();
    for _ in 0..64 {
        x = x * ExactRational::frac(1, 2);
        let ev = series.certified_sign(&x, d, settings)?;
        if sign_of(&ev) == Sign::Negative {
            return Ok((Witness::from_eval(&x, d, &ev), ev.depth));
        }
    }
    Err(Error::WitnessSearch { order: d })
}

/// γ_k > 0 for k ≤ depth, both as computed values and through the sign of
/// each closed-form factor.
fn check_coefficients(family: Family, depth: usize) -> std::result::Result<(), String> {
    let coeffs = coeff_prefix(family, depth.max(1)).map_err(|e| e.to_string())?;
    for (i, c) in coeffs.iter().enumerate() {
        let k = i + 1;
        if !c.is_positive() || !coefficient_factors_positive(family, k) {
            return Err(format!("coefficient {k} of {family} is not positive"));
        }
    }
    Ok(())
}

/// Re-checks a certificate from scratch. Witness signs are recomputed;
/// nothing recorded in the certificate is trusted beyond its points.
pub fn verify_certificate(cert: &Certificate, settings: &Settings) -> Verification {
    let mut reasons = Vec::new();
    if cert.m != CHAIN_ORDER {
        reasons.push(format!("m must be {CHAIN_ORDER}, found {}", cert.m));
    }
    if &cert.domain_end != pi_half_bounds() {
        reasons.push("domain_end differs from the built-in pi/2 enclosure".to_string());
    }
    let series = PerturbedSeries::new(cert.family, cert.theta.clone());
    let lambda = series.leading_coefficient();

    for (i, w) in cert.witnesses.iter().enumerate() {
        if !w.sign.is_determinate() {
            reasons.push(format!("witness {i} has indeterminate sign"));
            continue;
        }
        if w.enclosure.sign() != w.sign {
            reasons.push(format!(
                "witness {i}: recorded enclosure does not carry its sign"
            ));
        }
        if w.derivative_order >= CHAIN_ORDER {
            reasons.push(format!(
                "witness {i}: derivative order {} out of range",
                w.derivative_order
            ));
            continue;
        }
        match series.certified_sign(&w.point, w.derivative_order, settings) {
            Ok(ev) if sign_of(&ev) == w.sign => {}
            Ok(ev) => reasons.push(format!(
                "witness {i} at {}: recorded {}, recomputed {}",
                w.point,
                w.sign.as_str(),
                sign_of(&ev).as_str()
            )),
            Err(e) => reasons.push(format!("witness {i}: {e}")),
        }
    }

    let has = |point: &ExactRational, order: usize, sign: Sign| {
        cert.witnesses
            .iter()
            .any(|w| &w.point == point && w.derivative_order == order && w.sign == sign)
    };

    match cert.kind {
        CertificateKind::Positivity => {
            if lambda.is_negative() {
                reasons.push(format!(
                    "positivity needs theta <= c1, theta = {}",
                    cert.theta
                ));
            }
            if cert.zero_bracket.is_some() || cert.min_bracket.is_some() {
                reasons.push("positivity certificate carries brackets".to_string());
            }
        }
        CertificateKind::UniqueZero => {
            if !lambda.is_negative() {
                reasons.push(format!(
                    "unique zero needs theta > c1, theta = {}",
                    cert.theta
                ));
            }
            match (&cert.min_bracket, &cert.zero_bracket) {
                (Some(min), Some(zero)) => {
                    if min.hi() >= zero.lo() {
                        reasons
                            .push("min_bracket must lie strictly left of zero_bracket".to_string());
                    }
                    if !min.lo().is_positive() || zero.hi() >= pi_half_lo() {
                        reasons.push("brackets leave (0, pi/2)".to_string());
                    }
                    if !cert
                        .witnesses
                        .iter()
                        .any(|w| w.derivative_order == 2 && w.sign == Sign::Positive)
                    {
                        reasons.push("no positive witness for the second derivative".to_string());
                    }
                    if !has(min.lo(), 1, Sign::Negative) || !has(min.hi(), 1, Sign::Positive) {
                        reasons.push(
                            "min_bracket endpoints lack first-derivative witnesses".to_string(),
                        );
                    }
                    if !has(zero.lo(), 0, Sign::Negative) || !has(zero.hi(), 0, Sign::Positive) {
                        reasons.push("zero_bracket endpoints lack sign witnesses".to_string());
                    }
                }
                _ => reasons.push("unique-zero certificate is missing a bracket".to_string()),
            }
        }
    }

    if cert.depth_used == 0 || cert.depth_used > crate::bernoulli::BERNOULLI_CAP {
        reasons.push(format!("depth_used {} out of range", cert.depth_used));
    } else if let Err(e) = check_coefficients(cert.family, cert.depth_used) {
        reasons.push(e);
    }

    Verification {
        valid: reasons.is_empty(),
        reasons,
    }
}
