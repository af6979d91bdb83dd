//! Best constants, squeeze certification and maximum-error analysis.

use rayon::prelude::*;

use crate::bernoulli::Family;
use crate::certifier::{certify_positivity, certify_unique_zero_anchored, Certificate};
use crate::error::{Error, Result};
use crate::kernel::{pi_half_lo, Enclosure, ExactRational};
use crate::series::{eval_best_constant_series, PerturbedSeries};
use crate::settings::Settings;

/// Default best-constant width for scan rows.
pub const SCAN_WIDTH: &str = "1e-9";
/// Default minimum-bracket tolerance for scan rows.
pub const SCAN_TOL: &str = "1e-6";

/// Both sides of a certified squeeze inequality on (0, x0).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SqueezeResult {
    pub family: Family,
    pub x0: ExactRational,
    pub best_constant: Enclosure,
    /// c1: 1/2 or 1/3.
    pub upper_constant: ExactRational,
    /// UniqueZero certificate at θ* = `best_constant.hi`.
    pub lower_cert: Certificate,
    /// Positivity certificate at θ = c1.
    pub upper_cert: Certificate,
    /// Left end of the certified zero bracket; the lower inequality holds on
    /// (0, certified_interval_end) ⊇ (0, x0).
    pub certified_interval_end: ExactRational,
}

impl SqueezeResult {
    /// θ*, the certified exponent of the lower bound.
    pub fn theta(&self) -> &ExactRational {
        self.best_constant.hi()
    }
}

/// Location of the largest gap between the log-target and `-θx²`, and its size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErrorReport {
    pub family: Family,
    pub x0: ExactRational,
    pub theta: ExactRational,
    pub t0: Enclosure,
    pub delta: Enclosure,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanValues {
    pub best_constant: Enclosure,
    pub t0: Enclosure,
    pub delta: Enclosure,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanRow {
    pub x0: ExactRational,
    pub outcome: std::result::Result<ScanValues, String>,
}

fn check_x0(x0: &ExactRational) -> Result<()> {
    if !x0.is_positive() || x0 >= pi_half_lo() {
        return Err(Error::Domain(format!("x0 = {x0} must lie in (0, pi/2)")));
    }
    Ok(())
}

/// Enclosure of `-log h(x0) / x0²`, the smallest admissible θ on (0, x0).
pub fn best_constant(
    family: Family,
    x0: &ExactRational,
    target_width: &ExactRational,
    settings: &Settings,
) -> Result<Enclosure> {
    check_x0(x0)?;
    let enc = eval_best_constant_series(family, x0, target_width, settings)?;
    if enc.lo() <= &family.c1() {
        return Err(Error::Invariant(format!(
            "best constant enclosure {enc:?} does not exceed c1"
        )));
    }
    Ok(enc)
}

/// Certifies `exp(-θ* x²) < h(x) < exp(-c1 x²)` for all x in (0, x0).
pub fn certify_squeeze(
    family: Family,
    x0: &ExactRational,
    width: &ExactRational,
    settings: &Settings,
) -> Result<SqueezeResult> {
    let best = best_constant(family, x0, width, settings)?;
    let theta = best.hi().clone();
    let mut zero_tol = width.clone();
    let mut lower = None;
    for _ in 0..=settings.escalation_cap {
        let cert =
            certify_unique_zero_anchored(family, &theta, &zero_tol, width, Some(x0), settings)?;
        let ok = cert.zero_bracket.as_ref().is_some_and(|z| z.lo() >= x0);
        if ok {
            lower = Some(cert);
            break;
        }
        zero_tol = zero_tol * ExactRational::frac(1, 2);
    }
    let lower_cert = lower.ok_or(Error::RefinementExhausted {
        escalations: settings.escalation_cap,
    })?;
    let upper_cert = certify_positivity(family, &family.c1(), settings)?;
    let certified_interval_end = lower_cert
        .zero_bracket
        .as_ref()
        .map(|z| z.lo().clone())
        .expect("unique-zero certificate has a zero bracket");
    Ok(SqueezeResult {
        family,
        x0: x0.clone(),
        best_constant: best,
        upper_constant: family.c1(),
        lower_cert,
        upper_cert,
        certified_interval_end,
    })
}

/// [`max_error_with_width`] with the best constant resolved to `tol / 100`.
pub fn max_error(
    family: Family,
    x0: &ExactRational,
    tol: &ExactRational,
    settings: &Settings,
) -> Result<ErrorReport> {
    let theta_width = tol * &ExactRational::frac(1, 100);
    max_error_with_width(family, x0, tol, &theta_width, settings)
}

/// Encloses t0 and δ = −F_θ(t0) for θ = best_constant(x0).hi.
///
/// With `[u, v]` the certified bracket of t0, F' is increasing on it, so
/// `|F'| ≤ L = max(|F'(u)|, |F'(v)|)` there and
/// `F(u) − L(v−u) ≤ F(t0) ≤ min(F(u), F(v))`.
pub fn max_error_with_width(
    family: Family,
    x0: &ExactRational,
    tol: &ExactRational,
    theta_width: &ExactRational,
    settings: &Settings,
) -> Result<ErrorReport> {
    if !tol.is_positive() {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let theta = best_constant(family, x0, theta_width, settings)?
        .hi()
        .clone();
    let cert = certify_unique_zero_anchored(family, &theta, tol, tol, None, settings)?;
    let t0 = cert
        .min_bracket
        .clone()
        .expect("unique-zero certificate has a min bracket");
    if t0.hi() >= x0 {
        return Err(Error::Invariant(format!(
            "minimum bracket {t0:?} not below x0 = {x0}"
        )));
    }
    let series = PerturbedSeries::new(family, theta.clone());
    let (u, v) = (t0.lo(), t0.hi());
    let eval_width = (tol * tol).min(ExactRational::frac(1, 1_000_000_000));
    let fu = series.eval(u, 0, &eval_width, settings)?;
    let fv = series.eval(v, 0, &eval_width, settings)?;
    let slope = series
        .eval(u, 1, &eval_width, settings)?
        .mag()
        .max(series.eval(v, 1, &eval_width, settings)?.mag());
    let upper = -(fu.lo() - &(slope * (v - u)));
    let lower = -(fu.hi().clone().min(fv.hi().clone()));
    let delta = Enclosure::new(lower, upper)?.round_outward(128);
    if !delta.lo().is_positive() {
        return Err(Error::Invariant(format!(
            "delta enclosure {delta:?} is not positive"
        )));
    }
    Ok(ErrorReport {
        family,
        x0: x0.clone(),
        theta,
        t0,
        delta,
    })
}

/// Best constant, t0 and δ on the uniform grid `from, ..., to` with
/// `steps` intervals. Row failures are kept in the row.
pub fn scan(
    family: Family,
    from: &ExactRational,
    to: &ExactRational,
    steps: usize,
    settings: &Settings,
) -> Result<Vec<ScanRow>> {
    let width: ExactRational = SCAN_WIDTH.parse()?;
    let tol: ExactRational = SCAN_TOL.parse()?;
    scan_with(family, from, to, steps, &width, &tol, settings)
}

pub fn scan_with(
    family: Family,
    from: &ExactRational,
    to: &ExactRational,
    steps: usize,
    width: &ExactRational,
    tol: &ExactRational,
    settings: &Settings,
) -> Result<Vec<ScanRow>> {
    if steps == 0 {
        return Err(Error::InvalidArgument("steps must be >= 1".into()));
    }
    if from >= to {
        return Err(Error::InvalidArgument("scan needs from < to".into()));
    }
    check_x0(from)?;
    check_x0(to)?;
    let step = (to - from) / ExactRational::from(steps as i64);
    let grid: Vec<ExactRational> = (0..=steps)
        .map(|i| from + &(&step * &ExactRational::from(i as i64)))
        .collect();
    Ok(grid
        .into_par_iter()
        .map(|x0| {
            let outcome = (|| -> Result<ScanValues> {
                let best_constant = best_constant(family, &x0, width, settings)?;
                let theta_width = width.clone().min(tol * &ExactRational::frac(1, 100));
                let report = max_error_with_width(family, &x0, tol, &theta_width, settings)?;
                Ok(ScanValues {
                    best_constant,
                    t0: report.t0,
                    delta: report.delta,
                })
            })()
            .map_err(|e| e.to_string());
            ScanRow { x0, outcome }
        })
        .collect())
}
