use std::fmt;

use super::rational::{ExactRational, Rounding};
use crate::error::{Error, Result};

/// Closed rational interval `[lo, hi]` known to contain some real quantity.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Enclosure {
    lo: ExactRational,
    hi: ExactRational,
}

/// Certified sign of an enclosed quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Positive,
    Negative,
    Indeterminate,
}

impl Sign {
    pub fn is_determinate(self) -> bool {
        self != Sign::Indeterminate
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Sign::Positive => "positive",
            Sign::Negative => "negative",
            Sign::Indeterminate => "indeterminate",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "positive" => Some(Sign::Positive),
            "negative" => Some(Sign::Negative),
            "indeterminate" => Some(Sign::Indeterminate),
            _ => None,
        }
    }
}

/// Binary operation selector for [`enc_combine`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EncOp {
    Add,
    Sub,
    Mul,
    Neg,
}

impl Enclosure {
    pub fn new(lo: ExactRational, hi: ExactRational) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidArgument(format!(
                "enclosure endpoints out of order: [{lo}, {hi}]"
            )));
        }
        Ok(Self { lo, hi })
    }

    pub fn point(x: ExactRational) -> Self {
        Self {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn lo(&self) -> &ExactRational {
        &self.lo
    }

    pub fn hi(&self) -> &ExactRational {
        &self.hi
    }

    pub fn into_bounds(self) -> (ExactRational, ExactRational) {
        (self.lo, self.hi)
    }

    pub fn width(&self) -> ExactRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> ExactRational {
        (&self.lo + &self.hi) * ExactRational::frac(1, 2)
    }

    pub fn contains(&self, x: &ExactRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_enclosure(&self, other: &Enclosure) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Upper bound on |x| over the enclosure.
    pub fn mag(&self) -> ExactRational {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn sign(&self) -> Sign {
        if self.lo.is_positive() {
            Sign::Positive
        } else if self.hi.is_negative() {
            Sign::Negative
        } else {
            Sign::Indeterminate
        }
    }

    pub fn add(&self, v: &Enclosure) -> Enclosure {
        Enclosure {
            lo: &self.lo + &v.lo,
            hi: &self.hi + &v.hi,
        }
    }

    pub fn sub(&self, v: &Enclosure) -> Enclosure {
        Enclosure {
            lo: &self.lo - &v.hi,
            hi: &self.hi - &v.lo,
        }
    }

    pub fn mul(&self, v: &Enclosure) -> Enclosure {
        let c = [
            &self.lo * &v.lo,
            &self.lo * &v.hi,
            &self.hi * &v.lo,
            &self.hi * &v.hi,
        ];
        let lo = c.iter().min().cloned().unwrap_or_default();
        let hi = c.iter().max().cloned().unwrap_or_default();
        Enclosure { lo, hi }
    }

    pub fn neg(&self) -> Enclosure {
        Enclosure {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }

    /// Widens to endpoints on the 2^-budget grid.
    pub fn round_outward(&self, budget: u32) -> Enclosure {
        Enclosure {
            lo: self.lo.floor_dyadic(budget),
            hi: self.hi.ceil_dyadic(budget),
        }
    }

    pub fn dec_lo(&self, sig: u32) -> String {
        self.lo.to_decimal_directed(sig, Rounding::Down)
    }

    pub fn dec_hi(&self, sig: u32) -> String {
        self.hi.to_decimal_directed(sig, Rounding::Up)
    }
}

/// Exact interval arithmetic; `v` is ignored for `EncOp::Neg`.
pub fn enc_combine(op: EncOp, u: &Enclosure, v: &Enclosure) -> Enclosure {
    match op {
        EncOp::Add => u.add(v),
        EncOp::Sub => u.sub(v),
        EncOp::Mul => u.mul(v),
        EncOp::Neg => u.neg(),
    }
}

/// See [`Enclosure::round_outward`]. `budget` must be at least 1.
pub fn round_outward(u: &Enclosure, budget: u32) -> Result<Enclosure> {
    if budget == 0 {
        return Err(Error::InvalidArgument(
            "round_outward budget must be >= 1".into(),
        ));
    }
    Ok(u.round_outward(budget))
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.dec_lo(10), self.dec_hi(10))
    }
}

impl fmt::Debug for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}
