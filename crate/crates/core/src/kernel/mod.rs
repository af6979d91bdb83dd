//! Exact scalars and rigorous interval enclosures.

mod enclosure;
mod pi;
mod rational;

pub use enclosure::{enc_combine, round_outward, EncOp, Enclosure, Sign};
pub use pi::{pi_half_bounds, pi_half_lo};
pub use rational::{rational_from_decimal, ExactRational, Rounding};

/// Rounds `base^exp` upward, keeping `bits` significant bits after every
/// multiplication. `base` must be positive.
pub(crate) fn pow_round_up(base: &ExactRational, exp: u64, bits: u32) -> ExactRational {
    debug_assert!(base.is_positive());
    let mut result = ExactRational::one();
    let mut sq = base.round_relative(bits, Rounding::Up);
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            result = (&result * &sq).round_relative(bits, Rounding::Up);
        }
        e >>= 1;
        if e > 0 {
            sq = (&sq * &sq).round_relative(bits, Rounding::Up);
        }
    }
    result
}
