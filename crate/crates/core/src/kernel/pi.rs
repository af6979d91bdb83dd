use std::sync::OnceLock;

use super::enclosure::Enclosure;
use super::rational::ExactRational;

// π/2 truncated to 40 decimals, and that value plus one unit in the last place.
const PI_HALF_LO: &str = "1.5707963267948966192313216916397514420985";
const PI_HALF_HI: &str = "1.5707963267948966192313216916397514420986";

/// Fixed rational enclosure of π/2, width 10^-40.
pub fn pi_half_bounds() -> &'static Enclosure {
    static BOUNDS: OnceLock<Enclosure> = OnceLock::new();
    BOUNDS.get_or_init(|| {
        let lo: ExactRational = PI_HALF_LO.parse().expect("constant");
        let hi: ExactRational = PI_HALF_HI.parse().expect("constant");
        Enclosure::new(lo, hi).expect("ordered constant")
    })
}

/// Lower endpoint of [`pi_half_bounds`]; every abscissa handled by the
/// series code must lie strictly below it.
pub fn pi_half_lo() -> &'static ExactRational {
    pi_half_bounds().lo()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn width_and_float_bracket() {
        let b = pi_half_bounds();
        assert!(b.width() <= ExactRational::frac(1, 10).pow(30));
        assert!(b.hi() < &"1.5707964".parse::<ExactRational>().unwrap());
        let approx: ExactRational = "1.570796326794896619".parse().unwrap();
        let slack = ExactRational::frac(1, 10).pow(18);
        assert!(b.lo() > &approx && b.hi() < &(&approx + &slack));
    }
}
