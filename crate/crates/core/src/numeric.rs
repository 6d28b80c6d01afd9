//! Exact rationals, directed rounding to `f64`, and high-precision logarithms.
//!
//! Every quantity that feeds a threshold comparison is kept as an exact
//! rational. Logarithms of integers (needed for dimension ratios and growth
//! diagnostics) are evaluated in binary floating point at a configurable number
//! of decimal digits and only rounded to `f64` for reporting.

use std::collections::HashMap;
use std::str::FromStr;

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use num_bigint::{BigInt, BigUint};
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// π to 100 decimal places.
const PI_DIGITS: &str = "3.1415926535897932384626433832795028841971693993751058209749445923078164062862089986280348253421170679";

/// Working precision for logarithms and π enclosures, in significant decimal digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Precision {
    digits: u32,
}

impl Precision {
    pub const DEFAULT_DIGITS: u32 = 50;
    pub const MAX_DIGITS: u32 = 100;

    pub fn new(digits: u32) -> Result<Self> {
        if !(17..=Self::MAX_DIGITS).contains(&digits) {
            return Err(Error::InvalidParameter(format!(
                "precision must be between 17 and {} decimal digits, got {digits}",
                Self::MAX_DIGITS
            )));
        }
        Ok(Precision { digits })
    }

    pub fn digits(self) -> u32 {
        self.digits
    }

    /// Binary precision with a few guard bits.
    pub(crate) fn bits(self) -> usize {
        (self.digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + 8
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision {
            digits: Self::DEFAULT_DIGITS,
        }
    }
}

pub(crate) type Hp = FBig<HalfEven, 2>;

/// Memoized natural logarithms of positive integers at a fixed precision.
pub(crate) struct LnCache {
    bits: usize,
    table: HashMap<u64, Hp>,
}

impl LnCache {
    pub(crate) fn new(prec: Precision) -> Self {
        LnCache {
            bits: prec.bits(),
            table: HashMap::new(),
        }
    }

    pub(crate) fn zero(&self) -> Hp {
        Hp::ZERO.with_precision(self.bits).value()
    }

    pub(crate) fn ln(&mut self, n: u64) -> Hp {
        debug_assert!(n > 0);
        let bits = self.bits;
        self.table
            .entry(n)
            .or_insert_with(|| Hp::from(n).with_precision(bits).value().ln())
            .clone()
    }
}

pub(crate) fn hp_to_f64(x: &Hp) -> f64 {
    x.to_f64().value()
}

/// The exact rational value of a finite `f64`.
pub fn rational_from_f64(x: f64) -> Result<Rational> {
    Rational::from_float(x).ok_or_else(|| Error::InvalidParameter(format!("{x} is not finite")))
}

pub fn rational_from_u64(n: u64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(num: u64, den: u64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub(crate) fn biguint_to_rational(n: &BigUint) -> Rational {
    Rational::from_integer(BigInt::from(n.clone()))
}

/// Nearest `f64`, saturating to ±inf / 0 outside the range.
pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        if q.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Largest `f64` that is `<= q`.
pub fn to_f64_down(q: &Rational) -> f64 {
    let f = to_f64(q);
    match Rational::from_float(f) {
        Some(exact) if exact > *q => f.next_down(),
        _ => f,
    }
}

/// Smallest `f64` that is `>= q`.
pub fn to_f64_up(q: &Rational) -> f64 {
    let f = to_f64(q);
    match Rational::from_float(f) {
        Some(exact) if exact < *q => f.next_up(),
        _ => f,
    }
}

/// Formats a rational as `p/q`, also for integers (`0/1`).
pub fn fmt_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::InvalidParameter(format!("cannot parse {s:?} as a rational"));
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    // Plain decimal such as "0.25" or "-3": parse exactly.
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    if !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let num = BigInt::from_str(&digits).map_err(|_| bad())?;
    let den = num_traits::pow(BigInt::from(10u32), frac_part.len());
    let q = Rational::new(num, den);
    Ok(if neg { -q } else { q })
}

/// Fixed 15-significant-digit scientific notation used by every table and report.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.14e}")
}

/// Rational enclosure `lo < π < hi` of width `10^-digits`.
pub fn pi_bounds(prec: Precision) -> (Rational, Rational) {
    let digits = prec.digits() as usize;
    let truncated = &PI_DIGITS[..2 + digits];
    let lo = parse_rational(truncated).expect("π constant parses");
    let ulp = Rational::new(
        BigInt::one(),
        num_traits::pow(BigInt::from(10u32), digits),
    );
    let hi = &lo + ulp;
    (lo, hi)
}

/// `⌊ln n⌋` for `n >= 1`, falling back to high precision near integer boundaries.
pub fn floor_ln(n: u64) -> u64 {
    let l = (n as f64).ln();
    if (l - l.round()).abs() > 1e-9 {
        return l.floor() as u64;
    }
    let mut cache = LnCache::new(Precision::new(40).expect("valid precision"));
    let hp = cache.ln(n);
    hp.floor().to_f64().value() as u64
}

/// `⌊n^s⌋` for an exact exponent `s = p/q` in `[0, 1]`.
pub fn floor_pow(n: u64, s: &Ratio<u64>) -> u64 {
    let (p, q) = (*s.numer(), *s.denom());
    if p == 0 {
        return 1;
    }
    if p == q {
        return n;
    }
    let approx = (n as f64).powf(p as f64 / q as f64);
    let candidate = approx.floor();
    let frac = approx - candidate;
    let margin = 1e-9 * approx.max(1.0);
    if frac > margin && 1.0 - frac > margin {
        return candidate as u64;
    }
    // Exact: largest k with k^q <= n^p.
    let target = num_traits::pow(BigUint::from(n), p as usize);
    let fits = |k: u64| num_traits::pow(BigUint::from(k), q as usize) <= target;
    let mut k = candidate.max(0.0) as u64;
    while k > 0 && !fits(k) {
        k -= 1;
    }
    while fits(k + 1) {
        k += 1;
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_enclosure_brackets_f64_pi() {
        let (lo, hi) = pi_bounds(Precision::default());
        assert!(to_f64_down(&lo) <= std::f64::consts::PI);
        assert!(to_f64_up(&hi) >= std::f64::consts::PI);
        assert!(lo < hi);
    }

    #[test]
    fn directed_rounding() {
        let third = ratio(1, 3);
        let down = to_f64_down(&third);
        let up = to_f64_up(&third);
        assert!(rational_from_f64(down).unwrap() < third);
        assert!(rational_from_f64(up).unwrap() > third);
        assert_eq!(up, down.next_up());
        assert_eq!(to_f64_down(&ratio(1, 2)), 0.5);
    }

    #[test]
    fn parses_decimals_and_fractions() {
        assert_eq!(parse_rational("0.25").unwrap(), ratio(1, 4));
        assert_eq!(parse_rational("3/6").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("-1.5").unwrap(), -ratio(3, 2));
        assert_eq!(parse_rational("7").unwrap(), ratio(7, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational(".").is_err());
    }

    #[test]
    fn floors_of_powers_are_exact_at_perfect_powers() {
        let half = Ratio::new(1u64, 2);
        assert_eq!(floor_pow(4, &half), 2);
        assert_eq!(floor_pow(8, &half), 2);
        assert_eq!(floor_pow(9, &half), 3);
        assert_eq!(floor_pow(99, &half), 9);
        assert_eq!(floor_pow(100, &half), 10);
        let quarter = Ratio::new(1u64, 4);
        assert_eq!(floor_pow(81, &quarter), 3);
        assert_eq!(floor_pow(80, &quarter), 2);
        assert_eq!(floor_pow(1u64 << 40, &Ratio::new(3u64, 4)), 1u64 << 30);
    }

    #[test]
    fn floor_ln_matches_known_values() {
        assert_eq!(floor_ln(2), 0);
        assert_eq!(floor_ln(3), 1);
        assert_eq!(floor_ln(7), 1);
        assert_eq!(floor_ln(8), 2);
        assert_eq!(floor_ln(20), 2);
        assert_eq!(floor_ln(21), 3);
    }

    #[test]
    fn high_precision_log_ratio() {
        let mut cache = LnCache::new(Precision::default());
        let r = cache.ln(8) / cache.ln(2);
        assert!((hp_to_f64(&r) - 3.0).abs() < 1e-15);
    }

    #[test]
    fn fixed_float_format() {
        assert_eq!(fmt_f64(0.5), "5.00000000000000e-1");
        assert_eq!(fmt_f64(0.0), "0.00000000000000e0");
        assert_eq!(fmt_rational(&ratio(0, 1)), "0/1");
        assert_eq!(fmt_rational(&ratio(4, 6)), "2/3");
    }
}
