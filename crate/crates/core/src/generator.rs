//! Consecutive-digit systems with a prescribed Hausdorff dimension `s`, together
//! with the certificates that make them useful: the dilation obstruction (so no
//! measure on the set has Fourier decay), the dimension window and the growth of
//! the canonical progressions.
//!
//! | `s`         | `K_j`            |
//! |-------------|------------------|
//! | `0`         | `⌊ln N_j⌋`       |
//! | `0 < s < 1` | `⌊N_j^s⌋`        |
//! | `1`         | `⌊N_j / 3⌋`      |
//!
//! Values are clamped to `[1, N_j - 1]`.

use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::dimension::{dimension_estimate, DimensionEstimate};
use crate::error::{Error, Result};
use crate::geometry::{rajchman_obstruction, Obstruction, RajchmanObstruction};
use crate::numeric::{fmt_rational, Precision, Rational};
use crate::progressions::{ap_length_profile, ApProfile};
use crate::rules::{CountRule, DigitRule, SequenceRule};
use crate::sequences::DigitSystem;

pub const MIN_HORIZON: usize = 4;

/// Why `s = 0` does not use `K_j = ⌊N_j^(1/ln N_j)⌋`.
pub const ZERO_DIMENSION_NOTE: &str = "s = 0 uses s_j = ln ln N_j / ln N_j, i.e. K_j = floor(ln N_j): \
the exponent s_j = 1/ln N_j gives N_j^s_j = e and K_j = 2 at every level, so progressions would not grow; \
the substitute still has s_j -> 0 and N_j^s_j -> infinity";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorCase {
    Zero,
    Power,
    One,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneratedSystem {
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub s: Rational,
    pub case: GeneratorCase,
    #[serde(skip)]
    pub system: DigitSystem,
    pub obstruction: RajchmanObstruction,
    pub dimension: DimensionEstimate,
    pub ap_profile: ApProfile,
    pub deviation: Option<&'static str>,
}

impl GeneratedSystem {
    pub fn spec_text(&self) -> String {
        self.system.to_spec_string()
    }
}

fn digit_rule_for(s: &Rational) -> Result<(GeneratorCase, DigitRule)> {
    if s < &Rational::zero() || s > &Rational::one() {
        return Err(Error::InvalidParameter(format!(
            "target dimension must lie in [0, 1], got {}",
            fmt_rational(s)
        )));
    }
    Ok(if s.is_zero() {
        (GeneratorCase::Zero, DigitRule::Consecutive(CountRule::FloorLog))
    } else if s.is_one() {
        (GeneratorCase::One, DigitRule::Consecutive(CountRule::FloorFraction(Ratio::new(1, 3))))
    } else {
        let p = s.numer().to_u64();
        let q = s.denom().to_u64();
        let (Some(p), Some(q)) = (p, q) else {
            return Err(Error::InvalidParameter(format!(
                "exponent {} has more than 64-bit numerator or denominator",
                fmt_rational(s)
            )));
        };
        (GeneratorCase::Power, DigitRule::Consecutive(CountRule::FloorPower(Ratio::new(p, q))))
    })
}

pub fn generate_for_dimension(s: &Rational, n_rule: SequenceRule, horizon: usize) -> Result<GeneratedSystem> {
    generate_with_precision(s, n_rule, horizon, Precision::default())
}

pub fn generate_with_precision(
    s: &Rational,
    n_rule: SequenceRule,
    horizon: usize,
    prec: Precision,
) -> Result<GeneratedSystem> {
    let (case, digit_rule) = digit_rule_for(s)?;
    if !n_rule.is_strictly_increasing() {
        return Err(Error::InvalidRule(format!("the N rule `{n_rule}` must be strictly increasing")));
    }
    if n_rule.value(1).map_or(true, |n| n < 3) {
        return Err(Error::InvalidRule(format!("the N rule `{n_rule}` must start at N_1 >= 3")));
    }
    if horizon < MIN_HORIZON {
        return Err(Error::InvalidParameter(format!(
            "horizon must be at least {MIN_HORIZON} to carry the certificates, got {horizon}"
        )));
    }
    let system = DigitSystem::new_min3(n_rule, digit_rule, horizon)?;
    let obstruction = match rajchman_obstruction(&system) {
        Obstruction::Certified(c) => c,
        Obstruction::Refused(r) => {
            return Err(Error::Precondition(format!(
                "generated system fails the obstruction ({}); start the N rule higher so that N_1^(1-s) > 2",
                r.reason
            )))
        }
    };
    let end = if system.lookahead().is_some() { horizon } else { horizon - 1 };
    let dimension = dimension_estimate(&system, horizon.div_ceil(2).min(end), end, prec)?;
    let ap_profile = ap_length_profile(&system, horizon)?;
    Ok(GeneratedSystem {
        s: s.clone(),
        case,
        system,
        obstruction,
        dimension,
        ap_profile,
        deviation: (case == GeneratorCase::Zero).then_some(ZERO_DIMENSION_NOTE),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{parse_rational, ratio};
    use crate::specfile;
    use num_bigint::BigUint;
    use proptest::prelude::*;

    fn gen(s: &str, horizon: usize) -> GeneratedSystem {
        generate_for_dimension(&parse_rational(s).unwrap(), "affine 1 2".parse().unwrap(), horizon).unwrap()
    }

    #[test]
    fn half() {
        let g = gen("1/2", 2000);
        assert_eq!(g.case, GeneratorCase::Power);
        assert!(g.obstruction.bound < Rational::one());
        assert!((g.dimension.s2_inf - 0.5).abs() < 0.03, "{}", g.dimension.s2_inf);
        assert!(g.ap_profile.conditions_hold());
        assert!(g.deviation.is_none());
        assert_eq!(g.dimension.end, 2000);
        assert_eq!(g.dimension.start, 1000);
    }

    #[test]
    fn one_and_zero() {
        let g = gen("1", 2000);
        assert!(g.obstruction.c <= ratio(1, 3));
        for l in g.system.levels() {
            assert_eq!(l.digits.len(), (l.n / 3).max(1));
        }
        assert!(g.dimension.s2_inf > 0.8);

        let g = gen("0", 2000);
        assert_eq!(g.deviation, Some(ZERO_DIMENSION_NOTE));
        assert!(g.ap_profile.lengths_increase);
        assert!(g.dimension.s2_inf < 0.3);
        assert_eq!(g.system.k(2000).unwrap(), 7);
    }

    #[test]
    fn rejects_bad_input() {
        let inc: SequenceRule = "affine 1 2".parse().unwrap();
        assert!(matches!(
            generate_for_dimension(&ratio(3, 2), inc.clone(), 10),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            generate_for_dimension(&ratio(1, 2), "constant 5".parse().unwrap(), 10),
            Err(Error::InvalidRule(_))
        ));
        assert!(matches!(
            generate_for_dimension(&ratio(1, 2), "affine 1 1".parse().unwrap(), 10),
            Err(Error::InvalidRule(_))
        ));
        assert!(generate_for_dimension(&ratio(1, 2), inc, 3).is_err());
    }

    #[test]
    fn round_trips_through_the_spec_format() {
        let g = gen("1/4", 50);
        let back = specfile::parse(&g.spec_text()).unwrap();
        assert_eq!(back, g.system);
        assert!(back.requires_min3());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn generated_systems_are_certified(p in 1u64..20, a in 1u64..4, b in 2i64..6) {
            let s = ratio(p, 20);
            let rule: SequenceRule = format!("affine {a} {b}").parse().unwrap();
            let n1 = a + b as u64;
            // N_1^(1-s) > 2, so N_j^(s-1) < 1/2 at every level.
            let large_start = BigUint::from(n1).pow(20 - p as u32) > BigUint::from(2u32).pow(20);
            match generate_for_dimension(&s, rule, 40) {
                Ok(g) => {
                    prop_assert!(g.obstruction.bound < Rational::one());
                    let levels = g.system.levels();
                    for l in levels {
                        prop_assert!(l.digits.len() >= 1 && l.digits.len() < l.n);
                        if large_start {
                            prop_assert!(ratio(l.digits.max(), l.n) < ratio(1, 2));
                        }
                    }
                    prop_assert!(levels.windows(2).all(|w| w[0].digits.len() <= w[1].digits.len()));
                }
                Err(e) => prop_assert!(!large_start && matches!(e, Error::Precondition(_)), "{e}"),
            }
        }
    }
}
