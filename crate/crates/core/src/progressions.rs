//! Arithmetic progressions in the set, found and checked in exact arithmetic.
//!
//! With consecutive digits at level `j`, the points `m/(N_1..N_j)` for `m < K_j`
//! have digit expansion `(0, .., 0, m, 0, 0, ..)` and form the canonical
//! progression. [`find_aps`] is the brute-force oracle over a level approximation.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{interval_of, LevelApproximation, MultiIndex};
use crate::numeric::{biguint_to_rational, ratio, Rational};
use crate::sequences::DigitSystem;

/// Largest number of endpoint pairs [`find_aps`] will examine.
pub const PAIR_CAP: u64 = 2_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ApKind {
    Canonical,
    Discovered,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct APWitness {
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub start: Rational,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub gap: Rational,
    pub length: u64,
    pub level: usize,
    pub kind: ApKind,
    /// What membership in the set rests on.
    pub hypothesis: String,
}

impl APWitness {
    pub fn term(&self, m: u64) -> Rational {
        &self.start + &self.gap * ratio(m, 1)
    }

    pub fn terms(&self) -> impl Iterator<Item = Rational> + '_ {
        (0..self.length).map(|m| self.term(m))
    }

    /// Digit expansion `(0, .., 0, m)` of the `m`-th canonical term, up to its level.
    pub fn digit_expansion(&self, m: u64) -> Option<MultiIndex> {
        if self.kind != ApKind::Canonical || m >= self.length {
            return None;
        }
        let mut digits = vec![0; self.level];
        digits[self.level - 1] = m;
        Some(MultiIndex(digits))
    }

    /// Re-checks a canonical witness against the system: every term's expansion
    /// uses allowed digits, has the stated value, and the zero tail is allowed.
    pub fn verify_canonical(&self, sys: &DigitSystem) -> bool {
        if self.kind != ApKind::Canonical || !sys.digit_rule().zero_in_every_level() {
            return false;
        }
        (0..self.length).all(|m| {
            let idx = self.digit_expansion(m).expect("m < length");
            match interval_of(sys, &idx) {
                Ok(interval) => interval.left == self.term(m),
                Err(_) => false,
            }
        })
    }

    /// Every term is a point of the level approximation.
    pub fn verify_in(&self, approx: &LevelApproximation) -> bool {
        self.terms().all(|t| approx.contains(&t))
    }
}

/// `{0, 1/P_j, .., (K_j - 1)/P_j}` with `P_j = N_1..N_j`.
pub fn canonical_ap(sys: &DigitSystem, j: usize) -> Result<APWitness> {
    let (_, digits) = sys.get_level(j)?;
    if !digits.is_consecutive() {
        return Err(Error::NotConsecutive { level: j });
    }
    if let Some(bad) = sys.levels().iter().position(|l| !l.digits.contains(0)) {
        return Err(Error::ZeroNotInDigits { level: bad + 1 });
    }
    if !sys.digit_rule().zero_in_every_level() {
        return Err(Error::ZeroNotInDigits {
            level: sys.horizon() + 1,
        });
    }
    Ok(APWitness {
        start: Rational::zero(),
        gap: biguint_to_rational(&sys.scale(j)?).recip(),
        length: digits.len(),
        level: j,
        kind: ApKind::Canonical,
        hypothesis: format!("digit expansions (0,..,0,m) at level {j} with zero tail; 0 is a digit at every level"),
    })
}

/// Maximal progressions of at least `min_length` terms among the level endpoints,
/// sorted by start and then gap, at most `max_results` of them.
pub fn find_aps(approx: &LevelApproximation, min_length: u64, max_results: usize) -> Result<Vec<APWitness>> {
    if min_length < 2 {
        return Err(Error::InvalidParameter(format!("min_length must be at least 2, got {min_length}")));
    }
    let points = approx.numerators();
    let m = points.len() as u64;
    let pairs = m.saturating_mul(m.saturating_sub(1)) / 2;
    if pairs > PAIR_CAP {
        return Err(Error::EnumerationCap {
            needed: pairs.to_string(),
            cap: PAIR_CAP,
        });
    }
    let member = |x: &BigUint| points.binary_search(x).is_ok();
    let found: Vec<(usize, BigUint, u64)> = (0..points.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let a = &points[i];
            points[i + 1..].iter().filter_map(move |b| {
                let d = b - a;
                // Only report an AP from its first term.
                if *a >= d && member(&(a - &d)) {
                    return None;
                }
                let mut length = 2;
                let mut next = b + &d;
                while member(&next) {
                    length += 1;
                    next += &d;
                }
                (length >= min_length).then_some((i, d, length))
            })
        })
        .collect();

    let denominator = biguint_to_rational(approx.denominator());
    let level = approx.level();
    Ok(found
        .into_iter()
        .take(max_results)
        .map(|(i, d, length)| APWitness {
            start: biguint_to_rational(&points[i]) / &denominator,
            gap: biguint_to_rational(&d) / &denominator,
            length,
            level,
            kind: ApKind::Discovered,
            hypothesis: format!(
                "terms are level-{level} left endpoints; they are points of E when 0 is a digit at every level beyond {level}"
            ),
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApProfileRow {
    pub level: usize,
    pub n: u64,
    /// Canonical progression length `K_j`, or 0 when `B_j` is not consecutive.
    pub length: u64,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub count_ratio: Rational,
    /// `max B_j / N_j`
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub digit_ratio: Rational,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApProfile {
    pub rows: Vec<ApProfileRow>,
    /// Every level in the window has consecutive digits.
    pub all_canonical: bool,
    /// The longest progression in the second half of the window beats the first half.
    pub lengths_increase: bool,
    /// `max B_j / N_j < 1/2` at every level.
    pub ratio_below_half: bool,
}

impl ApProfile {
    pub fn conditions_hold(&self) -> bool {
        self.all_canonical && self.lengths_increase && self.ratio_below_half
    }

    pub fn max_length(&self) -> u64 {
        self.rows.iter().map(|r| r.length).max().unwrap_or(0)
    }
}

pub fn ap_length_profile(sys: &DigitSystem, up_to_level: usize) -> Result<ApProfile> {
    if up_to_level == 0 {
        return Err(Error::InvalidParameter("profile needs at least one level".into()));
    }
    let mut rows = Vec::with_capacity(up_to_level);
    for j in 1..=up_to_level {
        let (n, digits) = sys.get_level(j)?;
        rows.push(ApProfileRow {
            level: j,
            n,
            length: if digits.is_consecutive() { digits.len() } else { 0 },
            count_ratio: ratio(digits.len(), n),
            digit_ratio: ratio(digits.max(), n),
        });
    }
    let half = rows.len() / 2;
    let max_of = |rs: &[ApProfileRow]| rs.iter().map(|r| r.length).max().unwrap_or(0);
    let half_q = Rational::one() / ratio(2, 1);
    Ok(ApProfile {
        all_canonical: rows.iter().all(|r| r.length > 0),
        lengths_increase: half > 0 && max_of(&rows[half..]) > max_of(&rows[..half]),
        ratio_below_half: rows.iter().all(|r| r.digit_ratio < half_q),
        rows,
    })
}
