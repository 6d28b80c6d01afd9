//! Fundamental intervals, level approximations and the dilation obstruction.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{biguint_to_rational, fmt_rational, ratio, Rational};
use crate::sequences::DigitSystem;

pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

/// Digit string `(b_1, .., b_n)` with `b_j ∈ B_j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(pub Vec<u64>);

impl MultiIndex {
    pub fn level(&self) -> usize {
        self.0.len()
    }
}

impl From<Vec<u64>> for MultiIndex {
    fn from(digits: Vec<u64>) -> Self {
        MultiIndex(digits)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FundamentalInterval {
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub left: Rational,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub length: Rational,
    pub level: usize,
}

impl FundamentalInterval {
    pub fn right(&self) -> Rational {
        &self.left + &self.length
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.left <= *x && *x <= self.right()
    }
}

/// `I_(b_1..b_n) = [Σ b_j/(N_1..N_j), Σ b_j/(N_1..N_j) + 1/(N_1..N_n)]`
pub fn interval_of(sys: &DigitSystem, idx: &MultiIndex) -> Result<FundamentalInterval> {
    let mut numer = BigUint::zero();
    let mut scale = BigUint::one();
    for (i, &b) in idx.0.iter().enumerate() {
        let (n, digits) = sys.get_level(i + 1)?;
        if !digits.contains(b) {
            return Err(Error::DigitNotInSet { level: i + 1, digit: b });
        }
        numer = numer * n + b;
        scale *= n;
    }
    let scale = biguint_to_rational(&scale);
    Ok(FundamentalInterval {
        left: biguint_to_rational(&numer) / &scale,
        length: scale.recip(),
        level: idx.level(),
    })
}

/// Left endpoints of every level-`n` interval, held as numerators over `N_1..N_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelApproximation {
    level: usize,
    numerators: Vec<BigUint>,
    denominator: BigUint,
}

impl LevelApproximation {
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn len(&self) -> usize {
        self.numerators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.numerators.is_empty()
    }

    /// Sorted, duplicate-free numerators.
    pub fn numerators(&self) -> &[BigUint] {
        &self.numerators
    }

    /// `N_1 .. N_n`
    pub fn denominator(&self) -> &BigUint {
        &self.denominator
    }

    /// Interval length `1/(N_1..N_n)`.
    pub fn mesh(&self) -> Rational {
        biguint_to_rational(&self.denominator).recip()
    }

    pub fn endpoint(&self, i: usize) -> Rational {
        Rational::new(
            BigInt::from(self.numerators[i].clone()),
            BigInt::from(self.denominator.clone()),
        )
    }

    pub fn endpoints(&self) -> impl Iterator<Item = Rational> + '_ {
        (0..self.len()).map(|i| self.endpoint(i))
    }

    /// Exact membership test.
    pub fn contains(&self, x: &Rational) -> bool {
        let scaled = x * biguint_to_rational(&self.denominator);
        if !scaled.is_integer() {
            return false;
        }
        match scaled.to_integer().to_biguint() {
            Some(numer) => self.numerators.binary_search(&numer).is_ok(),
            None => false,
        }
    }

    /// Index of the level interval `[e, e + mesh]` that contains `x`, if any.
    pub fn covering_interval(&self, x: &Rational) -> Option<usize> {
        let scaled = x * biguint_to_rational(&self.denominator);
        let floor = scaled.floor().to_integer().to_biguint()?;
        let pos = match self.numerators.binary_search(&floor) {
            Ok(i) => return Some(i),
            Err(pos) => pos,
        };
        // x may sit on the right end of the previous interval.
        if scaled.is_integer() && pos > 0 && self.numerators[pos - 1].clone() + 1u32 == floor {
            return Some(pos - 1);
        }
        None
    }
}

/// Enumerates the level-`n` left endpoints, refusing when `K_1..K_n > cap`.
pub fn level_endpoints(sys: &DigitSystem, n: usize, cap: u64) -> Result<LevelApproximation> {
    let count = sys.count_product(n)?;
    if count > BigUint::from(cap) {
        return Err(Error::EnumerationCap {
            needed: count.to_string(),
            cap,
        });
    }
    let mut numerators = vec![BigUint::zero()];
    for level in &sys.levels()[..n] {
        let digits: Vec<u64> = level.digits.iter().collect();
        let base = level.n;
        // Children of a sorted parent list, in digit order, stay sorted.
        numerators = numerators
            .par_iter()
            .flat_map_iter(|p| {
                let shifted = p * base;
                digits.iter().map(move |&b| &shifted + b).collect::<Vec<_>>()
            })
            .collect();
    }
    Ok(LevelApproximation {
        level: n,
        numerators,
        denominator: sys.scale(n)?,
    })
}

/// `max(n_k E)` for `n_k = N_1..N_k`: the series `Σ_j max B_(k+j) / (N_(k+1)..N_(k+j))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DilatedImageBound {
    pub k: usize,
    /// Exact value when `exact`, otherwise the partial sum through the horizon.
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub value: Rational,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub tail_bound: Rational,
    /// `value + tail_bound`: certified upper bound on `max(n_k E)`.
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub upper: Rational,
    pub exact: bool,
}

pub fn max_dilated_image(sys: &DigitSystem, k: usize) -> Result<DilatedImageBound> {
    let horizon = sys.horizon();
    if k > horizon {
        return Err(Error::LevelOutOfHorizon { level: k, horizon });
    }
    if let Some((n, max)) = sys.constant_profile() {
        // Σ_j max / n^j = max / (n - 1)
        let value = ratio(max, n - 1);
        return Ok(DilatedImageBound {
            k,
            upper: value.clone(),
            value,
            tail_bound: Rational::zero(),
            exact: true,
        });
    }
    let mut numer = BigUint::zero();
    let mut scale = BigUint::one();
    for level in &sys.levels()[k..] {
        numer = numer * level.n + level.digits.max();
        scale *= level.n;
    }
    let scale = biguint_to_rational(&scale);
    let value = biguint_to_rational(&numer) / &scale;
    let c = sys.compute_c().upper();
    let m = sys.n_rule().tail_infimum(horizon + 1);
    let tail_bound = c * ratio(m, m - 1) / scale;
    Ok(DilatedImageBound {
        k,
        upper: &value + &tail_bound,
        value,
        tail_bound,
        exact: false,
    })
}

/// Which form of the geometric-series factor applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FactorCase {
    /// `N_j >= 2`, factor 2
    MinTwo,
    /// `N_j >= 3`, factor 3/2
    MinThree,
    /// `N_j >= m`, factor `m/(m-1)`
    General,
}

/// Every dilate `N_1..N_k E (mod 1)` lies in `[0, factor * c]` with `factor * c < 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RajchmanObstruction {
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub c: Rational,
    pub c_exact: bool,
    pub min_n: u64,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub factor: Rational,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub bound: Rational,
    pub case: FactorCase,
    pub conclusion: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ObstructionRefusal {
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub c: Rational,
    pub c_exact: bool,
    pub min_n: u64,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub factor: Rational,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub bound: Rational,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Obstruction {
    Certified(RajchmanObstruction),
    Refused(ObstructionRefusal),
}

impl Obstruction {
    pub fn is_certified(&self) -> bool {
        matches!(self, Obstruction::Certified(_))
    }

    pub fn bound(&self) -> &Rational {
        match self {
            Obstruction::Certified(c) => &c.bound,
            Obstruction::Refused(r) => &r.bound,
        }
    }
}

/// Checks `m/(m-1) * c < 1` with `m = min_j N_j` over every level, exactly.
pub fn rajchman_obstruction(sys: &DigitSystem) -> Obstruction {
    let c_bound = sys.compute_c();
    let c = c_bound.upper();
    let m = sys.min_n_global();
    let factor = ratio(m, m - 1);
    let bound = &factor * &c;
    if bound < Rational::one() {
        let case = match m {
            2 => FactorCase::MinTwo,
            3 => FactorCase::MinThree,
            _ => FactorCase::General,
        };
        Obstruction::Certified(RajchmanObstruction {
            conclusion: format!(
                "every dilate N_1..N_k E (mod 1) lies in [0, {}], a proper arc of the circle; \
                 no measure on E has Fourier coefficients tending to 0, so dim_F(E) = 0",
                fmt_rational(&bound)
            ),
            c,
            c_exact: c_bound.exact,
            min_n: m,
            factor,
            bound,
            case,
        })
    } else {
        Obstruction::Refused(ObstructionRefusal {
            reason: format!("factor * c = {bound} >= 1: the dilates are not confined to a proper arc; no conclusion"),
            c,
            c_exact: c_bound.exact,
            min_n: m,
            factor,
            bound,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{lebesgue, system};

    fn fractions(approx: &LevelApproximation) -> Vec<Rational> {
        approx.endpoints().collect()
    }

    #[test]
    fn interval_examples() {
        let cantor = system("constant 3", "sets {0,2} then repeat", 5);
        let i = interval_of(&cantor, &vec![2, 2].into()).unwrap();
        assert_eq!((i.left, i.length), (ratio(8, 9), ratio(1, 9)));

        let zeros = interval_of(&cantor, &vec![0; 5].into()).unwrap();
        assert_eq!(zeros.left, Rational::zero());

        let root = system("affine 1 2", "consecutive floor-pow 1/2", 5);
        let i = interval_of(&root, &vec![0, 1].into()).unwrap();
        assert_eq!((i.left, i.length), (ratio(1, 12), ratio(1, 12)));

        assert_eq!(
            interval_of(&cantor, &vec![1].into()),
            Err(Error::DigitNotInSet { level: 1, digit: 1 })
        );
        assert!(matches!(
            interval_of(&cantor, &vec![0; 6].into()),
            Err(Error::LevelOutOfHorizon { .. })
        ));
    }

    #[test]
    fn endpoint_examples() {
        let cantor = system("constant 3", "sets {0,2} then repeat", 5);
        let e = level_endpoints(&cantor, 2, DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(fractions(&e), vec![ratio(0, 1), ratio(2, 9), ratio(2, 3), ratio(8, 9)]);
        assert_eq!(e.mesh(), ratio(1, 9));

        let e = level_endpoints(&lebesgue(5), 3, DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(fractions(&e), (0..8).map(|i| ratio(i, 8)).collect::<Vec<_>>());

        let four = system("constant 4", "consecutive constant 2", 5);
        let e = level_endpoints(&four, 2, DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(fractions(&e), vec![ratio(0, 1), ratio(1, 16), ratio(1, 4), ratio(5, 16)]);
    }

    #[test]
    fn enumeration_cap() {
        let sys = system("constant 10", "consecutive constant 9", 10);
        let err = level_endpoints(&sys, 8, 1000).unwrap_err();
        assert!(matches!(err, Error::EnumerationCap { cap: 1000, .. }));
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn nesting_and_multiplicativity() {
        let sys = system("affine 1 2", "consecutive floor-pow 2/3", 6);
        let mut prev = level_endpoints(&sys, 1, DEFAULT_ENUMERATION_CAP).unwrap();
        for n in 2..=6 {
            let next = level_endpoints(&sys, n, DEFAULT_ENUMERATION_CAP).unwrap();
            assert_eq!(next.len() as u64, prev.len() as u64 * sys.k(n).unwrap());
            let ends: Vec<Rational> = next.endpoints().collect();
            assert!(ends.windows(2).all(|w| w[0] < w[1]));
            for x in &ends {
                assert!(prev.covering_interval(x).is_some(), "{x} escapes level {}", n - 1);
            }
            prev = next;
        }
    }

    #[test]
    fn interval_left_matches_endpoint_list() {
        let sys = system("constant 5", "sets {0,2,3};{1,4} then cycle", 4);
        let e = level_endpoints(&sys, 3, DEFAULT_ENUMERATION_CAP).unwrap();
        for a in [0, 2, 3] {
            for b in [1, 4] {
                for c in [0, 2, 3] {
                    let left = interval_of(&sys, &vec![a, b, c].into()).unwrap().left;
                    assert!(e.contains(&left));
                }
            }
        }
        assert!(!e.contains(&ratio(1, 125)));
    }

    #[test]
    fn dilated_image_examples() {
        let cantor = system("constant 3", "sets {0,2} then repeat", 6);
        for k in 0..=6 {
            let d = max_dilated_image(&cantor, k).unwrap();
            assert!(d.exact);
            assert_eq!(d.value, ratio(1, 1));
        }
        let four = system("constant 4", "sets {0,1} then repeat", 6);
        assert_eq!(max_dilated_image(&four, 3).unwrap().value, ratio(1, 3));

        let root = system("affine 1 2", "consecutive floor-pow 1/2", 60);
        let d = max_dilated_image(&root, 0).unwrap();
        assert!(!d.exact);
        assert!(d.value <= ratio(1, 4));
        assert!(d.upper < ratio(3, 10));
    }

    #[test]
    fn dilated_images_stay_below_obstruction_bound() {
        let sys = system("explicit 3,7,4,9 then affine 2 1", "consecutive explicit 1,3,2 then floor-pow 1/2", 25);
        let Obstruction::Certified(cert) = rajchman_obstruction(&sys) else {
            panic!("expected a certificate");
        };
        for k in 0..=25 {
            let d = max_dilated_image(&sys, k).unwrap();
            assert!(d.upper <= cert.bound, "k = {k}");
        }
    }

    #[test]
    fn obstruction_examples() {
        let five = system("constant 5", "sets {0,1} then repeat", 5);
        match rajchman_obstruction(&five) {
            Obstruction::Certified(c) => {
                assert_eq!(c.c, ratio(1, 5));
                assert_eq!(c.bound, ratio(1, 4));
                assert_eq!(c.case, FactorCase::General);
            }
            other => panic!("{other:?}"),
        }
        // Fixed factor 2 whenever some N_j = 2.
        let mixed = system("explicit 2 then constant 5", "sets {0};{0,1} then repeat", 5);
        match rajchman_obstruction(&mixed) {
            Obstruction::Certified(c) => {
                assert_eq!(c.factor, ratio(2, 1));
                assert_eq!(c.bound, ratio(2, 5));
                assert_eq!(c.case, FactorCase::MinTwo);
            }
            other => panic!("{other:?}"),
        }
        // c = 0.6 with min N = 3.
        let bias = system("explicit 3 then constant 5", "consecutive explicit 1 then constant 4", 5);
        match rajchman_obstruction(&bias) {
            Obstruction::Certified(c) => {
                assert_eq!(c.c, ratio(3, 5));
                assert_eq!(c.bound, ratio(9, 10));
                assert_eq!(c.case, FactorCase::MinThree);
            }
            other => panic!("{other:?}"),
        }
        let cantor = system("constant 3", "sets {0,2} then repeat", 5);
        match rajchman_obstruction(&cantor) {
            Obstruction::Refused(r) => assert_eq!(r.bound, ratio(1, 1)),
            other => panic!("{other:?}"),
        }
        // Lebesgue: c = 1/2 with factor 2 sits exactly on the boundary.
        assert_eq!(rajchman_obstruction(&lebesgue(5)).bound(), &ratio(1, 1));
        assert!(!rajchman_obstruction(&lebesgue(5)).is_certified());
    }
}
