//! Digit systems `(N_j, B_j)` materialized up to a finite horizon.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{hp_to_f64, ratio, LnCache, Precision, Rational};
use crate::rules::{CountRule, DigitRule, DigitSet, SequenceRule};

/// One materialized level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Level {
    pub n: u64,
    pub digits: DigitSet,
}

/// A Moran digit system: rules for `N_j` and `B_j` plus an inspection horizon.
///
/// Levels `1..=horizon` are validated at construction. One extra level is
/// materialized when the rules allow it; quantities such as `log N_{j+1}` at
/// `j = horizon` read it through [`DigitSystem::lookahead`].
#[derive(Debug, Clone, PartialEq)]
pub struct DigitSystem {
    n_rule: SequenceRule,
    digit_rule: DigitRule,
    horizon: usize,
    options: SystemOptions,
    levels: Vec<Level>,
    lookahead: Option<Level>,
}

/// Validation switches for [`DigitSystem::with_options`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SystemOptions {
    /// Require `N_j >= 3` on every level.
    pub min3: bool,
    /// Accept `K_j = N_j` (the whole level kept), e.g. Lebesgue measure from `N = 2, B = {0,1}`.
    /// Off by default: Moran systems need `K_j < N_j`.
    pub allow_full_levels: bool,
}

impl DigitSystem {
    pub fn new(n_rule: SequenceRule, digit_rule: DigitRule, horizon: usize) -> Result<Self> {
        Self::with_options(n_rule, digit_rule, horizon, SystemOptions::default())
    }

    /// Like [`DigitSystem::new`] but additionally requires `N_j >= 3` everywhere.
    pub fn new_min3(n_rule: SequenceRule, digit_rule: DigitRule, horizon: usize) -> Result<Self> {
        let options = SystemOptions {
            min3: true,
            ..SystemOptions::default()
        };
        Self::with_options(n_rule, digit_rule, horizon, options)
    }

    pub fn with_options(
        n_rule: SequenceRule,
        digit_rule: DigitRule,
        horizon: usize,
        options: SystemOptions,
    ) -> Result<Self> {
        if horizon == 0 {
            return Err(Error::InvalidParameter("horizon must be at least 1".into()));
        }
        if let DigitRule::Sets { sets, .. } = &digit_rule {
            if sets.is_empty() || sets.iter().any(Vec::is_empty) {
                return Err(Error::InvalidRule("digit sets must be nonempty".into()));
            }
        }
        let levels = (1..=horizon)
            .map(|j| make_level(&n_rule, &digit_rule, j, options))
            .collect::<Result<Vec<_>>>()?;
        let lookahead = make_level(&n_rule, &digit_rule, horizon + 1, options).ok();
        let sys = DigitSystem {
            n_rule,
            digit_rule,
            horizon,
            options,
            levels,
            lookahead,
        };
        sys.check_tail_rules()?;
        Ok(sys)
    }

    /// Rejects rules whose unmaterialized tail would break `N_j >= 2` (or 3).
    fn check_tail_rules(&self) -> Result<()> {
        let floor = if self.options.min3 { 3 } else { 2 };
        let inf = self.n_rule.tail_infimum(self.horizon + 1);
        if inf < floor {
            return Err(Error::InvalidLevel {
                level: self.horizon + 1,
                reason: format!("rule {} drops to N = {inf} < {floor} beyond the horizon", self.n_rule),
            });
        }
        Ok(())
    }

    pub fn n_rule(&self) -> &SequenceRule {
        &self.n_rule
    }

    pub fn digit_rule(&self) -> &DigitRule {
        &self.digit_rule
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn options(&self) -> SystemOptions {
        self.options
    }

    pub fn requires_min3(&self) -> bool {
        self.options.min3
    }

    /// `(N_j, B_j)` for `1 <= j <= horizon`.
    pub fn get_level(&self, j: usize) -> Result<(u64, &DigitSet)> {
        let level = self.level(j)?;
        Ok((level.n, &level.digits))
    }

    pub fn level(&self, j: usize) -> Result<&Level> {
        if j == 0 || j > self.horizon {
            return Err(Error::LevelOutOfHorizon {
                level: j,
                horizon: self.horizon,
            });
        }
        Ok(&self.levels[j - 1])
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    /// Level `horizon + 1`, when it is representable and valid.
    pub fn lookahead(&self) -> Option<&Level> {
        self.lookahead.as_ref()
    }

    /// Level `j` for `1 <= j <= horizon + 1`.
    pub(crate) fn level_with_lookahead(&self, j: usize) -> Result<&Level> {
        if j == self.horizon + 1 {
            return self.lookahead.as_ref().ok_or(Error::LevelOutOfHorizon {
                level: j,
                horizon: self.horizon,
            });
        }
        self.level(j)
    }

    pub fn n(&self, j: usize) -> Result<u64> {
        Ok(self.level(j)?.n)
    }

    pub fn k(&self, j: usize) -> Result<u64> {
        Ok(self.level(j)?.digits.len())
    }

    /// `min N_j` over the horizon.
    pub fn min_n(&self) -> u64 {
        self.levels.iter().map(|l| l.n).min().expect("horizon >= 1")
    }

    /// `min N_j` over every level, including the unmaterialized tail.
    pub fn min_n_global(&self) -> u64 {
        self.min_n().min(self.n_rule.tail_infimum(self.horizon + 1))
    }

    /// `N_1 * .. * N_j` (empty product for `j = 0`).
    pub fn scale(&self, j: usize) -> Result<BigUint> {
        if j > self.horizon {
            return Err(Error::LevelOutOfHorizon {
                level: j,
                horizon: self.horizon,
            });
        }
        Ok(self.levels[..j]
            .iter()
            .fold(BigUint::one(), |acc, l| acc * l.n))
    }

    /// `K_1 * .. * K_n`
    pub fn count_product(&self, n: usize) -> Result<BigUint> {
        if n > self.horizon {
            return Err(Error::LevelOutOfHorizon {
                level: n,
                horizon: self.horizon,
            });
        }
        Ok(self.levels[..n]
            .iter()
            .fold(BigUint::one(), |acc, l| acc * l.digits.len()))
    }

    /// Some((N, max B)) when every level, past the horizon too, has the same pair.
    pub fn constant_profile(&self) -> Option<(u64, u64)> {
        let n = self.n_rule.constant_value()?;
        let max = match &self.digit_rule {
            DigitRule::Consecutive(CountRule::Constant(k)) => (*k).max(1) - 1,
            DigitRule::Sets { .. } => {
                let maxima: Vec<u64> = self
                    .digit_rule
                    .reachable_sets(1)
                    .iter()
                    .map(|s| *s.last().expect("nonempty"))
                    .collect();
                let first = maxima[0];
                if maxima.iter().any(|m| *m != first) {
                    return None;
                }
                first
            }
            _ => return None,
        };
        Some((n, max))
    }

    pub fn compute_c(&self) -> CBound {
        self.ratio_sup(Bias::MaxDigit)
    }

    /// `sup_j K_j / N_j`: the mass ratio that drives the non-decay bound.
    pub fn mass_ratio(&self) -> CBound {
        self.ratio_sup(Bias::Count)
    }

    fn ratio_sup(&self, bias: Bias) -> CBound {
        let numerator = |d: &DigitSet| match bias {
            Bias::MaxDigit => d.max(),
            Bias::Count => d.len(),
        };
        let mut best = ratio(numerator(&self.levels[0].digits), self.levels[0].n);
        let mut at = 1;
        for (i, level) in self.levels.iter().enumerate().skip(1) {
            let r = ratio(numerator(&level.digits), level.n);
            if r > best {
                best = r;
                at = i + 1;
            }
        }
        let tail_bound = self.tail_ratio_bound(bias);
        let exact = tail_bound <= best;
        CBound {
            value: best,
            attained_at: if exact { Some(at) } else { None },
            horizon_argmax: at,
            exact,
            tail_bound,
        }
    }

    /// Upper bound on the ratio over all levels `> horizon`.
    fn tail_ratio_bound(&self, bias: Bias) -> Rational {
        let from = self.horizon + 1;
        match &self.digit_rule {
            DigitRule::Consecutive(rule) => count_tail_bound(rule, &self.n_rule, from, bias),
            DigitRule::Sets { .. } => {
                let n0 = self.n_rule.tail_infimum(from);
                let num = self
                    .digit_rule
                    .reachable_sets(from)
                    .iter()
                    .map(|s| match bias {
                        Bias::MaxDigit => *s.last().expect("nonempty"),
                        Bias::Count => s.len() as u64,
                    })
                    .max()
                    .unwrap_or(0);
                ratio(num, n0)
            }
        }
    }

    pub fn check_growth_assumption(
        &self,
        start: usize,
        end: usize,
        prec: Precision,
    ) -> Result<GrowthDiagnostic> {
        validate_window(start, end)?;
        if end + 1 > self.horizon + 1 || self.lookahead.is_none() && end + 1 > self.horizon {
            return Err(Error::InvalidWindow {
                start,
                end,
                reason: format!(
                    "growth ratios need N_(j+1); available levels end at {}",
                    if self.lookahead.is_some() { self.horizon + 1 } else { self.horizon }
                ),
            });
        }
        let mut logs = LnCache::new(prec);
        let mut log_scale = logs.zero();
        let mut ratios = Vec::with_capacity(end - start + 1);
        for j in 1..=end {
            log_scale = log_scale + logs.ln(self.levels[j - 1].n);
            if j >= start {
                let next = self.level_with_lookahead(j + 1)?.n;
                let r = logs.ln(next) / log_scale.clone();
                ratios.push(GrowthRatio {
                    level: j,
                    ratio: hp_to_f64(&r),
                });
            }
        }
        let nonincreasing = ratios.windows(2).all(|w| w[1].ratio <= w[0].ratio);
        Ok(GrowthDiagnostic {
            start,
            end,
            ratios,
            nonincreasing,
        })
    }

    /// Serializes the system in the spec-file format.
    pub fn to_spec_string(&self) -> String {
        crate::specfile::emit(self)
    }
}

#[derive(Clone, Copy)]
enum Bias {
    MaxDigit,
    Count,
}

fn count_tail_bound(rule: &CountRule, n_rule: &SequenceRule, from: usize, bias: Bias) -> Rational {
    let offset = match bias {
        Bias::MaxDigit => 1,
        Bias::Count => 0,
    };
    let n0 = n_rule.tail_infimum(from);
    match rule {
        CountRule::Constant(k) => ratio((*k).max(1) - offset, n0),
        // (⌊N^s⌋ - offset)/N <= N^(s-1) <= n0^(s-1) < (⌊n0^s⌋ + 1)/n0
        CountRule::FloorPower(s) => {
            if s.numer() == s.denom() {
                return ratio(1, 1);
            }
            ratio(crate::numeric::floor_pow(n0, s) + 1, n0)
        }
        CountRule::FloorFraction(r) => ratio(*r.numer(), *r.denom()),
        // ln N / N decreases for N >= 3; max over N >= 2 is 1/e < 1/2.
        CountRule::FloorLog => {
            if n0 >= 3 {
                ratio(crate::numeric::floor_ln(n0) + 1, n0)
            } else {
                ratio(1, 2)
            }
        }
        CountRule::Explicit { values, tail } => {
            let mut bound = count_tail_bound(tail, n_rule, from.max(values.len() + 1), bias);
            for j in from..=values.len() {
                let n = n_rule.value(j).unwrap_or(u64::MAX);
                let r = ratio(values[j - 1].max(1) - offset, n);
                if r > bound {
                    bound = r;
                }
            }
            bound
        }
    }
}

fn make_level(
    n_rule: &SequenceRule,
    digit_rule: &DigitRule,
    j: usize,
    options: SystemOptions,
) -> Result<Level> {
    let invalid = |reason: String| Error::InvalidLevel { level: j, reason };
    let n = n_rule
        .value(j)
        .ok_or_else(|| invalid(format!("N_{j} from rule {n_rule} does not fit in 64 bits")))?;
    let floor = if options.min3 { 3 } else { 2 };
    if n < floor {
        return Err(invalid(format!("N_{j} = {n} < {floor}")));
    }
    let digits = digit_rule.set_for_level(j, n);
    if digits.len() > n || digits.len() == n && !options.allow_full_levels {
        return Err(invalid(format!(
            "K_{j} = {} must be < N_{j} = {n}",
            digits.len()
        )));
    }
    if digits.max() >= n {
        return Err(invalid(format!(
            "digit {} of B_{j} is not below N_{j} = {n}",
            digits.max()
        )));
    }
    Ok(Level { n, digits })
}

pub(crate) fn validate_window(start: usize, end: usize) -> Result<()> {
    if start == 0 || start > end {
        return Err(Error::InvalidWindow {
            start,
            end,
            reason: "window must satisfy 1 <= start <= end".into(),
        });
    }
    Ok(())
}

/// Result of `sup_j ratio_j` over all levels.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CBound {
    /// Max over the horizon.
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub value: Rational,
    /// Level attaining the supremum; `None` means the supremum may lie in the tail.
    pub attained_at: Option<usize>,
    /// Level attaining the horizon maximum.
    pub horizon_argmax: usize,
    /// True when the tail bound proves `value` is the supremum over all levels.
    pub exact: bool,
    /// Certified bound on the ratio over all levels beyond the horizon.
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub tail_bound: Rational,
}

impl CBound {
    /// Certified upper bound on the supremum over every level.
    pub fn upper(&self) -> Rational {
        if self.exact {
            self.value.clone()
        } else {
            self.tail_bound.clone().max(self.value.clone())
        }
    }
}

impl fmt::Display for CBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.attained_at {
            Some(j) => write!(f, "{} (attained at j = {j}, exact)", self.value),
            None => write!(
                f,
                "{} over the horizon (j = {}), tail bound {}",
                self.value, self.horizon_argmax, self.tail_bound
            ),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthRatio {
    pub level: usize,
    /// `log N_{j+1} / log(N_1 .. N_j)`
    pub ratio: f64,
}

/// Finite-window view of the growth condition; says nothing about the limit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthDiagnostic {
    pub start: usize,
    pub end: usize,
    pub ratios: Vec<GrowthRatio>,
    pub nonincreasing: bool,
}

impl GrowthDiagnostic {
    /// Ratio at the window's last level.
    pub fn last(&self) -> f64 {
        self.ratios.last().map_or(f64::NAN, |r| r.ratio)
    }

    /// Nonincreasing over the window and below `threshold` at its end.
    pub fn looks_vanishing(&self, threshold: f64) -> bool {
        self.nonincreasing && self.last() <= threshold
    }
}
