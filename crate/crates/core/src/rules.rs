//! Finite descriptions of the infinite sequences `N_j`, `K_j` and `B_j`.
//!
//! Each rule has a one-line text form used by the spec-file loader, e.g.
//! `affine 1 2`, `explicit 3,100 then constant 100`, `consecutive floor-pow 1/2`
//! or `sets {0,2} then repeat`. `Display` emits exactly the form `FromStr` reads.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::numeric::{floor_ln, floor_pow};

/// Rule producing `N_j` for every level `j >= 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SequenceRule {
    Constant(u64),
    /// `a*j + b`
    Affine { a: u64, b: i64 },
    /// `base^j`
    Power { base: u64 },
    /// `base^(2^j)`
    Tower { base: u64 },
    /// Listed values for `j = 1..=len`, then `tail` evaluated at the absolute level.
    Explicit {
        values: Vec<u64>,
        tail: Box<SequenceRule>,
    },
}

impl SequenceRule {
    /// `N_j`, or `None` if it does not fit in a `u64`.
    pub fn value(&self, j: usize) -> Option<u64> {
        debug_assert!(j >= 1);
        match self {
            SequenceRule::Constant(v) => Some(*v),
            SequenceRule::Affine { a, b } => {
                let v = (*a as i128) * (j as i128) + (*b as i128);
                u64::try_from(v).ok()
            }
            SequenceRule::Power { base } => base.checked_pow(u32::try_from(j).ok()?),
            SequenceRule::Tower { base } => {
                let exp = 1u32.checked_shl(u32::try_from(j).ok()?)?;
                if j >= 32 {
                    return None;
                }
                base.checked_pow(exp)
            }
            SequenceRule::Explicit { values, tail } => match values.get(j - 1) {
                Some(v) => Some(*v),
                None => tail.value(j),
            },
        }
    }

    /// Lower bound on `N_j` over all `j >= from`, valid for the whole infinite tail.
    /// Saturates at `u64::MAX` where the true value overflows.
    pub fn tail_infimum(&self, from: usize) -> u64 {
        match self {
            SequenceRule::Explicit { values, tail } => {
                let listed = values.iter().skip(from.saturating_sub(1)).copied().min();
                let rest = tail.tail_infimum(from.max(values.len() + 1));
                listed.map_or(rest, |m| m.min(rest))
            }
            // All other kinds are nondecreasing in j.
            _ => self.value(from).unwrap_or(u64::MAX),
        }
    }

    /// True when the rule is strictly increasing on every level.
    pub fn is_strictly_increasing(&self) -> bool {
        match self {
            SequenceRule::Constant(_) => false,
            SequenceRule::Affine { a, .. } => *a >= 1,
            SequenceRule::Power { base } | SequenceRule::Tower { base } => *base >= 2,
            SequenceRule::Explicit { values, tail } => {
                let listed_ok = values.windows(2).all(|w| w[0] < w[1]);
                let joins = match (values.last(), tail.value(values.len() + 1)) {
                    (Some(last), Some(next)) => *last < next,
                    (Some(_), None) => true,
                    (None, _) => true,
                };
                listed_ok && joins && tail.is_strictly_increasing()
            }
        }
    }

    /// Some(v) when `N_j = v` for every `j`.
    pub fn constant_value(&self) -> Option<u64> {
        match self {
            SequenceRule::Constant(v) => Some(*v),
            SequenceRule::Affine { a: 0, b } => u64::try_from(*b).ok(),
            SequenceRule::Power { base: 1 } | SequenceRule::Tower { base: 1 } => Some(1),
            SequenceRule::Explicit { values, tail } => {
                let v = tail.constant_value()?;
                values.iter().all(|x| *x == v).then_some(v)
            }
            _ => None,
        }
    }
}

/// Rule producing `K_j` from `j` and `N_j` for consecutive digit sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CountRule {
    Constant(u64),
    /// `⌊N_j^s⌋` for an exact exponent `s` in `[0, 1]`.
    FloorPower(Ratio<u64>),
    /// `⌊N_j * r⌋`
    FloorFraction(Ratio<u64>),
    /// `⌊ln N_j⌋`
    FloorLog,
    Explicit {
        values: Vec<u64>,
        tail: Box<CountRule>,
    },
}

impl CountRule {
    /// The raw rule value before the `0 -> 1` clamp.
    pub fn raw(&self, j: usize, n: u64) -> u64 {
        match self {
            CountRule::Constant(k) => *k,
            CountRule::FloorPower(s) => floor_pow(n, s),
            CountRule::FloorFraction(r) => {
                ((n as u128 * *r.numer() as u128) / *r.denom() as u128) as u64
            }
            CountRule::FloorLog => floor_ln(n),
            CountRule::Explicit { values, tail } => match values.get(j - 1) {
                Some(v) => *v,
                None => tail.raw(j, n),
            },
        }
    }

    /// `K_j` with the zero clamp applied.
    pub fn value(&self, j: usize, n: u64) -> u64 {
        self.raw(j, n).max(1)
    }
}

/// How explicit digit sets continue past the listed levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetTail {
    RepeatLast,
    Cycle,
}

/// Rule producing the digit set `B_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DigitRule {
    /// `B_j = {0, .., K_j - 1}`
    Consecutive(CountRule),
    /// Listed sets (each sorted, duplicate free) continued by `tail`.
    Sets { sets: Vec<Vec<u64>>, tail: SetTail },
}

impl DigitRule {
    pub fn is_consecutive(&self) -> bool {
        matches!(self, DigitRule::Consecutive(_))
    }

    /// Index into `sets` used at level `j`.
    pub(crate) fn set_index(sets_len: usize, tail: SetTail, j: usize) -> usize {
        if j <= sets_len {
            j - 1
        } else {
            match tail {
                SetTail::RepeatLast => sets_len - 1,
                SetTail::Cycle => (j - 1) % sets_len,
            }
        }
    }

    pub fn set_for_level(&self, j: usize, n: u64) -> DigitSet {
        match self {
            DigitRule::Consecutive(rule) => DigitSet::Consecutive(rule.value(j, n)),
            DigitRule::Sets { sets, tail } => {
                DigitSet::from_sorted(sets[Self::set_index(sets.len(), *tail, j)].clone())
            }
        }
    }

    /// Digit sets that can occur at some level `>= from`, for explicit sets.
    pub(crate) fn reachable_sets(&self, from: usize) -> Vec<&[u64]> {
        match self {
            DigitRule::Consecutive(_) => Vec::new(),
            DigitRule::Sets { sets, tail } => match tail {
                SetTail::Cycle => sets.iter().map(Vec::as_slice).collect(),
                SetTail::RepeatLast => sets
                    .iter()
                    .skip(from.saturating_sub(1).min(sets.len() - 1))
                    .map(Vec::as_slice)
                    .collect(),
            },
        }
    }

    /// True when `0 ∈ B_j` for every level, as a consequence of the rule itself.
    pub fn zero_in_every_level(&self) -> bool {
        match self {
            DigitRule::Consecutive(_) => true,
            DigitRule::Sets { .. } => self.reachable_sets(1).iter().all(|s| s.first() == Some(&0)),
        }
    }
}

/// A single level's digit set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DigitSet {
    Consecutive(u64),
    Explicit(Vec<u64>),
}

impl DigitSet {
    /// Normalizes `{0,..,K-1}` to the consecutive form.
    pub fn from_sorted(digits: Vec<u64>) -> Self {
        let consecutive = digits.iter().enumerate().all(|(i, d)| i as u64 == *d);
        if consecutive && !digits.is_empty() {
            DigitSet::Consecutive(digits.len() as u64)
        } else {
            DigitSet::Explicit(digits)
        }
    }

    pub fn len(&self) -> u64 {
        match self {
            DigitSet::Consecutive(k) => *k,
            DigitSet::Explicit(d) => d.len() as u64,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn max(&self) -> u64 {
        match self {
            DigitSet::Consecutive(k) => k - 1,
            DigitSet::Explicit(d) => *d.last().expect("digit sets are nonempty"),
        }
    }

    pub fn contains(&self, digit: u64) -> bool {
        match self {
            DigitSet::Consecutive(k) => digit < *k,
            DigitSet::Explicit(d) => d.binary_search(&digit).is_ok(),
        }
    }

    pub fn is_consecutive(&self) -> bool {
        matches!(self, DigitSet::Consecutive(_))
    }

    /// Equally spaced digits from `0` to `n - 1`: the homogeneous layout.
    pub fn is_spread_over(&self, n: u64) -> bool {
        let len = self.len();
        if len < 2 || self.iter().next() != Some(0) || self.max() != n - 1 {
            return false;
        }
        let gap = (n - 1) / (len - 1);
        gap * (len - 1) == n - 1 && self.iter().enumerate().all(|(i, d)| d == i as u64 * gap)
    }

    pub fn iter(&self) -> Box<dyn Iterator<Item = u64> + '_> {
        match self {
            DigitSet::Consecutive(k) => Box::new(0..*k),
            DigitSet::Explicit(d) => Box::new(d.iter().copied()),
        }
    }
}

// ---------------------------------------------------------------------------
// Text form
// ---------------------------------------------------------------------------

fn fmt_list(values: &[u64]) -> String {
    values
        .iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn fmt_exponent(r: &Ratio<u64>) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

impl fmt::Display for SequenceRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceRule::Constant(v) => write!(f, "constant {v}"),
            SequenceRule::Affine { a, b } => write!(f, "affine {a} {b}"),
            SequenceRule::Power { base } => write!(f, "power {base}"),
            SequenceRule::Tower { base } => write!(f, "tower {base}"),
            SequenceRule::Explicit { values, tail } => {
                write!(f, "explicit {} then {tail}", fmt_list(values))
            }
        }
    }
}

impl fmt::Display for CountRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CountRule::Constant(k) => write!(f, "constant {k}"),
            CountRule::FloorPower(s) => write!(f, "floor-pow {}", fmt_exponent(s)),
            CountRule::FloorFraction(r) => write!(f, "floor-frac {}", fmt_exponent(r)),
            CountRule::FloorLog => write!(f, "floor-log"),
            CountRule::Explicit { values, tail } => {
                write!(f, "explicit {} then {tail}", fmt_list(values))
            }
        }
    }
}

impl fmt::Display for DigitRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DigitRule::Consecutive(rule) => write!(f, "consecutive {rule}"),
            DigitRule::Sets { sets, tail } => {
                let sets = sets
                    .iter()
                    .map(|s| format!("{{{}}}", fmt_list(s)))
                    .collect::<Vec<_>>()
                    .join(";");
                let tail = match tail {
                    SetTail::RepeatLast => "repeat",
                    SetTail::Cycle => "cycle",
                };
                write!(f, "sets {sets} then {tail}")
            }
        }
    }
}

fn rule_err(msg: impl Into<String>) -> Error {
    Error::InvalidRule(msg.into())
}

fn parse_u64(tok: &str) -> Result<u64> {
    tok.trim()
        .parse()
        .map_err(|_| rule_err(format!("expected a nonnegative integer, got {tok:?}")))
}

fn parse_list(tok: &str) -> Result<Vec<u64>> {
    let values = tok
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(parse_u64)
        .collect::<Result<Vec<_>>>()?;
    if values.is_empty() {
        return Err(rule_err("empty list"));
    }
    Ok(values)
}

fn parse_exponent(tok: &str) -> Result<Ratio<u64>> {
    let q = crate::numeric::parse_rational(tok).map_err(|_| rule_err(format!("bad exponent {tok:?}")))?;
    let num = q.numer().to_string().parse::<u64>();
    let den = q.denom().to_string().parse::<u64>();
    match (num, den) {
        (Ok(n), Ok(d)) if n <= d => Ok(Ratio::new(n, d)),
        _ => Err(rule_err(format!("exponent {tok:?} must lie in [0, 1]"))),
    }
}

/// Splits `"explicit 1,2 then <rest>"` into the list and the tail text.
fn split_explicit(rest: &str) -> Result<(Vec<u64>, &str)> {
    let (list, tail) = rest
        .split_once(" then ")
        .ok_or_else(|| rule_err("explicit rules need a tail: `explicit v1,v2,.. then <rule>`"))?;
    Ok((parse_list(list)?, tail.trim()))
}

fn expect_args<'a>(kind: &str, rest: &'a str, count: usize) -> Result<Vec<&'a str>> {
    let args: Vec<&str> = rest.split_whitespace().collect();
    if args.len() != count {
        return Err(rule_err(format!(
            "`{kind}` takes {count} argument(s), got {:?}",
            rest.trim()
        )));
    }
    Ok(args)
}

impl FromStr for SequenceRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, rest) = s.split_once(char::is_whitespace).unwrap_or((s, ""));
        let rule = match kind {
            "constant" => SequenceRule::Constant(parse_u64(expect_args(kind, rest, 1)?[0])?),
            "affine" => {
                let args = expect_args(kind, rest, 2)?;
                let a = parse_u64(args[0])?;
                let b = args[1]
                    .parse::<i64>()
                    .map_err(|_| rule_err(format!("bad offset {:?}", args[1])))?;
                SequenceRule::Affine { a, b }
            }
            "power" => SequenceRule::Power {
                base: parse_u64(expect_args(kind, rest, 1)?[0])?,
            },
            "tower" => SequenceRule::Tower {
                base: parse_u64(expect_args(kind, rest, 1)?[0])?,
            },
            "explicit" => {
                let (values, tail) = split_explicit(rest)?;
                SequenceRule::Explicit {
                    values,
                    tail: Box::new(tail.parse()?),
                }
            }
            other => return Err(rule_err(format!("unknown sequence rule kind {other:?}"))),
        };
        Ok(rule)
    }
}

impl FromStr for CountRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, rest) = s.split_once(char::is_whitespace).unwrap_or((s, ""));
        let rule = match kind {
            "constant" => CountRule::Constant(parse_u64(expect_args(kind, rest, 1)?[0])?),
            "floor-pow" => CountRule::FloorPower(parse_exponent(expect_args(kind, rest, 1)?[0])?),
            "floor-frac" => {
                let r = parse_exponent(expect_args(kind, rest, 1)?[0])?;
                if r.is_zero() {
                    return Err(rule_err("floor-frac needs a positive fraction"));
                }
                CountRule::FloorFraction(r)
            }
            "floor-log" => {
                expect_args(kind, rest, 0)?;
                CountRule::FloorLog
            }
            "explicit" => {
                let (values, tail) = split_explicit(rest)?;
                CountRule::Explicit {
                    values,
                    tail: Box::new(tail.parse()?),
                }
            }
            other => return Err(rule_err(format!("unknown count rule kind {other:?}"))),
        };
        Ok(rule)
    }
}

fn parse_set(tok: &str) -> Result<Vec<u64>> {
    let inner = tok
        .trim()
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| rule_err(format!("digit sets are written {{d1,d2,..}}, got {tok:?}")))?;
    let mut digits = parse_list(inner)?;
    digits.sort_unstable();
    if digits.windows(2).any(|w| w[0] == w[1]) {
        return Err(rule_err(format!("repeated digit in {tok:?}")));
    }
    Ok(digits)
}

impl FromStr for DigitRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, rest) = s.split_once(char::is_whitespace).unwrap_or((s, ""));
        match kind {
            "consecutive" => Ok(DigitRule::Consecutive(rest.parse()?)),
            "sets" => {
                let (sets, tail) = rest
                    .split_once(" then ")
                    .ok_or_else(|| rule_err("digit sets need a tail: `sets {..};{..} then repeat|cycle`"))?;
                let sets = sets
                    .split(';')
                    .map(parse_set)
                    .collect::<Result<Vec<_>>>()?;
                let tail = match tail.trim() {
                    "repeat" => SetTail::RepeatLast,
                    "cycle" => SetTail::Cycle,
                    other => return Err(rule_err(format!("unknown set tail {other:?}"))),
                };
                Ok(DigitRule::Sets { sets, tail })
            }
            other => Err(rule_err(format!("unknown digit rule kind {other:?}"))),
        }
    }
}
