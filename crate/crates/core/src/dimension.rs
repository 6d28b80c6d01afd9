//! Hausdorff dimension quantities of Feng, Wen and Wu over a finite window.
//!
//! ```text
//! s1(j) = log(K_1..K_j) / log(N_1..N_j)
//! s2(j) = log(K_1..K_j) / (log(N_1..N_j) + log(N_{j+1}/K_{j+1}))
//! ```
//!
//! The dimension is a liminf of one of these; here we only report the per-level
//! values and their infimum over the window, never a limit.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{hp_to_f64, LnCache, Precision};
use crate::rules::DigitRule;
use crate::sequences::{validate_window, DigitSystem, GrowthDiagnostic};

/// Growth ratios at or below this, and nonincreasing, count as consistent with the assumption.
pub const GROWTH_THRESHOLD: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    /// Children evenly spread from the left end to the right end of the parent.
    Homogeneous,
    /// Children packed against the left end (`B_j = {0, .., K_j - 1}`).
    PartialHomogeneous,
    General,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Homogeneous => "homogeneous",
            Classification::PartialHomogeneous => "partial-homogeneous",
            Classification::General => "general",
        }
    }

    /// What the window values say about `dim_H E`.
    pub fn verdict(self) -> &'static str {
        match self {
            Classification::Homogeneous => "dim_H = liminf s1",
            Classification::PartialHomogeneous => "dim_H = liminf s2",
            Classification::General => "s2 <= dim_H <= s1 (liminfs)",
        }
    }
}

/// Classification from the digit rule; explicit sets are judged level by level over the horizon.
pub fn classify(sys: &DigitSystem) -> Classification {
    if let DigitRule::Consecutive(_) = sys.digit_rule() {
        return Classification::PartialHomogeneous;
    }
    let levels = sys.levels();
    if levels.iter().all(|l| l.digits.is_spread_over(l.n)) {
        Classification::Homogeneous
    } else if levels.iter().all(|l| l.digits.is_consecutive()) {
        Classification::PartialHomogeneous
    } else {
        Classification::General
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DimensionEstimate {
    pub start: usize,
    pub end: usize,
    /// `s1_values[i]` belongs to level `start + i`; likewise for the others.
    pub s1_values: Vec<f64>,
    pub s2_values: Vec<f64>,
    pub s1_inf: f64,
    pub s2_inf: f64,
    pub classification: Classification,
    pub verdict: &'static str,
    pub growth: GrowthDiagnostic,
    pub assumption_ok: bool,
}

impl DimensionEstimate {
    pub fn levels(&self) -> std::ops::RangeInclusive<usize> {
        self.start..=self.end
    }

    /// The window value the classification points to: `s1` for homogeneous sets, `s2` otherwise.
    pub fn estimate(&self) -> f64 {
        match self.classification {
            Classification::Homogeneous => self.s1_inf,
            _ => self.s2_inf,
        }
    }
}

/// Per-level `(s1, s2)` over `[start, end]`.
fn ratio_series(sys: &DigitSystem, start: usize, end: usize, prec: Precision) -> Result<Vec<(f64, f64)>> {
    validate_window(start, end)?;
    if end > sys.horizon() || (end == sys.horizon() && sys.lookahead().is_none()) {
        return Err(Error::InvalidWindow {
            start,
            end,
            reason: format!(
                "s2 at level j needs level j+1; the window must end by {}",
                if sys.lookahead().is_some() { sys.horizon() } else { sys.horizon() - 1 }
            ),
        });
    }
    let mut logs = LnCache::new(prec);
    let mut log_k = logs.zero();
    let mut log_n = logs.zero();
    let mut out = Vec::with_capacity(end - start + 1);
    for j in 1..=end {
        let level = sys.level(j)?;
        log_k = log_k + logs.ln(level.digits.len());
        log_n = log_n + logs.ln(level.n);
        if j >= start {
            let next = sys.level_with_lookahead(j + 1)?;
            let s1 = log_k.clone() / log_n.clone();
            let s2 = log_k.clone() / (log_n.clone() + logs.ln(next.n) - logs.ln(next.digits.len()));
            out.push((hp_to_f64(&s1), hp_to_f64(&s2)));
        }
    }
    Ok(out)
}

fn infimum(xs: &[f64]) -> f64 {
    xs.iter().copied().fold(f64::INFINITY, f64::min)
}

pub fn dimension_estimate(sys: &DigitSystem, start: usize, end: usize, prec: Precision) -> Result<DimensionEstimate> {
    let series = ratio_series(sys, start, end, prec)?;
    let growth = sys.check_growth_assumption(start, end, prec)?;
    let (s1_values, s2_values): (Vec<f64>, Vec<f64>) = series.into_iter().unzip();
    let classification = classify(sys);
    Ok(DimensionEstimate {
        start,
        end,
        s1_inf: infimum(&s1_values),
        s2_inf: infimum(&s2_values),
        s1_values,
        s2_values,
        classification,
        verdict: classification.verdict(),
        assumption_ok: growth.looks_vanishing(GROWTH_THRESHOLD),
        growth,
    })
}

/// Whether `s1 - s2` looks like it vanishes over the window.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CollapseCheck {
    pub start: usize,
    pub end: usize,
    pub max_gap: f64,
    pub gap_at_end: f64,
    /// `(s1 - s2)/s1` at the last level; the absolute gap can vanish while `s1` does.
    pub relative_gap_at_end: f64,
    pub relative_gap_nonincreasing: bool,
    pub growth: GrowthDiagnostic,
    pub collapses: bool,
}

pub fn assumption_collapse_check(sys: &DigitSystem, start: usize, end: usize, prec: Precision) -> Result<CollapseCheck> {
    let series = ratio_series(sys, start, end, prec)?;
    let growth = sys.check_growth_assumption(start, end, prec)?;
    let gaps: Vec<f64> = series.iter().map(|(s1, s2)| s1 - s2).collect();
    let relative: Vec<f64> = series
        .iter()
        .map(|(s1, s2)| if *s1 > 0.0 { (s1 - s2) / s1 } else { 0.0 })
        .collect();
    let relative_gap_at_end = *relative.last().expect("window is nonempty");
    let relative_gap_nonincreasing = relative.windows(2).all(|w| w[1] <= w[0]);
    Ok(CollapseCheck {
        start,
        end,
        max_gap: gaps.iter().copied().fold(0.0, f64::max),
        gap_at_end: *gaps.last().expect("window is nonempty"),
        relative_gap_at_end,
        relative_gap_nonincreasing,
        collapses: relative_gap_nonincreasing && relative_gap_at_end <= GROWTH_THRESHOLD,
        growth,
    })
}
