//! Text outputs behind the `moran` binary. Every function is a pure function of
//! its arguments: fixed float formatting, exact `p/q` rationals, fixed row order.

use serde::Serialize;

use crate::dimension::{assumption_collapse_check, dimension_estimate, Classification, DimensionEstimate};
use crate::error::{Error, Result};
use crate::generator::{generate_with_precision, GeneratedSystem};
use crate::geometry::{level_endpoints, rajchman_obstruction, Obstruction};
use crate::measure::{mu_hat_at_scale, nondecay_certificate, spectrum as spectrum_samples, NonDecay};
use crate::numeric::{fmt_f64, fmt_rational, parse_rational, Precision};
use crate::progressions::{ap_length_profile, canonical_ap, find_aps, ApProfile};
use crate::rules::SequenceRule;
use crate::sequences::{CBound, DigitSystem};

fn csv_table<R>(header: &[&str], rows: R) -> String
where
    R: IntoIterator<Item = Vec<String>>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 output")
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

/// `index,endpoint`: the level-`n` left endpoints in increasing order.
pub fn construct(sys: &DigitSystem, level: usize, cap: u64) -> Result<String> {
    let approx = level_endpoints(sys, level, cap)?;
    Ok(csv_table(
        &["index", "endpoint"],
        approx.endpoints().enumerate().map(|(i, x)| vec![i.to_string(), fmt_rational(&x)]),
    ))
}

/// `xi,re,im,modulus,error_bound,levels_used` on `steps + 1` equally spaced frequencies.
pub fn spectrum(sys: &DigitSystem, xi_min: f64, xi_max: f64, steps: usize, tol: f64) -> Result<String> {
    let samples = spectrum_samples(sys, xi_min, xi_max, steps, tol)?;
    Ok(csv_table(
        &["xi", "re", "im", "modulus", "error_bound", "levels_used"],
        samples.iter().map(|s| {
            vec![
                fmt_f64(s.xi),
                fmt_f64(s.value.re),
                fmt_f64(s.value.im),
                fmt_f64(s.modulus()),
                fmt_f64(s.error_bound),
                s.levels_used.to_string(),
            ]
        }),
    ))
}

/// `|μ̂(N_1..N_n)|` for `n = 0..=n_max`, checked against the non-decay bound when one applies.
pub fn scales(sys: &DigitSystem, n_max: usize, tol: f64, prec: Precision) -> Result<String> {
    if n_max > sys.horizon() {
        return Err(Error::LevelOutOfHorizon {
            level: n_max,
            horizon: sys.horizon(),
        });
    }
    let bound = match nondecay_certificate(sys, prec) {
        Ok(NonDecay::Certified(b)) => Some(b.lower_bound),
        _ => None,
    };
    let mut rows = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let s = mu_hat_at_scale(sys, n, tol)?;
        let modulus = s.sample.modulus();
        rows.push(vec![
            n.to_string(),
            s.scale.to_string(),
            fmt_f64(s.sample.value.re),
            fmt_f64(s.sample.value.im),
            fmt_f64(modulus),
            fmt_f64(s.sample.error_bound),
            s.sample.levels_used.to_string(),
            bound.map(fmt_f64).unwrap_or_default(),
            bound
                .map(|l| (modulus >= l - s.sample.error_bound).to_string())
                .unwrap_or_default(),
        ]);
    }
    Ok(csv_table(
        &["n", "scale", "re", "im", "modulus", "error_bound", "levels_used", "lower_bound", "holds"],
        rows,
    ))
}

/// `j,s1_value,s2_value,growth_ratio`
pub fn dimension(sys: &DigitSystem, start: usize, end: usize, prec: Precision) -> Result<String> {
    let e = dimension_estimate(sys, start, end, prec)?;
    Ok(csv_table(
        &["j", "s1_value", "s2_value", "growth_ratio"],
        e.levels().enumerate().map(|(i, j)| {
            vec![
                j.to_string(),
                fmt_f64(e.s1_values[i]),
                fmt_f64(e.s2_values[i]),
                fmt_f64(e.growth.ratios[i].ratio),
            ]
        }),
    ))
}

/// `j,n,k,k_over_n,max_digit_over_n`
pub fn ap_profile(sys: &DigitSystem, up_to: usize) -> Result<String> {
    let p = ap_length_profile(sys, up_to)?;
    Ok(csv_table(
        &["j", "n", "k", "k_over_n", "max_digit_over_n"],
        p.rows.iter().map(|r| {
            vec![
                r.level.to_string(),
                r.n.to_string(),
                r.length.to_string(),
                fmt_rational(&r.count_ratio),
                fmt_rational(&r.digit_ratio),
            ]
        }),
    ))
}

pub fn ap_canonical(sys: &DigitSystem, level: usize) -> Result<String> {
    Ok(json(&canonical_ap(sys, level)?))
}

pub fn ap_search(sys: &DigitSystem, level: usize, min_length: u64, max_results: usize, cap: u64) -> Result<String> {
    let approx = level_endpoints(sys, level, cap)?;
    Ok(json(&find_aps(&approx, min_length, max_results)?))
}

#[derive(Serialize)]
struct CReport {
    #[serde(serialize_with = "crate::report::ser_rational")]
    value: crate::numeric::Rational,
    #[serde(serialize_with = "crate::report::ser_rational")]
    upper: crate::numeric::Rational,
    exact: bool,
    attained_at: Option<usize>,
}

impl From<&CBound> for CReport {
    fn from(c: &CBound) -> Self {
        CReport {
            value: c.value.clone(),
            upper: c.upper(),
            exact: c.exact,
            attained_at: c.attained_at,
        }
    }
}

#[derive(Serialize)]
struct DimensionSummary {
    start: usize,
    end: usize,
    #[serde(serialize_with = "crate::report::ser_f64")]
    s1_inf: f64,
    #[serde(serialize_with = "crate::report::ser_f64")]
    s2_inf: f64,
    #[serde(serialize_with = "crate::report::ser_f64")]
    s1_at_end: f64,
    #[serde(serialize_with = "crate::report::ser_f64")]
    s2_at_end: f64,
    classification: Classification,
    verdict: &'static str,
    #[serde(serialize_with = "crate::report::ser_f64")]
    growth_ratio_at_end: f64,
    growth_nonincreasing: bool,
    assumption_ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    gap_collapses: Option<bool>,
}

impl DimensionSummary {
    fn new(e: &DimensionEstimate, gap_collapses: Option<bool>) -> Self {
        DimensionSummary {
            start: e.start,
            end: e.end,
            s1_inf: e.s1_inf,
            s2_inf: e.s2_inf,
            s1_at_end: *e.s1_values.last().expect("nonempty window"),
            s2_at_end: *e.s2_values.last().expect("nonempty window"),
            classification: e.classification,
            verdict: e.verdict,
            growth_ratio_at_end: e.growth.last(),
            growth_nonincreasing: e.growth.nonincreasing,
            assumption_ok: e.assumption_ok,
            gap_collapses,
        }
    }
}

#[derive(Serialize)]
struct ApSummary {
    levels: usize,
    max_length: u64,
    length_at_end: u64,
    all_canonical: bool,
    lengths_increase: bool,
    ratio_below_half: bool,
}

impl From<&ApProfile> for ApSummary {
    fn from(p: &ApProfile) -> Self {
        ApSummary {
            levels: p.rows.len(),
            max_length: p.max_length(),
            length_at_end: p.rows.last().map_or(0, |r| r.length),
            all_canonical: p.all_canonical,
            lengths_increase: p.lengths_increase,
            ratio_below_half: p.ratio_below_half,
        }
    }
}

#[derive(Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
enum Section<T> {
    NotApplicable {
        reason: String,
    },
    #[serde(untagged)]
    Done(T),
}

impl<T> Section<T> {
    fn from_result(r: Result<T>) -> Result<Self> {
        match r {
            Ok(v) => Ok(Section::Done(v)),
            Err(e @ (Error::Precondition(_) | Error::InvalidWindow { .. })) => {
                Ok(Section::NotApplicable { reason: e.to_string() })
            }
            Err(e) => Err(e),
        }
    }
}

#[derive(Serialize)]
struct VerifyReport {
    system: String,
    c: CReport,
    mass_ratio: CReport,
    obstruction: Obstruction,
    nondecay: Section<NonDecay>,
    dimension: Section<DimensionSummary>,
    ap_profile: ApSummary,
}

/// Dimension window used by `verify`: the second half of the available levels.
fn default_window(sys: &DigitSystem) -> (usize, usize) {
    let end = if sys.lookahead().is_some() { sys.horizon() } else { sys.horizon().saturating_sub(1) };
    (sys.horizon().div_ceil(2).clamp(1, end.max(1)), end)
}

/// Obstruction, non-decay, dimension window and AP profile in one JSON report.
/// Refusals and inapplicable sections are reported, not raised.
pub fn verify(sys: &DigitSystem, prec: Precision) -> Result<String> {
    let (start, end) = default_window(sys);
    let dimension = Section::from_result(dimension_estimate(sys, start, end, prec).and_then(|e| {
        let collapse = assumption_collapse_check(sys, start, end, prec)?;
        Ok(DimensionSummary::new(&e, Some(collapse.collapses)))
    }))?;
    let report = VerifyReport {
        system: sys.to_spec_string(),
        c: (&sys.compute_c()).into(),
        mass_ratio: (&sys.mass_ratio()).into(),
        obstruction: rajchman_obstruction(sys),
        nondecay: Section::from_result(nondecay_certificate(sys, prec))?,
        dimension,
        ap_profile: (&ap_length_profile(sys, sys.horizon())?).into(),
    };
    Ok(json(&report))
}

#[derive(Serialize)]
struct GenerateReport<'a> {
    #[serde(serialize_with = "crate::report::ser_rational")]
    s: crate::numeric::Rational,
    case: crate::generator::GeneratorCase,
    obstruction: &'a crate::geometry::RajchmanObstruction,
    dimension: DimensionSummary,
    ap_profile: ApSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    deviation: Option<&'static str>,
}

/// Builds a system of dimension `s`; returns its spec-file text and a JSON report.
pub fn generate(s: &str, n_rule: &str, horizon: usize, prec: Precision) -> Result<(String, String)> {
    let s = parse_rational(s)?;
    let n_rule: SequenceRule = n_rule.parse()?;
    let g: GeneratedSystem = generate_with_precision(&s, n_rule, horizon, prec)?;
    let report = GenerateReport {
        s: g.s.clone(),
        case: g.case,
        obstruction: &g.obstruction,
        dimension: DimensionSummary::new(&g.dimension, None),
        ap_profile: (&g.ap_profile).into(),
        deviation: g.deviation,
    };
    Ok((g.spec_text(), json(&report)))
}
