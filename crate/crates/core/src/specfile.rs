//! Text key-value format for digit systems.
//!
//! ```text
//! # middle-thirds Cantor set
//! horizon = 20
//! n = constant 3
//! digits = sets {0,2} then repeat
//! ```
//!
//! Keys: `horizon` (required), `n` (required, a [`SequenceRule`]), `digits`
//! (required, a [`DigitRule`]), `n.min3` (optional, `true`/`false`: require
//! `N_j >= 3`), `digits.allow_full` (optional, `true`/`false`: accept `K_j = N_j`).
//! Blank lines and `#` comments are ignored; unknown or repeated keys are errors.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::rules::{DigitRule, SequenceRule};
use crate::sequences::{DigitSystem, SystemOptions};

const KEYS: [&str; 5] = ["horizon", "n", "n.min3", "digits", "digits.allow_full"];

pub fn parse(text: &str) -> Result<DigitSystem> {
    let mut entries: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::SpecFile {
            line: line_no,
            message: format!("expected `key = value`, got {line:?}"),
        })?;
        let key = key.trim();
        if !KEYS.contains(&key) {
            return Err(Error::SpecFile {
                line: line_no,
                message: format!("unknown key {key:?}"),
            });
        }
        if entries.insert(key, (line_no, value.trim())).is_some() {
            return Err(Error::SpecFile {
                line: line_no,
                message: format!("key {key:?} given twice"),
            });
        }
    }

    let required = |key: &str| {
        entries.get(key).copied().ok_or_else(|| Error::SpecFile {
            line: 0,
            message: format!("missing required key {key:?}"),
        })
    };
    let at_line = |line: usize| move |e: Error| Error::SpecFile {
        line,
        message: e.to_string(),
    };

    let (line, horizon) = required("horizon")?;
    let horizon: usize = horizon.parse().map_err(|_| Error::SpecFile {
        line,
        message: format!("horizon must be a positive integer, got {horizon:?}"),
    })?;
    let (line, n) = required("n")?;
    let n_rule: SequenceRule = n.parse().map_err(at_line(line))?;
    let (line, digits) = required("digits")?;
    let digit_rule: DigitRule = digits.parse().map_err(at_line(line))?;
    let flag = |key: &str| match entries.get(key) {
        None | Some((_, "false")) => Ok(false),
        Some((_, "true")) => Ok(true),
        Some((line, other)) => Err(Error::SpecFile {
            line: *line,
            message: format!("{key} must be true or false, got {other:?}"),
        }),
    };
    let options = SystemOptions {
        min3: flag("n.min3")?,
        allow_full_levels: flag("digits.allow_full")?,
    };
    // Level validation errors keep their own variant so callers can name the level.
    DigitSystem::with_options(n_rule, digit_rule, horizon, options)
}

pub fn load(path: &Path) -> Result<DigitSystem> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::SpecFile {
        line: 0,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    parse(&text)
}

pub fn emit(sys: &DigitSystem) -> String {
    let mut out = String::new();
    out.push_str(&format!("horizon = {}\n", sys.horizon()));
    out.push_str(&format!("n = {}\n", sys.n_rule()));
    if sys.requires_min3() {
        out.push_str("n.min3 = true\n");
    }
    out.push_str(&format!("digits = {}\n", sys.digit_rule()));
    if sys.options().allow_full_levels {
        out.push_str("digits.allow_full = true\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_cantor() {
        let sys = parse("# Cantor\nhorizon = 12\nn = constant 3\ndigits = sets {0,2} then repeat # trailing\n").unwrap();
        assert_eq!(sys.horizon(), 12);
        assert_eq!(sys.get_level(7).unwrap().0, 3);
    }

    #[test]
    fn round_trips_through_text() {
        let text = "horizon = 40\nn = explicit 3,100 then affine 1 5\nn.min3 = true\ndigits = consecutive explicit 2,77 then floor-pow 1/2\n";
        let sys = parse(text).unwrap();
        assert_eq!(emit(&sys), text);
        assert_eq!(parse(&emit(&sys)).unwrap(), sys);
    }

    #[test]
    fn full_levels_flag() {
        let text = "horizon = 4\nn = constant 2\ndigits = sets {0,1} then repeat\n";
        assert!(matches!(parse(text), Err(Error::InvalidLevel { level: 1, .. })));
        let full = format!("{text}digits.allow_full = true\n");
        let sys = parse(&full).unwrap();
        assert_eq!(emit(&sys), full);
        assert!(parse(&format!("{text}digits.allow_full = maybe\n")).is_err());
    }

    #[test]
    fn rejects_unknown_and_duplicate_keys() {
        let err = parse("horizon = 3\nn = constant 3\ndigits = consecutive constant 1\ncolour = red\n").unwrap_err();
        assert!(matches!(err, Error::SpecFile { line: 4, .. }), "{err}");
        let err = parse("horizon = 3\nhorizon = 4\n").unwrap_err();
        assert!(matches!(err, Error::SpecFile { line: 2, .. }));
        let err = parse("horizon = 3\nn = constant 3\n").unwrap_err();
        assert!(err.to_string().contains("digits"));
        let err = parse("horizon = x\nn = constant 3\ndigits = consecutive constant 1\n").unwrap_err();
        assert!(matches!(err, Error::SpecFile { line: 1, .. }));
        let err = parse("horizon = 3\nn = wobble 3\ndigits = consecutive constant 1\n").unwrap_err();
        assert!(matches!(err, Error::SpecFile { line: 2, .. }));
    }

    #[test]
    fn invalid_levels_surface_with_their_index() {
        let err = parse("horizon = 5\nn = constant 4\ndigits = consecutive explicit 1,2,4 then constant 1\n").unwrap_err();
        assert!(matches!(err, Error::InvalidLevel { level: 3, .. }));
        assert_eq!(err.exit_code(), 2);
    }
}
