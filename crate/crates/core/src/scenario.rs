//! Line-oriented scenario files.
//!
//! ```text
//! # comment
//! (+,-,+)x(+,+,-) | XX&YY;ZZ&YY
//! psi- | X1&X2
//! (+,-,+) | Z@1;X@1
//! ```
//!
//! The left side is a joint state literal, a single-cube literal (for
//! elementary settings `A@n`, all on the same cube), or a canonical state
//! name. The right side is a `;`-separated list of settings and may be empty.

use std::fmt;

use crate::epistemic::{
    canonical_state, canonical_state_on, point_state, point_state_elementary, EpistemicState,
};
use crate::error::Error;
use crate::measurement::MeasurementSetting;
use crate::model::{JointOnticState, OnticState, Subsystem};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scenario {
    /// 1-based line number in the source.
    pub line: usize,
    /// The state literal as written.
    pub label: String,
    pub initial: EpistemicState,
    pub settings: Vec<MeasurementSetting>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScenarioError {
    pub line: usize,
    pub error: Error,
}

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.error)
    }
}

impl std::error::Error for ScenarioError {}

pub fn parse_scenarios(text: &str) -> Result<Vec<Scenario>, ScenarioError> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let line = raw.split('#').next().unwrap_or("").trim();
            (!line.is_empty()).then(|| parse_line(i + 1, line))
        })
        .collect()
}

fn parse_line(line: usize, text: &str) -> Result<Scenario, ScenarioError> {
    let at = |error: Error| ScenarioError { line, error };
    let (state, settings) = text.split_once('|').ok_or_else(|| {
        at(Error::Parse {
            input: text.to_string(),
            reason: "expected '<state> | <setting>;<setting>;...'".into(),
        })
    })?;
    let settings = settings
        .split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::parse)
        .collect::<Result<Vec<MeasurementSetting>, _>>()
        .map_err(at)?;
    let label = state.trim().to_string();
    let initial = parse_initial(&label, &settings).map_err(at)?;
    if let Some(bad) = settings.iter().find(|s| s.space() != initial.space()) {
        return Err(at(Error::SpaceMismatch {
            expected: bad.space(),
            found: initial.space(),
        }));
    }
    Ok(Scenario {
        line,
        label,
        initial,
        settings,
    })
}

/// Elementary states go on the cube named by the first setting (cube 1 if
/// there are none).
fn parse_initial(label: &str, settings: &[MeasurementSetting]) -> Result<EpistemicState, Error> {
    let cube = match settings.first() {
        Some(MeasurementSetting::Elementary { subsystem, .. }) => *subsystem,
        _ => Subsystem::First,
    };
    if label.starts_with('(') {
        if label.contains(")x(") || label.contains(") x (") {
            Ok(point_state(label.parse::<JointOnticState>()?))
        } else {
            Ok(point_state_elementary(cube, label.parse::<OnticState>()?))
        }
    } else {
        let name = label.parse()?;
        match canonical_state_on(name, cube) {
            Ok(state) => Ok(state),
            Err(_) => Ok(canonical_state(name)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::epistemic::Space;

    #[test]
    fn parses_mixed_file() {
        let text = "\
# order demo
(+,-,+)x(+,+,-) | XX&YY;ZZ&YY

psi- | X1&X2   # split
(+,-,+) | Z@2;X@2
(+,+,+)x(+,+,+) |
";
        let s = parse_scenarios(text).unwrap();
        assert_eq!(s.len(), 4);
        assert_eq!(s[0].line, 2);
        assert_eq!(s[0].settings.len(), 2);
        assert_eq!(s[1].initial.support().len(), 8);
        assert_eq!(s[2].initial.space(), Space::Elementary(Subsystem::Second));
        assert!(s[3].settings.is_empty());
    }

    #[test]
    fn reports_line_of_error() {
        let err =
            parse_scenarios("(+,+,+)x(+,+,+) | XX&YY\n(+,+,+)x(+,+,+) | YY&XX\n").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(matches!(err.error, Error::UnsupportedNonLocal(..)));
        assert!(parse_scenarios("no bar here").is_err());
        assert!(parse_scenarios("(+,+,+) | XX&YY").is_err());
        assert!(parse_scenarios("(+,+,+)x(+,+,+) | Z@1").is_err());
        assert!(parse_scenarios("(+,+,+) | Z@1;Z@2").is_err());
    }
}
