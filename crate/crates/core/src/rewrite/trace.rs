//! Reduction traces and their text form.
//!
//! ```text
//! 1 root BotRaaCut
//! 2 0.1 DetourMinusOrE1
//! (bot _|_ ...)
//! ```
//!
//! One line per step (number, path, kind), then the final derivation.

use thiserror::Error;

use super::{reduce_at, Redex, RedexKind, RewriteError};
use crate::derivation::format::{parse_derivation, print_derivation, FormatError};
use crate::derivation::{Derivation, Path};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub redex: Redex,
    pub result: Derivation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub initial: Derivation,
    pub steps: Vec<Step>,
}

impl Trace {
    pub fn new(initial: Derivation) -> Trace {
        Trace {
            initial,
            steps: Vec::new(),
        }
    }

    pub fn final_derivation(&self) -> &Derivation {
        self.steps.last().map_or(&self.initial, |s| &s.result)
    }

    pub fn redexes(&self) -> Vec<Redex> {
        self.steps.iter().map(|s| s.redex.clone()).collect()
    }

    pub fn export(&self) -> String {
        let mut out = String::new();
        for (i, s) in self.steps.iter().enumerate() {
            out.push_str(&format!("{} {} {}\n", i + 1, s.redex.path, s.redex.kind));
        }
        out.push_str(&print_derivation(self.final_derivation()));
        out
    }
}

/// A parsed trace file: the steps and the claimed final derivation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceFile {
    pub steps: Vec<Redex>,
    pub final_derivation: Derivation,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("trace line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("trace final derivation: {0}")]
    Final(#[from] FormatError),
    #[error("trace replay: {0}")]
    Replay(#[from] RewriteError),
    #[error("trace replay ends in a different derivation")]
    Mismatch,
}

fn parse_path(text: &str) -> Option<Path> {
    if text == "root" || text.is_empty() {
        return Some(Path::default());
    }
    text.split('.')
        .map(|p| p.parse().ok())
        .collect::<Option<Vec<usize>>>()
        .map(Path)
}

pub fn parse_trace(text: &str) -> Result<TraceFile, TraceError> {
    let mut steps = Vec::new();
    let mut offset = 0;
    for (i, line) in text.lines().enumerate() {
        if line.trim_start().starts_with('(') {
            break;
        }
        offset += line.len() + 1;
        if line.trim().is_empty() {
            continue;
        }
        let err = |message: String| TraceError::Line { line: i + 1, message };
        let parts: Vec<&str> = line.split_whitespace().collect();
        let [num, path, kind] = parts[..] else {
            return Err(err(format!("expected `<step> <path> <kind>`, found {line:?}")));
        };
        if num.parse::<usize>().ok() != Some(steps.len() + 1) {
            return Err(err(format!("expected step number {}, found {num:?}", steps.len() + 1)));
        }
        let path = parse_path(path).ok_or_else(|| err(format!("bad path {path:?}")))?;
        let kind = RedexKind::from_name(kind).ok_or_else(|| err(format!("unknown redex kind {kind:?}")))?;
        steps.push(Redex { path, kind });
    }
    let final_derivation = parse_derivation(text.get(offset..).unwrap_or(""))?;
    Ok(TraceFile {
        steps,
        final_derivation,
    })
}

/// Re-applies `steps` to `initial`.
pub fn replay(initial: &Derivation, steps: &[Redex]) -> Result<Trace, RewriteError> {
    let mut trace = Trace::new(initial.clone());
    for r in steps {
        let next = reduce_at(trace.final_derivation(), r)?;
        trace.steps.push(Step {
            redex: r.clone(),
            result: next,
        });
    }
    Ok(trace)
}

impl TraceFile {
    /// Replays against `initial` and checks the recorded final derivation.
    pub fn verify(&self, initial: &Derivation) -> Result<Trace, TraceError> {
        let trace = replay(initial, &self.steps)?;
        if *trace.final_derivation() != self.final_derivation {
            return Err(TraceError::Mismatch);
        }
        Ok(trace)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rewrite::{normalize, Strategy};

    #[test]
    fn export_parse_replay() {
        let x = parse_derivation(
            "(bot _|_ (raa -p :discharge x (bot _|_ (assume x +p) (-|E1 -p (-|I -(p | q) (assume y -p) (assume z -q))))) (assume w +p))",
        )
        .unwrap();
        let n = normalize(&x, Strategy::Outermost, 10);
        assert_eq!(n.trace.steps.len(), 2);
        let text = n.trace.export();
        assert!(text.starts_with("1 root BotRaaCut\n2 1 DetourMinusOrE1\n("), "{text}");
        let file = parse_trace(&text).unwrap();
        let again = file.verify(&x).unwrap();
        assert_eq!(again, n.trace);
        assert_eq!(again.export(), text);
    }

    #[test]
    fn empty_trace_is_just_the_derivation() {
        let x = parse_derivation("(assume x +p)").unwrap();
        let text = Trace::new(x.clone()).export();
        assert_eq!(text, "(assume x +p)\n");
        assert_eq!(parse_trace(&text).unwrap().steps, vec![]);
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(matches!(
            parse_trace("1 root Nope\n(assume x +p)\n"),
            Err(TraceError::Line { .. })
        ));
        assert!(matches!(
            parse_trace("2 root BotRaaCut\n(assume x +p)\n"),
            Err(TraceError::Line { .. })
        ));
        let file = parse_trace("1 root BotRaaCut\n(assume x +p)\n").unwrap();
        let x = parse_derivation("(assume x +p)").unwrap();
        assert!(matches!(file.verify(&x), Err(TraceError::Replay(_))));
    }
}
