//! Parenthesized derivation file format.
//!
//! ```text
//! deriv := "(" ruleName conclusion (":discharge" label+)? deriv* ")"
//!        | "(assume" label statement ")"
//! ```
//!
//! `conclusion` is a statement or `_|_`. The printer emits one node per line,
//! children indented by two spaces, and a trailing newline; parsing its output
//! and printing again reproduces the text byte for byte.

use thiserror::Error;

use super::{Derivation, Label, RuleId};
use crate::syntax::{parse_statement_prefix, Judgement, FALSUM_TEXT};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("derivation syntax error at byte {offset}: {message}")]
pub struct FormatError {
    pub offset: usize,
    pub message: String,
}

const DISCHARGE: &str = ":discharge";

pub fn print_derivation(d: &Derivation) -> String {
    let mut out = String::new();
    write_node(d, 0, "\n", &mut out);
    out.push('\n');
    out
}

/// Single-line form, used for diagnostics and `Debug`.
pub fn print_derivation_compact(d: &Derivation) -> String {
    let mut out = String::new();
    write_node(d, usize::MAX, " ", &mut out);
    out
}

fn write_node(d: &Derivation, indent: usize, sep: &str, out: &mut String) {
    if indent != usize::MAX {
        out.extend(std::iter::repeat_n(' ', indent));
    }
    out.push('(');
    out.push_str(&d.rule().name());
    if let RuleId::Assumption(l) = d.rule() {
        out.push(' ');
        out.push_str(l.as_str());
    }
    out.push(' ');
    out.push_str(&d.conclusion().to_wrapped());
    if !d.discharges().is_empty() {
        out.push(' ');
        out.push_str(DISCHARGE);
        for l in d.discharges() {
            out.push(' ');
            out.push_str(l.as_str());
        }
    }
    let child_indent = if indent == usize::MAX { usize::MAX } else { indent + 2 };
    for p in d.premises() {
        out.push_str(sep);
        write_node(p, child_indent, sep, out);
    }
    out.push(')');
}

struct Reader<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Reader<'a> {
    fn err(&self, message: impl Into<String>) -> FormatError {
        FormatError {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn expect(&mut self, c: char) -> Result<(), FormatError> {
        match self.peek() {
            Some(x) if x == c => {
                self.pos += c.len_utf8();
                Ok(())
            }
            Some(x) => Err(self.err(format!("expected '{c}', found '{x}'"))),
            None => Err(self.err(format!("expected '{c}', found end of input"))),
        }
    }

    /// A maximal run of characters other than whitespace and parentheses.
    fn word(&mut self) -> &'a str {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest
            .find(|c: char| c.is_whitespace() || c == '(' || c == ')')
            .unwrap_or(rest.len());
        self.pos += len;
        &rest[..len]
    }

    fn label(&mut self) -> Result<Label, FormatError> {
        let start = self.pos;
        let w = self.word();
        Label::new(w).ok_or_else(|| FormatError {
            offset: start,
            message: format!("expected a label, found {w:?}"),
        })
    }

    fn judgement(&mut self) -> Result<Judgement, FormatError> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        if let Some(after) = rest.strip_prefix(FALSUM_TEXT) {
            let _ = after;
            self.pos += FALSUM_TEXT.len();
            return Ok(Judgement::Falsum);
        }
        let (stmt, used) = parse_statement_prefix(rest).map_err(|e| FormatError {
            offset: self.pos + e.offset,
            message: format!("expected {}, found {}", e.expected.join(" or "), e.found),
        })?;
        self.pos += used;
        Ok(Judgement::Stmt(stmt))
    }

    fn node(&mut self) -> Result<Derivation, FormatError> {
        self.expect('(')?;
        let start = self.pos;
        let name = self.word();
        if name == "assume" {
            let label = self.label()?;
            let at = self.pos;
            let j = self.judgement()?;
            let Judgement::Stmt(stmt) = j else {
                return Err(FormatError {
                    offset: at,
                    message: "an assumption must be a statement".into(),
                });
            };
            self.expect(')')?;
            return Ok(Derivation::assume(label, stmt));
        }
        let rule = RuleId::from_name(name).ok_or_else(|| FormatError {
            offset: start,
            message: format!("unknown rule name {name:?}"),
        })?;
        let conclusion = self.judgement()?;
        let mut discharges = Vec::new();
        self.skip_ws();
        if self.src[self.pos..].starts_with(DISCHARGE) {
            self.pos += DISCHARGE.len();
            while !matches!(self.peek(), Some('(') | Some(')') | None) {
                discharges.push(self.label()?);
            }
            if discharges.is_empty() {
                return Err(self.err(":discharge needs at least one label"));
            }
        }
        let mut premises = Vec::new();
        loop {
            match self.peek() {
                Some('(') => premises.push(self.node()?),
                Some(')') => {
                    self.pos += 1;
                    break;
                }
                Some(c) => return Err(self.err(format!("expected '(' or ')', found '{c}'"))),
                None => return Err(self.err("unexpected end of input inside a node")),
            }
        }
        Ok(Derivation::node(rule, conclusion, premises, discharges))
    }
}

/// Parses one derivation; only whitespace may follow it.
pub fn parse_derivation(text: &str) -> Result<Derivation, FormatError> {
    let mut r = Reader { src: text, pos: 0 };
    let d = r.node()?;
    if r.peek().is_some() {
        return Err(r.err("trailing input after the derivation"));
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    const EM: &str = "\
(raa +(p | ~p) :discharge x
  (bot _|_
    (+|I2 +(p | ~p)
      (+~I +~p
        (-|E1 -p
          (assume x -(p | ~p)))))
    (assume x -(p | ~p))))
";

    #[test]
    fn round_trips_bit_exact() {
        let d = parse_derivation(EM).unwrap();
        assert_eq!(print_derivation(&d), EM);
        assert_eq!(super::super::size(&d), 7);
    }

    #[test]
    fn accepts_free_layout() {
        let d = parse_derivation("(+&I +p&q(assume x +p)(assume y +q))").unwrap();
        assert_eq!(
            print_derivation(&d),
            "(+&I +(p & q)\n  (assume x +p)\n  (assume y +q))\n"
        );
    }

    #[test]
    fn reports_errors_with_offsets() {
        let e = parse_derivation("(+&Q +p)").unwrap_err();
        assert_eq!(e.offset, 1);
        let e = parse_derivation("(raa +p :discharge (bot _|_))").unwrap_err();
        assert!(e.message.contains("at least one"));
        let e = parse_derivation("(assume x _|_)").unwrap_err();
        assert!(e.message.contains("statement"));
        assert!(parse_derivation("(assume x +p) extra").is_err());
        assert!(parse_derivation("(assume X +p)").is_err());
        assert!(parse_derivation("(bot _|_ (assume x +p)").is_err());
    }
}
