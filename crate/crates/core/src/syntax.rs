//! Propositions, signed statements and their concrete text syntax.
//!
//! Grammar (whitespace between tokens is insignificant):
//!
//! ```text
//! statement := ("+" | "-") prop
//! prop      := imp
//! imp       := or ("->" imp)?
//! or        := and ("|" and)*
//! and       := neg ("&" neg)*
//! neg       := "~" neg | atom | "(" prop ")"
//! atom      := [a-z][a-z0-9_]*
//! ```

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// An atom name; always matches `[a-z][a-z0-9_]*`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom(Arc<str>);

impl Atom {
    /// Builds an atom, returning `None` when `name` is not a valid identifier.
    pub fn new(name: &str) -> Option<Atom> {
        is_identifier(name).then(|| Atom(Arc::from(name)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// `[a-z][a-z0-9_]*`
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some('a'..='z')) && chars.all(|c| matches!(c, 'a'..='z' | '0'..='9' | '_'))
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Prop {
    Atom(Atom),
    And(Arc<Prop>, Arc<Prop>),
    Or(Arc<Prop>, Arc<Prop>),
    Not(Arc<Prop>),
    Imp(Arc<Prop>, Arc<Prop>),
}

impl Prop {
    /// Panics on an invalid identifier; use [`Atom::new`] for untrusted input.
    pub fn atom(name: &str) -> Prop {
        Prop::Atom(Atom::new(name).unwrap_or_else(|| panic!("invalid atom name {name:?}")))
    }

    pub fn and(l: Prop, r: Prop) -> Prop {
        Prop::And(Arc::new(l), Arc::new(r))
    }

    pub fn or(l: Prop, r: Prop) -> Prop {
        Prop::Or(Arc::new(l), Arc::new(r))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(p: Prop) -> Prop {
        Prop::Not(Arc::new(p))
    }

    pub fn imp(l: Prop, r: Prop) -> Prop {
        Prop::Imp(Arc::new(l), Arc::new(r))
    }

    /// Node count.
    pub fn size(&self) -> usize {
        match self {
            Prop::Atom(_) => 1,
            Prop::Not(p) => 1 + p.size(),
            Prop::And(l, r) | Prop::Or(l, r) | Prop::Imp(l, r) => 1 + l.size() + r.size(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Prop::Atom(_) => 1,
            Prop::Not(p) => 1 + p.depth(),
            Prop::And(l, r) | Prop::Or(l, r) | Prop::Imp(l, r) => 1 + l.depth().max(r.depth()),
        }
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Prop::Atom(_))
    }

    /// Atoms in order of first occurrence, without repeats.
    pub fn atoms(&self) -> Vec<Atom> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    pub(crate) fn collect_atoms(&self, out: &mut Vec<Atom>) {
        match self {
            Prop::Atom(a) => {
                if !out.contains(a) {
                    out.push(a.clone());
                }
            }
            Prop::Not(p) => p.collect_atoms(out),
            Prop::And(l, r) | Prop::Or(l, r) | Prop::Imp(l, r) => {
                l.collect_atoms(out);
                r.collect_atoms(out);
            }
        }
    }

    /// Every subformula including `self`, outermost first, without repeats.
    pub fn subformulas(&self) -> Vec<Prop> {
        let mut out = Vec::new();
        let mut stack = vec![self.clone()];
        while let Some(p) = stack.pop() {
            if out.contains(&p) {
                continue;
            }
            match &p {
                Prop::Atom(_) => {}
                Prop::Not(x) => stack.push((**x).clone()),
                Prop::And(l, r) | Prop::Or(l, r) | Prop::Imp(l, r) => {
                    stack.push((**r).clone());
                    stack.push((**l).clone());
                }
            }
            out.push(p);
        }
        out
    }

    fn level(&self) -> u8 {
        match self {
            Prop::Imp(..) => 1,
            Prop::Or(..) => 2,
            Prop::And(..) => 3,
            Prop::Not(_) | Prop::Atom(_) => 4,
        }
    }

    fn write_at(&self, min_level: u8, out: &mut String) {
        let parens = self.level() < min_level;
        if parens {
            out.push('(');
        }
        match self {
            Prop::Atom(a) => out.push_str(a.as_str()),
            Prop::Not(p) => {
                out.push('~');
                p.write_at(4, out);
            }
            Prop::And(l, r) => {
                l.write_at(3, out);
                out.push_str(" & ");
                r.write_at(4, out);
            }
            Prop::Or(l, r) => {
                l.write_at(2, out);
                out.push_str(" | ");
                r.write_at(3, out);
            }
            Prop::Imp(l, r) => {
                l.write_at(2, out);
                out.push_str(" -> ");
                r.write_at(1, out);
            }
        }
        if parens {
            out.push(')');
        }
    }
}

impl fmt::Display for Prop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.write_at(1, &mut s);
        f.write_str(&s)
    }
}

impl fmt::Debug for Prop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// A force sign applied to a proposition: assertion `+A` or denial `-A`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Statement {
    pub sign: Sign,
    pub prop: Prop,
}

impl Statement {
    pub fn new(sign: Sign, prop: Prop) -> Statement {
        Statement { sign, prop }
    }

    pub fn plus(prop: Prop) -> Statement {
        Statement::new(Sign::Plus, prop)
    }

    pub fn minus(prop: Prop) -> Statement {
        Statement::new(Sign::Minus, prop)
    }

    /// Flips the sign and keeps the proposition.
    pub fn conjugate(&self) -> Statement {
        Statement::new(self.sign.flip(), self.prop.clone())
    }

    pub fn is_atomic(&self) -> bool {
        self.prop.is_atomic()
    }

    /// Text form that parenthesizes every binary proposition, as used in
    /// sequent printouts and derivation files: `+(p & q)`, `-~p`, `+a`.
    pub fn to_wrapped(&self) -> String {
        let mut s = String::new();
        s.push(self.sign.symbol());
        self.prop.write_at(4, &mut s);
        s
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_statement(self))
    }
}

impl fmt::Debug for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_wrapped())
    }
}

/// Flips the sign; `(+A)* = -A`, `(-A)* = +A`.
pub fn conjugate(s: &Statement) -> Statement {
    s.conjugate()
}

/// What a derivation concludes: a statement, or the punctuation symbol ⊥.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Judgement {
    Stmt(Statement),
    Falsum,
}

impl Judgement {
    pub fn statement(&self) -> Option<&Statement> {
        match self {
            Judgement::Stmt(s) => Some(s),
            Judgement::Falsum => None,
        }
    }

    pub fn is_falsum(&self) -> bool {
        matches!(self, Judgement::Falsum)
    }

    pub fn to_wrapped(&self) -> String {
        match self {
            Judgement::Stmt(s) => s.to_wrapped(),
            Judgement::Falsum => FALSUM_TEXT.to_string(),
        }
    }
}

impl From<Statement> for Judgement {
    fn from(s: Statement) -> Self {
        Judgement::Stmt(s)
    }
}

impl fmt::Debug for Judgement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_wrapped())
    }
}

impl fmt::Display for Judgement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_wrapped())
    }
}

pub const FALSUM_TEXT: &str = "_|_";

/// Minimal-parenthesization text form.
pub fn print_statement(s: &Statement) -> String {
    let mut out = String::new();
    out.push(s.sign.symbol());
    s.prop.write_at(1, &mut out);
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at byte {offset}: expected {}, found {found}", expected.join(" or "))]
pub struct SyntaxError {
    pub offset: usize,
    pub expected: Vec<&'static str>,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Plus,
    Minus,
    Arrow,
    And,
    Or,
    Tilde,
    LParen,
    RParen,
    Ident(String),
    Other(char),
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Arrow => "'->'".into(),
            Tok::And => "'&'".into(),
            Tok::Or => "'|'".into(),
            Tok::Tilde => "'~'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Ident(s) => format!("identifier {s:?}"),
            Tok::Other(c) => format!("{c:?}"),
            Tok::End => "end of input".into(),
        }
    }
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    /// End of the last consumed token.
    last_end: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    /// Returns the next token and its start offset without consuming it.
    fn peek(&mut self) -> (Tok, usize) {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        let mut chars = rest.chars();
        let tok = match chars.next() {
            None => Tok::End,
            Some('+') => Tok::Plus,
            Some('-') if rest.starts_with("->") => Tok::Arrow,
            Some('-') => Tok::Minus,
            Some('&') => Tok::And,
            Some('|') => Tok::Or,
            Some('~') => Tok::Tilde,
            Some('(') => Tok::LParen,
            Some(')') => Tok::RParen,
            Some('a'..='z') => {
                let len = rest
                    .find(|ch: char| !matches!(ch, 'a'..='z' | '0'..='9' | '_'))
                    .unwrap_or(rest.len());
                Tok::Ident(rest[..len].to_string())
            }
            Some(c) => Tok::Other(c),
        };
        (tok, start)
    }

    fn bump(&mut self, tok: &Tok) {
        self.pos += match tok {
            Tok::End => 0,
            Tok::Arrow => 2,
            Tok::Ident(s) => s.len(),
            Tok::Other(c) => c.len_utf8(),
            _ => 1,
        };
        self.last_end = self.pos;
    }

    fn error(&mut self, expected: Vec<&'static str>) -> SyntaxError {
        let (tok, offset) = self.peek();
        SyntaxError {
            offset,
            expected,
            found: tok.describe(),
        }
    }
}

fn parse_imp(lx: &mut Lexer<'_>) -> Result<Prop, SyntaxError> {
    let left = parse_or(lx)?;
    let (tok, _) = lx.peek();
    if tok == Tok::Arrow {
        lx.bump(&tok);
        let right = parse_imp(lx)?;
        return Ok(Prop::imp(left, right));
    }
    Ok(left)
}

fn parse_or(lx: &mut Lexer<'_>) -> Result<Prop, SyntaxError> {
    let mut acc = parse_and(lx)?;
    loop {
        let (tok, _) = lx.peek();
        if tok != Tok::Or {
            return Ok(acc);
        }
        lx.bump(&tok);
        acc = Prop::or(acc, parse_and(lx)?);
    }
}

fn parse_and(lx: &mut Lexer<'_>) -> Result<Prop, SyntaxError> {
    let mut acc = parse_neg(lx)?;
    loop {
        let (tok, _) = lx.peek();
        if tok != Tok::And {
            return Ok(acc);
        }
        lx.bump(&tok);
        acc = Prop::and(acc, parse_neg(lx)?);
    }
}

fn parse_neg(lx: &mut Lexer<'_>) -> Result<Prop, SyntaxError> {
    let (tok, _) = lx.peek();
    match tok {
        Tok::Tilde => {
            lx.bump(&tok);
            Ok(Prop::not(parse_neg(lx)?))
        }
        Tok::Ident(ref name) => {
            let atom = Atom(Arc::from(name.as_str()));
            lx.bump(&tok);
            Ok(Prop::Atom(atom))
        }
        Tok::LParen => {
            lx.bump(&tok);
            let inner = parse_imp(lx)?;
            let (close, _) = lx.peek();
            if close != Tok::RParen {
                return Err(lx.error(vec!["')'", "'->'", "'|'", "'&'"]));
            }
            lx.bump(&close);
            Ok(inner)
        }
        _ => Err(lx.error(vec!["'~'", "'('", "atom"])),
    }
}

/// Parses a statement at the start of `text` and returns it together with the
/// byte offset just past its last token. Parsing stops at the first token that
/// cannot extend the proposition, so a statement can be embedded in a larger
/// syntax (the derivation file format relies on this).
pub fn parse_statement_prefix(text: &str) -> Result<(Statement, usize), SyntaxError> {
    let mut lx = Lexer {
        src: text,
        pos: 0,
        last_end: 0,
    };
    let (tok, _) = lx.peek();
    let sign = match tok {
        Tok::Plus => Sign::Plus,
        Tok::Minus => Sign::Minus,
        _ => return Err(lx.error(vec!["'+'", "'-'"])),
    };
    lx.bump(&tok);
    let (next, _) = lx.peek();
    if next == Tok::End {
        return Err(lx.error(vec!["proposition"]));
    }
    let prop = parse_imp(&mut lx)?;
    Ok((Statement::new(sign, prop), lx.last_end))
}

/// Parses a complete statement; trailing non-whitespace input is an error.
pub fn parse_statement(text: &str) -> Result<Statement, SyntaxError> {
    let (stmt, end) = parse_statement_prefix(text)?;
    let mut lx = Lexer {
        src: text,
        pos: end,
        last_end: end,
    };
    let (tok, _) = lx.peek();
    if tok != Tok::End {
        return Err(lx.error(vec!["end of input", "'->'", "'|'", "'&'"]));
    }
    Ok(stmt)
}

/// Parses a bare proposition (no sign).
pub fn parse_prop(text: &str) -> Result<Prop, SyntaxError> {
    let mut lx = Lexer {
        src: text,
        pos: 0,
        last_end: 0,
    };
    let prop = parse_imp(&mut lx)?;
    let (tok, _) = lx.peek();
    if tok != Tok::End {
        return Err(lx.error(vec!["end of input", "'->'", "'|'", "'&'"]));
    }
    Ok(prop)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: &str) -> Prop {
        Prop::atom(n)
    }

    #[test]
    fn conjugate_flips_sign_only() {
        let plus_p = Statement::plus(p("p"));
        assert_eq!(conjugate(&plus_p), Statement::minus(p("p")));
        let minus_imp = Statement::minus(Prop::imp(p("p"), p("q")));
        assert_eq!(conjugate(&minus_imp), Statement::plus(Prop::imp(p("p"), p("q"))));
        let s = Statement::plus(Prop::and(p("p"), p("q")));
        assert_eq!(conjugate(&conjugate(&s)), s);
    }

    #[test]
    fn parse_grammar_cases() {
        assert_eq!(
            parse_statement("+p & q").unwrap(),
            Statement::plus(Prop::and(p("p"), p("q")))
        );
        assert_eq!(
            parse_statement("-p -> q | r").unwrap(),
            Statement::minus(Prop::imp(p("p"), Prop::or(p("q"), p("r"))))
        );
        assert_eq!(
            parse_statement("+p -> q -> r").unwrap(),
            Statement::plus(Prop::imp(p("p"), Prop::imp(p("q"), p("r"))))
        );
        assert_eq!(
            parse_statement("+p & q & r").unwrap(),
            Statement::plus(Prop::and(Prop::and(p("p"), p("q")), p("r")))
        );
        assert_eq!(
            parse_statement("  + ~ ( p_1 )  ").unwrap(),
            Statement::plus(Prop::not(p("p_1")))
        );
    }

    #[test]
    fn parse_errors_carry_offset_and_expectations() {
        let e = parse_statement("+").unwrap_err();
        assert_eq!(e.offset, 1);
        assert!(e.expected.contains(&"proposition"));

        let e = parse_statement("p").unwrap_err();
        assert_eq!(e.offset, 0);
        assert!(e.expected.contains(&"'+'"));

        let e = parse_statement("+(p & q").unwrap_err();
        assert_eq!(e.offset, 7);
        assert!(e.expected.contains(&"')'"));

        let e = parse_statement("+p q").unwrap_err();
        assert_eq!(e.offset, 3);
    }

    #[test]
    fn falsum_is_not_a_statement() {
        assert!(parse_statement("_|_").is_err());
        assert!(parse_statement("+_|_").is_err());
    }

    #[test]
    fn print_minimal_parens() {
        assert_eq!(print_statement(&Statement::plus(p("p"))), "+p");
        let s = Statement::minus(Prop::imp(Prop::imp(p("p"), p("q")), p("r")));
        assert_eq!(print_statement(&s), "-(p -> q) -> r");
        let s = Statement::plus(Prop::not(Prop::not(p("p"))));
        assert_eq!(print_statement(&s), "+~~p");
        let s = Statement::plus(Prop::and(p("p"), Prop::and(p("q"), p("r"))));
        assert_eq!(print_statement(&s), "+p & (q & r)");
        let s = Statement::plus(Prop::not(Prop::or(p("p"), p("q"))));
        assert_eq!(print_statement(&s), "+~(p | q)");
    }

    #[test]
    fn wrapped_form() {
        let s = Statement::plus(Prop::and(p("p"), p("q")));
        assert_eq!(s.to_wrapped(), "+(p & q)");
        assert_eq!(Statement::minus(Prop::not(p("p"))).to_wrapped(), "-~p");
        assert_eq!(parse_statement(&s.to_wrapped()).unwrap(), s);
    }

    #[test]
    fn prefix_parse_stops_before_foreign_tokens() {
        let (s, end) = parse_statement_prefix("+(p | ~p) :discharge x").unwrap();
        assert_eq!(s.to_wrapped(), "+(p | ~p)");
        assert_eq!(end, 9);
        let (_, end) = parse_statement_prefix("+p (assume x +p))").unwrap();
        assert_eq!(end, 2);
    }

    #[test]
    fn size_and_depth() {
        let a = Prop::or(p("p"), Prop::not(p("p")));
        assert_eq!(a.size(), 4);
        assert_eq!(a.depth(), 3);
        assert_eq!(a.atoms(), vec![Atom::new("p").unwrap()]);
        assert_eq!(a.subformulas().len(), 3);
    }
}
