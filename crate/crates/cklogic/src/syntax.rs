//! Conditional-logic formulas: AST, concrete grammar, parsing and printing.
//!
//! The grammar (loosest to tightest): `<->`, `=>`, `->`, `|`, `&`, `~`.
//! `->` and `=>` are right-associative, `&` and `|` left-associative,
//! `<->` is non-associative (chains require parentheses). Atoms match
//! `[a-z][a-zA-Z0-9_]*`. Schema variables (`A`, `B`, ...) are never produced
//! by the parser; they are built programmatically and recognised by an
//! uppercase first letter.

use std::fmt;
use thiserror::Error;

/// A conditional-logic formula. `Cond` is the defeasible conditional;
/// `And`/`Implies`/`Iff` are kept as first-class nodes so printed output
/// mirrors the input, with [`Formula::desugar`] reducing them to the
/// primitive `Neg`/`Or`/`Cond` fragment.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(String),
    Neg(Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Cond(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(name.to_string())
    }

    pub fn neg(f: Formula) -> Formula {
        Formula::Neg(Box::new(f))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn cond(a: Formula, b: Formula) -> Formula {
        Formula::Cond(Box::new(a), Box::new(b))
    }

    /// Reduce `And`, `Implies` and `Iff` to the primitive connectives.
    /// `a & b` becomes `~(~a | ~b)`, `a -> b` becomes `~a | b`, and
    /// `a <-> b` expands through both.
    pub fn desugar(&self) -> Formula {
        match self {
            Formula::Atom(_) => self.clone(),
            Formula::Neg(f) => Formula::neg(f.desugar()),
            Formula::Or(a, b) => Formula::or(a.desugar(), b.desugar()),
            Formula::Cond(a, b) => Formula::cond(a.desugar(), b.desugar()),
            Formula::And(a, b) => {
                let (a, b) = (a.desugar(), b.desugar());
                Formula::neg(Formula::or(Formula::neg(a), Formula::neg(b)))
            }
            Formula::Implies(a, b) => Formula::or(Formula::neg(a.desugar()), b.desugar()),
            Formula::Iff(a, b) => {
                let fwd = Formula::implies((**a).clone(), (**b).clone());
                let bwd = Formula::implies((**b).clone(), (**a).clone());
                Formula::and(fwd, bwd).desugar()
            }
        }
    }

    /// All atom names in first-occurrence order.
    pub fn atoms(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut Vec<String>) {
        match self {
            Formula::Atom(name) => {
                if !out.iter().any(|a| a == name) {
                    out.push(name.clone());
                }
            }
            Formula::Neg(f) => f.collect_atoms(out),
            Formula::Or(a, b)
            | Formula::And(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b)
            | Formula::Cond(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// True when a name denotes a schema variable rather than a plain atom.
    pub fn is_schema_name(name: &str) -> bool {
        name.chars().next().is_some_and(|c| c.is_ascii_uppercase())
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Atom(_) => 7,
            Formula::Neg(_) => 6,
            Formula::And(_, _) => 5,
            Formula::Or(_, _) => 4,
            Formula::Implies(_, _) => 3,
            Formula::Cond(_, _) => 2,
            Formula::Iff(_, _) => 1,
        }
    }
}

/// Minimal-parentheses rendering; `parse_formula(format_formula(f))` returns
/// a structurally identical tree.
pub fn format_formula(f: &Formula) -> String {
    let mut s = String::new();
    write_formula(f, &mut s);
    s
}

fn write_formula(f: &Formula, out: &mut String) {
    match f {
        Formula::Atom(name) => out.push_str(name),
        Formula::Neg(a) => {
            out.push('~');
            write_child(a, f.precedence(), false, out);
        }
        Formula::And(a, b) => write_binary(f, a, "&", b, Assoc::Left, out),
        Formula::Or(a, b) => write_binary(f, a, "|", b, Assoc::Left, out),
        Formula::Implies(a, b) => write_binary(f, a, "->", b, Assoc::Right, out),
        Formula::Cond(a, b) => write_binary(f, a, "=>", b, Assoc::Right, out),
        Formula::Iff(a, b) => write_binary(f, a, "<->", b, Assoc::None, out),
    }
}

enum Assoc {
    Left,
    Right,
    None,
}

fn write_binary(parent: &Formula, a: &Formula, op: &str, b: &Formula, assoc: Assoc, out: &mut String) {
    let prec = parent.precedence();
    let (left_strict, right_strict) = match assoc {
        Assoc::Left => (false, true),
        Assoc::Right => (true, false),
        Assoc::None => (true, true),
    };
    write_child(a, prec, left_strict, out);
    out.push(' ');
    out.push_str(op);
    out.push(' ');
    write_child(b, prec, right_strict, out);
}

fn write_child(child: &Formula, parent_prec: u8, strict: bool, out: &mut String) {
    let needs = if strict {
        child.precedence() <= parent_prec
    } else {
        child.precedence() < parent_prec
    };
    if needs {
        out.push('(');
        write_formula(child, out);
        out.push(')');
    } else {
        write_formula(child, out);
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_formula(self))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("{line}:{col}: expected {expected}, found {found}")]
    Unexpected {
        line: u32,
        col: u32,
        expected: String,
        found: String,
    },
    #[error("{line}:{col}: illegal atom name `{name}` (atoms match [a-z][a-zA-Z0-9_]*)")]
    IllegalAtom { line: u32, col: u32, name: String },
    #[error("{line}:{col}: unexpected character `{ch}`")]
    BadChar { line: u32, col: u32, ch: char },
    #[error("empty input")]
    Empty,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Not,
    And,
    Or,
    Implies,
    Cond,
    Iff,
    LParen,
    RParen,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Not => "`~`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Implies => "`->`".into(),
            Tok::Cond => "`=>`".into(),
            Tok::Iff => "`<->`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: u32,
    col: u32,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer { chars: text.chars().peekable(), line: 1, col: 1 }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn tokens(mut self) -> Result<Vec<(Tok, u32, u32)>, ParseError> {
        let mut out = Vec::new();
        loop {
            while matches!(self.chars.peek(), Some(c) if c.is_whitespace()) {
                self.bump();
            }
            if self.chars.peek() == Some(&'#') {
                while !matches!(self.chars.peek(), None | Some('\n')) {
                    self.bump();
                }
                continue;
            }
            let (line, col) = (self.line, self.col);
            let Some(c) = self.bump() else {
                out.push((Tok::Eof, line, col));
                return Ok(out);
            };
            let tok = match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '~' => Tok::Not,
                '&' => Tok::And,
                '|' => Tok::Or,
                '-' => match self.bump() {
                    Some('>') => Tok::Implies,
                    _ => return Err(ParseError::BadChar { line, col, ch: '-' }),
                },
                '=' => match self.bump() {
                    Some('>') => Tok::Cond,
                    _ => return Err(ParseError::BadChar { line, col, ch: '=' }),
                },
                '<' => match (self.bump(), self.bump()) {
                    (Some('-'), Some('>')) => Tok::Iff,
                    _ => return Err(ParseError::BadChar { line, col, ch: '<' }),
                },
                c if c.is_ascii_alphabetic() => {
                    let mut name = String::new();
                    name.push(c);
                    while matches!(self.chars.peek(), Some(c) if c.is_ascii_alphanumeric() || *c == '_')
                    {
                        name.push(self.bump().unwrap());
                    }
                    if !c.is_ascii_lowercase() {
                        return Err(ParseError::IllegalAtom { line, col, name });
                    }
                    Tok::Ident(name)
                }
                c => return Err(ParseError::BadChar { line, col, ch: c }),
            };
            out.push((tok, line, col));
        }
    }
}

struct Parser {
    toks: Vec<(Tok, u32, u32)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn advance(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, expected: &str) -> ParseError {
        let (tok, line, col) = &self.toks[self.pos];
        ParseError::Unexpected {
            line: *line,
            col: *col,
            expected: expected.to_string(),
            found: tok.describe(),
        }
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.cond()?;
        if *self.peek() == Tok::Iff {
            self.advance();
            let rhs = self.cond()?;
            if *self.peek() == Tok::Iff {
                return Err(self.err("`)` or end of formula (`<->` is non-associative; parenthesise chains)"));
            }
            return Ok(Formula::iff(lhs, rhs));
        }
        Ok(lhs)
    }

    fn cond(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.implies()?;
        if *self.peek() == Tok::Cond {
            self.advance();
            let rhs = self.cond()?;
            return Ok(Formula::cond(lhs, rhs));
        }
        Ok(lhs)
    }

    fn implies(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Implies {
            self.advance();
            let rhs = self.implies()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Or {
            self.advance();
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::And {
            self.advance();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Not => {
                self.advance();
                Ok(Formula::neg(self.unary()?))
            }
            Tok::Ident(name) => {
                self.advance();
                Ok(Formula::Atom(name))
            }
            Tok::LParen => {
                self.advance();
                let inner = self.iff()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.err("`)`"));
                }
                self.advance();
                Ok(inner)
            }
            _ => Err(self.err("an atom, `~` or `(`")),
        }
    }
}

/// Parse a single formula from text.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let toks = Lexer::new(text).tokens()?;
    if toks.len() == 1 {
        return Err(ParseError::Empty);
    }
    let mut parser = Parser { toks, pos: 0 };
    let f = parser.iff()?;
    if *parser.peek() != Tok::Eof {
        return Err(parser.err("end of input"));
    }
    Ok(f)
}

/// Parse a batch file: one formula per line, `#` starts a comment, blank
/// lines skipped. Returns `(line number, formula)` pairs.
pub fn parse_batch(text: &str) -> Result<Vec<(u32, Formula)>, ParseError> {
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let stripped = match line.find('#') {
            Some(pos) => &line[..pos],
            None => line,
        };
        if stripped.trim().is_empty() {
            continue;
        }
        let f = parse_formula(stripped).map_err(|e| reline(e, idx as u32 + 1))?;
        out.push((idx as u32 + 1, f));
    }
    Ok(out)
}

fn reline(e: ParseError, line: u32) -> ParseError {
    match e {
        ParseError::Unexpected { col, expected, found, .. } => {
            ParseError::Unexpected { line, col, expected, found }
        }
        ParseError::IllegalAtom { col, name, .. } => ParseError::IllegalAtom { line, col, name },
        ParseError::BadChar { col, ch, .. } => ParseError::BadChar { line, col, ch },
        ParseError::Empty => ParseError::Empty,
    }
}
