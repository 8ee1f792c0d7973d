//! Concrete syntax for types, terms and contexts.
//!
//! Types: `bot` (or `⊥`) for absurdity, identifiers for base types,
//! right-associative `->` (or `→`) arrows, `~A` (or `¬A`) as sugar for
//! `A -> bot`, parentheses.
//!
//! Terms: identifiers, `\x:T. t` (or `λx:T. t`), `delta x:T. t`
//! (or `Δx:T. t`), left-associative juxtaposition application binding
//! tighter than abstraction bodies (bodies extend maximally right),
//! parentheses. Unicode is accepted on input only; printing is ASCII.
//!
//! `#` starts a comment running to end of line.

use std::fmt;

use lambda_delta::ast::{Context, Term, Type};

/// Byte offsets plus 1-based line/column of a source region.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
    pub line: u32,
    pub col: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub span: SourceSpan,
    pub expected: Vec<String>,
    pub found: String,
}

impl ParseError {
    fn new(span: SourceSpan, expected: &[&str], found: impl Into<String>) -> ParseError {
        ParseError {
            span,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: found.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "parse error at {}:{}: expected {}, found {}",
            self.span.line,
            self.span.col,
            self.expected.join(" or "),
            self.found
        )
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Lambda,
    Delta,
    Bot,
    Tilde,
    Arrow,
    LParen,
    RParen,
    Colon,
    Dot,
    Comma,
    Equals,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Lambda => "`\\`".into(),
            Tok::Delta => "`delta`".into(),
            Tok::Bot => "`bot`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Equals => "`=`".into(),
        }
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() && !matches!(c, 'λ' | 'Δ') || c == '_'
}

fn is_ident_continue(c: char) -> bool {
    (c.is_alphanumeric() && !matches!(c, 'λ' | 'Δ')) || c == '_' || c == '\''
}

/// Lexes `text`, reporting spans relative to `base_offset` bytes into the
/// original source on line `base_line`.
fn lex(
    text: &str,
    base_offset: usize,
    base_line: u32,
) -> Result<Vec<(Tok, SourceSpan)>, ParseError> {
    let mut toks = Vec::new();
    let mut line = base_line;
    let mut line_start = 0usize; // byte index into `text` of the current line
    let mut iter = text.char_indices().peekable();
    while let Some(&(i, c)) = iter.peek() {
        let span = |i: usize, end: usize, line: u32, line_start: usize| SourceSpan {
            start: base_offset + i,
            end: base_offset + end,
            line,
            col: (text[line_start..i].chars().count() + 1) as u32,
        };
        match c {
            '\n' => {
                iter.next();
                line += 1;
                line_start = i + 1;
            }
            _ if c.is_whitespace() => {
                iter.next();
            }
            '#' => {
                while let Some(&(_, c)) = iter.peek() {
                    if c == '\n' {
                        break;
                    }
                    iter.next();
                }
            }
            '\\' | 'λ' => {
                iter.next();
                toks.push((Tok::Lambda, span(i, i + c.len_utf8(), line, line_start)));
            }
            'Δ' => {
                iter.next();
                toks.push((Tok::Delta, span(i, i + c.len_utf8(), line, line_start)));
            }
            '~' | '¬' => {
                iter.next();
                toks.push((Tok::Tilde, span(i, i + c.len_utf8(), line, line_start)));
            }
            '⊥' => {
                iter.next();
                toks.push((Tok::Bot, span(i, i + c.len_utf8(), line, line_start)));
            }
            '→' => {
                iter.next();
                toks.push((Tok::Arrow, span(i, i + c.len_utf8(), line, line_start)));
            }
            '(' => {
                iter.next();
                toks.push((Tok::LParen, span(i, i + 1, line, line_start)));
            }
            ')' => {
                iter.next();
                toks.push((Tok::RParen, span(i, i + 1, line, line_start)));
            }
            ':' => {
                iter.next();
                toks.push((Tok::Colon, span(i, i + 1, line, line_start)));
            }
            '.' => {
                iter.next();
                toks.push((Tok::Dot, span(i, i + 1, line, line_start)));
            }
            ',' => {
                iter.next();
                toks.push((Tok::Comma, span(i, i + 1, line, line_start)));
            }
            '=' => {
                iter.next();
                toks.push((Tok::Equals, span(i, i + 1, line, line_start)));
            }
            '-' => {
                iter.next();
                match iter.peek() {
                    Some(&(_, '>')) => {
                        iter.next();
                        toks.push((Tok::Arrow, span(i, i + 2, line, line_start)));
                    }
                    _ => {
                        return Err(ParseError::new(
                            span(i, i + 1, line, line_start),
                            &["`->`"],
                            "`-`",
                        ))
                    }
                }
            }
            _ if is_ident_start(c) => {
                let start = i;
                let mut end = i + c.len_utf8();
                iter.next();
                while let Some(&(j, c2)) = iter.peek() {
                    if is_ident_continue(c2) {
                        end = j + c2.len_utf8();
                        iter.next();
                    } else {
                        break;
                    }
                }
                let word = &text[start..end];
                let tok = match word {
                    "delta" => Tok::Delta,
                    "bot" => Tok::Bot,
                    _ => Tok::Ident(word.to_string()),
                };
                toks.push((tok, span(start, end, line, line_start)));
            }
            _ => {
                return Err(ParseError::new(
                    span(i, i + c.len_utf8(), line, line_start),
                    &["a token"],
                    format!("`{c}`"),
                ))
            }
        }
    }
    Ok(toks)
}

pub(crate) struct Parser {
    toks: Vec<(Tok, SourceSpan)>,
    pos: usize,
    end_span: SourceSpan,
}

impl Parser {
    fn new(text: &str, base_offset: usize, base_line: u32) -> Result<Parser, ParseError> {
        let toks = lex(text, base_offset, base_line)?;
        let end_line = base_line + text.matches('\n').count() as u32;
        let last_line_start = text.rfind('\n').map(|i| i + 1).unwrap_or(0);
        let end_span = SourceSpan {
            start: base_offset + text.len(),
            end: base_offset + text.len(),
            line: end_line,
            col: (text[last_line_start..].chars().count() + 1) as u32,
        };
        Ok(Parser {
            toks,
            pos: 0,
            end_span,
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn span(&self) -> SourceSpan {
        self.toks
            .get(self.pos)
            .map(|(_, s)| *s)
            .unwrap_or(self.end_span)
    }

    fn found(&self) -> String {
        self.toks
            .get(self.pos)
            .map(|(t, _)| t.describe())
            .unwrap_or_else(|| "end of input".into())
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: &Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(ParseError::new(self.span(), &[what], self.found()))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(_)) => match self.bump() {
                Some(Tok::Ident(s)) => Ok(s),
                _ => unreachable!(),
            },
            _ => Err(ParseError::new(self.span(), &[what], self.found())),
        }
    }

    fn at_end(&self) -> bool {
        self.pos == self.toks.len()
    }

    fn expect_end(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(ParseError::new(
                self.span(),
                &["end of input"],
                self.found(),
            ))
        }
    }

    fn ty(&mut self) -> Result<Type, ParseError> {
        let lhs = self.ty_atom()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            let rhs = self.ty()?;
            Ok(Type::arrow(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn ty_atom(&mut self) -> Result<Type, ParseError> {
        match self.peek() {
            Some(Tok::Bot) => {
                self.pos += 1;
                Ok(Type::Bottom)
            }
            Some(Tok::Ident(_)) => Ok(Type::Base(self.ident("a type")?)),
            Some(Tok::Tilde) => {
                self.pos += 1;
                Ok(Type::neg(self.ty_atom()?))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let ty = self.ty()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(ty)
            }
            _ => Err(ParseError::new(self.span(), &["a type"], self.found())),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Some(Tok::Lambda) => {
                self.pos += 1;
                let (x, ty, body) = self.binder()?;
                Ok(Term::lam(x, ty, body))
            }
            Some(Tok::Delta) => {
                self.pos += 1;
                let (x, ty, body) = self.binder()?;
                Ok(Term::delta(x, ty, body))
            }
            _ => self.application(),
        }
    }

    fn binder(&mut self) -> Result<(String, Type, Term), ParseError> {
        let x = self.ident("a binder name")?;
        self.expect(&Tok::Colon, "`:`")?;
        let ty = self.ty()?;
        self.expect(&Tok::Dot, "`.`")?;
        let body = self.term()?;
        Ok((x, ty, body))
    }

    fn application(&mut self) -> Result<Term, ParseError> {
        let mut t = self.atom()?;
        while matches!(self.peek(), Some(Tok::Ident(_)) | Some(Tok::LParen)) {
            let arg = self.atom()?;
            t = Term::app(t, arg);
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Some(Tok::Ident(_)) => Ok(Term::var(self.ident("a term")?)),
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.term()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(t)
            }
            _ => Err(ParseError::new(self.span(), &["a term"], self.found())),
        }
    }

    fn context(&mut self) -> Result<Context, ParseError> {
        let mut ctx = Context::new();
        if self.at_end() {
            return Ok(ctx);
        }
        loop {
            let name = self.ident("a context binding `name:type`")?;
            self.expect(&Tok::Colon, "`:`")?;
            let ty = self.ty()?;
            ctx.push(name, ty);
            if self.peek() == Some(&Tok::Comma) {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok(ctx)
    }
}

pub fn parse_type(text: &str) -> Result<Type, ParseError> {
    let mut p = Parser::new(text, 0, 1)?;
    let ty = p.ty()?;
    p.expect_end()?;
    Ok(ty)
}

pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(text, 0, 1)?;
    let t = p.term()?;
    p.expect_end()?;
    Ok(t)
}

/// Parses the inline context syntax `x:T, y:U` used by `--ctx`. Empty input
/// gives the empty context.
pub fn parse_context(text: &str) -> Result<Context, ParseError> {
    let mut p = Parser::new(text, 0, 1)?;
    let ctx = p.context()?;
    p.expect_end()?;
    Ok(ctx)
}

/// Parses one type/term starting inside a larger source; used by the
/// definition-file reader so spans point into the original file.
pub(crate) fn parser_at(
    text: &str,
    base_offset: usize,
    base_line: u32,
) -> Result<Parser, ParseError> {
    Parser::new(text, base_offset, base_line)
}

impl Parser {
    pub(crate) fn def_line(&mut self) -> Result<DefLine, ParseError> {
        let head_span = self.span();
        let head = self.ident("`base` or `def`")?;
        match head.as_str() {
            "base" => {
                let name = self.ident("a base type name")?;
                self.expect_end()?;
                Ok(DefLine::Base {
                    name,
                    span: head_span,
                })
            }
            "def" => {
                let name = self.ident("a definition name")?;
                let ascription = if self.peek() == Some(&Tok::Colon) {
                    self.pos += 1;
                    Some(self.ty()?)
                } else {
                    None
                };
                self.expect(&Tok::Equals, "`=`")?;
                let body = self.term()?;
                self.expect_end()?;
                Ok(DefLine::Def {
                    name,
                    ascription,
                    body,
                    span: head_span,
                })
            }
            other => Err(ParseError::new(
                head_span,
                &["`base`", "`def`"],
                format!("`{other}`"),
            )),
        }
    }
}

/// One parsed declaration line of a definition file.
#[derive(Debug, Clone, PartialEq)]
pub enum DefLine {
    Base {
        name: String,
        span: SourceSpan,
    },
    Def {
        name: String,
        ascription: Option<Type>,
        body: Term,
        span: SourceSpan,
    },
}

pub fn print_term(t: &Term) -> String {
    t.to_string()
}

pub fn print_type(ty: &Type, sugar: bool) -> String {
    if sugar {
        ty.sugared().to_string()
    } else {
        ty.to_string()
    }
}
