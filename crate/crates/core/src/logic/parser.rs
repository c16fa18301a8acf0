//! Recursive descent over `->` (right-associative) < `|` < `&` < `~`.
//!
//! `!` is accepted for `~`, and `_|_` is falsum. Positions in errors are
//! character offsets into the input.

use crate::error::{Error, Result};
use crate::logic::Formula;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Bot,
    And,
    Or,
    Imp,
    Not,
    Open,
    Close,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(a) => format!("atom '{a}'"),
        Tok::Bot => "'_|_'".into(),
        Tok::And => "'&'".into(),
        Tok::Or => "'|'".into(),
        Tok::Imp => "'->'".into(),
        Tok::Not => "'~'".into(),
        Tok::Open => "'('".into(),
        Tok::Close => "')'".into(),
    }
}

fn syntax(position: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        position,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<(Vec<(usize, Tok)>, usize)> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '&' => Tok::And,
            '|' => Tok::Or,
            '~' | '!' => Tok::Not,
            '(' => Tok::Open,
            ')' => Tok::Close,
            '-' if chars.get(i + 1) == Some(&'>') => {
                i += 1;
                Tok::Imp
            }
            '_' if chars.get(i + 1) == Some(&'|') && chars.get(i + 2) == Some(&'_') => {
                i += 2;
                Tok::Bot
            }
            c if c.is_ascii_alphabetic() => {
                while i + 1 < chars.len() && (chars[i + 1].is_ascii_alphanumeric() || chars[i + 1] == '_') {
                    i += 1;
                }
                Tok::Ident(chars[start..=i].iter().collect())
            }
            c => return Err(syntax(i, format!("unexpected character '{c}'"))),
        };
        out.push((start, tok));
        i += 1;
    }
    Ok((out, chars.len()))
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn implication(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Imp) {
            let rhs = self.implication()?;
            return Ok(Formula::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut f = self.conjunction()?;
        while self.eat(&Tok::Or) {
            f = Formula::or(f, self.conjunction()?);
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut f = self.unary()?;
        while self.eat(&Tok::And) {
            f = Formula::and(f, self.unary()?);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula> {
        let at = self.here();
        let Some(tok) = self.peek().cloned() else {
            return Err(syntax(at, "unexpected end of input"));
        };
        self.pos += 1;
        match tok {
            Tok::Not => Ok(Formula::not(self.unary()?)),
            Tok::Ident(a) => Ok(Formula::Atom(a)),
            Tok::Bot => Ok(Formula::Bot),
            Tok::Open => {
                let f = self.implication()?;
                if !self.eat(&Tok::Close) {
                    let at = self.here();
                    return Err(match self.peek() {
                        None => syntax(at, "unexpected end of input, expected ')'"),
                        Some(t) => syntax(at, format!("expected ')', found {}", describe(t))),
                    });
                }
                Ok(f)
            }
            t => Err(syntax(at, format!("unexpected {}", describe(&t)))),
        }
    }
}

pub fn parse_formula(text: &str) -> Result<Formula> {
    let (toks, end) = lex(text)?;
    let mut p = Parser { toks, pos: 0, end };
    let f = p.implication()?;
    if let Some(t) = p.peek() {
        return Err(syntax(p.here(), format!("unexpected {} after formula", describe(t))));
    }
    Ok(f)
}
