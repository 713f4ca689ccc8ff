//! Text syntax for terms and rules.
//!
//! ```text
//! term  := var | atom | int | "chars" | [t,..|T] | {t,..} | f(t,..) | t => t | &name
//! rule  := term [when g, ..] -> [l = r | expr], .., rhs
//! ```

use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::term::{sym, BodyItem, Rule, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at column {col}: {msg}")]
pub struct ParseError {
    pub col: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Atom(String),
    Var(String),
    Int(i64),
    Str(String),
    Punct(&'static str),
}

fn lex(src: &str, allow_refs: bool) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |col: usize, msg: &str| ParseError { col: col + 1, msg: msg.to_string() };
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let ident_char = |ch: char| ch.is_alphanumeric() || ch == '_';
        if c.is_lowercase() {
            while i < chars.len() && ident_char(chars[i]) {
                i += 1;
            }
            out.push((start, Tok::Atom(chars[start..i].iter().collect())));
        } else if c.is_uppercase() || c == '_' {
            while i < chars.len() && ident_char(chars[i]) {
                i += 1;
            }
            out.push((start, Tok::Var(chars[start..i].iter().collect())));
        } else if c == '@' && allow_refs {
            i += 1;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '.') {
                i += 1;
            }
            out.push((start, Tok::Var(chars[start..i].iter().collect())));
        } else if c.is_ascii_digit() || (c == '-' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            i += 1;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            let v = text.parse::<i64>().map_err(|_| err(start, "integer out of range"))?;
            out.push((start, Tok::Int(v)));
        } else if c == '"' || c == '\'' {
            let quote = c;
            i += 1;
            let mut s = String::new();
            loop {
                match chars.get(i) {
                    None => return Err(err(start, "unterminated quote")),
                    Some('\\') => {
                        let e = chars.get(i + 1).ok_or_else(|| err(i, "dangling escape"))?;
                        s.push(*e);
                        i += 2;
                    }
                    Some(&q) if q == quote => {
                        i += 1;
                        break;
                    }
                    Some(&ch) => {
                        s.push(ch);
                        i += 1;
                    }
                }
            }
            out.push((start, if quote == '"' { Tok::Str(s) } else { Tok::Atom(s) }));
        } else {
            let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
            let p: &'static str = match two.as_str() {
                "=>" => "=>",
                "->" => "->",
                _ => match c {
                    '(' => "(",
                    ')' => ")",
                    '[' => "[",
                    ']' => "]",
                    '{' => "{",
                    '}' => "}",
                    ',' => ",",
                    '|' => "|",
                    '=' => "=",
                    '&' => "&",
                    _ => return Err(err(start, &format!("unexpected character `{c}`"))),
                },
            };
            i += p.len();
            out.push((start, Tok::Punct(p)));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn new(src: &str, allow_refs: bool) -> Result<Self, ParseError> {
        Ok(Parser { toks: lex(src, allow_refs)?, pos: 0, end: src.chars().count() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|(c, _)| *c).unwrap_or(self.end) + 1
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { col: self.col(), msg: msg.into() })
    }

    fn is_punct(&self, p: &str) -> bool {
        matches!(self.peek(), Some(Tok::Punct(q)) if *q == p)
    }

    fn eat(&mut self, p: &str) -> bool {
        if self.is_punct(p) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, p: &str) -> Result<(), ParseError> {
        if self.eat(p) {
            Ok(())
        } else {
            self.fail(format!("expected `{p}`"))
        }
    }

    fn done(&self) -> Result<(), ParseError> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            self.fail("trailing input")
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let left = self.primary()?;
        if self.eat("=>") {
            let right = self.term()?;
            return Ok(Term::mapping(left, right));
        }
        Ok(left)
    }

    fn seq(&mut self, close: &str) -> Result<Vec<Term>, ParseError> {
        let mut items = Vec::new();
        if self.eat(close) {
            return Ok(items);
        }
        loop {
            items.push(self.term()?);
            if self.eat(",") {
                continue;
            }
            self.expect(close)?;
            return Ok(items);
        }
    }

    fn primary(&mut self) -> Result<Term, ParseError> {
        let Some(tok) = self.peek().cloned() else {
            return self.fail("unexpected end of input");
        };
        self.pos += 1;
        match tok {
            Tok::Var(v) => Ok(Term::Var(sym(&v))),
            Tok::Int(n) => Ok(Term::Int(n)),
            Tok::Str(s) => Ok(Term::string(&s)),
            Tok::Atom(a) => {
                if self.eat("(") {
                    let args = self.seq(")")?;
                    if args.is_empty() {
                        return self.fail("application needs at least one argument");
                    }
                    Ok(Term::App(sym(&a), args))
                } else {
                    Ok(Term::Atom(sym(&a)))
                }
            }
            Tok::Punct("[") => {
                let mut items = Vec::new();
                if self.eat("]") {
                    return Ok(Term::Nil);
                }
                loop {
                    items.push(self.term()?);
                    if self.eat(",") {
                        continue;
                    }
                    if self.eat("|") {
                        let tail = self.term()?;
                        self.expect("]")?;
                        return Ok(Term::list_with_tail(items, tail));
                    }
                    self.expect("]")?;
                    return Ok(Term::list(items));
                }
            }
            Tok::Punct("{") => Ok(Term::Tuple(self.seq("}")?)),
            Tok::Punct("(") => {
                let t = self.term()?;
                self.expect(")")?;
                Ok(t)
            }
            Tok::Punct("&") => match self.peek().cloned() {
                Some(Tok::Atom(a)) => {
                    self.pos += 1;
                    Ok(Term::BkRef(sym(&a)))
                }
                _ => self.fail("expected function name after `&`"),
            },
            Tok::Punct(p) => {
                self.pos -= 1;
                self.fail(format!("unexpected `{p}`"))
            }
        }
    }

    fn rule(&mut self) -> Result<Rule, ParseError> {
        let lhs = self.term()?;
        if !matches!(lhs, Term::App(..)) {
            self.pos = 0;
            return self.fail("rule lhs must be an application");
        }
        let mut guards = Vec::new();
        if matches!(self.peek(), Some(Tok::Atom(w)) if w == "when") {
            self.pos += 1;
            loop {
                guards.push(self.term()?);
                if !self.eat(",") {
                    break;
                }
            }
        }
        self.expect("->")?;
        let mut items = Vec::new();
        loop {
            let t = self.term()?;
            if self.eat("=") {
                let r = self.term()?;
                items.push(BodyItem::Eq(t, r));
            } else {
                items.push(BodyItem::Expr(t));
            }
            if !self.eat(",") {
                break;
            }
        }
        let rhs = match items.pop() {
            Some(BodyItem::Expr(t)) => t,
            _ => return self.fail("rule must end with a result term"),
        };
        Ok(Rule { lhs, guards, body: items, rhs })
    }
}

pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(src, false)?;
    let t = p.term()?;
    p.done()?;
    Ok(t)
}

/// Like [`parse_term`] but accepts `@L1.1` position references, read as
/// variables whose name starts with `@`.
pub fn parse_template_term(src: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(src, true)?;
    let t = p.term()?;
    p.done()?;
    Ok(t)
}

pub fn parse_rule(src: &str) -> Result<Rule, ParseError> {
    let mut p = Parser::new(src, false)?;
    let r = p.rule()?;
    p.done()?;
    Ok(r)
}

fn is_plain_atom(a: &str) -> bool {
    let mut cs = a.chars();
    matches!(cs.next(), Some(c) if c.is_lowercase()) && cs.all(|c| c.is_alphanumeric() || c == '_') && a != "when"
}

fn write_quoted(out: &mut String, s: &str, q: char) {
    out.push(q);
    for c in s.chars() {
        if c == q || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push(q);
}

fn write_atom(out: &mut String, a: &str) {
    if is_plain_atom(a) {
        out.push_str(a);
    } else {
        write_quoted(out, a, '\'');
    }
}

fn letters(t: &Term) -> Option<String> {
    let items = t.as_list()?;
    if items.is_empty() {
        return None;
    }
    let mut s = String::new();
    for it in items {
        match it {
            Term::Atom(a) if a.len() == 1 && a.as_bytes()[0].is_ascii_lowercase() => s.push_str(a),
            _ => return None,
        }
    }
    Some(s)
}

pub fn write_term(out: &mut String, t: &Term) {
    match t {
        Term::Var(v) => out.push_str(v),
        Term::Atom(a) => write_atom(out, a),
        Term::Int(n) => {
            let _ = write!(out, "{n}");
        }
        Term::Nil => out.push_str("[]"),
        Term::Cons(..) => {
            if let Some(s) = letters(t) {
                write_quoted(out, &s, '"');
                return;
            }
            out.push('[');
            let mut cur = t;
            let mut first = true;
            loop {
                match cur {
                    Term::Cons(h, rest) => {
                        if !first {
                            out.push(',');
                        }
                        first = false;
                        write_term(out, h);
                        cur = rest;
                    }
                    Term::Nil => break,
                    other => {
                        out.push('|');
                        write_term(out, other);
                        break;
                    }
                }
            }
            out.push(']');
        }
        Term::Tuple(xs) => {
            out.push('{');
            write_args(out, xs);
            out.push('}');
        }
        Term::App(f, xs) => {
            write_atom(out, f);
            out.push('(');
            write_args(out, xs);
            out.push(')');
        }
        Term::Map(a, b) => {
            if matches!(a.as_ref(), Term::Map(..)) {
                out.push('(');
                write_term(out, a);
                out.push(')');
            } else {
                write_term(out, a);
            }
            out.push_str("=>");
            write_term(out, b);
        }
        Term::BkRef(f) => {
            out.push('&');
            write_atom(out, f);
        }
    }
}

fn write_args(out: &mut String, xs: &[Term]) {
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        write_term(out, x);
    }
}

pub fn print_term(t: &Term) -> String {
    let mut s = String::new();
    write_term(&mut s, t);
    s
}

pub fn print_rule(r: &Rule) -> String {
    let mut s = String::new();
    write_term(&mut s, &r.lhs);
    if !r.guards.is_empty() {
        s.push_str(" when ");
        for (i, g) in r.guards.iter().enumerate() {
            if i > 0 {
                s.push_str(", ");
            }
            write_term(&mut s, g);
        }
    }
    s.push_str(" -> ");
    for b in &r.body {
        match b {
            BodyItem::Eq(l, rr) => {
                write_term(&mut s, l);
                s.push_str(" = ");
                write_term(&mut s, rr);
            }
            BodyItem::Expr(t) => write_term(&mut s, t),
        }
        s.push_str(", ");
    }
    write_term(&mut s, &r.rhs);
    s
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_term(self))
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_rule(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strings_are_char_lists() {
        assert_eq!(parse_term("\"cd\"").unwrap(), parse_term("[c,d]").unwrap());
        assert_eq!(parse_term("\"\"").unwrap(), Term::Nil);
        assert_eq!(print_term(&Term::string("abc")), "\"abc\"");
    }

    #[test]
    fn prints_partial_lists_and_mappings() {
        for src in [
            "[a,b|T]",
            "{a,b}",
            "f(a,b)",
            "b=>d",
            "b=>\"de\"",
            "(a=>b)=>c",
            "&hamming",
            "'A'",
            "-3",
            "[]",
            "[\"a\",{x,1},[1]]",
        ] {
            let t = parse_term(src).unwrap();
            assert_eq!(print_term(&t), src, "{src}");
        }
    }

    #[test]
    fn rule_syntax() {
        let r = parse_rule("f(X) when gt(X,0), true -> Y = g(X), h(Y), Y").unwrap();
        assert_eq!(r.guards.len(), 2);
        assert_eq!(r.body.len(), 2);
        assert_eq!(print_rule(&r), "f(X) when gt(X,0), true -> Y = g(X), h(Y), Y");
        assert!(parse_rule("a -> b").is_err());
        assert!(parse_rule("f(a) -> X = b").is_err());
    }

    #[test]
    fn errors_carry_columns() {
        let e = parse_term("f(a,").unwrap_err();
        assert_eq!(e.col, 5);
        assert!(parse_term("f()").is_err());
        assert!(parse_term("a b").is_err());
        assert!(parse_term("@L1").is_err());
        assert!(parse_template_term("last(@L1.1)").is_ok());
    }
}
