//! Token-sequence representation of types and terms, their parsers, and the
//! canonical space-joined text form used by dataset files and guides.
//!
//! Types render with minimal parentheses (`×`/`+` bind tighter than `→`,
//! `→` associates to the right). Terms render with every compound node
//! parenthesized:
//!
//! ```text
//! ( λ x0 . ( case x0 of ( x1 , x2 ) → ( x2 , x1 ) ) )
//! ```

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::ast::{Term, TypeExpr, VarName};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Token {
    Atom(String),
    Var(String),
    /// `→`, both the type arrow and the arrow of case alternatives.
    Arrow,
    Times,
    Plus,
    LParen,
    RParen,
    Lambda,
    Dot,
    Comma,
    Case,
    Of,
    LBrace,
    RBrace,
    Semi,
    Left,
    Right,
    /// `_`; only produced for partial terms, never sent to a guide.
    Hole,
    Eos,
}

impl Token {
    /// Display text (Unicode symbols).
    pub fn text(&self) -> &str {
        match self {
            Token::Atom(s) | Token::Var(s) => s,
            Token::Arrow => "→",
            Token::Times => "×",
            Token::Plus => "+",
            Token::LParen => "(",
            Token::RParen => ")",
            Token::Lambda => "λ",
            Token::Dot => ".",
            Token::Comma => ",",
            Token::Case => "case",
            Token::Of => "of",
            Token::LBrace => "{",
            Token::RBrace => "}",
            Token::Semi => ";",
            Token::Left => "Left",
            Token::Right => "Right",
            Token::Hole => "_",
            Token::Eos => "<EOS>",
        }
    }

    fn category(&self) -> u8 {
        match self {
            Token::Atom(_) => 0,
            Token::Var(_) => 1,
            _ => 2,
        }
    }
}

/// Tokens order by their display text, then by category (atom < var < symbol).
impl Ord for Token {
    fn cmp(&self, other: &Self) -> Ordering {
        self.text().cmp(other.text()).then(self.category().cmp(&other.category()))
    }
}

impl PartialOrd for Token {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.text())
    }
}

pub fn tokenize_type(t: &TypeExpr) -> Vec<Token> {
    let mut out = Vec::new();
    type_tokens(t, &mut out);
    out
}

fn type_tokens(t: &TypeExpr, out: &mut Vec<Token>) {
    fn operand(t: &TypeExpr, paren: bool, out: &mut Vec<Token>) {
        if paren {
            out.push(Token::LParen);
            type_tokens(t, out);
            out.push(Token::RParen);
        } else {
            type_tokens(t, out);
        }
    }
    match t {
        TypeExpr::Atom(a) => out.push(Token::Atom(a.clone())),
        TypeExpr::Arrow(l, r) => {
            operand(l, matches!(**l, TypeExpr::Arrow(..)), out);
            out.push(Token::Arrow);
            operand(r, false, out);
        }
        TypeExpr::Prod(l, r) => {
            operand(l, matches!(**l, TypeExpr::Arrow(..) | TypeExpr::Sum(..)), out);
            out.push(Token::Times);
            operand(r, !matches!(**r, TypeExpr::Atom(_)), out);
        }
        TypeExpr::Sum(l, r) => {
            operand(l, matches!(**l, TypeExpr::Arrow(..) | TypeExpr::Prod(..)), out);
            out.push(Token::Plus);
            operand(r, !matches!(**r, TypeExpr::Atom(_)), out);
        }
    }
}

pub fn tokenize_term(t: &Term) -> Vec<Token> {
    let mut out = Vec::new();
    term_tokens(t, &mut out);
    out
}

fn var(x: &VarName) -> Token {
    Token::Var(x.as_str().to_string())
}

fn term_tokens(t: &Term, out: &mut Vec<Token>) {
    match t {
        Term::Hole => out.push(Token::Hole),
        Term::Var(x) => out.push(var(x)),
        Term::Lam(x, b) => {
            out.extend([Token::LParen, Token::Lambda, var(x), Token::Dot]);
            term_tokens(b, out);
            out.push(Token::RParen);
        }
        Term::App(f, a) => {
            out.push(Token::LParen);
            term_tokens(f, out);
            term_tokens(a, out);
            out.push(Token::RParen);
        }
        Term::Pair(a, b) => {
            out.push(Token::LParen);
            term_tokens(a, out);
            out.push(Token::Comma);
            term_tokens(b, out);
            out.push(Token::RParen);
        }
        Term::InjL(a) | Term::InjR(a) => {
            out.push(Token::LParen);
            out.push(if matches!(t, Term::InjL(_)) { Token::Left } else { Token::Right });
            term_tokens(a, out);
            out.push(Token::RParen);
        }
        Term::CasePair(s, x, y, b) => {
            out.extend([Token::LParen, Token::Case]);
            term_tokens(s, out);
            out.extend([Token::Of, Token::LParen, var(x), Token::Comma, var(y), Token::RParen, Token::Arrow]);
            term_tokens(b, out);
            out.push(Token::RParen);
        }
        Term::CaseSum(s, x, l, y, r) => {
            out.extend([Token::LParen, Token::Case]);
            term_tokens(s, out);
            out.extend([Token::Of, Token::LBrace, Token::Left, var(x), Token::Arrow]);
            term_tokens(l, out);
            out.extend([Token::Semi, Token::Right, var(y), Token::Arrow]);
            term_tokens(r, out);
            out.extend([Token::RBrace, Token::RParen]);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// Index of the first offending token; the sequence length at end of input.
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at token {}: {}", self.position, self.message)
    }
}

impl core::error::Error for ParseError {}

struct Cursor<'a> {
    toks: &'a [Token],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.toks.get(self.pos)
    }

    fn bump(&mut self) -> Option<&'a Token> {
        let t = self.toks.get(self.pos);
        self.pos += 1;
        t
    }

    fn error(&self, what: &str) -> ParseError {
        let message = match self.peek() {
            Some(t) => format!("expected {}, found `{}`", what, t),
            None => format!("expected {}, found end of input", what),
        };
        ParseError { position: self.pos.min(self.toks.len()), message }
    }

    fn expect(&mut self, tok: &Token, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(what))
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.error("end of input")),
        }
    }
}

/// Inverse of [`tokenize_type`]; also accepts redundant parentheses and
/// mixed `×`/`+` chains (left-associative).
pub fn parse_type(toks: &[Token]) -> Result<TypeExpr, ParseError> {
    let mut c = Cursor { toks, pos: 0 };
    let t = arrow_type(&mut c)?;
    c.finish()?;
    Ok(t)
}

fn arrow_type(c: &mut Cursor) -> Result<TypeExpr, ParseError> {
    let l = product_type(c)?;
    if c.peek() == Some(&Token::Arrow) {
        c.bump();
        let r = arrow_type(c)?;
        Ok(TypeExpr::arrow(l, r))
    } else {
        Ok(l)
    }
}

fn product_type(c: &mut Cursor) -> Result<TypeExpr, ParseError> {
    let mut acc = atomic_type(c)?;
    loop {
        match c.peek() {
            Some(Token::Times) => {
                c.bump();
                acc = TypeExpr::prod(acc, atomic_type(c)?);
            }
            Some(Token::Plus) => {
                c.bump();
                acc = TypeExpr::sum(acc, atomic_type(c)?);
            }
            _ => return Ok(acc),
        }
    }
}

fn atomic_type(c: &mut Cursor) -> Result<TypeExpr, ParseError> {
    match c.peek() {
        Some(Token::Atom(a)) => {
            c.bump();
            Ok(TypeExpr::Atom(a.clone()))
        }
        Some(Token::LParen) => {
            c.bump();
            let t = arrow_type(c)?;
            c.expect(&Token::RParen, "`)`")?;
            Ok(t)
        }
        _ => Err(c.error("an atom or `(`")),
    }
}

/// Inverse of [`tokenize_term`]. Accepts redundant parentheses,
/// left-associative application chains `( f a b )`, and unparenthesized
/// binders; unbound variables are allowed.
pub fn parse_term(toks: &[Token]) -> Result<Term, ParseError> {
    let mut c = Cursor { toks, pos: 0 };
    let t = expr(&mut c)?;
    c.finish()?;
    Ok(t)
}

fn binder(c: &mut Cursor) -> Result<VarName, ParseError> {
    match c.peek() {
        Some(Token::Var(x)) => {
            c.bump();
            Ok(VarName::new(x.clone()))
        }
        _ => Err(c.error("a variable")),
    }
}

fn expr(c: &mut Cursor) -> Result<Term, ParseError> {
    match c.peek() {
        Some(Token::Lambda) => {
            c.bump();
            let x = binder(c)?;
            c.expect(&Token::Dot, "`.`")?;
            Ok(Term::Lam(x, alloc::boxed::Box::new(expr(c)?)))
        }
        Some(Token::Case) => {
            c.bump();
            let scrut = expr(c)?;
            c.expect(&Token::Of, "`of`")?;
            match c.peek() {
                Some(Token::LParen) => {
                    c.bump();
                    let x = binder(c)?;
                    c.expect(&Token::Comma, "`,`")?;
                    let y = binder(c)?;
                    c.expect(&Token::RParen, "`)`")?;
                    c.expect(&Token::Arrow, "`→`")?;
                    let body = expr(c)?;
                    Ok(Term::CasePair(scrut.into(), x, y, body.into()))
                }
                Some(Token::LBrace) => {
                    c.bump();
                    c.expect(&Token::Left, "`Left`")?;
                    let x = binder(c)?;
                    c.expect(&Token::Arrow, "`→`")?;
                    let l = expr(c)?;
                    c.expect(&Token::Semi, "`;`")?;
                    c.expect(&Token::Right, "`Right`")?;
                    let y = binder(c)?;
                    c.expect(&Token::Arrow, "`→`")?;
                    let r = expr(c)?;
                    c.expect(&Token::RBrace, "`}`")?;
                    Ok(Term::CaseSum(scrut.into(), x, l.into(), y, r.into()))
                }
                _ => Err(c.error("`(` or `{`")),
            }
        }
        _ => application(c),
    }
}

fn starts_atom(t: Option<&Token>) -> bool {
    matches!(t, Some(Token::Var(_) | Token::Hole | Token::LParen | Token::Left | Token::Right))
}

fn application(c: &mut Cursor) -> Result<Term, ParseError> {
    let mut acc = head(c)?;
    while starts_atom(c.peek()) {
        let arg = head(c)?;
        acc = Term::app(acc, arg);
    }
    Ok(acc)
}

fn head(c: &mut Cursor) -> Result<Term, ParseError> {
    match c.peek() {
        Some(Token::Left) => {
            c.bump();
            Ok(Term::inj_l(atom(c)?))
        }
        Some(Token::Right) => {
            c.bump();
            Ok(Term::inj_r(atom(c)?))
        }
        _ => atom(c),
    }
}

fn atom(c: &mut Cursor) -> Result<Term, ParseError> {
    match c.peek() {
        Some(Token::Var(x)) => {
            c.bump();
            Ok(Term::var(x.clone()))
        }
        Some(Token::Hole) => {
            c.bump();
            Ok(Term::Hole)
        }
        Some(Token::LParen) => {
            c.bump();
            let first = expr(c)?;
            match c.peek() {
                Some(Token::Comma) => {
                    c.bump();
                    let second = expr(c)?;
                    c.expect(&Token::RParen, "`)`")?;
                    Ok(Term::pair(first, second))
                }
                _ => {
                    c.expect(&Token::RParen, "`,` or `)`")?;
                    Ok(first)
                }
            }
        }
        _ => Err(c.error("a term")),
    }
}

/// Whether `toks` is exactly the rendering of some term.
pub fn is_canonical_term(toks: &[Token]) -> bool {
    parse_term(toks).is_ok_and(|t| tokenize_term(&t) == toks)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LexError {
    /// Byte offset into the input.
    pub offset: usize,
    pub found: char,
}

impl fmt::Display for LexError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unexpected character `{}` at byte {}", self.found, self.offset)
    }
}

impl core::error::Error for LexError {}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Type,
    Term,
}

fn is_ident_char(ch: char) -> bool {
    (ch.is_alphanumeric() && ch != 'λ') || ch == '_' || ch == '\''
}

fn lex(s: &str, mode: Mode) -> Result<Vec<Token>, LexError> {
    let mut out = Vec::new();
    let mut it = s.char_indices().peekable();
    while let Some(&(i, ch)) = it.peek() {
        if ch.is_whitespace() {
            it.next();
            continue;
        }
        let single = match ch {
            '(' => Some(Token::LParen),
            ')' => Some(Token::RParen),
            '{' => Some(Token::LBrace),
            '}' => Some(Token::RBrace),
            ',' => Some(Token::Comma),
            '.' => Some(Token::Dot),
            ';' => Some(Token::Semi),
            'λ' | '\\' => Some(Token::Lambda),
            '→' => Some(Token::Arrow),
            '×' | '*' => Some(Token::Times),
            '+' => Some(Token::Plus),
            _ => None,
        };
        if let Some(tok) = single {
            it.next();
            out.push(tok);
            continue;
        }
        if ch == '-' {
            it.next();
            match it.peek() {
                Some(&(_, '>')) => {
                    it.next();
                    out.push(Token::Arrow);
                    continue;
                }
                _ => return Err(LexError { offset: i, found: ch }),
            }
        }
        if ch == '<' && s[i..].starts_with("<EOS>") {
            for _ in 0.."<EOS>".len() {
                it.next();
            }
            out.push(Token::Eos);
            continue;
        }
        if is_ident_char(ch) {
            let mut end = i;
            while let Some(&(j, c2)) = it.peek() {
                if is_ident_char(c2) {
                    end = j + c2.len_utf8();
                    it.next();
                } else {
                    break;
                }
            }
            let word = &s[i..end];
            out.push(match (mode, word) {
                (Mode::Type, _) => Token::Atom(word.to_string()),
                (Mode::Term, "_") => Token::Hole,
                (Mode::Term, "case") => Token::Case,
                (Mode::Term, "of") => Token::Of,
                (Mode::Term, "Left") => Token::Left,
                (Mode::Term, "Right") => Token::Right,
                (Mode::Term, _) => Token::Var(word.to_string()),
            });
            continue;
        }
        return Err(LexError { offset: i, found: ch });
    }
    Ok(out)
}

/// Splits type text into tokens; accepts `->`/`→`, `*`/`×`, and unspaced input.
pub fn lex_type(s: &str) -> Result<Vec<Token>, LexError> {
    lex(s, Mode::Type)
}

/// Splits term text into tokens; accepts `\`/`λ`, `->`/`→`, and unspaced input.
pub fn lex_term(s: &str) -> Result<Vec<Token>, LexError> {
    lex(s, Mode::Term)
}

/// Canonical text of a type token sequence: ASCII operators (`->`, `*`, `+`).
pub fn encode_type(toks: &[Token]) -> String {
    join(toks.iter().map(|t| match t {
        Token::Arrow => "->",
        Token::Times => "*",
        other => other.text(),
    }))
}

/// Canonical text of a term token sequence (display symbols).
pub fn encode_term(toks: &[Token]) -> String {
    join(toks.iter().map(Token::text))
}

fn join<'a>(parts: impl Iterator<Item = &'a str>) -> String {
    let mut out = String::new();
    for (i, p) in parts.enumerate() {
        if i > 0 {
            out.push(' ');
        }
        out.push_str(p);
    }
    out
}

/// Lexes and parses a type.
pub fn read_type(s: &str) -> Result<TypeExpr, String> {
    let toks = lex_type(s).map_err(|e| e.to_string())?;
    parse_type(&toks).map_err(|e| e.to_string())
}

/// Lexes and parses a term.
pub fn read_term(s: &str) -> Result<Term, String> {
    let toks = lex_term(s).map_err(|e| e.to_string())?;
    parse_term(&toks).map_err(|e| e.to_string())
}

impl fmt::Display for TypeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&join(tokenize_type(self).iter().map(Token::text)))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&encode_term(&tokenize_term(self)))
    }
}
