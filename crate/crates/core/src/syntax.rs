//! Tokens and polynomial expressions shared by the polynomial parser and
//! the script language.

use num_bigint::BigInt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Num(BigInt),
    Sym(char),
    /// `->`
    Arrow,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

impl Token {
    pub fn describe(&self) -> String {
        match &self.tok {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Num(n) => format!("`{n}`"),
            Tok::Sym(c) => format!("`{c}`"),
            Tok::Arrow => "`->`".to_string(),
        }
    }
}

/// Splits one line into tokens. Columns are 1-based.
pub fn lex_line(text: &str, line: usize) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Token { tok: Tok::Num(s.parse().expect("digits")), line, column });
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), line, column });
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'>') {
            out.push(Token { tok: Tok::Arrow, line, column });
            i += 2;
            continue;
        }
        if "=()[],+-*/^:".contains(c) {
            out.push(Token { tok: Tok::Sym(c), line, column });
            i += 1;
            continue;
        }
        return Err(Error::Syntax { line, column, message: format!("unexpected character `{c}`") });
    }
    Ok(out)
}

/// A polynomial expression, unresolved against any ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Num(BigInt),
    Var { name: String, line: usize, column: usize },
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

/// Cursor over a token slice.
pub struct Cursor<'a> {
    toks: &'a [Token],
    pos: usize,
    line: usize,
    end_column: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(toks: &'a [Token], line: usize, end_column: usize) -> Self {
        Cursor { toks, pos: 0, line, end_column }
    }

    pub fn peek(&self) -> Option<&'a Token> {
        self.toks.get(self.pos)
    }

    pub fn peek_tok(&self) -> Option<&'a Tok> {
        self.peek().map(|t| &t.tok)
    }

    pub fn advance(&mut self) -> Option<&'a Token> {
        let t = self.toks.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn error_here(&self, message: impl Into<String>) -> Error {
        let (line, column) = match self.peek() {
            Some(t) => (t.line, t.column),
            None => (self.line, self.end_column),
        };
        Error::Syntax { line, column, message: message.into() }
    }

    pub fn eat_sym(&mut self, c: char) -> bool {
        if self.peek_tok() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect_sym(&mut self, c: char) -> Result<()> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            let found = self.peek().map(|t| t.describe()).unwrap_or_else(|| "end of line".into());
            Err(self.error_here(format!("expected `{c}`, found {found}")))
        }
    }

    pub fn eat_keyword(&mut self, kw: &str) -> bool {
        if matches!(self.peek_tok(), Some(Tok::Ident(s)) if s == kw) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect_keyword(&mut self, kw: &str) -> Result<()> {
        if self.eat_keyword(kw) {
            Ok(())
        } else {
            let found = self.peek().map(|t| t.describe()).unwrap_or_else(|| "end of line".into());
            Err(self.error_here(format!("expected `{kw}`, found {found}")))
        }
    }

    pub fn expect_ident(&mut self) -> Result<&'a Token> {
        match self.peek() {
            Some(t @ Token { tok: Tok::Ident(_), .. }) => {
                self.pos += 1;
                Ok(t)
            }
            Some(t) => Err(self.error_here(format!("expected a name, found {}", t.describe()))),
            None => Err(self.error_here("expected a name, found end of line")),
        }
    }

    pub fn expect_number(&mut self) -> Result<BigInt> {
        match self.peek_tok() {
            Some(Tok::Num(n)) => {
                let n = n.clone();
                self.pos += 1;
                Ok(n)
            }
            _ => Err(self.error_here("expected a number")),
        }
    }

    pub fn expect_end(&self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(self.error_here(format!("unexpected {}", t.describe()))),
        }
    }

    /// expr := term (('+' | '-') term)*
    pub fn parse_expr(&mut self) -> Result<Expr> {
        let mut lhs = self.parse_term()?;
        loop {
            if self.eat_sym('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.parse_term()?));
            } else if self.eat_sym('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.parse_term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    // term := unary (('*' | '/')? unary)*   -- juxtaposition multiplies
    fn parse_term(&mut self) -> Result<Expr> {
        let mut lhs = self.parse_unary()?;
        loop {
            if self.eat_sym('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.parse_unary()?));
            } else if self.eat_sym('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.parse_unary()?));
            } else if matches!(self.peek_tok(), Some(Tok::Ident(_)) | Some(Tok::Num(_)))
                || self.peek_tok() == Some(&Tok::Sym('('))
            {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.parse_power()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn parse_unary(&mut self) -> Result<Expr> {
        if self.eat_sym('-') {
            Ok(Expr::Neg(Box::new(self.parse_unary()?)))
        } else if self.eat_sym('+') {
            self.parse_unary()
        } else {
            self.parse_power()
        }
    }

    fn parse_power(&mut self) -> Result<Expr> {
        let base = self.parse_atom()?;
        if self.eat_sym('^') {
            let n = self.expect_number()?;
            let e: u32 = n.try_into().map_err(|_| self.error_here("exponent too large"))?;
            Ok(Expr::Pow(Box::new(base), e))
        } else {
            Ok(base)
        }
    }

    fn parse_atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(Token { tok: Tok::Num(n), .. }) => {
                self.pos += 1;
                Ok(Expr::Num(n.clone()))
            }
            Some(Token { tok: Tok::Ident(s), line, column }) => {
                self.pos += 1;
                Ok(Expr::Var { name: s.clone(), line: *line, column: *column })
            }
            Some(Token { tok: Tok::Sym('('), .. }) => {
                self.pos += 1;
                let e = self.parse_expr()?;
                self.expect_sym(')')?;
                Ok(e)
            }
            Some(t) => Err(self.error_here(format!("expected a polynomial, found {}", t.describe()))),
            None => Err(self.error_here("expected a polynomial, found end of line")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexes_arrows_and_comments() {
        let t = lex_line("query verify thm m # comment", 1).unwrap();
        assert_eq!(t.len(), 4);
        let t = lex_line("x -> x-y", 1).unwrap();
        assert_eq!(t[1].tok, Tok::Arrow);
        assert_eq!(t.len(), 5);
    }

    #[test]
    fn reports_column_of_bad_character() {
        let e = lex_line("ring R = QQ[x] $", 3).unwrap_err();
        assert_eq!(e, Error::Syntax { line: 3, column: 16, message: "unexpected character `$`".into() });
    }
}
