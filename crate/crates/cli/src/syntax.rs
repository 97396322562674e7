//! Lexer and expression parser.
//!
//! Precedence from loosest to tightest: `+ -`, wedge `^`, `* /`, unary
//! minus, integer powers. A `^` directly followed by an integer literal
//! (optionally negated) is a power; any other `^` is a wedge product.

use crate::error::{InputError, Pos};

#[derive(Clone, Debug, PartialEq)]
pub enum Tok {
    Ident(String),
    Int(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Eq,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(s) => format!("`{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Eq => "`=`".into(),
            Tok::End => "end of line".into(),
        }
    }
}

/// Tokenizes one line. `col0` is the column of the first character.
pub fn lex(text: &str, line: usize, col0: usize) -> Result<Vec<(Tok, Pos)>, InputError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col: col0 + i };
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '=' => Some(Tok::Eq),
            _ => None,
        };
        if let Some(t) = single {
            out.push((t, pos));
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            out.push((Tok::Int(chars[start..i].iter().collect()), pos));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), pos));
        } else {
            return Err(InputError::parse(pos, &["an expression"], format!("`{c}`")));
        }
    }
    let end = Pos {
        line,
        col: col0 + chars.len(),
    };
    out.push((Tok::End, end));
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Int(String),
    Name(String, Pos),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>, Pos),
    Div(Box<Expr>, Box<Expr>, Pos),
    Wedge(Box<Expr>, Box<Expr>, Pos),
    Pow(Box<Expr>, i32, Pos),
}

pub struct Parser<'a> {
    toks: &'a [(Tok, Pos)],
    at: usize,
}

impl<'a> Parser<'a> {
    pub fn new(toks: &'a [(Tok, Pos)]) -> Self {
        Parser { toks, at: 0 }
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.at + k).min(self.toks.len() - 1)].0
    }

    pub fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    pub fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    pub fn error(&self, expected: &[&str]) -> InputError {
        InputError::parse(self.pos(), expected, self.peek().describe())
    }

    pub fn expect(&mut self, tok: Tok, label: &str) -> Result<Pos, InputError> {
        if *self.peek() == tok {
            Ok(self.bump().1)
        } else {
            Err(self.error(&[label]))
        }
    }

    pub fn ident(&mut self) -> Result<(String, Pos), InputError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                let p = self.bump().1;
                Ok((s, p))
            }
            _ => Err(self.error(&["a name"])),
        }
    }

    pub fn end(&mut self) -> Result<(), InputError> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            Err(self.error(&["an operator", "end of line"]))
        }
    }

    pub fn expr(&mut self) -> Result<Expr, InputError> {
        let mut lhs = self.wedge()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.wedge()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.wedge()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn wedge(&mut self) -> Result<Expr, InputError> {
        let mut lhs = self.product()?;
        while *self.peek() == Tok::Caret {
            let p = self.bump().1;
            lhs = Expr::Wedge(Box::new(lhs), Box::new(self.product()?), p);
        }
        Ok(lhs)
    }

    fn product(&mut self) -> Result<Expr, InputError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    let p = self.bump().1;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?), p);
                }
                Tok::Slash => {
                    let p = self.bump().1;
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?), p);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, InputError> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr, InputError> {
        let mut base = self.atom()?;
        loop {
            if *self.peek() != Tok::Caret {
                return Ok(base);
            }
            let (negative, lit) = match (self.peek_at(1), self.peek_at(2)) {
                (Tok::Int(n), _) => (false, n.clone()),
                (Tok::Minus, Tok::Int(n)) => (true, n.clone()),
                _ => return Ok(base),
            };
            let p = self.bump().1;
            if negative {
                self.bump();
            }
            let lit_pos = self.pos();
            self.bump();
            let e: i32 = lit
                .parse()
                .map_err(|_| InputError::invalid(lit_pos, format!("exponent `{lit}` is too large")))?;
            base = Expr::Pow(Box::new(base), if negative { -e } else { e }, p);
        }
    }

    fn atom(&mut self) -> Result<Expr, InputError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Expr::Int(n))
            }
            Tok::Ident(s) => {
                let p = self.bump().1;
                Ok(Expr::Name(s, p))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            _ => Err(self.error(&["a number", "a name", "`(`"])),
        }
    }
}

/// Parses a whole line as one expression.
pub fn parse_expr(text: &str, line: usize, col0: usize) -> Result<Expr, InputError> {
    let toks = lex(text, line, col0)?;
    let mut p = Parser::new(&toks);
    let e = p.expr()?;
    p.end()?;
    Ok(e)
}

impl Expr {
    /// Names referenced by the expression, with positions.
    pub fn names(&self, out: &mut Vec<(String, Pos)>) {
        match self {
            Expr::Int(_) => {}
            Expr::Name(n, p) => out.push((n.clone(), *p)),
            Expr::Neg(a) | Expr::Pow(a, _, _) => a.names(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b, _) | Expr::Div(a, b, _) | Expr::Wedge(a, b, _) => {
                a.names(out);
                b.names(out);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Expr {
        parse_expr(s, 1, 1).unwrap()
    }

    #[test]
    fn power_versus_wedge() {
        assert!(matches!(p("x^2"), Expr::Pow(_, 2, _)));
        assert!(matches!(p("a^-2"), Expr::Pow(_, -2, _)));
        assert!(matches!(p("Z1 ^ Z2"), Expr::Wedge(..)));
        // `*` binds tighter than the wedge and the wedge tighter than `+`.
        assert!(matches!(p("x*theta ^ Z1 + lam"), Expr::Add(..)));
        match p("x*theta ^ Z1") {
            Expr::Wedge(l, _, _) => assert!(matches!(*l, Expr::Mul(..))),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unary_minus_and_powers() {
        match p("-x^2") {
            Expr::Neg(inner) => assert!(matches!(*inner, Expr::Pow(_, 2, _))),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_expr("x + * y", 3, 1).unwrap_err();
        match err {
            InputError::Parse { pos, .. } => assert_eq!(pos, Pos { line: 3, col: 5 }),
            other => panic!("{other:?}"),
        }
        assert!(parse_expr("(x + y", 1, 1).is_err());
        assert!(parse_expr("x $ y", 1, 1).is_err());
        assert!(parse_expr("x y", 1, 1).is_err());
    }
}
