//! Text syntax for exact scalars.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | '+' unary | power
//! power  := atom ('^' ['-' | '+'] integer)?
//! atom   := number | "pi" | "e" | "i" | '(' expr ')'
//! number := digits ['.' digits]
//! ```

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Pow, Zero};

use super::{Exact, ScalarError};

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(BigRational),
    Ident(String),
    Op(char),
}

fn err(input: &str, reason: impl Into<String>) -> ScalarError {
    ScalarError::Parse {
        input: input.to_string(),
        reason: reason.into(),
    }
}

fn tokenize(input: &str) -> Result<Vec<Token>, ScalarError> {
    let chars: Vec<char> = input.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        if ch.is_whitespace() {
            i += 1;
        } else if ch.is_ascii_digit() || ch == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            let (int_part, frac_part) = match text.split_once('.') {
                Some((a, b)) => (a.to_string(), b.to_string()),
                None => (text.clone(), String::new()),
            };
            if frac_part.contains('.') || (int_part.is_empty() && frac_part.is_empty()) {
                return Err(err(input, format!("malformed number `{text}`")));
            }
            let digits = format!("{int_part}{frac_part}");
            let numer: BigInt = digits
                .parse()
                .map_err(|_| err(input, format!("malformed number `{text}`")))?;
            let denom = BigInt::from(10u32).pow(frac_part.len() as u32);
            tokens.push(Token::Num(BigRational::new(numer, denom)));
        } else if ch.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            tokens.push(Token::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(ch) {
            tokens.push(Token::Op(ch));
            i += 1;
        } else {
            return Err(err(input, format!("unexpected character `{ch}`")));
        }
    }
    Ok(tokens)
}

struct Parser<'a> {
    input: &'a str,
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn eat_op(&mut self, op: char) -> bool {
        if self.peek() == Some(&Token::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Exact, ScalarError> {
        let mut acc = self.term()?;
        loop {
            if self.eat_op('+') {
                acc = acc + self.term()?;
            } else if self.eat_op('-') {
                acc = acc - self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Exact, ScalarError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat_op('*') {
                acc = acc * self.unary()?;
            } else if self.eat_op('/') {
                let d = self.unary()?;
                let inv = d.inv().ok_or_else(|| err(self.input, "division by zero"))?;
                acc = acc * inv;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Exact, ScalarError> {
        if self.eat_op('-') {
            return Ok(-self.unary()?);
        }
        if self.eat_op('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Exact, ScalarError> {
        let base = self.atom()?;
        if !self.eat_op('^') {
            return Ok(base);
        }
        let negative = if self.eat_op('-') {
            true
        } else {
            self.eat_op('+');
            false
        };
        let exp = match self.peek().cloned() {
            Some(Token::Num(n)) if n.is_integer() => {
                self.pos += 1;
                n.to_integer()
            }
            _ => return Err(err(self.input, "exponent must be an integer")),
        };
        let exp: i32 = exp
            .try_into()
            .map_err(|_| err(self.input, "exponent out of range"))?;
        let exp = if negative { -exp } else { exp };
        base.powi(exp)
            .ok_or_else(|| err(self.input, "zero raised to a negative power"))
    }

    fn atom(&mut self) -> Result<Exact, ScalarError> {
        match self.peek().cloned() {
            Some(Token::Num(n)) => {
                self.pos += 1;
                Ok(Exact::from_rational(n, BigRational::zero()))
            }
            Some(Token::Ident(name)) => {
                self.pos += 1;
                match name.as_str() {
                    "pi" => Ok(Exact::pi_symbol()),
                    "e" => Ok(Exact::e_symbol()),
                    "i" => Ok(Exact::i()),
                    other => Err(err(self.input, format!("unknown symbol `{other}`"))),
                }
            }
            Some(Token::Op('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat_op(')') {
                    return Err(err(self.input, "missing `)`"));
                }
                Ok(inner)
            }
            Some(tok) => Err(err(self.input, format!("unexpected token {tok:?}"))),
            None => Err(err(self.input, "unexpected end of input")),
        }
    }
}

pub(super) fn parse_exact(input: &str) -> Result<Exact, ScalarError> {
    let tokens = tokenize(input)?;
    if tokens.is_empty() {
        return Err(err(input, "empty"));
    }
    let mut parser = Parser {
        input,
        tokens,
        pos: 0,
    };
    let value = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(err(input, "trailing input"));
    }
    Ok(value)
}
