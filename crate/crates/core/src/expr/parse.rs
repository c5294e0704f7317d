//! Recursive-descent parser for the surface expression DSL.
//!
//! Grammar:
//! ```text
//! expr     := term (('+'|'-') term)*
//! term     := factor (('*'|'/') factor)*
//! factor   := atom ('^' integer)? | '-' factor
//! atom     := rational | 'i' | ident | '(' expr ')'
//! rational := integer ('/' positive-integer)?
//! ident    := z1 | z2 | zb1 | zb2 | v | w | wb | c | cb | t
//! ```
//! A `/` directly between two integer literals binds as a rational
//! constant; between anything else it is division. Exponents are nonzero
//! integers, possibly negative.

use thiserror::Error;

use super::{Expr, Var};
use crate::scalar::{GaussRat, Rat};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown identifier `{name}` at byte {pos}")]
    UnknownIdent { pos: usize, name: String },
    #[error("zero exponent at byte {pos}")]
    ZeroExponent { pos: usize },
}

pub fn parse_expr(input: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { src: input.as_bytes(), pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> ParseError {
        ParseError::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }


    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut terms = vec![self.term()?];
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    terms.push(self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    terms.push(Expr::neg(self.term()?));
                }
                _ => break,
            }
        }
        Ok(Expr::sum(terms))
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut factors = vec![self.factor()?];
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    factors.push(self.factor()?);
                }
                Some(b'/') => {
                    self.pos += 1;
                    factors.push(Expr::inv(self.factor()?));
                }
                _ => break,
            }
        }
        Ok(Expr::product(factors))
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if self.eat(b'-') {
            return Ok(Expr::neg(self.factor()?));
        }
        let atom = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let exp_pos = self.pos;
            let n = self.integer()?;
            if n == 0 {
                return Err(ParseError::ZeroExponent { pos: exp_pos });
            }
            let n32 = i32::try_from(n).map_err(|_| self.err("exponent out of range"))?;
            return Ok(Expr::pow(atom, n32));
        }
        Ok(atom)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => self.rational(),
            Some(c) if c.is_ascii_alphabetic() => self.ident(),
            Some(c) => Err(self.err(&format!("unexpected character `{}`", c as char))),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let neg = self.eat(b'-');
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected an integer"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let mut value: i64 = text.parse().map_err(|_| self.err("integer out of range"))?;
        if neg {
            value = -value;
        }
        Ok(value)
    }

    fn rational(&mut self) -> Result<Expr, ParseError> {
        let num = self.integer()?;
        // a `/` binds as a rational only when immediately followed by an integer
        let save = self.pos;
        if self.eat(b'/') {
            let den_start = self.pos;
            if self.peek().map(|c| c.is_ascii_digit()).unwrap_or(false) {
                let den = self.integer()?;
                if den <= 0 {
                    return Err(ParseError::Syntax {
                        pos: den_start,
                        msg: "denominator must be positive".into(),
                    });
                }
                return Ok(Expr::constant(GaussRat::from_rat(Rat::new(num.into(), den.into()))));
            }
            self.pos = save;
        }
        Ok(Expr::int(num))
    }

    fn ident(&mut self) -> Result<Expr, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap().to_string();
        if name == "i" {
            return Ok(Expr::i());
        }
        match Var::from_dsl_name(&name) {
            Some(v) => Ok(Expr::var(v)),
            None => Err(ParseError::UnknownIdent { pos: start, name }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{expr_eq, Node};

    #[test]
    fn simple_product() {
        let e = parse_expr("z1*zb1").unwrap();
        let expected = Expr::mul(Expr::var(Var::Z1), Expr::var(Var::Zb1));
        assert!(expr_eq(&e, &expected));
    }

    #[test]
    fn model_graph_shape() {
        let e = parse_expr("(z1*zb1 + (1/2)*z1^2*zb2 + (1/2)*zb1^2*z2) / (1 - z2*zb2)").unwrap();
        match e.node() {
            Node::Product(ch) => {
                assert_eq!(ch.len(), 2);
                assert!(matches!(ch[0].node(), Node::Sum(_)));
                assert!(matches!(ch[1].node(), Node::Pow(_, -1)));
            }
            other => panic!("expected numerator*denominator^-1, got {other:?}"),
        }
    }

    #[test]
    fn zero_exponent_rejected() {
        match parse_expr("z1^0") {
            Err(ParseError::ZeroExponent { pos }) => assert_eq!(pos, 3),
            other => panic!("expected zero-exponent error, got {other:?}"),
        }
    }

    #[test]
    fn syntax_error_carries_position() {
        match parse_expr("z1*(") {
            Err(ParseError::Syntax { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_identifier() {
        match parse_expr("z1 + q3") {
            Err(ParseError::UnknownIdent { name, .. }) => assert_eq!(name, "q3"),
            other => panic!("expected unknown identifier, got {other:?}"),
        }
    }

    #[test]
    fn rational_vs_division() {
        // between integer literals `/` is a rational constant
        let r = parse_expr("3/4").unwrap();
        assert_eq!(r.is_const(), Some(&GaussRat::from_pair(3, 4, 0, 1)));
        // between an integer and a variable it is division
        let d = parse_expr("1/z2").unwrap();
        assert!(matches!(d.node(), Node::Pow(_, -1)));
        // precedence: -z1^2 negates the square
        let e = parse_expr("-z1^2").unwrap();
        assert!(matches!(e.node(), Node::Neg(_)));
    }

    #[test]
    fn flow_parameters_not_in_dsl() {
        assert!(matches!(parse_expr("E"), Err(ParseError::UnknownIdent { .. })));
    }
}
