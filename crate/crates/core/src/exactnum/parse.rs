//! A small recursive-descent parser for Laurent polynomial expressions.
//!
//! Grammar: sums and differences of products and exact quotients of
//! factors; a factor is an integer, a variable name or a parenthesized
//! expression, optionally raised to a (possibly negative) integer power.


use super::laurent::{Laurent, Vars};
use super::scalar::Scalar;
use super::ExactError;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>, ExactError> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            out.push(Tok::Num(chars[start..i].iter().collect()));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(ExactError::Parse(format!("unexpected character {c:?} in {s:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    vars: &'a Vars,
}

impl<C: Scalar> Laurent<C> {
    /// Parses an expression such as `(x + y + 1)/(x*y)` over `vars`.
    /// Quotients must be exact.
    pub fn parse(s: &str, vars: &Vars) -> Result<Self, ExactError> {
        let mut p = Parser { toks: tokenize(s)?, pos: 0, vars };
        let e = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(ExactError::Parse(format!("trailing input in {s:?}")));
        }
        Ok(e)
    }
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr<C: Scalar>(&mut self) -> Result<Laurent<C>, ExactError> {
        let negate = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let mut acc = self.term()?;
        if negate {
            acc = -&acc;
        }
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term<C: Scalar>(&mut self) -> Result<Laurent<C>, ExactError> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.power()?;
            } else if self.eat('/') {
                acc = acc.exact_div(&self.power()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn power<C: Scalar>(&mut self) -> Result<Laurent<C>, ExactError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let neg = self.eat('-');
        let e: u32 = match self.toks.get(self.pos) {
            Some(Tok::Num(n)) => n.parse().map_err(|_| ExactError::Parse(format!("bad exponent {n}")))?,
            _ => return Err(ExactError::Parse("expected exponent".into())),
        };
        self.pos += 1;
        let p = base.pow(e);
        if neg {
            Laurent::one(self.vars).exact_div(&p)
        } else {
            Ok(p)
        }
    }

    fn atom<C: Scalar>(&mut self) -> Result<Laurent<C>, ExactError> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                let c = C::from_str_radix(&n, 10).map_err(|_| ExactError::Parse(format!("bad number {n}")))?;
                Ok(if c.is_zero() { Laurent::zero(self.vars) } else { Laurent::constant(self.vars, c) })
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Laurent::var_named(self.vars, &name)
                    .ok_or_else(|| ExactError::Parse(format!("unknown variable {name}")))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(ExactError::Parse("missing ')'".into()));
                }
                Ok(e)
            }
            other => Err(ExactError::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::vars_from;
    use crate::LaurentPoly;

    #[test]
    fn parses_printed_expressions() {
        let v = vars_from(&["x", "y"]);
        let f = LaurentPoly::parse("(x+y+1)/(x*y)", &v).unwrap();
        assert_eq!(f.to_string(), "y^-1 + x^-1 + x^-1 * y^-1");
        assert!(LaurentPoly::parse("x^-2 * y", &v).unwrap().is_monomial());
        assert!(LaurentPoly::parse("-x + 3*y - 2", &v).unwrap().to_string() == "-x + 3 * y - 2");
        assert!(LaurentPoly::one(&v).is_monomial() && LaurentPoly::one(&v).coefficient(&[0, 0]) == 1.into());
    }

    #[test]
    fn rejects_bad_input() {
        let v = vars_from(&["x"]);
        assert!(matches!(LaurentPoly::parse("z", &v), Err(ExactError::Parse(_))));
        assert!(matches!(LaurentPoly::parse("(x", &v), Err(ExactError::Parse(_))));
        assert!(matches!(LaurentPoly::parse("x $", &v), Err(ExactError::Parse(_))));
        assert!(matches!(LaurentPoly::parse("(x+1)/(x-1)", &v), Err(ExactError::NonExactDivision { .. })));
    }
}
