//! A tiny arithmetic language for chart and immersion component functions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('-' | '+') unary | power
//! power  := atom ('^' unary)?
//! atom   := NUMBER | VAR | 'pi' | FUNC '(' expr ')' | '(' expr ')'
//! VAR    := PREFIX DIGITS          e.g. x0, x1 (charts) or t0, t1 (patches)
//! FUNC   := exp | ln | sqrt | sin | cos | tan
//! NUMBER := DIGITS ('.' DIGITS?)? (('e' | 'E') ('+' | '-')? DIGITS)?
//! ```
//!
//! `^` binds tighter than unary minus and is right associative, so
//! `-x0^2^3 = -(x0^(2^3))`. Whitespace is ignored.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("parse error at byte {position} in '{source_text}': {message}")]
pub struct ParseError {
    pub message: String,
    pub position: usize,
    pub source_text: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Ln,
    Sqrt,
    Sin,
    Cos,
    Tan,
}

impl Func {
    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "exp" => Self::Exp,
            "ln" => Self::Ln,
            "sqrt" => Self::Sqrt,
            "sin" => Self::Sin,
            "cos" => Self::Cos,
            "tan" => Self::Tan,
            _ => return None,
        })
    }

    fn name(self) -> &'static str {
        match self {
            Self::Exp => "exp",
            Self::Ln => "ln",
            Self::Sqrt => "sqrt",
            Self::Sin => "sin",
            Self::Cos => "cos",
            Self::Tan => "tan",
        }
    }

    fn apply(self, v: f64) -> f64 {
        match self {
            Self::Exp => v.exp(),
            Self::Ln => v.ln(),
            Self::Sqrt => v.sqrt(),
            Self::Sin => v.sin(),
            Self::Cos => v.cos(),
            Self::Tan => v.tan(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    /// Parses `src`, accepting variables `{prefix}0 .. {prefix}{arity-1}`.
    pub fn parse(src: &str, prefix: char, arity: usize) -> Result<Self, ParseError> {
        let mut p = Parser {
            src,
            bytes: src.as_bytes(),
            pos: 0,
            prefix,
            arity,
        };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != p.bytes.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(e)
    }

    pub fn eval(&self, vars: &[f64]) -> f64 {
        match self {
            Expr::Const(c) => *c,
            Expr::Var(i) => vars[*i],
            Expr::Neg(a) => -a.eval(vars),
            Expr::Add(a, b) => a.eval(vars) + b.eval(vars),
            Expr::Sub(a, b) => a.eval(vars) - b.eval(vars),
            Expr::Mul(a, b) => a.eval(vars) * b.eval(vars),
            Expr::Div(a, b) => a.eval(vars) / b.eval(vars),
            Expr::Pow(a, b) => {
                let base = a.eval(vars);
                match **b {
                    // integer powers stay exact for negative bases
                    Expr::Const(k) if k.fract() == 0.0 && k.abs() <= 64.0 => base.powi(k as i32),
                    _ => base.powf(b.eval(vars)),
                }
            }
            Expr::Call(f, a) => f.apply(a.eval(vars)),
        }
    }

    /// Largest variable index referenced, if any.
    pub fn max_var(&self) -> Option<usize> {
        match self {
            Expr::Const(_) => None,
            Expr::Var(i) => Some(*i),
            Expr::Neg(a) | Expr::Call(_, a) => a.max_var(),
            Expr::Add(a, b)
            | Expr::Sub(a, b)
            | Expr::Mul(a, b)
            | Expr::Div(a, b)
            | Expr::Pow(a, b) => a.max_var().max(b.max_var()),
        }
    }

    /// Renders with the given variable prefix; the output parses back to an
    /// equal tree.
    pub fn display(&self, prefix: char) -> Display<'_> {
        Display { expr: self, prefix }
    }
}

pub struct Display<'a> {
    expr: &'a Expr,
    prefix: char,
}

impl fmt::Display for Display<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.prefix;
        let sub = |e: &Expr| e.display(p).to_string();
        match self.expr {
            Expr::Const(c) if *c < 0.0 => write!(f, "(-{:?})", -c),
            Expr::Const(c) => write!(f, "{c:?}"),
            Expr::Var(i) => write!(f, "{p}{i}"),
            Expr::Neg(a) => write!(f, "(-{})", sub(a)),
            Expr::Add(a, b) => write!(f, "({} + {})", sub(a), sub(b)),
            Expr::Sub(a, b) => write!(f, "({} - {})", sub(a), sub(b)),
            Expr::Mul(a, b) => write!(f, "({} * {})", sub(a), sub(b)),
            Expr::Div(a, b) => write!(f, "({} / {})", sub(a), sub(b)),
            Expr::Pow(a, b) => write!(f, "({}^{})", sub(a), sub(b)),
            Expr::Call(func, a) => write!(f, "{}({})", func.name(), sub(a)),
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    prefix: char,
    arity: usize,
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            message: message.into(),
            position: self.pos,
            source_text: self.src.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
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
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(b'*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat(b'/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat(b'-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let exp = self.unary()?;
            return Ok(Expr::Pow(Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => self.identifier(),
            Some(c) => Err(self.error(format!("unexpected character '{}'", c as char))),
        }
    }

    fn number(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.pos < p.bytes.len() && p.bytes[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
            p.pos - s
        };
        let mut count = digits(self);
        if self.pos < self.bytes.len() && self.bytes[self.pos] == b'.' {
            self.pos += 1;
            count += digits(self);
        }
        if count == 0 {
            return Err(self.error("malformed number"));
        }
        if self.pos < self.bytes.len() && matches!(self.bytes[self.pos], b'e' | b'E') {
            self.pos += 1;
            if self.pos < self.bytes.len() && matches!(self.bytes[self.pos], b'+' | b'-') {
                self.pos += 1;
            }
            if digits(self) == 0 {
                return Err(self.error("malformed exponent"));
            }
        }
        self.src[start..self.pos]
            .parse::<f64>()
            .map(Expr::Const)
            .map_err(|e| self.error(e.to_string()))
    }

    fn identifier(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_alphanumeric() {
            self.pos += 1;
        }
        let ident = &self.src[start..self.pos];
        if ident == "pi" {
            return Ok(Expr::Const(std::f64::consts::PI));
        }
        if let Some(func) = Func::from_name(ident) {
            if !self.eat(b'(') {
                return Err(self.error(format!("expected '(' after {ident}")));
            }
            let arg = self.expr()?;
            if !self.eat(b')') {
                return Err(self.error("expected ')'"));
            }
            return Ok(Expr::Call(func, Box::new(arg)));
        }
        let mut chars = ident.chars();
        if chars.next() == Some(self.prefix) {
            let rest = chars.as_str();
            if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) {
                let index: usize = rest.parse().map_err(|_| self.error("bad variable index"))?;
                if index >= self.arity {
                    self.pos = start;
                    return Err(self.error(format!(
                        "variable {ident} out of range (arity {})",
                        self.arity
                    )));
                }
                return Ok(Expr::Var(index));
            }
        }
        self.pos = start;
        Err(self.error(format!("unknown identifier '{ident}'")))
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    fn eval(src: &str, vars: &[f64]) -> f64 {
        Expr::parse(src, 'x', vars.len()).unwrap().eval(vars)
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(eval("1 + 2 * 3", &[]), 7.0);
        assert_eq!(eval("(1 + 2) * 3", &[]), 9.0);
        assert_eq!(eval("2 ^ 3 ^ 2", &[]), 512.0);
        assert_eq!(eval("-x0^2", &[3.0]), -9.0);
        assert_eq!(eval("8 / 4 / 2", &[]), 1.0);
        assert_eq!(eval("x0 - x1 - 1", &[5.0, 2.0]), 2.0);
        assert_eq!(eval("2^-1", &[]), 0.5);
    }

    #[test]
    fn functions_and_constants() {
        assert!(
            (eval(
                "sin(pi / 2) + cos(0) + exp(0) + ln(1) + sqrt(4) + tan(0)",
                &[]
            ) - 5.0)
                .abs()
                < 1e-15
        );
        assert_eq!(eval("1.5e2 + .5 + 2.", &[]), 152.5);
        assert_eq!(eval("(-2)^3", &[]), -8.0);
    }

    #[test]
    fn errors_report_position() {
        let err = Expr::parse("x0 + ", 'x', 1).unwrap_err();
        assert_eq!(err.position, 5);
        let err = Expr::parse("x3", 'x', 2).unwrap_err();
        assert!(err.message.contains("out of range"));
        assert!(Expr::parse("foo(1)", 'x', 1).is_err());
        assert!(Expr::parse("t0", 'x', 1).is_err());
        assert!(Expr::parse("sin 1", 'x', 1).is_err());
        assert!(Expr::parse("(1", 'x', 1).is_err());
        assert!(Expr::parse("1 2", 'x', 1).is_err());
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            (-5.0f64..5.0).prop_map(Expr::Const),
            (0usize..3).prop_map(Expr::Var),
        ];
        leaf.prop_recursive(4, 32, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(|a| Expr::Neg(Box::new(a))),
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
                (inner.clone(), (1i32..4))
                    .prop_map(|(a, k)| Expr::Pow(Box::new(a), Box::new(Expr::Const(k as f64)))),
                inner.prop_map(|a| Expr::Call(Func::Sin, Box::new(a))),
            ]
        })
    }

    proptest! {
        #[test]
        fn display_round_trips(e in arb_expr()) {
            let text = e.display('u').to_string();
            let back = Expr::parse(&text, 'u', 3).unwrap();
            let vars = [0.3, -1.1, 2.0];
            let (a, b) = (e.eval(&vars), back.eval(&vars));
            prop_assert!(a == b || (a.is_nan() && b.is_nan()), "{text}: {a} vs {b}");
        }
    }
}
