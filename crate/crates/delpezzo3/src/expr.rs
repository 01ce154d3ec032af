//! Integer expressions used by parameterized catalog entries.
//!
//! Grammar: `+ - *`, parentheses, integer literals, parameter names and the
//! functions `s(c,d) = max(0, c+d-1)`, `min`, `max`.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExprError {
    #[error("cannot parse {src:?}: {reason}")]
    Parse { src: String, reason: String },
    #[error("unbound parameter {0}")]
    Unbound(String),
    #[error("function {0} expects {1} arguments")]
    Arity(String, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Num(i64),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Call(String, Vec<Expr>),
}

pub type Env = HashMap<String, i64>;

impl Expr {
    pub fn parse(src: &str) -> Result<Expr, ExprError> {
        let tokens = tokenize(src)?;
        let mut p = Parser { src, tokens, pos: 0 };
        let e = p.sum()?;
        if p.pos != p.tokens.len() {
            return Err(p.error("trailing input"));
        }
        Ok(e)
    }

    pub fn eval(&self, env: &Env) -> Result<i64, ExprError> {
        Ok(match self {
            Expr::Num(n) => *n,
            Expr::Var(v) => *env.get(v).ok_or_else(|| ExprError::Unbound(v.clone()))?,
            Expr::Neg(a) => -a.eval(env)?,
            Expr::Add(a, b) => a.eval(env)? + b.eval(env)?,
            Expr::Sub(a, b) => a.eval(env)? - b.eval(env)?,
            Expr::Mul(a, b) => a.eval(env)? * b.eval(env)?,
            Expr::Call(f, args) => {
                let vals = args.iter().map(|a| a.eval(env)).collect::<Result<Vec<_>, _>>()?;
                match (f.as_str(), vals.as_slice()) {
                    ("s", [c, d]) => (c + d - 1).max(0),
                    ("s", _) => return Err(ExprError::Arity(f.clone(), 2)),
                    ("min", [a, rest @ ..]) => rest.iter().fold(*a, |m, x| m.min(*x)),
                    ("max", [a, rest @ ..]) => rest.iter().fold(*a, |m, x| m.max(*x)),
                    _ => return Err(ExprError::Arity(f.clone(), 1)),
                }
            }
        })
    }

    pub fn vars(&self, out: &mut Vec<String>) {
        match self {
            Expr::Num(_) => {}
            Expr::Var(v) => out.push(v.clone()),
            Expr::Neg(a) => a.vars(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.vars(out);
                b.vars(out);
            }
            Expr::Call(_, args) => args.iter().for_each(|a| a.vars(out)),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(n) => write!(f, "{n}"),
            Expr::Var(v) => write!(f, "{v}"),
            Expr::Neg(a) => write!(f, "-({a})"),
            Expr::Add(a, b) => write!(f, "({a}+{b})"),
            Expr::Sub(a, b) => write!(f, "({a}-{b})"),
            Expr::Mul(a, b) => write!(f, "({a}*{b})"),
            Expr::Call(name, args) => {
                let parts: Vec<String> = args.iter().map(|a| a.to_string()).collect();
                write!(f, "{name}({})", parts.join(","))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Num(i64),
    Ident(String),
    Sym(char),
}

fn tokenize(src: &str) -> Result<Vec<Tok>, ExprError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
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
            let s: String = chars[start..i].iter().collect();
            out.push(Tok::Num(s.parse().map_err(|_| ExprError::Parse { src: src.into(), reason: "number".into() })?));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*(),".contains(c) {
            out.push(Tok::Sym(c));
            i += 1;
        } else {
            return Err(ExprError::Parse { src: src.into(), reason: format!("unexpected {c:?}") });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a str,
    tokens: Vec<Tok>,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, reason: &str) -> ExprError {
        ExprError::Parse { src: self.src.into(), reason: reason.into() }
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.product()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.product()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.product()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn product(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        while self.eat('*') {
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Expr::Num(n))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if self.eat('(') {
                    let mut args = vec![self.sum()?];
                    while self.eat(',') {
                        args.push(self.sum()?);
                    }
                    if !self.eat(')') {
                        return Err(self.error("missing ')'"));
                    }
                    if !matches!(name.as_str(), "s" | "min" | "max") {
                        return Err(self.error(&format!("unknown function {name}")));
                    }
                    Ok(Expr::Call(name, args))
                } else {
                    Ok(Expr::Var(name))
                }
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.sum()?;
                if !self.eat(')') {
                    return Err(self.error("missing ')'"));
                }
                Ok(e)
            }
            _ => Err(self.error("expected a term")),
        }
    }
}

/// Replaces every `{expr}` in `template` with its value.
pub fn interpolate(template: &str, env: &Env) -> Result<String, ExprError> {
    let mut out = String::new();
    let mut rest = template;
    while let Some(open) = rest.find('{') {
        let Some(close) = rest[open..].find('}') else {
            return Err(ExprError::Parse { src: template.into(), reason: "unclosed '{'".into() });
        };
        out.push_str(&rest[..open]);
        let inner = &rest[open + 1..open + close];
        // braces that do not hold an expression (as in "[2]_{1K}") are kept verbatim
        match Expr::parse(inner).and_then(|e| e.eval(env)) {
            Ok(v) => out.push_str(&v.to_string()),
            Err(ExprError::Unbound(_)) | Err(ExprError::Parse { .. }) => {
                out.push_str(&rest[open..=open + close]);
            }
            Err(e) => return Err(e),
        }
        rest = &rest[open + close + 1..];
    }
    out.push_str(rest);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn env(pairs: &[(&str, i64)]) -> Env {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn arithmetic() {
        let e = Expr::parse("s(c,d)+2").unwrap();
        assert_eq!(e.eval(&env(&[("c", 3), ("d", 1)])), Ok(5));
        assert_eq!(e.eval(&env(&[("c", 0), ("d", 0)])), Ok(2));
        assert_eq!(Expr::parse("5-c*2").unwrap().eval(&env(&[("c", 2)])), Ok(1));
        assert_eq!(Expr::parse("1-min(c,1)").unwrap().eval(&env(&[("c", 0)])), Ok(1));
        assert_eq!(Expr::parse("-(b)+max(b,4)").unwrap().eval(&env(&[("b", 2)])), Ok(2));
    }

    #[test]
    fn errors() {
        assert!(Expr::parse("c+").is_err());
        assert!(Expr::parse("foo(1)").is_err());
        assert_eq!(Expr::parse("x").unwrap().eval(&Env::new()), Err(ExprError::Unbound("x".into())));
    }

    #[test]
    fn interpolation_keeps_plain_braces() {
        let e = env(&[("b", 3)]);
        assert_eq!(interpolate("Γ:P:{b}", &e).unwrap(), "Γ:P:3");
        assert_eq!(interpolate("[2]_{1K}", &e).unwrap(), "[2]_{1K}");
        assert_eq!(interpolate("Γ:P:{b-1}", &e).unwrap(), "Γ:P:2");
    }
}
