//! Univariate real expressions: parsing, evaluation, symbolic derivatives.
//!
//! Grammar (variable is always `x`):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := ('-' | '+') unary | power
//! power   := primary ('^' unary)?
//! primary := number | 'x' | func '(' expr ')' | '(' expr ')'
//! func    := sin | cos | tan | arctan | atan | exp | ln | log | log10
//!          | abs | cbrt | sqrt
//! ```
//!
//! `^` binds tighter than unary minus, so `-x^2` is `-(x^2)`, and it is
//! right-associative.

mod diff;
mod parse;

use std::fmt;
use std::str::FromStr;

pub use parse::{parse, ParseError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnOp {
    Neg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Arctan,
    Exp,
    /// Natural log. `log` parses to this too.
    Ln,
    Log10,
    Abs,
    Cbrt,
    Sqrt,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Arctan => "arctan",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Log10 => "log10",
            Func::Abs => "abs",
            Func::Cbrt => "cbrt",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "arctan" | "atan" => Func::Arctan,
            "exp" => Func::Exp,
            "ln" | "log" => Func::Ln,
            "log10" => Func::Log10,
            "abs" => Func::Abs,
            "cbrt" => Func::Cbrt,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }

    fn apply(self, u: f64) -> EvalResult {
        let v = match self {
            Func::Sin => u.sin(),
            Func::Cos => u.cos(),
            Func::Tan => u.tan(),
            Func::Arctan => u.atan(),
            Func::Exp => u.exp(),
            Func::Ln if u <= 0.0 => return Err(DomainError::LogNonPositive(u)),
            Func::Ln => u.ln(),
            Func::Log10 if u <= 0.0 => return Err(DomainError::LogNonPositive(u)),
            Func::Log10 => u.log10(),
            Func::Abs => u.abs(),
            Func::Cbrt => u.cbrt(),
            Func::Sqrt if u < 0.0 => return Err(DomainError::SqrtNegative(u)),
            Func::Sqrt => u.sqrt(),
        };
        finite(v)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var,
    Unary(UnOp, Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

/// Why an evaluation has no real value.
#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum DomainError {
    #[error("logarithm of non-positive value {0}")]
    LogNonPositive(f64),
    #[error("square root of negative value {0}")]
    SqrtNegative(f64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("negative base {0} raised to non-integer power {1}")]
    FractionalPower(f64, f64),
    #[error("result is not finite")]
    NonFinite,
}

pub type EvalResult = Result<f64, DomainError>;

fn finite(v: f64) -> EvalResult {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(DomainError::NonFinite)
    }
}

impl Expr {
    pub fn constant(v: f64) -> Expr {
        Expr::Const(v)
    }

    pub fn var() -> Expr {
        Expr::Var
    }

    pub fn call(f: Func, arg: Expr) -> Expr {
        Expr::Call(f, Box::new(arg))
    }

    pub fn binary(op: BinOp, l: Expr, r: Expr) -> Expr {
        Expr::Binary(op, Box::new(l), Box::new(r))
    }

    pub fn neg(e: Expr) -> Expr {
        Expr::Unary(UnOp::Neg, Box::new(e))
    }

    pub fn eval(&self, x: f64) -> EvalResult {
        match self {
            Expr::Const(c) => finite(*c),
            Expr::Var => finite(x),
            Expr::Unary(UnOp::Neg, u) => Ok(-u.eval(x)?),
            Expr::Call(f, u) => f.apply(u.eval(x)?),
            Expr::Binary(op, l, r) => {
                let a = l.eval(x)?;
                let b = r.eval(x)?;
                match op {
                    BinOp::Add => finite(a + b),
                    BinOp::Sub => finite(a - b),
                    BinOp::Mul => finite(a * b),
                    BinOp::Div if b == 0.0 => Err(DomainError::DivisionByZero),
                    BinOp::Div => finite(a / b),
                    BinOp::Pow => pow(a, b),
                }
            }
        }
    }

    pub fn differentiate(&self) -> Expr {
        diff::derivative(self)
    }

    /// Fully parenthesised rendering that parses back to the same value.
    pub fn print(&self) -> String {
        self.to_string()
    }

    pub fn is_const(&self) -> bool {
        matches!(self, Expr::Const(_))
    }
}

fn pow(a: f64, b: f64) -> EvalResult {
    if a < 0.0 && b.fract() != 0.0 {
        return Err(DomainError::FractionalPower(a, b));
    }
    if a == 0.0 && b < 0.0 {
        return Err(DomainError::DivisionByZero);
    }
    finite(a.powf(b))
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write_const(f, *c),
            Expr::Var => f.write_str("x"),
            Expr::Unary(UnOp::Neg, u) => write!(f, "(-{u})"),
            Expr::Binary(op, l, r) => write!(f, "({l} {} {r})", op.symbol()),
            Expr::Call(func, u) => write!(f, "{}({u})", func.name()),
        }
    }
}

// Display for f64 is the shortest string that round-trips, but it never
// switches to exponent form, so 1e-22 would print as 24 zeros.
fn write_const(f: &mut fmt::Formatter<'_>, c: f64) -> fmt::Result {
    if c < 0.0 || (c == 0.0 && c.is_sign_negative()) {
        f.write_str("(-")?;
        write_const(f, -c)?;
        return f.write_str(")");
    }
    let plain = c.to_string();
    if plain.len() <= 21 {
        f.write_str(&plain)
    } else {
        write!(f, "{c:e}")
    }
}

impl FromStr for Expr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(src: &str, x: f64) -> EvalResult {
        parse(src).unwrap().eval(x)
    }

    #[test]
    fn evaluates_suite_functions() {
        assert_eq!(ev("x^3 + 4*x^2 - 10", 1.0), Ok(-5.0));
        assert_eq!(ev("x", 7.0), Ok(7.0));
        assert_eq!(ev("sin(x)^2 - x^2 + 1", 0.0), Ok(1.0));
        assert_eq!(ev("cbrt(x)", -8.0), Ok(-2.0));
        assert_eq!(ev("10*x*exp(-x^2) - 1", 0.0), Ok(-1.0));
    }

    #[test]
    fn domain_errors_are_values() {
        assert!(matches!(ev("ln(x)", -1.0), Err(DomainError::LogNonPositive(_))));
        assert!(matches!(ev("log(x)", 0.0), Err(DomainError::LogNonPositive(_))));
        assert_eq!(ev("1/x", 0.0), Err(DomainError::DivisionByZero));
        assert!(matches!(ev("x^0.5", -4.0), Err(DomainError::FractionalPower(..))));
        assert_eq!(ev("x^2", -3.0), Ok(9.0));
        assert_eq!(ev("exp(x)", 1000.0), Err(DomainError::NonFinite));
    }

    #[test]
    fn domain_error_propagates_through_parents() {
        assert!(ev("0*ln(x) + 1", -1.0).is_err());
        assert!(ev("sin(sqrt(x))", -1.0).is_err());
    }

    #[test]
    fn prints_parenthesised() {
        assert_eq!(Expr::constant(2.0).print(), "2");
        let e = Expr::binary(BinOp::Add, Expr::var(), Expr::constant(1.0));
        assert_eq!(e.print(), "(x + 1)");
        assert_eq!(Expr::constant(-0.5).print(), "(-0.5)");
        assert_eq!(Expr::constant(1e-22).print(), "1e-22");
    }

    #[test]
    fn derivative_round_trips_through_text() {
        let d = parse("x^2").unwrap().differentiate();
        let back = parse(&d.print()).unwrap();
        assert_eq!(back.eval(3.0), Ok(6.0));
    }
}
