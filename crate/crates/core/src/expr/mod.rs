//! Univariate expressions `f(x)` and the builtin test functions.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?
//! primary := number | 'x' | 'pi' | func '(' expr ')' | '(' expr ')'
//! ```
//!
//! `^` is right-associative and binds tighter than unary minus, so `-x^2`
//! is `-(x^2)`. Functions are `sin cos tan log exp sqrt abs`; `log` is the
//! natural logarithm. There is no implicit multiplication.

mod parser;

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::function::{EvalError, RealFunction};

/// Names accepted by [`FunctionExpr::builtin`].
pub const BUILTIN_NAMES: [&str; 4] = ["runge", "sqrt105", "logsin", "cos36"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty expression")]
    Empty,
    #[error("syntax error at position {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("unknown identifier '{name}' at position {pos}")]
    UnknownIdentifier { pos: usize, name: String },
    #[error("expression nested deeper than {limit} levels at position {pos}")]
    TooDeep { pos: usize, limit: usize },
}

impl ParseError {
    /// Character offset of the error, when it has one.
    pub fn position(&self) -> Option<usize> {
        match self {
            ParseError::Empty => None,
            ParseError::Syntax { pos, .. }
            | ParseError::UnknownIdentifier { pos, .. }
            | ParseError::TooDeep { pos, .. } => Some(*pos),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Log,
    Exp,
    Sqrt,
    Abs,
}

impl Func {
    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "log" => Func::Log,
            "exp" => Func::Exp,
            "sqrt" => Func::Sqrt,
            "abs" => Func::Abs,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Log => "log",
            Func::Exp => "exp",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    X,
    Pi,
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    fn precedence(&self) -> u8 {
        match self {
            Expr::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
            Expr::Bin(BinOp::Mul | BinOp::Div, ..) => 2,
            Expr::Neg(_) => 3,
            Expr::Bin(BinOp::Pow, ..) => 4,
            Expr::Num(_) | Expr::X | Expr::Pi | Expr::Call(..) => 5,
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64, EvalError> {
        let v = match self {
            Expr::Num(v) => *v,
            Expr::X => x,
            Expr::Pi => PI,
            Expr::Neg(e) => -e.eval(x)?,
            Expr::Bin(op, l, r) => {
                let (a, b) = (l.eval(x)?, r.eval(x)?);
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => {
                        if b == 0.0 {
                            return Err(EvalError::Domain {
                                op: "division",
                                arg: b,
                            });
                        }
                        a / b
                    }
                    BinOp::Pow => {
                        let v = a.powf(b);
                        if v.is_nan() {
                            return Err(EvalError::Domain {
                                op: "power",
                                arg: a,
                            });
                        }
                        if a == 0.0 && b < 0.0 {
                            return Err(EvalError::Domain {
                                op: "power",
                                arg: a,
                            });
                        }
                        v
                    }
                }
            }
            Expr::Call(f, e) => {
                let a = e.eval(x)?;
                match f {
                    Func::Sin => a.sin(),
                    Func::Cos => a.cos(),
                    Func::Tan => a.tan(),
                    Func::Exp => a.exp(),
                    Func::Abs => a.abs(),
                    Func::Log => {
                        if a <= 0.0 {
                            return Err(EvalError::Domain { op: "log", arg: a });
                        }
                        a.ln()
                    }
                    Func::Sqrt => {
                        if a < 0.0 {
                            return Err(EvalError::Domain { op: "sqrt", arg: a });
                        }
                        a.sqrt()
                    }
                }
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(EvalError::NonFinite { x })
        }
    }

    fn write_child(&self, f: &mut fmt::Formatter<'_>, parens: bool) -> fmt::Result {
        if parens {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

/// Canonical form: minimal parentheses, spaces around `+` and `-`.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v}"),
            Expr::X => f.write_str("x"),
            Expr::Pi => f.write_str("pi"),
            Expr::Neg(e) => {
                f.write_str("-")?;
                e.write_child(f, e.precedence() < 3)
            }
            Expr::Call(func, e) => write!(f, "{}({e})", func.name()),
            Expr::Bin(op, l, r) => {
                let (sym, prec) = match op {
                    BinOp::Add => (" + ", 1),
                    BinOp::Sub => (" - ", 1),
                    BinOp::Mul => ("*", 2),
                    BinOp::Div => ("/", 2),
                    BinOp::Pow => ("^", 4),
                };
                if *op == BinOp::Pow {
                    l.write_child(f, l.precedence() < 5)?;
                    f.write_str(sym)?;
                    r.write_child(f, r.precedence() < 3)
                } else {
                    l.write_child(f, l.precedence() < prec)?;
                    f.write_str(sym)?;
                    r.write_child(f, r.precedence() <= prec)
                }
            }
        }
    }
}

/// A parsed expression together with the text it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionExpr {
    source: String,
    ast: Expr,
    builtin: Option<&'static str>,
}

impl FunctionExpr {
    pub fn parse(source: &str) -> Result<Self, ParseError> {
        Ok(Self {
            source: source.to_string(),
            ast: parser::parse(source)?,
            builtin: None,
        })
    }

    /// One of [`BUILTIN_NAMES`].
    pub fn builtin(name: &str) -> Option<Self> {
        let (name, src) = match name {
            "runge" => ("runge", "1/(1+25*x^2)"),
            "sqrt105" => ("sqrt105", "sqrt(1.05+x)"),
            "logsin" => ("logsin", "log(sin(10*x)+2)+sin(x)"),
            "cos36" => ("cos36", "cos(36*sqrt(2)*x+1/3)"),
            _ => return None,
        };
        let mut f = Self::parse(src).expect("builtin sources parse");
        f.builtin = Some(name);
        Some(f)
    }

    /// A builtin name, or else an expression to parse.
    pub fn resolve(spec: &str) -> Result<Self, ParseError> {
        match Self::builtin(spec.trim()) {
            Some(f) => Ok(f),
            None => Self::parse(spec),
        }
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn ast(&self) -> &Expr {
        &self.ast
    }

    /// Builtin name or source text.
    pub fn name(&self) -> &str {
        self.builtin.unwrap_or(&self.source)
    }

    pub fn builtin_name(&self) -> Option<&'static str> {
        self.builtin
    }

    pub fn eval(&self, x: f64) -> Result<f64, EvalError> {
        self.ast.eval(x)
    }

    /// The canonical printed form.
    pub fn canonical(&self) -> String {
        self.ast.to_string()
    }
}

impl fmt::Display for FunctionExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl RealFunction for FunctionExpr {
    fn eval(&self, x: f64) -> Result<f64, EvalError> {
        self.ast.eval(x)
    }
}

impl Serialize for FunctionExpr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for FunctionExpr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        FunctionExpr::resolve(&s).map_err(serde::de::Error::custom)
    }
}
