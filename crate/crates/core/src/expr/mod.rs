//! A small real-valued expression language for scenario files.
//!
//! ```text
//! expr     = term { ("+" | "-") term } ;
//! term     = unary { ("*" | "/") unary } ;
//! unary    = "-" unary | power ;
//! power    = primary [ "^" exponent ] ;
//! exponent = "-" exponent | power ;
//! primary  = number | ident | func "(" expr ")" | "(" expr ")" ;
//! func     = "sin" | "cos" | "exp" | "log" | "sqrt" ;
//! ```
//!
//! `^` binds tighter than unary minus, so `-x^2` is `-(x^2)`; it associates to
//! the right. Identifiers are chart coordinate names and are resolved when an
//! expression is bound to a chart, not when it is parsed.

mod eval;
mod parse;

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use core::fmt;

pub use eval::{coordinate_jets, BoundExpr};
pub use parse::parse;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }

    pub const ALL: [Func; 5] = [Func::Sin, Func::Cos, Func::Exp, Func::Log, Func::Sqrt];
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn constant(c: f64) -> Expr {
        Expr::Const(c)
    }

    pub fn var(name: &str) -> Expr {
        Expr::Var(name.to_string())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Expr::Const(c) if *c == 0.0)
    }

    pub fn sum(a: Expr, b: Expr) -> Expr {
        Expr::Add(Box::new(a), Box::new(b))
    }

    pub fn product(a: Expr, b: Expr) -> Expr {
        Expr::Mul(Box::new(a), Box::new(b))
    }

    pub fn pow(a: Expr, b: Expr) -> Expr {
        Expr::Pow(Box::new(a), Box::new(b))
    }

    pub fn call(f: Func, a: Expr) -> Expr {
        Expr::Call(f, Box::new(a))
    }

    /// Names of all variables occurring in the tree.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Const(_) => {}
            Expr::Var(v) => {
                out.insert(v.clone());
            }
            Expr::Neg(a) | Expr::Call(_, a) => a.collect_vars(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Pow(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    /// Exponent as an exact integer, when it is a (possibly negated) integral constant.
    pub(crate) fn integer_exponent(&self) -> Option<i64> {
        match self {
            Expr::Const(c) if libm::trunc(*c) == *c && c.abs() < 1e6 => Some(*c as i64),
            Expr::Neg(a) => a.integer_exponent().map(|k| -k),
            _ => None,
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(..) => 3,
            Expr::Pow(..) => 4,
            Expr::Const(..) | Expr::Var(..) | Expr::Call(..) => 5,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            f.write_str("(")?;
            self.write_at(f, 0)?;
            return f.write_str(")");
        }
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Var(v) => f.write_str(v),
            Expr::Neg(a) => {
                f.write_str("-")?;
                a.write_at(f, 3)
            }
            Expr::Add(a, b) => {
                a.write_at(f, 1)?;
                f.write_str(" + ")?;
                b.write_at(f, 2)
            }
            Expr::Sub(a, b) => {
                a.write_at(f, 1)?;
                f.write_str(" - ")?;
                b.write_at(f, 2)
            }
            Expr::Mul(a, b) => {
                a.write_at(f, 2)?;
                f.write_str("*")?;
                b.write_at(f, 3)
            }
            Expr::Div(a, b) => {
                a.write_at(f, 2)?;
                f.write_str("/")?;
                b.write_at(f, 3)
            }
            Expr::Pow(a, b) => {
                a.write_at(f, 5)?;
                f.write_str("^")?;
                b.write_exponent(f)
            }
            Expr::Call(func, a) => {
                write!(f, "{}(", func.name())?;
                a.write_at(f, 0)?;
                f.write_str(")")
            }
        }
    }

    fn write_exponent(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Neg(a) => {
                f.write_str("-")?;
                a.write_exponent(f)
            }
            other => other.write_at(f, 4),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;

    #[test]
    fn printing_uses_minimal_parentheses() {
        let e = parse("(a - b) - (c - d)").unwrap();
        assert_eq!(format!("{e}"), "a - b - (c - d)");
        let e = parse("-x^2").unwrap();
        assert_eq!(format!("{e}"), "-x^2");
        let e = parse("(-x)^2").unwrap();
        assert_eq!(format!("{e}"), "(-x)^2");
        let e = parse("a^b^c").unwrap();
        assert_eq!(format!("{e}"), "a^b^c");
        let e = parse("(a^b)^c").unwrap();
        assert_eq!(format!("{e}"), "(a^b)^c");
        let e = parse("2^-1").unwrap();
        assert_eq!(format!("{e}"), "2^-1");
    }

    #[test]
    fn free_variables() {
        let e = parse("w^2*sin(u) + exp(-(z1+z2))").unwrap();
        let vars: alloc::vec::Vec<_> = e.free_vars().into_iter().collect();
        assert_eq!(vars, ["u", "w", "z1", "z2"]);
    }
}
