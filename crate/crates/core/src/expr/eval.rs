use alloc::boxed::Box;
use alloc::string::ToString;
use alloc::vec::Vec;

use super::{Expr, Func};
use crate::error::{Error, Result};
use crate::jet::Jet;

#[derive(Debug, Clone)]
enum Node {
    Const(f64),
    Var(usize),
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    PowInt(Box<Node>, i64),
    Pow(Box<Node>, Box<Node>),
    Call(Func, Box<Node>),
}

/// An expression whose variables have been resolved against an ordered list
/// of coordinate names.
#[derive(Debug, Clone)]
pub struct BoundExpr {
    source: Expr,
    root: Node,
    arity: usize,
}

impl Expr {
    /// Resolves every variable against `names`; unknown names are reported here.
    pub fn bind(&self, names: &[&str]) -> Result<BoundExpr> {
        Ok(BoundExpr { source: self.clone(), root: compile(self, names)?, arity: names.len() })
    }
}

fn compile(e: &Expr, names: &[&str]) -> Result<Node> {
    let b = |x: &Expr| compile(x, names).map(Box::new);
    Ok(match e {
        Expr::Const(c) => Node::Const(*c),
        Expr::Var(v) => match names.iter().position(|n| n == v) {
            Some(i) => Node::Var(i),
            None => return Err(Error::UnboundVariable { name: v.clone() }),
        },
        Expr::Neg(a) => Node::Neg(b(a)?),
        Expr::Add(x, y) => Node::Add(b(x)?, b(y)?),
        Expr::Sub(x, y) => Node::Sub(b(x)?, b(y)?),
        Expr::Mul(x, y) => Node::Mul(b(x)?, b(y)?),
        Expr::Div(x, y) => Node::Div(b(x)?, b(y)?),
        Expr::Pow(x, y) => match y.integer_exponent() {
            Some(k) => Node::PowInt(b(x)?, k),
            None => Node::Pow(b(x)?, b(y)?),
        },
        Expr::Call(f, a) => Node::Call(*f, b(a)?),
    })
}

fn domain(node_src: &Expr, reason: &'static str) -> Error {
    Error::Domain { expr: node_src.to_string(), reason }
}

/// Walks the compiled tree alongside the source tree, so domain errors can
/// quote the offending sub-expression.
trait Arith: Sized + Clone {
    fn konst(c: f64) -> Self;
    fn val(&self) -> f64;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn powi(&self, k: i64) -> Self;
    fn powf(&self, e: &Self) -> Self;
    fn func(&self, f: Func) -> Self;
    /// Whether a zero argument of sqrt is acceptable.
    const SQRT_ZERO_OK: bool;
}

impl Arith for f64 {
    fn konst(c: f64) -> Self {
        c
    }
    fn val(&self) -> f64 {
        *self
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn powi(&self, k: i64) -> Self {
        let mut acc = 1.0;
        for _ in 0..k.unsigned_abs() {
            acc *= self;
        }
        if k < 0 {
            1.0 / acc
        } else {
            acc
        }
    }
    fn powf(&self, e: &Self) -> Self {
        libm::exp(e * libm::log(*self))
    }
    fn func(&self, f: Func) -> Self {
        match f {
            Func::Sin => libm::sin(*self),
            Func::Cos => libm::cos(*self),
            Func::Exp => libm::exp(*self),
            Func::Log => libm::log(*self),
            Func::Sqrt => libm::sqrt(*self),
        }
    }
    const SQRT_ZERO_OK: bool = true;
}

impl Arith for Jet {
    fn konst(c: f64) -> Self {
        Jet::constant(c)
    }
    fn val(&self) -> f64 {
        self.value()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn powi(&self, k: i64) -> Self {
        Jet::powi(self, k)
    }
    fn powf(&self, e: &Self) -> Self {
        if e.is_constant() {
            Jet::powf(self, e.value())
        } else {
            (e * &self.ln()).exp()
        }
    }
    fn func(&self, f: Func) -> Self {
        match f {
            Func::Sin => self.sin(),
            Func::Cos => self.cos(),
            Func::Exp => self.exp(),
            Func::Log => self.ln(),
            Func::Sqrt => Jet::sqrt(self),
        }
    }
    const SQRT_ZERO_OK: bool = false;
}

fn walk<T: Arith>(node: &Node, src: &Expr, vars: &[T]) -> Result<T> {
    use Expr as E;
    let (l, r) = match src {
        E::Add(a, b) | E::Sub(a, b) | E::Mul(a, b) | E::Div(a, b) | E::Pow(a, b) => (&**a, &**b),
        E::Neg(a) | E::Call(_, a) => (&**a, &**a),
        _ => (src, src),
    };
    Ok(match node {
        Node::Const(c) => T::konst(*c),
        Node::Var(i) => vars[*i].clone(),
        Node::Neg(a) => walk(a, l, vars)?.neg(),
        Node::Add(a, b) => walk(a, l, vars)?.add(&walk(b, r, vars)?),
        Node::Sub(a, b) => walk(a, l, vars)?.sub(&walk(b, r, vars)?),
        Node::Mul(a, b) => walk(a, l, vars)?.mul(&walk(b, r, vars)?),
        Node::Div(a, b) => {
            let d = walk(b, r, vars)?;
            if d.val() == 0.0 {
                return Err(domain(src, "division by zero"));
            }
            walk(a, l, vars)?.div(&d)
        }
        Node::PowInt(a, k) => {
            let base = walk(a, l, vars)?;
            if *k < 0 && base.val() == 0.0 {
                return Err(domain(src, "negative power of zero"));
            }
            base.powi(*k)
        }
        Node::Pow(a, b) => {
            let base = walk(a, l, vars)?;
            if !(base.val() > 0.0) {
                return Err(domain(src, "real exponent needs a positive base"));
            }
            base.powf(&walk(b, r, vars)?)
        }
        Node::Call(f, a) => {
            let x = walk(a, l, vars)?;
            match f {
                Func::Log if !(x.val() > 0.0) => return Err(domain(src, "log of non-positive value")),
                Func::Sqrt if x.val() < 0.0 => return Err(domain(src, "sqrt of negative value")),
                Func::Sqrt if x.val() == 0.0 && !T::SQRT_ZERO_OK => {
                    return Err(domain(src, "sqrt is not differentiable at zero"))
                }
                _ => {}
            }
            let y = x.func(*f);
            if !y.val().is_finite() {
                return Err(domain(src, "non-finite result"));
            }
            y
        }
    })
}

impl BoundExpr {
    pub fn source(&self) -> &Expr {
        &self.source
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Plain real evaluation.
    pub fn eval(&self, point: &[f64]) -> Result<f64> {
        self.check_arity(point.len())?;
        walk(&self.root, &self.source, point)
    }

    /// Jet evaluation: values, gradients and Hessians propagate from the
    /// bound variables.
    pub fn eval_jet(&self, vars: &[Jet]) -> Result<Jet> {
        self.check_arity(vars.len())?;
        walk(&self.root, &self.source, vars)
    }

    fn check_arity(&self, n: usize) -> Result<()> {
        if n != self.arity {
            return Err(Error::Dimension { what: "expression bindings", expected: self.arity, found: n });
        }
        Ok(())
    }
}

/// Jets of the coordinate functions at `point`.
pub fn coordinate_jets(point: &[f64]) -> Vec<Jet> {
    let n = point.len();
    point.iter().enumerate().map(|(i, &x)| Jet::variable(x, i, n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn jet_at(src: &str, names: &[&str], pt: &[f64]) -> Result<Jet> {
        parse(src).unwrap().bind(names)?.eval_jet(&coordinate_jets(pt))
    }

    #[test]
    fn identity_plus_zero() {
        let j = jet_at("x+0", &["x"], &[5.0]).unwrap();
        assert_eq!(j.value(), 5.0);
        assert_eq!(j.gradient(1), [1.0]);
    }

    #[test]
    fn warping_function_value() {
        let j = jet_at("sqrt(u2^2+u3^2)", &["u2", "u3"], &[3.0, 4.0]).unwrap();
        assert!((j.value() - 5.0).abs() < 1e-15);
        assert!((j.d(0) - 0.6).abs() < 1e-15);
    }

    #[test]
    fn pythagorean_identity() {
        let j = jet_at("sin(u)^2+cos(u)^2", &["u"], &[0.7]).unwrap();
        assert!((j.value() - 1.0).abs() < 1e-12);
        assert!(j.d(0).abs() < 1e-12);
        assert!(j.dd(0, 0).abs() < 1e-12);
    }

    #[test]
    fn integer_power_of_zero_stays_finite() {
        let j = jet_at("w^4", &["w"], &[0.0]).unwrap();
        assert_eq!((j.value(), j.d(0), j.dd(0, 0)), (0.0, 0.0, 0.0));
        assert!(jet_at("w^2.5", &["w"], &[0.0]).is_err());
    }

    #[test]
    fn domain_errors_name_subexpression() {
        match jet_at("1 + log(x - 2)", &["x"], &[1.0]).unwrap_err() {
            Error::Domain { expr, .. } => assert_eq!(expr, "log(x - 2)"),
            e => panic!("wrong error {e:?}"),
        }
        assert!(matches!(jet_at("1/(x-1)", &["x"], &[1.0]), Err(Error::Domain { .. })));
    }

    #[test]
    fn unbound_variable_at_bind_time() {
        let e = parse("x + y").unwrap();
        assert_eq!(e.bind(&["x"]).unwrap_err(), Error::UnboundVariable { name: "y".into() });
    }

    #[test]
    fn variable_exponent() {
        let j = jet_at("x^y", &["x", "y"], &[2.0, 3.0]).unwrap();
        assert!((j.value() - 8.0).abs() < 1e-12);
        assert!((j.d(0) - 12.0).abs() < 1e-12);
        assert!((j.d(1) - 8.0 * libm::log(2.0)).abs() < 1e-12);
    }
}
