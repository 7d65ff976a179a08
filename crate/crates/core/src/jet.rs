//! Second-order jets: a value together with its gradient and Hessian with
//! respect to a fixed set of chart variables.
//!
//! A jet with an empty gradient is a constant; binary operations broadcast
//! such constants against jets of any width. An empty Hessian likewise means
//! "identically zero". Fields transported along an immersion are built from
//! first derivatives only, and their Hessian slot is not meaningful (see
//! [`Jet::first_order`]).

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

/// Truncated Taylor expansion `value + grad·dx + ½ dxᵀ·hess·dx`.
#[derive(Clone, PartialEq)]
pub struct Jet {
    value: f64,
    grad: Vec<f64>,
    /// Row-major `n × n`, empty when zero.
    hess: Vec<f64>,
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Jet").field("value", &self.value).field("grad", &self.grad).finish_non_exhaustive()
    }
}

impl Jet {
    pub fn constant(value: f64) -> Self {
        Jet { value, grad: Vec::new(), hess: Vec::new() }
    }

    /// The coordinate function `x_index` among `n` variables, evaluated at `value`.
    pub fn variable(value: f64, index: usize, n: usize) -> Self {
        assert!(index < n, "variable index {index} out of range for {n} variables");
        let mut grad = vec![0.0; n];
        grad[index] = 1.0;
        Jet { value, grad, hess: Vec::new() }
    }

    /// Builds a jet from explicit parts. `hess` must be symmetric and `n × n`
    /// (or empty).
    pub fn from_parts(value: f64, grad: Vec<f64>, hess: Vec<f64>) -> Self {
        let n = grad.len();
        assert!(hess.is_empty() || hess.len() == n * n, "hessian shape mismatch");
        Jet { value, grad, hess }
    }

    /// A jet carrying only first-order information.
    pub fn first_order(value: f64, grad: Vec<f64>) -> Self {
        Jet { value, grad, hess: Vec::new() }
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    /// Number of variables (0 for a broadcast constant).
    pub fn width(&self) -> usize {
        self.grad.len()
    }

    pub fn is_constant(&self) -> bool {
        self.grad.is_empty()
    }

    /// Partial derivative with respect to variable `i`.
    pub fn d(&self, i: usize) -> f64 {
        self.grad.get(i).copied().unwrap_or(0.0)
    }

    /// Second partial derivative with respect to variables `i`, `j`.
    pub fn dd(&self, i: usize, j: usize) -> f64 {
        if self.hess.is_empty() {
            0.0
        } else {
            self.hess[i * self.grad.len() + j]
        }
    }

    /// Gradient padded to `n` entries.
    pub fn gradient(&self, n: usize) -> Vec<f64> {
        (0..n).map(|i| self.d(i)).collect()
    }

    /// Hessian padded to `n × n`, row-major.
    pub fn hessian(&self, n: usize) -> Vec<f64> {
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] = self.dd(i, j);
            }
        }
        out
    }

    /// Drops the second-order part.
    pub fn truncate(mut self) -> Self {
        self.hess.clear();
        self
    }

    fn width_of(a: &Jet, b: &Jet) -> usize {
        match (a.grad.len(), b.grad.len()) {
            (0, n) | (n, 0) => n,
            (n, m) => {
                assert_eq!(n, m, "jets over different variable sets");
                n
            }
        }
    }

    /// `f(self)` given `f`, `f'`, `f''` at the current value.
    fn compose(&self, f0: f64, f1: f64, f2: f64) -> Jet {
        let n = self.grad.len();
        if n == 0 {
            return Jet::constant(f0);
        }
        let grad: Vec<f64> = self.grad.iter().map(|g| f1 * g).collect();
        let mut hess = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                hess[i * n + j] = f1 * self.dd(i, j) + f2 * (self.grad[i] * self.grad[j]);
            }
        }
        Jet { value: f0, grad, hess }
    }

    pub fn sin(&self) -> Jet {
        let (s, c) = (libm::sin(self.value), libm::cos(self.value));
        self.compose(s, c, -s)
    }

    pub fn cos(&self) -> Jet {
        let (s, c) = (libm::sin(self.value), libm::cos(self.value));
        self.compose(c, -s, -c)
    }

    pub fn exp(&self) -> Jet {
        let e = libm::exp(self.value);
        self.compose(e, e, e)
    }

    /// Natural logarithm. Callers check `value > 0`; otherwise the result is NaN.
    pub fn ln(&self) -> Jet {
        let a = self.value;
        self.compose(libm::log(a), 1.0 / a, -1.0 / (a * a))
    }

    /// Square root. Callers check `value > 0`; otherwise the result is NaN.
    pub fn sqrt(&self) -> Jet {
        let r = libm::sqrt(self.value);
        self.compose(r, 0.5 / r, -0.25 / (r * self.value))
    }

    pub fn recip(&self) -> Jet {
        let a = self.value;
        self.compose(1.0 / a, -1.0 / (a * a), 2.0 / (a * a * a))
    }

    /// Integer power by repeated multiplication (exact jets, no logarithm).
    pub fn powi(&self, k: i64) -> Jet {
        if k == 0 {
            return Jet::constant(1.0);
        }
        let mut acc = self.clone();
        for _ in 1..k.unsigned_abs() {
            acc = &acc * self;
        }
        if k < 0 {
            acc.recip()
        } else {
            acc
        }
    }

    /// Real power through `exp(r ln a)`; requires a positive base.
    pub fn powf(&self, r: f64) -> Jet {
        let a = self.value;
        let p = libm::pow(a, r);
        self.compose(p, r * p / a, r * (r - 1.0) * p / (a * a))
    }

    pub fn scale(&self, c: f64) -> Jet {
        Jet {
            value: self.value * c,
            grad: self.grad.iter().map(|g| g * c).collect(),
            hess: self.hess.iter().map(|h| h * c).collect(),
        }
    }
}

fn zip_lin(a: &[f64], b: &[f64], ca: f64, cb: f64, n: usize) -> Vec<f64> {
    match (a.is_empty(), b.is_empty()) {
        (true, true) => Vec::new(),
        (false, true) => a.iter().map(|x| ca * x).collect(),
        (true, false) => b.iter().map(|x| cb * x).collect(),
        (false, false) => {
            debug_assert_eq!(a.len(), n);
            a.iter().zip(b).map(|(x, y)| ca * x + cb * y).collect()
        }
    }
}

impl<'a> Add<&'a Jet> for &'a Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        let n = Jet::width_of(self, rhs);
        Jet {
            value: self.value + rhs.value,
            grad: zip_lin(&self.grad, &rhs.grad, 1.0, 1.0, n),
            hess: zip_lin(&self.hess, &rhs.hess, 1.0, 1.0, n * n),
        }
    }
}

impl<'a> Sub<&'a Jet> for &'a Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        let n = Jet::width_of(self, rhs);
        Jet {
            value: self.value - rhs.value,
            grad: zip_lin(&self.grad, &rhs.grad, 1.0, -1.0, n),
            hess: zip_lin(&self.hess, &rhs.hess, 1.0, -1.0, n * n),
        }
    }
}

impl<'a> Mul<&'a Jet> for &'a Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        let n = Jet::width_of(self, rhs);
        let (a, b) = (self.value, rhs.value);
        let grad = zip_lin(&self.grad, &rhs.grad, b, a, n);
        let mut hess = zip_lin(&self.hess, &rhs.hess, b, a, n * n);
        if !self.grad.is_empty() && !rhs.grad.is_empty() {
            if hess.is_empty() {
                hess = vec![0.0; n * n];
            }
            for i in 0..n {
                for j in 0..n {
                    hess[i * n + j] += self.grad[i] * rhs.grad[j] + rhs.grad[i] * self.grad[j];
                }
            }
        }
        Jet { value: a * b, grad, hess }
    }
}

impl<'a> Div<&'a Jet> for &'a Jet {
    type Output = Jet;
    fn div(self, rhs: &Jet) -> Jet {
        if rhs.is_constant() {
            return self.scale(1.0 / rhs.value);
        }
        self * &rhs.recip()
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Jet> for Jet {
            type Output = Jet;
            fn $m(self, rhs: Jet) -> Jet {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Jet> for Jet {
            type Output = Jet;
            fn $m(self, rhs: &'a Jet) -> Jet {
                (&self).$m(rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        (&self).neg()
    }
}

/// Ring operations shared by plain reals and jets, so frame construction and
/// projections can run on either.
pub trait Scalar:
    Clone
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_f64(c: f64) -> Self;
    fn value(&self) -> f64;
    fn sqrt(&self) -> Self;
}

impl Scalar for f64 {
    fn from_f64(c: f64) -> Self {
        c
    }
    fn value(&self) -> f64 {
        *self
    }
    fn sqrt(&self) -> Self {
        libm::sqrt(*self)
    }
}

impl Scalar for Jet {
    fn from_f64(c: f64) -> Self {
        Jet::constant(c)
    }
    fn value(&self) -> f64 {
        self.value
    }
    fn sqrt(&self) -> Self {
        Jet::sqrt(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd_grad(f: impl Fn(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<f64> {
        (0..x.len())
            .map(|i| {
                let mut p = x.to_vec();
                let mut m = x.to_vec();
                p[i] += h;
                m[i] -= h;
                (f(&p) - f(&m)) / (2.0 * h)
            })
            .collect()
    }

    #[test]
    fn product_rule_matches_hand_derivative() {
        let x = Jet::variable(1.0, 0, 2);
        let y = Jet::variable(2.0, 1, 2);
        let xy = &x * &y;
        assert_eq!(xy.value(), 2.0);
        assert_eq!(xy.gradient(2), [2.0, 1.0]);
        assert_eq!(xy.hessian(2), [0.0, 1.0, 1.0, 0.0]);
        let xx = x.powi(2);
        assert_eq!(xx.gradient(2), [2.0, 0.0]);
        assert_eq!(xx.dd(0, 0), 2.0);
    }

    #[test]
    fn constant_has_no_derivatives() {
        let c = Jet::constant(3.5);
        let x = Jet::variable(0.2, 0, 3);
        let s = &c * &x;
        assert_eq!(s.gradient(3), [3.5, 0.0, 0.0]);
        assert_eq!((&c + &c).gradient(3), [0.0; 3]);
    }

    #[test]
    fn exp_of_scaled_variable_against_finite_differences() {
        let z = Jet::variable(0.3, 0, 1);
        let e = z.scale(2.0).exp();
        let want_d = 2.0 * libm::exp(0.6);
        let want_dd = 4.0 * libm::exp(0.6);
        assert!((e.d(0) - want_d).abs() < 1e-12);
        assert!((e.dd(0, 0) - want_dd).abs() < 1e-12);
        let h = 1e-4;
        let f = |t: f64| libm::exp(2.0 * t);
        let fd1 = (f(0.3 + h) - f(0.3 - h)) / (2.0 * h);
        let fd2 = (f(0.3 + h) - 2.0 * f(0.3) + f(0.3 - h)) / (h * h);
        assert!(((e.d(0) - fd1) / fd1).abs() < 1e-6);
        assert!(((e.dd(0, 0) - fd2) / fd2).abs() < 1e-6);
    }

    #[test]
    fn quotient_and_transcendentals_against_finite_differences() {
        let pt = [0.7, 1.3];
        let f = |v: &[f64]| libm::sin(v[0]) * libm::log(v[1]) / (1.0 + v[0] * v[0]) + libm::sqrt(v[1]);
        let x = Jet::variable(pt[0], 0, 2);
        let y = Jet::variable(pt[1], 1, 2);
        let one = Jet::constant(1.0);
        let j = &(&x.sin() * &y.ln()) / &(&one + &x.powi(2)) + y.sqrt();
        assert!((j.value() - f(&pt)).abs() < 1e-14);
        let fd = fd_grad(f, &pt, 1e-5);
        for i in 0..2 {
            assert!((j.d(i) - fd[i]).abs() < 1e-8);
        }
        for i in 0..2 {
            let gi = |v: &[f64]| fd_grad(f, v, 1e-5)[i];
            let row = fd_grad(gi, &pt, 1e-4);
            for k in 0..2 {
                assert!((j.dd(i, k) - row[k]).abs() < 1e-4);
                assert_eq!(j.dd(i, k), j.dd(k, i));
            }
        }
    }

    #[test]
    fn negative_integer_power() {
        let x = Jet::variable(2.0, 0, 1);
        let r = x.powi(-2);
        assert!((r.value() - 0.25).abs() < 1e-15);
        assert!((r.d(0) + 0.25).abs() < 1e-15);
        assert!((r.dd(0, 0) - 6.0 / 16.0).abs() < 1e-15);
    }
}
