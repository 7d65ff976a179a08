//! Small dense linear algebra: coordinate vectors, symmetric bilinear forms,
//! Gram–Schmidt frames and metric-orthogonal projection.
//!
//! The frame routines are generic over [`Scalar`] so the same code builds
//! frames of numbers at a point and frames of jets along an immersion.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::jet::Scalar;

/// Relative pivot threshold below which Gram–Schmidt reports rank deficiency.
pub const DEGENERACY_TOL: f64 = 1e-10;

/// Components of a tangent vector in a chart's coordinate basis.
#[derive(Debug, Clone, PartialEq)]
pub struct CoordVector(pub Vec<f64>);

impl CoordVector {
    pub fn new(components: Vec<f64>) -> Self {
        CoordVector(components)
    }

    pub fn zeros(n: usize) -> Self {
        CoordVector(vec![0.0; n])
    }

    pub fn basis(i: usize, n: usize) -> Self {
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        CoordVector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[f64] {
        &self.0
    }

    pub fn axpy(&self, a: f64, other: &CoordVector) -> CoordVector {
        CoordVector(self.0.iter().zip(&other.0).map(|(x, y)| x + a * y).collect())
    }

    pub fn scaled(&self, a: f64) -> CoordVector {
        CoordVector(self.0.iter().map(|x| a * x).collect())
    }

    pub fn sub(&self, other: &CoordVector) -> CoordVector {
        self.axpy(-1.0, other)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, x| f64::max(m, x.abs()))
    }
}

/// A symmetric real matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct BilinearForm {
    n: usize,
    data: Vec<f64>,
}

impl BilinearForm {
    /// Wraps `data` after checking symmetry to rounding level; the stored
    /// matrix is exactly symmetric.
    pub fn new(n: usize, mut data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::Dimension { what: "bilinear form", expected: n * n, found: data.len() });
        }
        let scale = data.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = (data[i * n + j], data[j * n + i]);
                if (a - b).abs() > 1e-13 * scale {
                    return Err(Error::Contract(alloc::format!("form not symmetric at ({i},{j})")));
                }
                let m = 0.5 * (a + b);
                data[i * n + j] = m;
                data[j * n + i] = m;
            }
        }
        Ok(BilinearForm { n, data })
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        BilinearForm { n, data }
    }

    pub fn diagonal(d: &[f64]) -> Self {
        let n = d.len();
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = d[i];
        }
        BilinearForm { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn apply(&self, v: &[f64], w: &[f64]) -> f64 {
        inner(&self.data, v, w)
    }

    pub fn inner(&self, v: &CoordVector, w: &CoordVector) -> f64 {
        self.apply(&v.0, &w.0)
    }

    pub fn norm(&self, v: &CoordVector) -> f64 {
        libm::sqrt(self.inner(v, v).max(0.0))
    }

    /// Lower-triangular Cholesky factor; fails unless positive-definite.
    pub fn cholesky(&self) -> Result<Vec<f64>> {
        let n = self.n;
        let mut l = vec![0.0; n * n];
        for j in 0..n {
            let mut d = self.data[j * n + j];
            for k in 0..j {
                d -= l[j * n + k] * l[j * n + k];
            }
            if !(d > 0.0) {
                return Err(Error::Degenerate { what: "metric (not positive-definite)", index: j });
            }
            let d = libm::sqrt(d);
            l[j * n + j] = d;
            for i in j + 1..n {
                let mut s = self.data[i * n + j];
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k];
                }
                l[i * n + j] = s / d;
            }
        }
        Ok(l)
    }

    pub fn is_positive_definite(&self) -> bool {
        self.cholesky().is_ok()
    }

    /// Solves `self · x = b` for a positive-definite form.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let l = self.cholesky()?;
        Ok(cholesky_solve(&l, self.n, b))
    }

    /// Inverse of a positive-definite form.
    pub fn inverse(&self) -> Result<BilinearForm> {
        let n = self.n;
        let l = self.cholesky()?;
        let mut inv = vec![0.0; n * n];
        for j in 0..n {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            let col = cholesky_solve(&l, n, &e);
            for i in 0..n {
                inv[i * n + j] = col[i];
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                let m = 0.5 * (inv[i * n + j] + inv[j * n + i]);
                inv[i * n + j] = m;
                inv[j * n + i] = m;
            }
        }
        Ok(BilinearForm { n, data: inv })
    }

    /// `self · v` treating the form as a matrix (index lowering).
    pub fn lower(&self, v: &[f64]) -> Vec<f64> {
        mat_vec(&self.data, self.n, v)
    }
}

fn cholesky_solve(l: &[f64], n: usize, b: &[f64]) -> Vec<f64> {
    let mut y = vec![0.0; n];
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l[i * n + k] * y[k];
        }
        y[i] = s / l[i * n + i];
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in i + 1..n {
            s -= l[k * n + i] * x[k];
        }
        x[i] = s / l[i * n + i];
    }
    x
}

/// Row-major `n × n` matrix times vector.
pub fn mat_vec<S: Scalar>(m: &[S], n: usize, v: &[S]) -> Vec<S> {
    (0..n)
        .map(|i| {
            let mut acc = S::from_f64(0.0);
            for j in 0..v.len() {
                acc = acc + m[i * v.len() + j].clone() * v[j].clone();
            }
            acc
        })
        .collect()
}

/// `vᵀ g w` for a row-major square `g`.
pub fn inner<S: Scalar>(g: &[S], v: &[S], w: &[S]) -> S {
    let n = v.len();
    debug_assert_eq!(g.len(), n * n);
    let mut acc = S::from_f64(0.0);
    for i in 0..n {
        let mut row = S::from_f64(0.0);
        for j in 0..n {
            row = row + g[i * n + j].clone() * w[j].clone();
        }
        acc = acc + v[i].clone() * row;
    }
    acc
}

pub fn axpy<S: Scalar>(v: &[S], a: &S, w: &[S]) -> Vec<S> {
    v.iter().zip(w).map(|(x, y)| x.clone() + a.clone() * y.clone()).collect()
}

pub fn scale<S: Scalar>(v: &[S], a: &S) -> Vec<S> {
    v.iter().map(|x| a.clone() * x.clone()).collect()
}

pub fn add<S: Scalar>(v: &[S], w: &[S]) -> Vec<S> {
    v.iter().zip(w).map(|(x, y)| x.clone() + y.clone()).collect()
}

pub fn sub<S: Scalar>(v: &[S], w: &[S]) -> Vec<S> {
    v.iter().zip(w).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub fn values<S: Scalar>(v: &[S]) -> Vec<f64> {
    v.iter().map(Scalar::value).collect()
}

/// Classical Gram–Schmidt with one re-orthogonalization pass, in input order.
///
/// A vector whose residual norm drops below [`DEGENERACY_TOL`] times its own
/// norm is reported as [`Error::Degenerate`] with its index.
pub fn gram_schmidt_with<S: Scalar>(vectors: &[Vec<S>], g: &[S]) -> Result<Vec<Vec<S>>> {
    let mut frame: Vec<Vec<S>> = Vec::with_capacity(vectors.len());
    for (index, v) in vectors.iter().enumerate() {
        let scale = libm::sqrt(inner(g, v, v).value().abs());
        let mut w = v.clone();
        for _pass in 0..2 {
            for f in &frame {
                let c = inner(g, &w, f);
                w = axpy(&w, &(-c), f);
            }
        }
        let nsq = inner(g, &w, &w);
        let norm = libm::sqrt(nsq.value().max(0.0));
        if !(scale > 0.0) || norm < DEGENERACY_TOL * scale {
            return Err(Error::Degenerate { what: "frame vector", index });
        }
        let inv = S::from_f64(1.0) / nsq.sqrt();
        frame.push(scale_vec(&w, &inv));
    }
    Ok(frame)
}

fn scale_vec<S: Scalar>(v: &[S], a: &S) -> Vec<S> {
    scale(v, a)
}

/// Orthonormal frame spanning the same subspace as `vectors` (in order).
pub fn gram_schmidt(vectors: &[CoordVector], g: &BilinearForm) -> Result<Vec<CoordVector>> {
    for v in vectors {
        if v.dim() != g.dim() {
            return Err(Error::Dimension { what: "frame vector", expected: g.dim(), found: v.dim() });
        }
    }
    if !g.is_positive_definite() {
        return Err(Error::Contract("gram_schmidt needs a positive-definite form".into()));
    }
    let raw: Vec<Vec<f64>> = vectors.iter().map(|v| v.0.clone()).collect();
    Ok(gram_schmidt_with(&raw, g.as_slice())?.into_iter().map(CoordVector).collect())
}

/// Largest deviation of the frame's Gram matrix from the identity.
pub fn orthonormality_defect(frame: &[CoordVector], g: &BilinearForm) -> f64 {
    let mut worst = 0.0f64;
    for (i, a) in frame.iter().enumerate() {
        for (j, b) in frame.iter().enumerate() {
            let want = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g.inner(a, b) - want).abs());
        }
    }
    worst
}

/// `Σ g(v, f_i) f_i` for a g-orthonormal frame.
pub fn project(v: &CoordVector, frame: &[CoordVector], g: &BilinearForm) -> Result<CoordVector> {
    let defect = orthonormality_defect(frame, g);
    if defect > 1e-8 {
        return Err(Error::Contract(alloc::format!("frame not orthonormal (defect {defect:e})")));
    }
    Ok(project_unchecked(v, frame, g))
}

pub(crate) fn project_unchecked(v: &CoordVector, frame: &[CoordVector], g: &BilinearForm) -> CoordVector {
    let mut out = CoordVector::zeros(v.dim());
    for f in frame {
        out = out.axpy(g.inner(v, f), f);
    }
    out
}

/// Generic projection onto the span of an orthonormal frame.
pub fn project_with<S: Scalar>(v: &[S], frame: &[Vec<S>], g: &[S]) -> Vec<S> {
    let mut out: Vec<S> = v.iter().map(|_| S::from_f64(0.0)).collect();
    for f in frame {
        let c = inner(g, v, f);
        out = axpy(&out, &c, f);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cv(v: &[f64]) -> CoordVector {
        CoordVector(v.to_vec())
    }

    #[test]
    fn gram_schmidt_standard_basis() {
        let g = BilinearForm::identity(2);
        let f = gram_schmidt(&[cv(&[1.0, 0.0]), cv(&[1.0, 1.0])], &g).unwrap();
        assert_eq!(f[0], cv(&[1.0, 0.0]));
        assert!(f[1].sub(&cv(&[0.0, 1.0])).max_abs() < 1e-15);
        let f = gram_schmidt(&[cv(&[2.0, 0.0])], &g).unwrap();
        assert_eq!(f[0], cv(&[1.0, 0.0]));
    }

    #[test]
    fn gram_schmidt_weighted_metric() {
        let g = BilinearForm::diagonal(&[1.0, 4.0]);
        let f = gram_schmidt(&[cv(&[1.0, 1.0]), cv(&[1.0, 0.0])], &g).unwrap();
        let r5 = libm::sqrt(5.0);
        assert!(f[0].sub(&cv(&[1.0 / r5, 1.0 / r5])).max_abs() < 1e-15);
        assert!(g.inner(&f[0], &f[1]).abs() < 1e-12);
        assert!((g.inner(&f[1], &f[1]) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gram_schmidt_reports_failing_index() {
        let g = BilinearForm::identity(3);
        let err = gram_schmidt(&[cv(&[1.0, 0.0, 0.0]), cv(&[0.0, 1.0, 0.0]), cv(&[1.0, 1.0, 0.0])], &g).unwrap_err();
        assert_eq!(err, Error::Degenerate { what: "frame vector", index: 2 });
    }

    #[test]
    fn projection_examples() {
        let g = BilinearForm::identity(3);
        let frame = [cv(&[1.0, 0.0, 0.0])];
        assert_eq!(project(&cv(&[1.0, 1.0, 0.0]), &frame, &g).unwrap(), cv(&[1.0, 0.0, 0.0]));
        assert_eq!(project(&cv(&[0.0, 2.0, 3.0]), &frame, &g).unwrap(), cv(&[0.0, 0.0, 0.0]));
        assert_eq!(project(&cv(&[4.0, 0.0, 0.0]), &frame, &g).unwrap(), cv(&[4.0, 0.0, 0.0]));
        let bad = [cv(&[2.0, 0.0, 0.0])];
        assert!(matches!(project(&cv(&[1.0, 0.0, 0.0]), &bad, &g), Err(Error::Contract(_))));
    }

    #[test]
    fn cholesky_detects_indefinite() {
        let g = BilinearForm::new(2, vec![1.0, 2.0, 2.0, 1.0]).unwrap();
        assert!(!g.is_positive_definite());
        let g = BilinearForm::new(2, vec![2.0, 1.0, 1.0, 3.0]).unwrap();
        let inv = g.inverse().unwrap();
        assert!((inv.get(0, 0) - 0.6).abs() < 1e-15);
        assert!((inv.get(0, 1) + 0.2).abs() < 1e-15);
    }
}
